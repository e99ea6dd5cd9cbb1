#pragma once

#include <stdexcept>
#include <string>

namespace chaoslab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A point, word or window that does not fit the operation it was given to.
class InputError : public Error {
public:
    using Error::Error;
};

// An invalid system or run configuration. `field` names the offending entry.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// A finite budget (window radius, enumeration cap, sample length) was exceeded.
class BudgetError : public Error {
public:
    using Error::Error;
};

class UnsupportedSystem : public Error {
public:
    using Error::Error;
};

}  // namespace chaoslab
