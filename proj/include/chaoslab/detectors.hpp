#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <json.hpp>

#include "chaoslab/metric_system.hpp"
#include "chaoslab/verdict.hpp"

namespace chaoslab {

struct DetectorBudget {
    std::int64_t horizon = 1024;  // N
    std::int64_t samples = 4096;  // M
    double delta = 0x1p-8;        // proximity threshold
    double epsilon = 0.25;        // separation threshold
    double rho = 0x1p-6;          // sensitivity ball radius
    std::uint64_t seed = 0x5EED;
    double tail_fraction = 0.25;  // share of the horizon standing in for limsup

    // Throws ConfigError on N < 1, M < 1, !(0 < delta < epsilon), rho <= 0.
    void validate() const;
    nlohmann::json to_json() const;
};

// Number of worker threads: CHAOSLAB_THREADS if set, else the hardware count.
unsigned worker_count();

// Runs body(i) for i in [0, n) on worker_count() threads. Callers write
// results by index so that merging is independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

Verdict scrambled_pair_test(const MetricSystem& system, const Point& x, const Point& y, const DetectorBudget& budget);

struct LiYorkeScan {
    Verdict verdict;
    std::int64_t witnesses = 0;
    std::int64_t pairs = 0;
    std::vector<nlohmann::json> examples;  // at most 16
};

LiYorkeScan li_yorke_scan(const MetricSystem& system, const DetectorBudget& budget);

// The witness of a Holds verdict carries "eta", the estimated constant.
Verdict sensitivity_test(const MetricSystem& system, const DetectorBudget& budget);

Verdict equicontinuity_point_test(const MetricSystem& system, const Point& x, const DetectorBudget& budget);

Verdict distality_test(const MetricSystem& system, const DetectorBudget& budget);

Verdict numeric_transitivity_test(const MetricSystem& system, int grid_size, const DetectorBudget& budget);

struct BowenEstimate {
    double entropy = 0.0;        // growth slope of log|S| between n/2 and n
    double ratio = 0.0;          // log|S_n| / n
    std::uint64_t size = 0;      // |S_n|
    std::uint64_t half_size = 0; // |S_{n/2}|
    std::uint64_t grid = 0;
};

// Maximal (n, eps)-separated sets built greedily. Interval and circle maps
// use a sorted start grid of `grid` points; other systems use `grid` sampled
// points (capped at 4096).
BowenEstimate bowen_entropy(const MetricSystem& system, int n, double eps, std::uint64_t grid = std::uint64_t{1} << 23,
                            std::uint64_t seed = 0x5EED);

struct LapCount {
    double entropy = 0.0;  // log(laps) / n
    std::uint64_t laps = 0;
};

LapCount lap_entropy(const MetricSystem& system, int n);

}  // namespace chaoslab
