#include "chaoslab/detectors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <optional>
#include <thread>

#include "chaoslab/error.hpp"
#include "chaoslab/rng.hpp"

namespace chaoslab {

void DetectorBudget::validate() const {
    if (horizon < 1) throw ConfigError("horizon", "horizon N must be at least 1");
    if (samples < 1) throw ConfigError("samples", "sample count M must be at least 1");
    if (!(delta > 0.0 && delta < epsilon)) throw ConfigError("delta", "need 0 < delta < epsilon");
    if (!(rho > 0.0)) throw ConfigError("rho", "rho must be positive");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw ConfigError("tail_fraction", "tail fraction out of (0,1]");
}

nlohmann::json DetectorBudget::to_json() const {
    return {{"N", horizon}, {"M", samples}, {"delta", delta}, {"epsilon", epsilon},
            {"rho", rho},   {"seed", seed}, {"tail_fraction", tail_fraction}};
}

unsigned worker_count() {
    if (const char* env = std::getenv("CHAOSLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const auto workers = static_cast<std::size_t>(std::min<std::size_t>(worker_count(), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                try {
                    body(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

namespace {

// Pairs whose images on an isometric factor differ are never proximal.
std::optional<nlohmann::json> factor_certificate(const Point& x, const Point& y) {
    const auto* a = std::get_if<SymbolicPoint>(&x);
    const auto* b = std::get_if<SymbolicPoint>(&y);
    if (!a || !b) return std::nullopt;
    const auto fa = a->factor();
    const auto fb = b->factor();
    if (!fa || !fb || fa->kind != fb->kind) return std::nullopt;
    const bool circle = fa->kind == FactorImage::Kind::Circle;
    const double gap = circle ? circle_metric(fa->value, fb->value) : std::abs(fa->value - fb->value);
    if (gap <= (circle ? 1e-12 : 0.0)) return std::nullopt;
    return nlohmann::json{{"certificate", circle ? "rotation factor" : "odometer factor"},
                          {"x_image", fa->value},
                          {"y_image", fb->value}};
}

Point second_point(const MetricSystem& system, const Point& x, std::uint64_t seed, std::int64_t horizon, bool coupled) {
    if (coupled && system.partner) return system.partner(x, seed, horizon);
    return system.sampler(seed, horizon);
}

struct Dip {
    std::int64_t time = -1;
    double distance = 0.0;
};

// First time the pair comes within delta, scanning n = 0..N.
Dip first_dip(const MetricSystem& system, Point a, Point b, std::int64_t horizon, double delta) {
    double best = 2.0;
    for (std::int64_t n = 0;; ++n) {
        const double d = system.metric(a, b);
        best = std::min(best, d);
        if (d < delta) return {n, d};
        if (n == horizon) break;
        a = system.map(a);
        b = system.map(b);
    }
    return {-1, best};
}

nlohmann::json isometry_certificate() { return {{"certificate", "isometry"}}; }

constexpr int kPerturbCandidates = 8;

}  // namespace

Verdict scrambled_pair_test(const MetricSystem& system, const Point& x, const Point& y, const DetectorBudget& budget) {
    budget.validate();
    check_space(system, x);
    check_space(system, y);
    if (same_representation(x, y)) throw InputError("scrambled pair test needs two distinct points");
    const auto bj = budget.to_json();
    if (system.isometry) {
        auto w = isometry_certificate();
        w["distance"] = system.metric(x, y);
        return Verdict::fails(Method::Exact, w, bj);
    }
    if (auto cert = factor_certificate(x, y)) return Verdict::fails(Method::Exact, *cert, bj);

    const std::int64_t N = budget.horizon;
    const auto tail_start = N - static_cast<std::int64_t>(std::floor(static_cast<double>(N) * budget.tail_fraction));
    Point a = x, b = y;
    double min_d = 2.0, tail_max = 0.0;
    std::int64_t min_t = -1, sep_t = -1;
    for (std::int64_t n = 0;; ++n) {
        const double d = system.metric(a, b);
        if (d < min_d) min_d = d, min_t = n;
        if (n >= tail_start && d > tail_max) {
            tail_max = d;
            if (d > budget.epsilon && sep_t < 0) sep_t = n;
        }
        if (min_d < budget.delta && sep_t >= 0) break;
        if (n == N) break;
        a = system.map(a);
        b = system.map(b);
    }
    if (min_d < budget.delta && sep_t >= 0) {
        return Verdict::holds(Method::Empirical,
                              {{"x", describe(x)},
                               {"y", describe(y)},
                               {"dip_time", min_t},
                               {"dip_distance", min_d},
                               {"separation_time", sep_t},
                               {"separation", tail_max}},
                              bj);
    }
    return Verdict::inconclusive(bj, {{"min_distance", min_d}, {"tail_max", tail_max}});
}

LiYorkeScan li_yorke_scan(const MetricSystem& system, const DetectorBudget& budget) {
    budget.validate();
    LiYorkeScan out;
    const auto bj = budget.to_json();
    out.pairs = budget.samples;
    if (system.isometry) {
        out.verdict = Verdict::fails(Method::Exact, isometry_certificate(), bj);
        return out;
    }
    const auto M = static_cast<std::size_t>(budget.samples);
    std::vector<std::optional<nlohmann::json>> found(M);
    parallel_for(M, [&](std::size_t i) {
        const std::uint64_t s = mix_seed(budget.seed, i);
        const Point x = system.sampler(s, budget.horizon);
        const Point y = second_point(system, x, mix_seed(s, 1), budget.horizon, true);
        if (same_representation(x, y)) return;
        auto v = scrambled_pair_test(system, x, y, budget);
        if (v.is_holds()) found[i] = std::move(v.witness);
    });
    for (auto& f : found) {
        if (!f) continue;
        ++out.witnesses;
        if (out.examples.size() < 16) out.examples.push_back(std::move(*f));
    }
    const std::int64_t needed = std::max<std::int64_t>(3, budget.samples / 1000);
    nlohmann::json w = {{"witnesses", out.witnesses}, {"pairs", out.pairs}, {"needed", needed}};
    if (out.witnesses >= needed) {
        w["examples"] = nlohmann::json(std::vector<nlohmann::json>(
            out.examples.begin(), out.examples.begin() + std::min<std::ptrdiff_t>(3, static_cast<std::ptrdiff_t>(out.examples.size()))));
        out.verdict = Verdict::holds(Method::Empirical, w, bj);
    } else {
        out.verdict = Verdict::inconclusive(bj, w);
    }
    return out;
}

Verdict sensitivity_test(const MetricSystem& system, const DetectorBudget& budget) {
    budget.validate();
    const auto bj = budget.to_json();
    if (system.isometry) return Verdict::fails(Method::Exact, isometry_certificate(), bj);
    if (system.blocking_word)
        return Verdict::fails(Method::Exact, {{"certificate", "blocking word"}, {"word", *system.blocking_word}}, bj);

    const auto M = static_cast<std::size_t>(budget.samples);
    struct Best {
        double separation = 0.0;
        std::int64_t time = -1;
        std::string y;
    };
    std::vector<Best> best(M);
    parallel_for(M, [&](std::size_t i) {
        const Point x = system.sampler(mix_seed(budget.seed, i), budget.horizon);
        auto& b = best[i];
        for (int c = 0; c < kPerturbCandidates && b.separation < 1.0; ++c) {
            auto y = system.perturb(x, budget.rho, static_cast<std::uint64_t>(c));
            if (!y || !(system.metric(x, *y) < budget.rho)) continue;
            Point p = x, q = *y;
            for (std::int64_t n = 0; n <= budget.horizon; ++n) {
                const double d = system.metric(p, q);
                if (d > b.separation) {
                    b.separation = d;
                    b.time = n;
                    b.y = describe(*y);
                    if (d >= 1.0) break;
                }
                if (n == budget.horizon) break;
                p = system.map(p);
                q = system.map(q);
            }
        }
    });
    std::size_t weakest = 0;
    for (std::size_t i = 1; i < M; ++i)
        if (best[i].separation < best[weakest].separation) weakest = i;
    const double floor_sep = best[weakest].separation;
    const nlohmann::json weak = {{"x", describe(system.sampler(mix_seed(budget.seed, weakest), budget.horizon))},
                                 {"y", best[weakest].y},
                                 {"time", best[weakest].time},
                                 {"separation", floor_sep}};
    double eta = 0.0;
    for (int j = 0; j <= 10; ++j) {
        if (floor_sep >= std::ldexp(1.0, -j)) {
            eta = std::ldexp(1.0, -j);
            break;
        }
    }
    if (eta > 0.0) return Verdict::holds(Method::Empirical, {{"eta", eta}, {"points", M}, {"weakest", weak}}, bj);
    return Verdict::inconclusive(bj, {{"weakest", weak}});
}

Verdict equicontinuity_point_test(const MetricSystem& system, const Point& x, const DetectorBudget& budget) {
    budget.validate();
    check_space(system, x);
    const auto bj = budget.to_json();
    if (system.isometry) {
        auto w = isometry_certificate();
        w["eta"] = "eta = epsilon for every epsilon";
        return Verdict::holds(Method::Exact, w, bj);
    }
    const int max_j = system.space == SpaceKind::Symbolic || system.space == SpaceKind::CA ? kCantorRadius : 40;
    constexpr int kTries = 16;
    nlohmann::json balls = nlohmann::json::array();
    for (double eps : {0.5, 0.25, 0.125}) {
        int found = -1;
        bool every_ball_separates = true;
        nlohmann::json example;
        for (int j = 1; j <= max_j && found < 0; ++j) {
            const double eta = std::ldexp(1.0, -j);
            int tested = 0;
            bool stays = true;
            for (int c = 0; c < kTries && stays; ++c) {
                auto y = system.perturb(x, eta, static_cast<std::uint64_t>(c));
                if (!y || !(system.metric(x, *y) < eta)) continue;
                ++tested;
                Point p = x, q = *y;
                for (std::int64_t n = 0; n <= budget.horizon; ++n) {
                    const double d = system.metric(p, q);
                    if (d > eps) {
                        stays = false;
                        if (example.is_null()) example = {{"y", describe(*y)}, {"eta", eta}, {"time", n}, {"distance", d}};
                        break;
                    }
                    if (n == budget.horizon) break;
                    p = system.map(p);
                    q = system.map(q);
                }
            }
            if (tested == 0) every_ball_separates = false;
            if (tested > 0 && stays) found = j;
        }
        if (found < 0) {
            nlohmann::json w = {{"x", describe(x)}, {"epsilon", eps}, {"balls_tested", max_j}, {"example", example}};
            if (every_ball_separates) return Verdict::fails(Method::Empirical, w, bj);
            return Verdict::inconclusive(bj, w);
        }
        balls.push_back({{"epsilon", eps}, {"eta", std::ldexp(1.0, -found)}});
    }
    return Verdict::holds(Method::Empirical, {{"x", describe(x)}, {"balls", balls}}, bj);
}

Verdict distality_test(const MetricSystem& system, const DetectorBudget& budget) {
    budget.validate();
    const auto bj = budget.to_json();
    if (system.isometry) return Verdict::holds(Method::Exact, isometry_certificate(), bj);

    const auto M = static_cast<std::size_t>(budget.samples);
    struct Result {
        bool used = false;
        bool asymptotic = false;
        Dip dip;
        nlohmann::json pair;
    };
    std::vector<Result> results(M);
    parallel_for(M, [&](std::size_t i) {
        const std::uint64_t s = mix_seed(budget.seed, i);
        auto& r = results[i];
        std::optional<std::pair<Point, Point>> pair;
        if (system.asymptotic_pair && i % 4 == 0) {
            pair = system.asymptotic_pair(s, budget.horizon);
            r.asymptotic = pair.has_value();
        }
        if (!pair) {
            const Point x = system.sampler(s, budget.horizon);
            pair.emplace(x, second_point(system, x, mix_seed(s, 1), budget.horizon, i % 2 == 1));
        }
        const auto& [x, y] = *pair;
        if (same_representation(x, y) || factor_certificate(x, y)) return;
        r.used = true;
        r.dip = first_dip(system, x, y, budget.horizon, budget.delta);
        if (r.dip.time >= 0) r.pair = {{"x", describe(x)}, {"y", describe(y)}};
    });
    std::int64_t used = 0;
    double floor_d = 2.0;
    const Result* empirical = nullptr;
    for (const auto& r : results) {
        if (!r.used) continue;
        ++used;
        if (r.dip.time >= 0) {
            nlohmann::json w = r.pair;
            w["time"] = r.dip.time;
            w["distance"] = r.dip.distance;
            if (r.asymptotic) {
                w["certificate"] = "asymptotic pair";
                return Verdict::fails(Method::Exact, w, bj);
            }
            if (!empirical) empirical = &r;
        } else {
            floor_d = std::min(floor_d, r.dip.distance);
        }
    }
    if (empirical) {
        nlohmann::json w = empirical->pair;
        w["time"] = empirical->dip.time;
        w["distance"] = empirical->dip.distance;
        return Verdict::fails(Method::Empirical, w, bj);
    }
    if (used == 0) return Verdict::inconclusive(bj, {{"reason", "every sampled pair is separated on an isometric factor"}});
    return Verdict::holds(Method::Empirical, {{"delta_floor", floor_d}, {"pairs", used}}, bj);
}

Verdict numeric_transitivity_test(const MetricSystem& system, int grid_size, const DetectorBudget& budget) {
    budget.validate();
    if (system.space != SpaceKind::Interval && system.space != SpaceKind::Circle)
        throw UnsupportedSystem("numeric transitivity needs an interval or circle map");
    if (!system.scalar_map) throw UnsupportedSystem("system has no scalar map");
    if (grid_size < 8) throw InputError("grid size must be at least 8");
    const auto G = static_cast<std::size_t>(grid_size);
    const double w = 1.0 / static_cast<double>(grid_size);
    nlohmann::json bj = budget.to_json();
    bj["grid"] = grid_size;

    // Over-approximate closure of the open-cell transition relation.
    if (system.interval_image) {
        std::vector<std::vector<std::size_t>> succ(G);
        for (std::size_t c = 0; c < G; ++c) {
            for (const auto& [u, v] : system.interval_image(static_cast<double>(c) * w, static_cast<double>(c + 1) * w)) {
                for (std::size_t d = 0; d < G; ++d)
                    if (u < static_cast<double>(d + 1) * w && v > static_cast<double>(d) * w) succ[c].push_back(d);
            }
            std::sort(succ[c].begin(), succ[c].end());
            succ[c].erase(std::unique(succ[c].begin(), succ[c].end()), succ[c].end());
        }
        for (std::size_t u = 0; u < G; ++u) {
            std::vector<char> seen(G, 0);
            std::vector<std::size_t> stack(succ[u].begin(), succ[u].end());
            for (auto d : stack) seen[d] = 1;
            while (!stack.empty()) {
                const auto c = stack.back();
                stack.pop_back();
                for (auto d : succ[c])
                    if (!seen[d]) seen[d] = 1, stack.push_back(d);
            }
            for (std::size_t v = 0; v < G; ++v) {
                if (!seen[v]) {
                    return Verdict::fails(Method::Exact,
                                          {{"certificate", "interval image closure"},
                                           {"from", {static_cast<double>(u) * w, static_cast<double>(u + 1) * w}},
                                           {"to", {static_cast<double>(v) * w, static_cast<double>(v + 1) * w}}},
                                          bj);
                }
            }
        }
    }

    const auto K = static_cast<std::size_t>(std::max<std::int64_t>(4, budget.samples / grid_size));
    std::vector<std::vector<char>> reach(G, std::vector<char>(G, 0));
    parallel_for(G, [&](std::size_t u) {
        auto& seen = reach[u];
        std::size_t count = 0;
        for (std::size_t k = 0; k < K && count < G; ++k) {
            double x = (static_cast<double>(u) + (static_cast<double>(k) + 0.5) / static_cast<double>(K)) * w;
            for (std::int64_t n = 1; n <= budget.horizon && count < G; ++n) {
                x = system.scalar_map(x);
                const auto c = std::min(G - 1, static_cast<std::size_t>(x * static_cast<double>(G)));
                if (!seen[c]) seen[c] = 1, ++count;
            }
        }
    });
    for (std::size_t u = 0; u < G; ++u) {
        for (std::size_t v = 0; v < G; ++v) {
            if (!reach[u][v]) {
                return Verdict::inconclusive(bj, {{"unreached_from", {static_cast<double>(u) * w, static_cast<double>(u + 1) * w}},
                                                  {"unreached_to", {static_cast<double>(v) * w, static_cast<double>(v + 1) * w}},
                                                  {"orbits_per_cell", K}});
            }
        }
    }
    return Verdict::holds(Method::Empirical, {{"grid", grid_size}, {"orbits_per_cell", K}, {"cells_reached", G * G}}, bj);
}

}  // namespace chaoslab
