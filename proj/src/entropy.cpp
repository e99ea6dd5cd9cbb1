#include <algorithm>
#include <cmath>

#include "chaoslab/detectors.hpp"
#include "chaoslab/error.hpp"
#include "chaoslab/rng.hpp"

namespace chaoslab {

namespace {

// Selected orbits of one column of start cells, bucketed by the cells of
// their values at times mid and n-1. Two orbits within eps at all times sit in
// neighbouring buckets, so a candidate only meets 9 buckets per column.
class Column {
public:
    Column(int n, int cells) : n_(n), cells_(cells), buckets_(static_cast<std::size_t>(cells) * cells) {}

    void clear() {
        for (auto k : touched_) buckets_[k].clear();
        touched_.clear();
    }

    void add(std::size_t key, const float* orbit) {
        auto& b = buckets_[key];
        if (b.empty()) touched_.push_back(key);
        b.insert(b.end(), orbit, orbit + n_);
    }

    // True if some stored orbit stays within eps of `orbit` at every time.
    template <class Dist>
    bool blocks(int km, int kl, bool wrap, const float* orbit, double eps, Dist dist) const {
        for (int dm = -1; dm <= 1; ++dm) {
            for (int dl = -1; dl <= 1; ++dl) {
                int a = km + dm, b = kl + dl;
                if (wrap) {
                    a = (a + cells_) % cells_;
                    b = (b + cells_) % cells_;
                } else if (a < 0 || b < 0 || a >= cells_ || b >= cells_) {
                    continue;
                }
                const auto& bucket = buckets_[static_cast<std::size_t>(a) * static_cast<std::size_t>(cells_) + static_cast<std::size_t>(b)];
                for (std::size_t s = 0; s < bucket.size(); s += static_cast<std::size_t>(n_)) {
                    bool close = true;
                    for (int k = 0; k < n_ && close; ++k) close = dist(orbit[k], bucket[s + static_cast<std::size_t>(k)]) <= eps;
                    if (close) return true;
                }
            }
        }
        return false;
    }

private:
    int n_;
    int cells_;
    std::vector<std::vector<float>> buckets_;
    std::vector<std::size_t> touched_;
};

// Greedy maximal (n, eps)-separated subset of the grid (j + 1/2) / G, swept in
// increasing order so only the current and previous start columns can block.
std::uint64_t separated_on_grid(const MetricSystem& system, int n, double eps, std::uint64_t grid) {
    const bool circle = system.space == SpaceKind::Circle;
    const int cells = static_cast<int>(std::ceil(1.0 / eps));
    auto dist = [circle](double a, double b) {
        const double d = std::abs(a - b);
        return circle ? std::min(d, 1.0 - d) : d;
    };
    auto cell = [&](double v) { return std::min(cells - 1, static_cast<int>(v / eps)); };
    const int mid = n / 2;
    Column prev(n, cells), cur(n, cells), first(n, cells);
    int cur_cell = 0;
    bool first_done = false;
    std::uint64_t count = 0;
    std::vector<float> orbit(static_cast<std::size_t>(n));
    for (std::uint64_t j = 0; j < grid; ++j) {
        double x = (static_cast<double>(j) + 0.5) / static_cast<double>(grid);
        const int cx = cell(x);
        if (cx != cur_cell) {
            if (cur_cell == 0 && !first_done) {
                first = cur;
                first_done = true;
            }
            if (cx == cur_cell + 1) {
                std::swap(prev, cur);
            } else {
                prev.clear();
            }
            cur.clear();
            cur_cell = cx;
        }
        for (int k = 0; k < n; ++k) {
            orbit[static_cast<std::size_t>(k)] = static_cast<float>(x);
            if (k + 1 < n) x = system.scalar_map(x);
        }
        const int km = cell(orbit[static_cast<std::size_t>(mid)]);
        const int kl = cell(orbit[static_cast<std::size_t>(n - 1)]);
        const float* o = orbit.data();
        bool blocked = cur.blocks(km, kl, circle, o, eps, dist) || prev.blocks(km, kl, circle, o, eps, dist);
        // On the circle the last column also neighbours the first.
        if (!blocked && circle && first_done && cx == cells - 1) blocked = first.blocks(km, kl, circle, o, eps, dist);
        if (blocked) continue;
        cur.add(static_cast<std::size_t>(km) * static_cast<std::size_t>(cells) + static_cast<std::size_t>(kl), o);
        ++count;
    }
    return count;
}

std::uint64_t separated_sampled(const MetricSystem& system, int n, double eps, std::size_t points, std::uint64_t seed) {
    std::vector<std::vector<Point>> orbits(points);
    parallel_for(points, [&](std::size_t i) {
        Point p = system.sampler(mix_seed(seed, i), n);
        auto& o = orbits[i];
        for (int k = 0; k < n; ++k) {
            o.push_back(p);
            if (k + 1 < n) p = system.map(p);
        }
    });
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < points; ++i) {
        bool separated_from_all = true;
        for (auto c : chosen) {
            bool separated = false;
            for (int k = 0; k < n && !separated; ++k)
                separated = system.metric(orbits[i][static_cast<std::size_t>(k)], orbits[c][static_cast<std::size_t>(k)]) > eps;
            if (!separated) {
                separated_from_all = false;
                break;
            }
        }
        if (separated_from_all) chosen.push_back(i);
    }
    return chosen.size();
}

}  // namespace

BowenEstimate bowen_entropy(const MetricSystem& system, int n, double eps, std::uint64_t grid, std::uint64_t seed) {
    if (n < 2) throw InputError("Bowen entropy needs n >= 2");
    if (!(eps >= 0x1p-12 && eps < 1.0)) throw InputError("Bowen entropy needs 2^-12 <= eps < 1");
    BowenEstimate e;
    const int half = n / 2;
    if ((system.space == SpaceKind::Interval || system.space == SpaceKind::Circle) && system.scalar_map) {
        if (static_cast<double>(grid) < 4.0 / eps)
            throw BudgetError("start grid of " + std::to_string(grid) + " points is too coarse for eps");
        e.grid = grid;
        e.size = separated_on_grid(system, n, eps, grid);
        e.half_size = separated_on_grid(system, half, eps, grid);
    } else {
        const auto points = static_cast<std::size_t>(std::min<std::uint64_t>(grid, 4096));
        e.grid = points;
        e.size = separated_sampled(system, n, eps, points, seed);
        e.half_size = separated_sampled(system, half, eps, points, seed);
    }
    if (e.size * 2 > e.grid)
        throw BudgetError("separated set uses over half of the " + std::to_string(e.grid) +
                          " start points; the start set is too coarse");
    e.ratio = std::log(static_cast<double>(e.size)) / n;
    e.entropy = std::max(0.0, (std::log(static_cast<double>(e.size)) - std::log(static_cast<double>(e.half_size))) /
                                  static_cast<double>(n - half));
    return e;
}

LapCount lap_entropy(const MetricSystem& system, int n) {
    if (!system.piecewise_monotone || !system.scalar_map)
        throw UnsupportedSystem("lap counting needs a piecewise monotone interval map");
    if (n < 1) throw InputError("lap entropy needs n >= 1");
    auto power = [&](double x, int k) {
        for (int i = 0; i < k; ++i) x = system.scalar_map(x);
        return x;
    };
    // Breakpoints of f^k are the preimages under f^j (j < k) of turning points.
    std::vector<double> breaks;
    for (int k = 0; k < n; ++k) {
        std::vector<double> ends{0.0};
        ends.insert(ends.end(), breaks.begin(), breaks.end());
        ends.push_back(1.0);
        std::vector<double> fresh;
        for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
            double a = ends[i], b = ends[i + 1];
            const double fa = power(a, k), fb = power(b, k);
            for (double c : system.turning_points) {
                if (!((fa < c && c < fb) || (fb < c && c < fa))) continue;
                const bool rising = fa < fb;
                double lo = a, hi = b;
                for (int it = 0; it < 200 && lo < hi; ++it) {
                    const double m = lo + (hi - lo) / 2;
                    if (m <= lo || m >= hi) break;
                    const double fm = power(m, k);
                    if (fm == c) {
                        lo = hi = m;
                        break;
                    }
                    if ((fm < c) == rising) lo = m;
                    else hi = m;
                }
                fresh.push_back(lo);
            }
        }
        breaks.insert(breaks.end(), fresh.begin(), fresh.end());
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
        if (breaks.size() > (std::size_t{1} << 22)) throw BudgetError("more than 2^22 laps");
    }
    LapCount out;
    out.laps = breaks.size() + 1;
    out.entropy = std::log(static_cast<double>(out.laps)) / n;
    return out;
}

}  // namespace chaoslab
