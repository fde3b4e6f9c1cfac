#include "relcpd/ustat.hpp"

#include "relcpd/error.hpp"
#include "relcpd/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace relcpd {

std::uint64_t pair_count(long long k, long long m) noexcept {
    if (m < 0 || k <= m + 1) {
        return 0;
    }
    return static_cast<std::uint64_t>(k - m) * static_cast<std::uint64_t>(k - m - 1);
}

std::size_t scaled_length(double lambda, std::size_t len) noexcept {
    if (lambda <= 0.0) {
        return 0;
    }
    double v = std::floor(lambda * static_cast<double>(len) + 1e-9);
    if (v >= static_cast<double>(len)) {
        return len;
    }
    return static_cast<std::size_t>(v);
}

bool split_is_degenerate(std::size_t n, std::size_t k, std::size_t m) noexcept {
    return k <= m + 1 || k + m >= n - 1;
}

double lambda_factor(double lambda, std::size_t k, std::size_t n, std::size_t m) {
    if (k >= n) {
        throw DomainError("lambda_factor: k must be smaller than n");
    }
    const auto mm = static_cast<long long>(m);
    const auto d1 = pair_count(static_cast<long long>(k), mm);
    const auto d2 = pair_count(static_cast<long long>(n - k), mm);
    if (d1 == 0 || d2 == 0) {
        throw DomainError("lambda_factor: N_m(k) and N_m(n-k) must be positive");
    }
    const auto a = pair_count(static_cast<long long>(scaled_length(lambda, k)), mm);
    const auto b = pair_count(static_cast<long long>(scaled_length(lambda, n - k)), mm);
    return (static_cast<double>(a) / static_cast<double>(d1)) * (static_cast<double>(b) / static_cast<double>(d2));
}

std::size_t SequentialUStat::find(double lambda) const noexcept {
    for (std::size_t g = 0; g < grid.size(); ++g) {
        if (std::abs(grid[g] - lambda) <= 1e-12) {
            return g;
        }
    }
    return grid.size();
}

std::vector<double> CoordinateSequence::coordinate(std::size_t l) const {
    std::vector<double> out(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        out[g] = at(g, l);
    }
    return out;
}

std::vector<std::size_t> all_coordinates(std::size_t p) {
    std::vector<std::size_t> a(p);
    std::iota(a.begin(), a.end(), std::size_t{0});
    return a;
}

namespace {

void check_grid(std::span<const double> grid) {
    if (grid.empty()) {
        throw DomainError("lambda grid must be nonempty");
    }
    for (std::size_t g = 0; g < grid.size(); ++g) {
        if (!(grid[g] > 0.0 && grid[g] <= 1.0)) {
            throw DomainError("lambda grid values must lie in (0, 1]");
        }
        if (g > 0 && !(grid[g] > grid[g - 1])) {
            throw DomainError("lambda grid must be strictly increasing");
        }
    }
}

void check_split(const TimeSeriesMatrix& x, std::size_t k) {
    if (x.empty()) {
        throw DomainError("statistic requires a nonempty matrix");
    }
    if (k < 1 || k + 1 > x.n()) {
        throw DomainError("split k must lie in {1, ..., n-1}");
    }
}

void check_coords(std::span<const std::size_t> coords, std::size_t p) {
    if (coords.empty()) {
        throw DomainError("coordinate set A must be nonempty");
    }
    for (auto c : coords) {
        if (c >= p) {
            throw DomainError("coordinate index out of range");
        }
    }
}

/// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) noexcept {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    double value() const noexcept { return sum + comp; }
};

/// Prefix tables for one block of consecutive rows, coordinates [c0, c1).
///   p0[t] = sum_{i<=t} y_i
///   p1[t] = sum_{i<=t} i * y_i
///   d[t]  = sum_{i1, i2 <= t, |i1 - i2| <= m} y_i1 y_i2
/// with y the block rows minus a per-coordinate reference value.
class BlockPrefix {
public:
    BlockPrefix(const TimeSeriesMatrix& x, std::span<const double> ref, std::size_t first_row, std::size_t len,
                std::size_t m, std::size_t c0, std::size_t c1)
        : len_(len), m_(m), width_(c1 - c0), p0_((len + 1) * width_, 0.0), p1_((len + 1) * width_, 0.0),
          d_((len + 1) * width_, 0.0) {
        std::vector<CompensatedSum> s0(width_), s1(width_), sd(width_);
        for (std::size_t i = 1; i <= len; ++i) {
            const auto row = x.row(first_row + i - 1);
            const std::size_t lo = i - 1 > m ? i - 1 - m : 0;  // window y_{lo+1..i-1}
            for (std::size_t c = 0; c < width_; ++c) {
                const double y = row[c0 + c] - ref[c0 + c];
                const double window = p0_[(i - 1) * width_ + c] - p0_[lo * width_ + c];
                s0[c].add(y);
                s1[c].add(static_cast<double>(i) * y);
                sd[c].add(y * (y + 2.0 * window));
                p0_[i * width_ + c] = s0[c].value();
                p1_[i * width_ + c] = s1[c].value();
                d_[i * width_ + c] = sd[c].value();
            }
        }
    }

    /// Sum over pairs of the block prefix of length t with |i1 - i2| > m.
    double pair_sum(std::size_t t, std::size_t c) const noexcept {
        const double s = p0_[t * width_ + c];
        return s * s - d_[t * width_ + c];
    }

    /// sum_{i <= t} w_t(i) y_i, w_t(i) = #{i2 <= t : |i - i2| > m}.
    double weighted_sum(std::size_t t, std::size_t c) const noexcept {
        const std::size_t m = m_;
        double w = 0.0;
        if (t >= m + 2) {
            // i = m+2 .. t contribute (i - m - 1) y_i
            w += (p1_[t * width_ + c] - p1_[(m + 1) * width_ + c]) -
                 static_cast<double>(m + 1) * (p0_[t * width_ + c] - p0_[(m + 1) * width_ + c]);
            // i = 1 .. t-m-1 contribute (t - m - i) y_i
            const std::size_t u = t - m - 1;
            w += static_cast<double>(t - m) * p0_[u * width_ + c] - p1_[u * width_ + c];
        }
        return w;
    }

private:
    std::size_t len_;
    std::size_t m_;
    std::size_t width_;
    std::vector<double> p0_;
    std::vector<double> p1_;
    std::vector<double> d_;
};

} // namespace

CoordinateSequence coordinate_sequence(const TimeSeriesMatrix& x, std::size_t k, std::size_t m,
                                       std::span<const double> grid, std::size_t threads) {
    check_split(x, k);
    check_grid(grid);
    const std::size_t n = x.n();
    const std::size_t p = x.p();
    const std::size_t G = grid.size();

    CoordinateSequence out;
    out.k = k;
    out.m = m;
    out.p = p;
    out.grid.assign(grid.begin(), grid.end());
    out.values.assign(G * p, 0.0);
    out.lambda_values.assign(G, 0.0);
    out.full.assign(p, 0.0);
    out.degenerate = split_is_degenerate(n, k, m);
    if (out.degenerate) {
        return out;
    }

    const auto mm = static_cast<long long>(m);
    const double norm = static_cast<double>(pair_count(static_cast<long long>(k), mm)) *
                        static_cast<double>(pair_count(static_cast<long long>(n - k), mm));

    // Query lengths: each grid point plus lambda = 1.
    std::vector<std::size_t> a_len(G + 1), b_len(G + 1);
    for (std::size_t g = 0; g < G; ++g) {
        a_len[g] = scaled_length(grid[g], k);
        b_len[g] = scaled_length(grid[g], n - k);
        out.lambda_values[g] = lambda_factor(grid[g], k, n, m);
    }
    a_len[G] = k;
    b_len[G] = n - k;

    // Differences are location free; subtracting the first row keeps the
    // prefix sums at noise scale and makes constant columns exactly zero.
    const auto ref = x.row(0);

    const std::size_t chunk = 64;
    const std::size_t chunks = (p + chunk - 1) / chunk;
    parallel_for(chunks, threads, [&](std::size_t ci) {
        const std::size_t c0 = ci * chunk;
        const std::size_t c1 = std::min(p, c0 + chunk);
        BlockPrefix pre(x, ref, 0, k, m, c0, c1);
        BlockPrefix post(x, ref, k, n - k, m, c0, c1);
        for (std::size_t g = 0; g <= G; ++g) {
            const std::size_t a = a_len[g];
            const std::size_t b = b_len[g];
            const bool empty = a <= m + 1 || b <= m + 1;
            const double na = static_cast<double>(pair_count(static_cast<long long>(a), mm));
            const double nb = static_cast<double>(pair_count(static_cast<long long>(b), mm));
            for (std::size_t c = c0; c < c1; ++c) {
                double v = 0.0;
                if (!empty) {
                    const std::size_t lc = c - c0;
                    v = nb * pre.pair_sum(a, lc) + na * post.pair_sum(b, lc) -
                        2.0 * pre.weighted_sum(a, lc) * post.weighted_sum(b, lc);
                    v /= norm;
                }
                if (g < G) {
                    out.values[g * p + c] = v;
                } else {
                    out.full[c] = v;
                }
            }
        }
    });
    return out;
}

SequentialUStat aggregate(const CoordinateSequence& seq, std::span<const std::size_t> coords) {
    check_coords(coords, seq.p);
    SequentialUStat out;
    out.k = seq.k;
    out.m = seq.m;
    out.grid = seq.grid;
    out.lambda_values = seq.lambda_values;
    out.norm_size = coords.size();
    out.degenerate = seq.degenerate;
    out.t_values.assign(seq.grid.size(), 0.0);
    const double size = static_cast<double>(coords.size());
    for (std::size_t g = 0; g < seq.grid.size(); ++g) {
        CompensatedSum s;
        for (auto c : coords) {
            s.add(seq.at(g, c));
        }
        out.t_values[g] = s.value() / size;
    }
    CompensatedSum s;
    for (auto c : coords) {
        s.add(seq.full[c]);
    }
    out.t_full = s.value() / size;
    return out;
}

SequentialUStat useq(const TimeSeriesMatrix& x, std::span<const std::size_t> coords, std::size_t k,
                     std::size_t m, std::span<const double> grid) {
    check_split(x, k);
    check_coords(coords, x.p());
    // Only the requested coordinates are evaluated.
    std::vector<std::size_t> sorted(coords.begin(), coords.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.size() != coords.size()) {
        throw DomainError("coordinate set A contains duplicates");
    }
    if (sorted.size() == x.p()) {
        return aggregate(coordinate_sequence(x, k, m, grid), coords);
    }
    const auto sub = x.select_columns(coords);
    const auto local = all_coordinates(coords.size());
    return aggregate(coordinate_sequence(sub, k, m, grid), local);
}

SequentialUStat useq_naive(const TimeSeriesMatrix& x, std::span<const std::size_t> coords, std::size_t k,
                           std::size_t m, std::span<const double> grid) {
    check_split(x, k);
    check_coords(coords, x.p());
    check_grid(grid);
    const std::size_t n = x.n();
    SequentialUStat out;
    out.k = k;
    out.m = m;
    out.grid.assign(grid.begin(), grid.end());
    out.norm_size = coords.size();
    out.degenerate = split_is_degenerate(n, k, m);
    out.t_values.assign(grid.size(), 0.0);
    out.lambda_values.assign(grid.size(), 0.0);
    if (out.degenerate) {
        return out;
    }
    const auto mm = static_cast<long long>(m);
    const double norm = static_cast<double>(pair_count(static_cast<long long>(k), mm)) *
                        static_cast<double>(pair_count(static_cast<long long>(n - k), mm)) *
                        static_cast<double>(coords.size());
    auto far = [m](std::size_t u, std::size_t v) { return (u > v ? u - v : v - u) > m; };

    auto evaluate = [&](double lambda) {
        const std::size_t a = scaled_length(lambda, k);
        const std::size_t b = scaled_length(lambda, n - k);
        // 1-based indices as written: i in 1..a, j in k+1..k+b.
        double total = 0.0;
        for (std::size_t i1 = 1; i1 <= a; ++i1) {
            for (std::size_t i2 = 1; i2 <= a; ++i2) {
                if (!far(i1, i2)) {
                    continue;
                }
                for (std::size_t j1 = k + 1; j1 <= k + b; ++j1) {
                    for (std::size_t j2 = k + 1; j2 <= k + b; ++j2) {
                        if (!far(j1, j2)) {
                            continue;
                        }
                        for (auto l : coords) {
                            total += (x(i1 - 1, l) - x(j1 - 1, l)) * (x(i2 - 1, l) - x(j2 - 1, l));
                        }
                    }
                }
            }
        }
        return total / norm;
    };

    for (std::size_t g = 0; g < grid.size(); ++g) {
        out.t_values[g] = evaluate(grid[g]);
        out.lambda_values[g] = lambda_factor(grid[g], k, n, m);
    }
    out.t_full = evaluate(1.0);
    return out;
}

} // namespace relcpd
