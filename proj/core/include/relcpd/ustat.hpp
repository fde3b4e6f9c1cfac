#pragma once

#include "relcpd/tsdata.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace relcpd {

/// Number of ordered index pairs (i1, i2) in {1..k}^2 with |i1 - i2| > m:
/// (k - m)(k - m - 1) when k > m + 1, else 0.
std::uint64_t pair_count(long long k, long long m) noexcept;

/// floor(lambda * len) for grid values that are meant to be exact
/// rationals (j/K); a 1e-9 slack keeps 0.7*10 from flooring to 6.
std::size_t scaled_length(double lambda, std::size_t len) noexcept;

/// True when T_n(k, m; .) is identically zero: k <= m + 1 or k + m >= n - 1.
bool split_is_degenerate(std::size_t n, std::size_t k, std::size_t m) noexcept;

/// [N_m(floor(lambda k)) / N_m(k)] * [N_m(floor(lambda (n-k))) / N_m(n-k)].
/// Throws DomainError when either denominator is zero.
double lambda_factor(double lambda, std::size_t k, std::size_t n, std::size_t m);

/// Sequential trimmed U-statistic T_{n,A}(k, m; lambda) on a grid of lambda
/// values, together with Lambda_n(lambda).
struct SequentialUStat {
    std::size_t k = 0;
    std::size_t m = 0;
    std::vector<double> grid;
    std::vector<double> t_values;
    std::vector<double> lambda_values;
    double t_full = 0.0;         ///< T at lambda = 1, whether or not 1 is on the grid
    std::size_t norm_size = 0;   ///< |A|
    bool degenerate = false;     ///< guard condition hit; every value is 0

    /// Index of `lambda` on the grid (1e-12 tolerance), or grid.size().
    std::size_t find(double lambda) const noexcept;
};

/// Per-coordinate sequential estimates delta_l^2(lambda), i.e. the quadruple
/// sum restricted to one coordinate and normalized by N_m(k) N_m(n - k).
/// Row g of `values` holds all p coordinates at grid[g].
struct CoordinateSequence {
    std::size_t k = 0;
    std::size_t m = 0;
    std::size_t p = 0;
    std::vector<double> grid;
    std::vector<double> values;        ///< grid.size() x p, row-major
    std::vector<double> lambda_values;
    std::vector<double> full;          ///< delta_l^2(1), length p
    bool degenerate = false;

    double at(std::size_t g, std::size_t l) const noexcept { return values[g * p + l]; }
    /// delta_l^2(grid[g]) for every g.
    std::vector<double> coordinate(std::size_t l) const;
};

/// Factorized evaluation in O(n p + |grid| p). Throws DomainError when k is
/// outside {1, ..., n-1} or the grid is not strictly increasing in (0, 1].
/// Coordinates are split across `threads` workers; results do not depend on
/// the worker count.
CoordinateSequence coordinate_sequence(const TimeSeriesMatrix& x, std::size_t k, std::size_t m,
                                       std::span<const double> grid, std::size_t threads = 1);

/// Averages the coordinates in `coords` (0-based, nonempty) of a coordinate
/// sequence into T_{n,A}. Reduction order is the order of `coords`.
SequentialUStat aggregate(const CoordinateSequence& seq, std::span<const std::size_t> coords);

/// T_{n,A}(k, m; lambda) via the prefix-sum factorization.
SequentialUStat useq(const TimeSeriesMatrix& x, std::span<const std::size_t> coords, std::size_t k,
                     std::size_t m, std::span<const double> grid);

/// Literal quadruple sum; O(n^4 |A|). Intended for n <= 50 as a test oracle.
SequentialUStat useq_naive(const TimeSeriesMatrix& x, std::span<const std::size_t> coords, std::size_t k,
                           std::size_t m, std::span<const double> grid);

/// {0, 1, ..., p-1}.
std::vector<std::size_t> all_coordinates(std::size_t p);

} // namespace relcpd
