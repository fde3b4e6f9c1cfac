#pragma once

#include "relcpd/ustat.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace relcpd {

/// Discrete uniform measure on {1/K, ..., (K-1)/K}.
class NuMeasure {
public:
    explicit NuMeasure(std::size_t K = 20);

    std::size_t K() const noexcept { return K_; }
    const std::vector<double>& support() const noexcept { return support_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    /// Support points followed by 1; the lambda grid the self-normalizers need.
    std::vector<double> grid_with_one() const;

private:
    std::size_t K_;
    std::vector<double> support_;
    std::vector<double> weights_;
};

/// Union of several grids, sorted, duplicates (1e-12) removed.
std::vector<double> merge_grids(std::span<const std::vector<double>> grids);

/// V = sqrt( sum_j w_j (T(lambda_j) - Lambda_n(lambda_j) T(1))^2 ) over the
/// atoms of nu. Throws DomainError if an atom is missing from seq.grid.
double v_statistic(const SequentialUStat& seq, const NuMeasure& nu);

/// v_l = sqrt( sum_j w_j (d(lambda_j) - lambda_j^4 d(1))^2 ), the atoms of nu
/// standing in for Lebesgue measure. `values[g]` is d(grid[g]); `full` is d(1).
double v_ell(std::span<const double> values, std::span<const double> grid, double full, const NuMeasure& nu);

} // namespace relcpd
