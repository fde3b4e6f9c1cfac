#include "relcpd/selfnorm.hpp"

#include "relcpd/error.hpp"

#include <algorithm>
#include <cmath>

namespace relcpd {

NuMeasure::NuMeasure(std::size_t K) : K_(K) {
    if (K < 2) {
        throw DomainError("NuMeasure: K must be at least 2");
    }
    support_.resize(K - 1);
    for (std::size_t j = 1; j < K; ++j) {
        support_[j - 1] = static_cast<double>(j) / static_cast<double>(K);
    }
    weights_.assign(K - 1, 1.0 / static_cast<double>(K - 1));
}

std::vector<double> NuMeasure::grid_with_one() const {
    auto g = support_;
    g.push_back(1.0);
    return g;
}

std::vector<double> merge_grids(std::span<const std::vector<double>> grids) {
    std::vector<double> all;
    for (const auto& g : grids) {
        all.insert(all.end(), g.begin(), g.end());
    }
    std::sort(all.begin(), all.end());
    std::vector<double> out;
    for (double v : all) {
        if (out.empty() || v - out.back() > 1e-12) {
            out.push_back(v);
        }
    }
    return out;
}

namespace {

std::size_t locate(std::span<const double> grid, double lambda) {
    for (std::size_t g = 0; g < grid.size(); ++g) {
        if (std::abs(grid[g] - lambda) <= 1e-12) {
            return g;
        }
    }
    throw DomainError("lambda grid does not contain the measure atom " + std::to_string(lambda));
}

} // namespace

double v_statistic(const SequentialUStat& seq, const NuMeasure& nu) {
    const auto& atoms = nu.support();
    const auto& w = nu.weights();
    double acc = 0.0;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        const std::size_t g = locate(seq.grid, atoms[j]);
        const double r = seq.t_values[g] - seq.lambda_values[g] * seq.t_full;
        acc += w[j] * r * r;
    }
    return std::sqrt(acc);
}

double v_ell(std::span<const double> values, std::span<const double> grid, double full, const NuMeasure& nu) {
    if (values.size() != grid.size()) {
        throw DomainError("v_ell: values and grid differ in length");
    }
    const auto& atoms = nu.support();
    const auto& w = nu.weights();
    double acc = 0.0;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        const std::size_t g = locate(grid, atoms[j]);
        const double l2 = atoms[j] * atoms[j];
        const double r = values[g] - l2 * l2 * full;
        acc += w[j] * r * r;
    }
    return std::sqrt(acc);
}

} // namespace relcpd
