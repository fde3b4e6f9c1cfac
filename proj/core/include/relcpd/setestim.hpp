#pragma once

#include "relcpd/selfnorm.hpp"
#include "relcpd/tsdata.hpp"
#include "relcpd/ustat.hpp"

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <span>
#include <vector>

namespace relcpd {

/// Estimated support of the mean shift with per-coordinate diagnostics.
struct SetEstimate {
    std::vector<std::size_t> s_hat;  ///< sorted, 0-based
    std::vector<double> delta_sq;    ///< delta_l^2(1); may be negative
    std::vector<double> v_ell;       ///< self-normalizers, >= 0
    double threshold = 0.0;          ///< log(p)^kappa

    bool contains(std::size_t l) const;
};

struct SupportMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
};

/// delta_l^2(lambda) for every coordinate l (the |A| = 1 case of useq).
CoordinateSequence delta_seq_all(const TimeSeriesMatrix& x, std::size_t k_hat, std::size_t m,
                                 std::span<const double> grid, std::size_t threads = 1);

/// log(p)^kappa; strictly increasing in p for p >= 2.
double support_threshold(std::size_t p, double kappa = 1.5);

/// Thresholds an existing coordinate sequence. The sequence grid must
/// contain the atoms of `nu`.
SetEstimate estimate_set(const CoordinateSequence& seq, const NuMeasure& nu, double kappa = 1.5);

/// S_hat = { l : delta_l^2 > v_l * log(p)^kappa }, v_l on the K-atom
/// approximation of Lebesgue measure. Throws DomainError for p < 2.
SetEstimate estimate_S(const TimeSeriesMatrix& x, std::size_t k_hat, std::size_t m, std::size_t grid_K = 20,
                       double kappa = 1.5, std::size_t threads = 1);

/// Precision |S n S_hat| / |S_hat| (1 when both are empty, 0 when only S_hat
/// is empty), recall |S n S_hat| / |S| (0 when S is empty), F = 2PR/(P+R).
SupportMetrics support_metrics(std::span<const std::size_t> truth, std::span<const std::size_t> estimate);

/// CSV with columns coordinate (1-based), delta_sq, v_ell, member.
void write_set_csv(const SetEstimate& est, const std::filesystem::path& path);
void write_set_csv(const SetEstimate& est, std::ostream& out);

} // namespace relcpd
