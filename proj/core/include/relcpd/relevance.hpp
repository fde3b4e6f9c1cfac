#pragma once

#include "relcpd/limitdist.hpp"
#include "relcpd/tsdata.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace relcpd {

/// Which norm of the shift the threshold refers to.
enum class NormKind {
    NormalizedL2,      ///< ||delta||_2^2 / p, all coordinates
    SparsityAdjusted,  ///< ||delta||_2^2 / ||delta||_0, estimated support only
};

std::string norm_name(NormKind kind);
/// Accepts normalized_l2 / dense and sparsity_adjusted / sparse.
NormKind parse_norm(const std::string& name);

/// Where q_{1-alpha} and q_{1-alpha/2} of G come from.
///
/// With `table` set, the CSV is read and must describe G at the configured K.
/// Otherwise the quantiles are simulated from (reps, seed) and memoized in
/// the process; with `cache_dir` set they are also stored there and reused.
struct QuantileSource {
    std::filesystem::path table;
    std::size_t reps = 100000;
    std::uint64_t seed = 20240607;
    std::filesystem::path cache_dir;
};

struct TestConfig {
    double delta = 0.0;                     ///< threshold on the squared-norm scale
    double alpha = 0.05;
    std::size_t K = 20;                     ///< atoms of nu for the self-normalizer
    NormKind norm = NormKind::NormalizedL2;
    std::optional<std::size_t> m;           ///< manual trimming; else data-driven
    std::size_t set_K = 20;                 ///< atoms used by the support estimate
    double kappa = 1.5;
    double cutoff = 0.01;                   ///< flatness cutoff of the trimming rule
    QuantileSource quantiles;
    std::size_t threads = 1;

    /// Throws DomainError for delta < 0, alpha outside (0, 1), K < 2, ...
    void validate() const;
};

struct TestResult {
    NormKind norm = NormKind::NormalizedL2;
    double delta = 0.0;
    double alpha = 0.05;
    std::size_t K = 20;
    double T = 0.0;
    double V = 0.0;
    double q = 0.0;           ///< q_{1-alpha}
    double q_two = 0.0;       ///< q_{1-alpha/2}
    bool reject = false;
    double delta_alpha = 0.0;
    double ci_upper = 0.0;    ///< one-sided interval [0, ci_upper]
    double ci_lower_two = 0.0;
    double ci_upper_two = 0.0;
    bool sqrt_scale = false;  ///< delta_alpha and CI endpoints are square-rooted
    std::size_t n = 0;
    std::size_t p = 0;
    std::size_t k_hat = 0;
    double theta_hat = 0.0;
    std::size_t m1 = 0;
    std::size_t m2 = 0;
    std::size_t m_hat = 0;
    bool m_manual = false;
    std::vector<std::size_t> S_hat;  ///< 0-based; sparse test only
    std::size_t norm_size = 0;       ///< |A|
    bool degenerate = false;         ///< no inference possible; reject is false
    std::vector<std::string> warnings;
};

/// q_{1-alpha} and q_{1-alpha/2} of G for the configured source.
struct GQuantiles {
    double q = 0.0;
    double q_two = 0.0;
};
GQuantiles resolve_quantiles(const TestConfig& config);

/// Fills reject, delta_alpha and both intervals from T, V, q, q_two, delta.
void apply_decision(TestResult& result);

/// Test of H0: ||delta||^2 / p <= delta. Pipeline: change-point estimate,
/// trimming choice, sequential statistic over nu's atoms and 1, decision.
/// A split in the guard region yields degenerate = true with a warning.
TestResult test_dense(const TimeSeriesMatrix& x, const TestConfig& config);

/// Test of H0: ||delta||^2 / ||delta||_0 <= delta on the estimated support.
/// An empty support estimate yields non-rejection with a warning.
/// Throws DomainError for p < 2.
TestResult test_sparse(const TimeSeriesMatrix& x, const TestConfig& config);

/// Dispatches on config.norm.
TestResult run_test(const TimeSeriesMatrix& x, const TestConfig& config);

/// delta_alpha and CI endpoints mapped to the norm (not squared) scale.
TestResult report_sqrt_scale(const TestResult& result);

/// Flat key=value report, one field per line.
std::string to_key_value(const TestResult& result);
/// Header and row for CSV aggregation; S_hat is written 1-based, ';'-separated.
std::string csv_header();
std::string to_csv_row(const TestResult& result);

} // namespace relcpd
