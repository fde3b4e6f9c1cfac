#pragma once

#include "relcpd/parallel.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace relcpd {

/// Limiting pivots of the self-normalized statistics.
///   G = B(1) / ( int lambda^6 (B(lambda) - lambda B(1))^2 dnu )^{1/2}, nu uniform on K-1 atoms
///   H = (B(1)^2 - 1) / ( int_0^1 lambda^4 ((B^2(lambda) - lambda) - lambda^2 (B^2(1) - 1))^2 dlambda )^{1/2}
enum class LimitDist { G, H };

std::string dist_name(LimitDist d);
LimitDist parse_dist(const std::string& name);

/// Standard Brownian motion sampled on a grid of [0, 1] that ends at 1.
struct BrownianPath {
    std::vector<double> times;
    std::vector<double> values;
};

/// Exact Gaussian-increment sample at `times` (sorted, in (0, 1], last = 1).
BrownianPath sample_brownian(const std::vector<double>& times, Engine& engine);

/// Uniform grid {1/N, 2/N, ..., 1}.
std::vector<double> uniform_times(std::size_t grid_size);

/// Default resolution for path functionals integrated over [0, 1].
inline constexpr std::size_t kDefaultGridSize = 1000;

/// Counts draws whose self-normalizer came out exactly zero and were redrawn.
struct ResampleCounter {
    std::size_t zero_denominators = 0;
};

/// One draw of G with nu uniform on {1/K, ..., (K-1)/K}; the path is needed
/// only at the atoms and at 1, so no discretization is involved.
double sample_G(std::size_t K, Engine& engine, ResampleCounter* counter = nullptr);

/// One draw of H, trapezoidal rule on `grid_size` uniform steps (>= 100).
double sample_H(std::size_t grid_size, Engine& engine, ResampleCounter* counter = nullptr);

/// int_0^1 lambda^alpha (B(lambda) - lambda B(1))^2 dlambda (alpha >= 0).
/// Returns the integral itself, not its square root.
double sample_V_alpha(double alpha, std::size_t grid_size, Engine& engine);

/// int_0^1 lambda^alpha ((B^2(lambda) - lambda) - lambda^2 (B^2(1) - 1))^2 dlambda
/// (alpha >= 1). Returns the integral itself.
double sample_W_alpha(double alpha, std::size_t grid_size, Engine& engine);

/// Linear interpolation between order statistics (Hyndman-Fan type 7).
/// `sorted` must be ascending and nonempty.
double quantile_type7(const std::vector<double>& sorted, double level);

struct QuantileTable {
    LimitDist dist = LimitDist::G;
    std::size_t K = 20;                 ///< atoms of nu (G only)
    std::size_t grid_size = kDefaultGridSize;  ///< path resolution (H only)
    std::vector<double> levels;
    std::vector<double> quantiles;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    std::size_t zero_denominators = 0;

    /// Quantile at `level`: exact table entry, else linear interpolation
    /// between neighbouring levels. Throws DomainError outside the table.
    double at(double level) const;
};

/// Levels reported by default: 0.8, 0.9, 0.95, 0.975, 0.99, 0.995.
std::vector<double> default_levels();

/// Draw i uses an engine seeded with derive_seed(seed, i), so the table is
/// identical for every thread count. Throws DomainError for reps < 1000.
QuantileTable quantile_table(LimitDist dist, std::size_t K, std::vector<double> levels, std::size_t reps,
                             std::uint64_t seed, std::size_t threads = 1,
                             std::size_t grid_size = kDefaultGridSize);

/// The raw draws behind `quantile_table`, in replication order.
std::vector<double> draw_many(LimitDist dist, std::size_t K, std::size_t reps, std::uint64_t seed,
                              std::size_t threads = 1, std::size_t grid_size = kDefaultGridSize,
                              std::size_t* zero_denominators = nullptr);

/// CSV: a '#' header line with dist/K/grid_size/reps/seed, then level,quantile.
void write_quantile_table(const QuantileTable& table, const std::filesystem::path& path);
void write_quantile_table(const QuantileTable& table, std::ostream& out);
QuantileTable read_quantile_table(const std::filesystem::path& path);

/// Constants of the closed-form tail bounds for alpha >= 1:
/// C = 1 / (16 (alpha + 3)), D = 3 (C / 4)^{4/3}.
struct TailBoundConstants {
    double c_alpha = 0.0;
    double d_alpha = 0.0;
};
TailBoundConstants tail_bound_constants(double alpha);

/// 11 exp(-D_alpha t^{2/5}): bound on P(|H_alpha| > t).
double h_tail_bound(double alpha, double t);
/// 9 exp(-C_alpha t^{1/4}): bound on E exp(-t W_alpha).
double w_laplace_bound(double alpha, double t);
/// exp(-sqrt(2t) / (alpha + 2)), the closed-form bound on E exp(-t V_alpha).
/// The exact transform below exceeds it for every t > 0.
double v_laplace_bound(double alpha, double t);
/// Exact E exp(-t V_alpha) with x = sqrt(2t) / (alpha + 2):
/// x^{1/(2(alpha+2))} (Gamma((alpha+3)/(alpha+2)) I_{1/(alpha+2)}(2x))^{-1/2}.
double v_laplace_transform(double alpha, double t);

} // namespace relcpd
