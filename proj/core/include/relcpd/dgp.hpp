#pragma once

#include "relcpd/keyvalue.hpp"
#include "relcpd/tsdata.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace relcpd {

enum class NoiseModel { Independent, MovingAverage, Autoregressive };

/// Cross-sectional covariance of the innovations.
enum class Spatial {
    Diagonal,  ///< 0.5 * I
    Toeplitz,  ///< 0.5 * 0.9^|i-j|
};

/// One simulation design: X_j = mu*1 + eta_j (+ delta after k0).
struct DGPSpec {
    NoiseModel model = NoiseModel::Independent;
    int ma_order = 0;         ///< q for MovingAverage, in {1..6}
    double ar_coef = 0.0;     ///< c for Autoregressive, |c| < 1
    Spatial spatial = Spatial::Diagonal;
    std::size_t n = 200;
    std::size_t p = 100;
    double theta0 = 0.6;
    double mu = 10.0;
    std::size_t s = 100;      ///< number of shifted coordinates (the first s)
    double signal = 0.0;      ///< common value of delta_l^2 on the shifted coordinates
    std::uint64_t seed = 1;

    std::size_t k0() const noexcept;
    /// The shift vector: sqrt(signal) on the first s coordinates, 0 elsewhere.
    std::vector<double> delta() const;
    /// ||delta||_2^2 / p, the normalized squared norm.
    double normalized_sq_norm() const noexcept;

    /// Throws DomainError describing the first violated constraint.
    void validate() const;
};

/// MA weights c_1..c_6 used by the MovingAverage model.
inline constexpr double kMaCoefficients[6] = {0.5, 0.25, 0.2, 0.1, 0.05, 0.025};

/// Burn-in length for autoregressive designs, started from eta = 0.
inline constexpr std::size_t kArBurnIn = 500;

/// Parses "IND", "MA2", "MA(4)", "AR0.5", "AR(0.6)", "MA*6", "AR*0.5".
/// Starred names select diagonal innovations; unstarred MA/AR select
/// Toeplitz, IND selects diagonal. Returns the model fields set on `spec`.
void apply_model_name(DGPSpec& spec, const std::string& name);
std::string model_name(const DGPSpec& spec);

std::string spatial_name(Spatial s);
Spatial parse_spatial(const std::string& name);

/// Flat key=value form: model, spatial, n, p, theta0, mu, s, signal, seed.
KeyValueConfig to_config(const DGPSpec& spec);
/// Reads the keys above (plus `sp`, the fraction s/p, as an alternative to
/// `s`) on top of `base`. Unknown keys are ignored here; callers that own the
/// whole file reject them.
DGPSpec dgp_from_config(const KeyValueConfig& cfg, DGPSpec base = {});

/// Draws one sample of the design. Deterministic in `spec` (seed included).
TimeSeriesMatrix simulate(const DGPSpec& spec);

} // namespace relcpd
