#include "relcpd/dgp.hpp"

#include "relcpd/error.hpp"
#include "relcpd/parallel.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>
#include <deque>
#include <random>

namespace relcpd {

std::size_t DGPSpec::k0() const noexcept {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * theta0));
}

std::vector<double> DGPSpec::delta() const {
    std::vector<double> d(p, 0.0);
    const double v = std::sqrt(signal);
    for (std::size_t l = 0; l < s && l < p; ++l) {
        d[l] = v;
    }
    return d;
}

double DGPSpec::normalized_sq_norm() const noexcept {
    return p == 0 ? 0.0 : signal * static_cast<double>(s) / static_cast<double>(p);
}

void DGPSpec::validate() const {
    if (n < 4) {
        throw DomainError("DGPSpec: n must be at least 4");
    }
    if (p < 1) {
        throw DomainError("DGPSpec: p must be positive");
    }
    if (!(theta0 > 0.0 && theta0 < 1.0)) {
        throw DomainError("DGPSpec: theta0 must lie in (0,1)");
    }
    const std::size_t k = k0();
    if (k < 1 || k > n - 1) {
        throw DomainError("DGPSpec: floor(n*theta0) must lie in {1,...,n-1}");
    }
    if (s < 1 || s > p) {
        throw DomainError("DGPSpec: s must satisfy 1 <= s <= p");
    }
    if (!(signal >= 0.0) || !std::isfinite(signal)) {
        throw DomainError("DGPSpec: signal must be a finite nonnegative number");
    }
    if (!std::isfinite(mu)) {
        throw DomainError("DGPSpec: mu must be finite");
    }
    if (model == NoiseModel::MovingAverage && (ma_order < 1 || ma_order > 6)) {
        throw DomainError("DGPSpec: MA order must be in 1..6");
    }
    if (model == NoiseModel::Autoregressive && !(std::abs(ar_coef) < 1.0)) {
        throw DomainError("DGPSpec: AR coefficient must satisfy |c| < 1");
    }
}

void apply_model_name(DGPSpec& spec, const std::string& raw) {
    std::string name;
    for (char c : raw) {
        if (c != '(' && c != ')' && c != ' ' && c != '_') {
            name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        }
    }
    if (name == "IND") {
        spec.model = NoiseModel::Independent;
        spec.spatial = Spatial::Diagonal;
        return;
    }
    bool starred = name.find('*') != std::string::npos;
    std::string stripped;
    for (char c : name) {
        if (c != '*') {
            stripped += c;
        }
    }
    try {
        if (stripped.starts_with("MA")) {
            spec.model = NoiseModel::MovingAverage;
            spec.ma_order = static_cast<int>(parse_int(stripped.substr(2), "MA order"));
        } else if (stripped.starts_with("AR")) {
            spec.model = NoiseModel::Autoregressive;
            spec.ar_coef = parse_double(stripped.substr(2), "AR coefficient");
        } else {
            throw ParseError("");
        }
    } catch (const ParseError&) {
        throw ParseError("unknown model '" + raw + "' (expected IND, MA<q>, AR<c>, MA*<q>, AR*<c>)");
    }
    spec.spatial = starred ? Spatial::Diagonal : Spatial::Toeplitz;
}

std::string model_name(const DGPSpec& spec) {
    switch (spec.model) {
    case NoiseModel::Independent:
        return "IND";
    case NoiseModel::MovingAverage:
        return std::string(spec.spatial == Spatial::Diagonal ? "MA*" : "MA") + std::to_string(spec.ma_order);
    case NoiseModel::Autoregressive:
        return std::string(spec.spatial == Spatial::Diagonal ? "AR*" : "AR") + format_double(spec.ar_coef);
    }
    return "?";
}

std::string spatial_name(Spatial s) { return s == Spatial::Diagonal ? "diagonal" : "toeplitz"; }

Spatial parse_spatial(const std::string& name) {
    if (name == "diagonal" || name == "diag") {
        return Spatial::Diagonal;
    }
    if (name == "toeplitz") {
        return Spatial::Toeplitz;
    }
    throw ParseError("unknown spatial structure '" + name + "' (expected diagonal or toeplitz)");
}

KeyValueConfig to_config(const DGPSpec& spec) {
    KeyValueConfig cfg;
    cfg.set("model", model_name(spec));
    cfg.set("spatial", spatial_name(spec.spatial));
    cfg.set("n", std::to_string(spec.n));
    cfg.set("p", std::to_string(spec.p));
    cfg.set("theta0", format_double(spec.theta0));
    cfg.set("mu", format_double(spec.mu));
    cfg.set("s", std::to_string(spec.s));
    cfg.set("signal", format_double(spec.signal));
    cfg.set("seed", std::to_string(spec.seed));
    return cfg;
}

DGPSpec dgp_from_config(const KeyValueConfig& cfg, DGPSpec spec) {
    if (auto m = cfg.get("model")) {
        apply_model_name(spec, *m);
    }
    if (auto sp = cfg.get("spatial")) {
        spec.spatial = parse_spatial(*sp);
    }
    auto read_size = [&](const char* key, std::size_t& field) {
        if (auto v = cfg.get(key)) {
            long long x = parse_int(*v, key);
            if (x < 0) {
                throw ParseError(std::string(key) + " must be nonnegative");
            }
            field = static_cast<std::size_t>(x);
        }
    };
    read_size("n", spec.n);
    bool p_given = cfg.contains("p");
    read_size("p", spec.p);
    spec.theta0 = cfg.get_double("theta0", spec.theta0);
    spec.mu = cfg.get_double("mu", spec.mu);
    spec.signal = cfg.get_double("signal", spec.signal);
    if (cfg.contains("s")) {
        read_size("s", spec.s);
    } else if (auto frac = cfg.get("sp")) {
        double f = parse_double(*frac, "sp");
        spec.s = static_cast<std::size_t>(std::llround(f * static_cast<double>(spec.p)));
        if (spec.s < 1) {
            spec.s = 1;
        }
    } else if (p_given && spec.s > spec.p) {
        spec.s = spec.p;
    }
    if (auto sd = cfg.get("seed")) {
        spec.seed = static_cast<std::uint64_t>(parse_int(*sd, "seed"));
    }
    return spec;
}

namespace {

/// Draws innovation vectors with covariance 0.5*I or 0.5*0.9^|i-j|.
class InnovationSource {
public:
    InnovationSource(const DGPSpec& spec, Engine& engine) : engine_(engine), p_(spec.p), z_(spec.p) {
        if (spec.spatial == Spatial::Toeplitz) {
            Eigen::MatrixXd sigma(p_, p_);
            for (std::size_t i = 0; i < p_; ++i) {
                for (std::size_t j = 0; j < p_; ++j) {
                    double lag = static_cast<double>(i > j ? i - j : j - i);
                    sigma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 0.5 * std::pow(0.9, lag);
                }
            }
            Eigen::LLT<Eigen::MatrixXd> llt(sigma);
            if (llt.info() != Eigen::Success) {
                throw Error("simulate: Toeplitz covariance is not positive definite");
            }
            chol_ = llt.matrixL();
            toeplitz_ = true;
        }
    }

    void draw(std::vector<double>& out) {
        out.resize(p_);
        for (std::size_t i = 0; i < p_; ++i) {
            z_[static_cast<Eigen::Index>(i)] = normal_(engine_);
        }
        if (toeplitz_) {
            Eigen::VectorXd e = chol_.triangularView<Eigen::Lower>() * z_;
            for (std::size_t i = 0; i < p_; ++i) {
                out[i] = e[static_cast<Eigen::Index>(i)];
            }
        } else {
            const double sd = std::sqrt(0.5);
            for (std::size_t i = 0; i < p_; ++i) {
                out[i] = sd * z_[static_cast<Eigen::Index>(i)];
            }
        }
    }

private:
    Engine& engine_;
    std::size_t p_;
    bool toeplitz_ = false;
    Eigen::MatrixXd chol_;
    Eigen::VectorXd z_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace

TimeSeriesMatrix simulate(const DGPSpec& spec) {
    spec.validate();
    Engine engine(spec.seed);
    InnovationSource source(spec, engine);

    const std::size_t n = spec.n;
    const std::size_t p = spec.p;
    TimeSeriesMatrix x(n, p);
    std::vector<double> eps(p);

    switch (spec.model) {
    case NoiseModel::Independent:
        for (std::size_t j = 0; j < n; ++j) {
            source.draw(eps);
            auto row = x.row(j);
            std::copy(eps.begin(), eps.end(), row.begin());
        }
        break;
    case NoiseModel::MovingAverage: {
        const auto q = static_cast<std::size_t>(spec.ma_order);
        // history[0] is the newest innovation.
        std::deque<std::vector<double>> history;
        for (std::size_t k = 0; k < q; ++k) {
            source.draw(eps);
            history.push_front(eps);
        }
        for (std::size_t j = 0; j < n; ++j) {
            source.draw(eps);
            history.push_front(eps);
            auto row = x.row(j);
            for (std::size_t l = 0; l < p; ++l) {
                double v = history[0][l];
                for (std::size_t k = 1; k <= q; ++k) {
                    v += kMaCoefficients[k - 1] * history[k][l];
                }
                row[l] = v;
            }
            history.pop_back();
        }
        break;
    }
    case NoiseModel::Autoregressive: {
        std::vector<double> eta(p, 0.0);
        for (std::size_t t = 0; t < kArBurnIn + n; ++t) {
            source.draw(eps);
            for (std::size_t l = 0; l < p; ++l) {
                eta[l] = spec.ar_coef * eta[l] + eps[l];
            }
            if (t >= kArBurnIn) {
                auto row = x.row(t - kArBurnIn);
                std::copy(eta.begin(), eta.end(), row.begin());
            }
        }
        break;
    }
    }

    const std::size_t k0 = spec.k0();
    const auto d = spec.delta();
    for (std::size_t j = 0; j < n; ++j) {
        auto row = x.row(j);
        for (std::size_t l = 0; l < p; ++l) {
            row[l] += spec.mu + (j >= k0 ? d[l] : 0.0);
        }
    }
    return x;
}

} // namespace relcpd
