#include "relcpd/dgp.hpp"
#include "relcpd/error.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace relcpd;

namespace {

double lag_corr(const TimeSeriesMatrix& x, std::size_t first, std::size_t last, std::size_t lag) {
    double num = 0.0, den = 0.0;
    for (std::size_t l = 0; l < x.p(); ++l) {
        double mean = 0.0;
        for (std::size_t j = first; j < last; ++j) {
            mean += x(j, l);
        }
        mean /= static_cast<double>(last - first);
        for (std::size_t j = first; j < last; ++j) {
            den += (x(j, l) - mean) * (x(j, l) - mean);
            if (j + lag < last) {
                num += (x(j, l) - mean) * (x(j + lag, l) - mean);
            }
        }
    }
    return num / den;
}

} // namespace

TEST_CASE("model names") {
    DGPSpec s;
    apply_model_name(s, "MA(4)");
    CHECK(s.model == NoiseModel::MovingAverage);
    CHECK(s.ma_order == 4);
    CHECK(s.spatial == Spatial::Toeplitz);
    CHECK(model_name(s) == "MA4");

    apply_model_name(s, "AR*0.5");
    CHECK(s.model == NoiseModel::Autoregressive);
    CHECK(s.ar_coef == 0.5);
    CHECK(s.spatial == Spatial::Diagonal);

    apply_model_name(s, "IND");
    CHECK(s.model == NoiseModel::Independent);
    CHECK(s.spatial == Spatial::Diagonal);
    CHECK_THROWS_AS(apply_model_name(s, "GARCH"), ParseError);
}

TEST_CASE("validation") {
    DGPSpec s;
    CHECK_NOTHROW(s.validate());
    s.n = 3;
    CHECK_THROWS_AS(s.validate(), DomainError);
    s = {};
    s.s = 0;
    CHECK_THROWS_AS(s.validate(), DomainError);
    s = {};
    s.theta0 = 1.0;
    CHECK_THROWS_AS(s.validate(), DomainError);
    s = {};
    apply_model_name(s, "AR1.0");
    CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("shift vector and norms") {
    DGPSpec s;
    s.p = 10;
    s.s = 4;
    s.signal = 2.25;
    const auto d = s.delta();
    CHECK(d[0] == doctest::Approx(1.5));
    CHECK(d[3] == doctest::Approx(1.5));
    CHECK(d[4] == 0.0);
    CHECK(s.normalized_sq_norm() == doctest::Approx(0.9));
    CHECK(s.k0() == 120);
}

TEST_CASE("config round trip with fractional support") {
    DGPSpec s;
    apply_model_name(s, "MA2");
    s.p = 40;
    s.s = 7;
    s.signal = 1.5;
    s.seed = 99;
    const auto back = dgp_from_config(to_config(s));
    CHECK(model_name(back) == "MA2");
    CHECK(back.p == 40);
    CHECK(back.s == 7);
    CHECK(back.signal == 1.5);
    CHECK(back.seed == 99);

    auto cfg = KeyValueConfig::parse("p=200\nsp=0.25\n");
    CHECK(dgp_from_config(cfg).s == 50);
}

TEST_CASE("simulation is a pure function of the spec") {
    DGPSpec s;
    s.n = 50;
    s.p = 8;
    s.s = 8;
    s.signal = 1.0;
    s.seed = 5;
    CHECK(simulate(s) == simulate(s));
    auto t = s;
    t.seed = 6;
    CHECK_FALSE(simulate(s) == simulate(t));
}

TEST_CASE("innovation moments and mean shift") {
    DGPSpec s;
    s.n = 2000;
    s.p = 20;
    s.s = 10;
    s.signal = 4.0;
    s.theta0 = 0.5;
    s.seed = 3;
    const auto x = simulate(s);
    double before = 0.0, after = 0.0, before_null = 0.0, after_null = 0.0;
    for (std::size_t j = 0; j < 1000; ++j) {
        before += x(j, 0);
        before_null += x(j, 15);
    }
    for (std::size_t j = 1000; j < 2000; ++j) {
        after += x(j, 0);
        after_null += x(j, 15);
    }
    CHECK((after - before) / 1000.0 == doctest::Approx(2.0).epsilon(0.05));
    CHECK(std::abs(after_null - before_null) / 1000.0 < 0.15);
    CHECK(before / 1000.0 == doctest::Approx(10.0).epsilon(0.01));

    double var = 0.0;
    for (std::size_t j = 0; j < 1000; ++j) {
        var += (x(j, 15) - before_null / 1000.0) * (x(j, 15) - before_null / 1000.0);
    }
    CHECK(var / 999.0 == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("serial dependence of MA and AR noise") {
    DGPSpec s;
    s.n = 4000;
    s.p = 5;
    s.s = 5;
    s.seed = 11;
    apply_model_name(s, "AR*0.6");
    CHECK(lag_corr(simulate(s), 0, s.n, 1) == doctest::Approx(0.6).epsilon(0.08));

    apply_model_name(s, "MA*1");
    // eta_j = e_j + 0.5 e_{j-1}: lag-1 correlation 0.5 / 1.25, lag 2 zero.
    const auto x = simulate(s);
    CHECK(lag_corr(x, 0, s.n, 1) == doctest::Approx(0.4).epsilon(0.1));
    CHECK(std::abs(lag_corr(x, 0, s.n, 2)) < 0.05);
}

TEST_CASE("toeplitz innovations are cross-correlated") {
    DGPSpec s;
    s.n = 3000;
    s.p = 6;
    s.s = 6;
    s.seed = 2;
    apply_model_name(s, "MA1");
    s.ma_order = 1;
    const auto x = simulate(s);
    double c01 = 0.0, v0 = 0.0, v1 = 0.0;
    double m0 = 0.0, m1 = 0.0;
    for (std::size_t j = 0; j < s.n; ++j) {
        m0 += x(j, 0) / s.n;
        m1 += x(j, 1) / s.n;
    }
    for (std::size_t j = 0; j < s.n; ++j) {
        c01 += (x(j, 0) - m0) * (x(j, 1) - m1);
        v0 += (x(j, 0) - m0) * (x(j, 0) - m0);
        v1 += (x(j, 1) - m1) * (x(j, 1) - m1);
    }
    CHECK(c01 / std::sqrt(v0 * v1) == doctest::Approx(0.9).epsilon(0.05));
}
