#include "relcpd/error.hpp"
#include "relcpd/limitdist.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

using namespace relcpd;

namespace {

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

double se_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) {
        ss += (x - m) * (x - m);
    }
    return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

} // namespace

TEST_CASE("type-7 quantiles") {
    const std::vector<double> s{1, 2, 3, 4};
    CHECK(quantile_type7(s, 0.0) == 1.0);
    CHECK(quantile_type7(s, 1.0) == 4.0);
    CHECK(quantile_type7(s, 0.5) == 2.5);
    CHECK(quantile_type7(s, 0.25) == doctest::Approx(1.75));
    CHECK_THROWS_AS(quantile_type7({}, 0.5), DomainError);
}

TEST_CASE("brownian increments have the right variance") {
    Engine e(3);
    const std::vector<double> t{0.25, 1.0};
    double s1 = 0.0, s2 = 0.0;
    const int reps = 20000;
    for (int i = 0; i < reps; ++i) {
        const auto b = sample_brownian(t, e);
        s1 += b.values[0] * b.values[0];
        s2 += (b.values[1] - b.values[0]) * (b.values[1] - b.values[0]);
    }
    CHECK(s1 / reps == doctest::Approx(0.25).epsilon(0.05));
    CHECK(s2 / reps == doctest::Approx(0.75).epsilon(0.05));
    const std::vector<double> bad{0.5};
    CHECK_THROWS_AS(sample_brownian(bad, e), DomainError);
}

TEST_CASE("G is symmetric about zero") {
    auto d = draw_many(LimitDist::G, 20, 100000, 5);
    std::sort(d.begin(), d.end());
    CHECK(std::abs(quantile_type7(d, 0.5)) <= 0.3);
    const double q90 = quantile_type7(d, 0.9);
    const double q10 = quantile_type7(d, 0.1);
    CHECK(std::abs(q90 + q10) < 0.05 * q90);
}

TEST_CASE("quantile table is independent of the worker count") {
    const auto a = quantile_table(LimitDist::G, 10, default_levels(), 5000, 77, 1);
    const auto b = quantile_table(LimitDist::G, 10, default_levels(), 5000, 77, 4);
    CHECK(a.quantiles == b.quantiles);
    CHECK(a.zero_denominators == 0);
    CHECK_THROWS_AS(quantile_table(LimitDist::G, 10, default_levels(), 999, 1), DomainError);
}

TEST_CASE("table csv round trip and interpolation") {
    auto t = quantile_table(LimitDist::G, 15, {0.9, 0.95}, 2000, 3);
    const auto path = std::filesystem::temp_directory_path() / "relcpd_qtable.csv";
    write_quantile_table(t, path);
    const auto r = read_quantile_table(path);
    CHECK(r.dist == LimitDist::G);
    CHECK(r.K == 15);
    CHECK(r.reps == 2000);
    CHECK(r.seed == 3);
    CHECK(r.quantiles == t.quantiles);
    CHECK(r.at(0.925) == doctest::Approx(0.5 * (t.quantiles[0] + t.quantiles[1])));
    CHECK_THROWS_AS(r.at(0.5), DomainError);
}

TEST_CASE("numerator of H is centered") {
    // B(1)^2 - 1 is a centered chi-square; its MC mean sits within 3 SE of 0.
    Engine e(8);
    std::vector<double> num(100000);
    for (auto& v : num) {
        std::normal_distribution<double> z;
        const double b = z(e);
        v = b * b - 1.0;
    }
    CHECK(std::abs(mean_of(num)) <= 3.0 * se_of(num));
}

TEST_CASE("H quantile is stable under grid refinement") {
    auto coarse = draw_many(LimitDist::H, 0, 100000, 12, 1, 500);
    auto fine = draw_many(LimitDist::H, 0, 100000, 12, 1, 1000);
    std::sort(coarse.begin(), coarse.end());
    std::sort(fine.begin(), fine.end());
    const double a = quantile_type7(coarse, 0.95);
    const double b = quantile_type7(fine, 0.95);
    CHECK(std::abs(a - b) / std::abs(b) < 0.02);
}

TEST_CASE("V_0 has mean 1/6") {
    Engine e(4);
    std::vector<double> v(20000);
    for (auto& x : v) {
        x = sample_V_alpha(0.0, 1000, e);
    }
    CHECK(std::abs(mean_of(v) - 1.0 / 6.0) <= 3.0 * se_of(v));
}

TEST_CASE("Laplace transforms respect the closed-form bounds") {
    Engine e(6);
    for (double alpha : {1.0, 4.0}) {
        std::vector<double> w(5000);
        for (auto& x : w) {
            x = sample_W_alpha(alpha, 1000, e);
        }
        for (double t : {1e2, 1e4, 1e6}) {
            double lt = 0.0;
            for (double x : w) {
                lt += std::exp(-t * x);
            }
            CHECK(lt / w.size() <= w_laplace_bound(alpha, t));
        }
    }
    for (double alpha : {0.0, 6.0}) {
        std::vector<double> v(5000);
        for (auto& x : v) {
            x = sample_V_alpha(alpha, 1000, e);
        }
        for (double t : {1.0, 10.0, 100.0}) {
            std::vector<double> lt(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) {
                lt[i] = std::exp(-t * v[i]);
            }
            const double exact = v_laplace_transform(alpha, t);
            CHECK(std::abs(mean_of(lt) - exact) <= 4.0 * se_of(lt) + 1e-3 * exact);
            // The closed-form bound sits below the true transform.
            CHECK(exact > v_laplace_bound(alpha, t));
        }
    }
}

TEST_CASE("tail bound constants") {
    const auto c1 = tail_bound_constants(1.0);
    CHECK(c1.c_alpha == doctest::Approx(1.0 / 64.0));
    CHECK(c1.d_alpha == doctest::Approx(3.0 * std::pow(1.0 / 256.0, 4.0 / 3.0)));
    CHECK(tail_bound_constants(4.0).c_alpha == doctest::Approx(1.0 / 112.0));
    double prev = 1.0;
    for (double a = 1.0; a < 20.0; a += 0.5) {
        const double c = tail_bound_constants(a).c_alpha;
        CHECK(c < prev);
        prev = c;
    }
    CHECK_THROWS_AS(tail_bound_constants(0.5), DomainError);
}

TEST_CASE("sampler argument checks") {
    Engine e(1);
    CHECK_THROWS_AS(sample_G(1, e), DomainError);
    CHECK_THROWS_AS(sample_H(50, e), DomainError);
    CHECK_THROWS_AS(sample_W_alpha(0.5, 1000, e), DomainError);
    CHECK_THROWS_AS(parse_dist("Z"), ParseError);
}

TEST_CASE("no zero self-normalizers in a million G draws") {
    std::size_t zeros = 99;
    draw_many(LimitDist::G, 20, 1000000, 2, 1, kDefaultGridSize, &zeros);
    CHECK(zeros == 0);
}
