#include "oracles.hpp"

#include "relcpd/dgp.hpp"
#include "relcpd/error.hpp"
#include "relcpd/trim.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace relcpd;

TEST_CASE("trace curve matches the literal double sum") {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(10, 30)(rng);
        const std::size_t p = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
        const auto x = oracle::random_matrix(n, p, rng);
        const std::size_t first = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
        const std::size_t len = n - first;
        const auto f = trace_curve(x, first, len, 3);
        for (long long m = 0; m <= 3; ++m) {
            const auto lit = oracle::trace(x, first, len, m);
            CHECK(std::abs(f[static_cast<std::size_t>(m)] - lit.value) <= 1e-10 * (1.0 + lit.magnitude));
        }
        CHECK(trace_stat(x, first, len, 2) == f[2]);
    }
}

TEST_CASE("trace statistic needs pairs") {
    TimeSeriesMatrix x(6, 1);
    CHECK_THROWS_AS(trace_stat(x, 0, 4, 3), DomainError);
    CHECK_THROWS_AS(trace_stat(x, 3, 4, 0), DomainError);
}

TEST_CASE("first flat lag") {
    CHECK(first_flat_lag({0.5, 0.2, 0.005, 0.3}, 0.01) == 2);
    CHECK(first_flat_lag({0.001}, 0.01) == 0);
    CHECK(first_flat_lag({0.5, -0.2}, 0.01) == 2);
    CHECK(first_flat_lag({-0.5, -0.009}, 0.01) == 1);
}

TEST_CASE("selection on simulated designs") {
    DGPSpec s;
    s.signal = 2.0;
    s.seed = 4;
    const auto ind = select_m(simulate(s), s.k0());
    CHECK(ind.cap1 == 40);
    CHECK(ind.cap2 == 26);
    CHECK(ind.m_hat == std::max(ind.m1, ind.m2));
    CHECK(ind.m_hat <= 4);

    apply_model_name(s, "MA2");
    const auto ma = select_m(simulate(s), s.k0());
    CHECK(ma.m_hat >= 2);
    CHECK(ma.delta_f1.size() == ma.cap1);
}

TEST_CASE("selection rejects short segments") {
    TimeSeriesMatrix x(10, 2);
    CHECK_THROWS_AS(select_m(x, 2, 0.01), DomainError);
    CHECK_THROWS_AS(select_m(x, 0, 0.01), DomainError);
}

TEST_CASE("delta F csv and svg") {
    DGPSpec s;
    apply_model_name(s, "MA2");
    s.seed = 9;
    const auto sel = select_m(simulate(s), s.k0());
    const auto stem = std::filesystem::temp_directory_path() / "relcpd_trim_df";
    emit_delta_f(sel, stem);
    std::vector<double> f1, f2;
    read_delta_f(stem.string() + ".csv", f1, f2);
    CHECK(f1 == sel.delta_f1);
    CHECK(f2 == sel.delta_f2);

    std::ifstream svg(stem.string() + ".svg");
    std::stringstream body;
    body << svg.rdbuf();
    CHECK(body.str().find("<svg") == 0);
    CHECK(body.str().find("polyline") != std::string::npos);
    CHECK_THROWS_AS(emit_delta_f(TrimSelection{}, stem), DomainError);
}
