#include "relcpd/dgp.hpp"
#include "relcpd/error.hpp"
#include "relcpd/relevance.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

using namespace relcpd;

namespace {

TimeSeriesMatrix step(std::size_t n, std::size_t p, std::size_t k, double d, double noise, std::uint64_t seed,
                      std::size_t active = 0) {
    Engine e(seed);
    std::normal_distribution<double> z;
    TimeSeriesMatrix x(n, p);
    if (active == 0) {
        active = p;
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t l = 0; l < p; ++l) {
            x(j, l) = noise * z(e) + (j >= k && l < active ? d : 0.0);
        }
    }
    return x;
}

TestConfig config(double delta) {
    TestConfig c;
    c.delta = delta;
    c.quantiles.reps = 20000;
    return c;
}

} // namespace

TEST_CASE("norm names") {
    CHECK(parse_norm("dense") == NormKind::NormalizedL2);
    CHECK(parse_norm("sparsity_adjusted") == NormKind::SparsityAdjusted);
    CHECK_THROWS_AS(parse_norm("l1"), ParseError);
}

TEST_CASE("config validation") {
    TestConfig c;
    c.delta = -1.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = {};
    c.alpha = 1.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = {};
    c.K = 1;
    CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("decision arithmetic") {
    TestResult r;
    r.T = 3.0;
    r.V = 0.1;
    r.q = 5.0;
    r.q_two = 6.0;
    r.delta = 2.0;
    apply_decision(r);
    CHECK(r.reject);
    CHECK(r.delta_alpha == doctest::Approx(2.5));
    CHECK(r.ci_upper == doctest::Approx(3.5));
    CHECK(r.ci_lower_two == doctest::Approx(2.4));
    CHECK(r.ci_upper_two == doctest::Approx(3.6));
    r.delta = 2.5;
    apply_decision(r);
    CHECK_FALSE(r.reject);

    r.T = 0.1;
    apply_decision(r);
    CHECK(r.delta_alpha == 0.0);
    CHECK(r.ci_lower_two == 0.0);
}

TEST_CASE("square-root scale") {
    TestResult r;
    r.delta_alpha = 4.0;
    r.ci_upper = 9.0;
    r.ci_lower_two = 1.0;
    r.ci_upper_two = 4.0;
    const auto s = report_sqrt_scale(r);
    CHECK(s.delta_alpha == 2.0);
    CHECK(s.ci_upper == 3.0);
    CHECK(s.ci_lower_two == 1.0);
    CHECK(s.ci_upper_two == 2.0);
    CHECK(s.sqrt_scale);
    CHECK(report_sqrt_scale(s).delta_alpha == 2.0);
}

TEST_CASE("clear dense step rejects small thresholds only") {
    const auto x = step(200, 50, 120, 1.0, 0.05, 1);
    auto r = test_dense(x, config(0.5));
    CHECK(r.k_hat == 120);
    CHECK(r.reject);
    CHECK(r.T == doctest::Approx(1.0).epsilon(0.02));
    CHECK(r.delta_alpha == doctest::Approx(r.T - r.q * r.V));
    CHECK(r.norm_size == 50);
    CHECK_FALSE(r.degenerate);

    CHECK_FALSE(test_dense(x, config(1e9)).reject);
}

TEST_CASE("rejection is monotone in the threshold and dual to delta_alpha") {
    DGPSpec s;
    s.signal = 2.1;
    s.seed = 31;
    const auto x = simulate(s);
    const auto base = test_dense(x, config(0.0));
    bool previous = true;
    for (double delta = 0.0; delta <= 3.0; delta += 0.05) {
        const auto r = test_dense(x, config(delta));
        CHECK(r.reject == (delta < base.delta_alpha));
        if (!previous) {
            CHECK_FALSE(r.reject);
        }
        previous = r.reject;
    }
}

TEST_CASE("scaling data and threshold together keeps the decision") {
    DGPSpec s;
    s.signal = 2.05;
    s.seed = 32;
    auto x = simulate(s);
    auto cfg = config(2.0);
    cfg.m = 1;
    const auto r1 = test_dense(x, cfg);
    const double c = 1.7;
    TimeSeriesMatrix y(x.n(), x.p());
    for (std::size_t j = 0; j < x.n(); ++j) {
        for (std::size_t l = 0; l < x.p(); ++l) {
            y(j, l) = c * x(j, l);
        }
    }
    cfg.delta = c * c * 2.0;
    const auto r2 = test_dense(y, cfg);
    CHECK(r1.reject == r2.reject);
    CHECK(r2.T == doctest::Approx(c * c * r1.T).epsilon(1e-12));
    CHECK(r2.V == doctest::Approx(c * c * r1.V).epsilon(1e-12));
}

TEST_CASE("sparse test concentrates on the active coordinates") {
    const auto x = step(200, 100, 120, 1.2, 0.7, 7, 5);
    auto cfg = config(0.3);
    cfg.norm = NormKind::SparsityAdjusted;
    const auto sparse = test_sparse(x, cfg);
    CHECK(sparse.S_hat.size() >= 5);
    CHECK(sparse.norm_size == sparse.S_hat.size());
    CHECK(sparse.reject);
    // The dense norm of this shift is 5 * 1.44 / 100.
    CHECK_FALSE(test_dense(x, config(0.3)).reject);
}

TEST_CASE("empty support estimate does not reject") {
    const auto x = step(200, 20, 120, 0.0, 1.0, 8);
    auto cfg = config(0.0);
    cfg.norm = NormKind::SparsityAdjusted;
    cfg.kappa = 6.0;
    const auto r = test_sparse(x, cfg);
    CHECK(r.S_hat.empty());
    CHECK_FALSE(r.reject);
    CHECK(r.delta_alpha == 0.0);
    CHECK_FALSE(r.warnings.empty());
    TimeSeriesMatrix one(50, 1);
    CHECK_THROWS_AS(test_sparse(one, cfg), DomainError);
}

TEST_CASE("guard region yields a structured degenerate result") {
    const auto x = step(40, 3, 20, 1.0, 0.1, 9);
    auto cfg = config(0.1);
    cfg.m = 25;
    const auto r = test_dense(x, cfg);
    CHECK(r.degenerate);
    CHECK_FALSE(r.reject);
    CHECK(r.T == 0.0);
    REQUIRE_FALSE(r.warnings.empty());
    CHECK(r.warnings.front().find("degenerate split") != std::string::npos);
}

TEST_CASE("missing values must be preprocessed") {
    auto x = step(40, 3, 20, 1.0, 0.1, 10);
    x(3, 1) = TimeSeriesMatrix::missing();
    CHECK_THROWS_AS(test_dense(x, config(0.1)), DataError);
}

TEST_CASE("quantile sources agree") {
    auto cfg = config(0.0);
    cfg.quantiles.reps = 5000;
    cfg.quantiles.seed = 4;
    const auto mem = resolve_quantiles(cfg);

    const auto dir = std::filesystem::temp_directory_path() / "relcpd_qcache";
    std::filesystem::remove_all(dir);
    cfg.quantiles.cache_dir = dir;
    const auto disk1 = resolve_quantiles(cfg);
    const auto disk2 = resolve_quantiles(cfg);
    CHECK(disk1.q == mem.q);
    CHECK(disk2.q_two == mem.q_two);

    const auto table = quantile_table(LimitDist::G, 20, {0.95, 0.975}, 5000, 4);
    const auto path = dir / "explicit.csv";
    write_quantile_table(table, path);
    TestConfig from_file = config(0.0);
    from_file.quantiles.table = path;
    const auto f = resolve_quantiles(from_file);
    CHECK(f.q == mem.q);
    from_file.K = 10;
    CHECK_THROWS_AS(resolve_quantiles(from_file), DataError);
}

TEST_CASE("report formats") {
    const auto x = step(120, 10, 60, 1.0, 0.2, 11);
    const auto r = test_dense(x, config(0.5));
    const auto kv = to_key_value(r);
    CHECK(kv.find("reject=true") != std::string::npos);
    CHECK(kv.find("k_hat=60") != std::string::npos);
    const auto header = csv_header();
    const auto row = to_csv_row(r);
    CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));
}
