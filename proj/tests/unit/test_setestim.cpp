#include "relcpd/dgp.hpp"
#include "relcpd/error.hpp"
#include "relcpd/setestim.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace relcpd;

TEST_CASE("threshold grows with p") {
    CHECK(support_threshold(100, 1.5) == doctest::Approx(std::pow(std::log(100.0), 1.5)));
    double prev = 0.0;
    for (std::size_t p = 2; p < 2000; p += 37) {
        const double t = support_threshold(p);
        CHECK(t > prev);
        prev = t;
    }
    CHECK_THROWS_AS(support_threshold(1), DomainError);
}

TEST_CASE("metrics") {
    const std::vector<std::size_t> truth{0, 1, 2, 3};
    const std::vector<std::size_t> est{2, 3, 7};
    const auto m = support_metrics(truth, est);
    CHECK(m.precision == doctest::Approx(2.0 / 3.0));
    CHECK(m.recall == doctest::Approx(0.5));
    CHECK(m.f_score == doctest::Approx(2.0 * (2.0 / 3.0) * 0.5 / (2.0 / 3.0 + 0.5)));

    const std::vector<std::size_t> none;
    CHECK(support_metrics(none, none).precision == 1.0);
    CHECK(support_metrics(truth, none).precision == 0.0);
    CHECK(support_metrics(none, est).recall == 0.0);
}

TEST_CASE("strong sparse signal is recovered") {
    DGPSpec s;
    s.p = 100;
    s.s = 10;
    s.signal = 4.0;
    s.seed = 17;
    const auto x = simulate(s);
    const auto est = estimate_S(x, s.k0(), 1);
    const std::vector<std::size_t> truth{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    const auto m = support_metrics(truth, est.s_hat);
    CHECK(m.recall == 1.0);
    CHECK(m.precision >= 0.8);
    CHECK(std::is_sorted(est.s_hat.begin(), est.s_hat.end()));
    for (std::size_t l : est.s_hat) {
        CHECK(est.delta_sq[l] > est.v_ell[l] * est.threshold);
    }
    CHECK(est.contains(0));
}

TEST_CASE("membership is monotone in kappa") {
    DGPSpec s;
    s.p = 60;
    s.s = 30;
    s.signal = 0.5;
    s.seed = 23;
    const auto x = simulate(s);
    const auto loose = estimate_S(x, s.k0(), 1, 20, 1.1);
    const auto tight = estimate_S(x, s.k0(), 1, 20, 2.5);
    for (std::size_t l : tight.s_hat) {
        CHECK(loose.contains(l));
    }
}

TEST_CASE("argument checks and csv") {
    TimeSeriesMatrix one(50, 1);
    CHECK_THROWS_AS(estimate_S(one, 25, 1), DomainError);
    TimeSeriesMatrix x(50, 3);
    CHECK_THROWS_AS(estimate_S(x, 25, 1, 20, 1.0), DomainError);

    DGPSpec s;
    s.p = 5;
    s.s = 2;
    s.signal = 3.0;
    const auto est = estimate_S(simulate(s), s.k0(), 0);
    const auto path = std::filesystem::temp_directory_path() / "relcpd_set.csv";
    write_set_csv(est, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "coordinate,delta_sq,v_ell,member");
    int rows = 0;
    for (std::string line; std::getline(in, line);) {
        ++rows;
    }
    CHECK(rows == 5);
}
