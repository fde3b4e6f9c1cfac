#include "oracles.hpp"

#include "relcpd/error.hpp"
#include "relcpd/ustat.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace relcpd;

TEST_CASE("pair counts") {
    CHECK(pair_count(5, 0) == 20);
    CHECK(pair_count(3, 3) == 0);
    CHECK(pair_count(10, 2) == 56);
    CHECK(pair_count(2, 1) == 0);
    CHECK(pair_count(0, 0) == 0);
}

TEST_CASE("lambda factor") {
    CHECK(lambda_factor(1.0, 7, 20, 1) == 1.0);
    CHECK(lambda_factor(0.0, 7, 20, 1) == 0.0);
    CHECK(lambda_factor(0.5, 10, 20, 1) == doctest::Approx(1.0 / 36.0));
    CHECK_THROWS_AS(lambda_factor(0.5, 2, 20, 1), DomainError);
    CHECK(scaled_length(0.7, 10) == 7);
}

TEST_CASE("four-point example enumerated by hand") {
    // X = (0, 1, 0, 1), k = 2, m = 0: the 16 index tuples leave two nonzero
    // products, each -1, over N_0(2)^2 = 4.
    TimeSeriesMatrix x(4, 1, std::vector<double>{0, 1, 0, 1});
    const std::vector<std::size_t> a{0};
    const std::vector<double> grid{1.0};
    CHECK(useq_naive(x, a, 2, 0, grid).t_full == doctest::Approx(-0.5));
    CHECK(useq(x, a, 2, 0, grid).t_full == doctest::Approx(-0.5));
}

TEST_CASE("noiseless step recovers d squared") {
    const std::size_t n = 30, p = 4, k = 12;
    TimeSeriesMatrix x(n, p);
    for (std::size_t j = k; j < n; ++j) {
        for (std::size_t l = 0; l < p; ++l) {
            x(j, l) = 1.5;
        }
    }
    const std::vector<double> grid{0.5, 1.0};
    for (std::size_t m : {0u, 2u}) {
        const auto t = useq(x, all_coordinates(p), k, m, grid);
        CHECK(t.t_full == doctest::Approx(2.25).epsilon(1e-12));
        CHECK(t.t_values[1] == t.t_full);
        // At lambda = 1/2 every retained pair still straddles the step.
        CHECK(t.t_values[0] == doctest::Approx(2.25 * t.lambda_values[0]));
    }
}

TEST_CASE("guard region and constant data give zeros") {
    std::mt19937_64 rng(1);
    const auto x = oracle::random_matrix(12, 2, rng);
    const std::vector<double> grid{0.5, 1.0};
    const auto t = useq(x, all_coordinates(2), 3, 2, grid);
    CHECK(t.degenerate);
    CHECK(t.t_full == 0.0);
    CHECK(split_is_degenerate(12, 3, 2));
    CHECK(split_is_degenerate(12, 9, 2));
    CHECK_FALSE(split_is_degenerate(12, 6, 2));

    TimeSeriesMatrix c(12, 3, 4.25);
    const auto tc = useq(c, all_coordinates(3), 6, 1, grid);
    CHECK(tc.t_values == std::vector<double>{0.0, 0.0});
}

TEST_CASE("argument checks") {
    TimeSeriesMatrix x(10, 2, 1.0);
    const std::vector<double> grid{1.0};
    const std::vector<std::size_t> none;
    const std::vector<std::size_t> dup{1, 1};
    CHECK_THROWS_AS(useq(x, none, 5, 0, grid), DomainError);
    CHECK_THROWS_AS(useq(x, dup, 5, 0, grid), DomainError);
    CHECK_THROWS_AS(useq(x, all_coordinates(2), 0, 0, grid), DomainError);
    CHECK_THROWS_AS(useq(x, all_coordinates(2), 10, 0, grid), DomainError);
    const std::vector<double> bad{0.5, 0.5};
    CHECK_THROWS_AS(useq(x, all_coordinates(2), 5, 0, bad), DomainError);
}

TEST_CASE("factorized evaluation matches the literal quadruple sum") {
    std::mt19937_64 rng(2024);
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(8, 24)(rng);
        const std::size_t p = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
        const std::size_t m = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
        const std::size_t k = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
        const auto x = oracle::random_matrix(n, p, rng);
        std::vector<double> grid{0.25, 0.5, 0.8, 1.0};
        const auto coords = all_coordinates(p);
        const auto fast = useq(x, coords, k, m, grid);
        const auto naive = useq_naive(x, coords, k, m, grid);
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const auto lit = oracle::quadruple(x, coords, static_cast<long long>(k), static_cast<long long>(m), grid[g]);
            CHECK(std::abs(fast.t_values[g] - lit.value) <= 1e-10 * (1.0 + lit.magnitude));
            CHECK(std::abs(naive.t_values[g] - lit.value) <= 1e-10 * (1.0 + lit.magnitude));
        }
    }
}

TEST_CASE("location invariance is exact on dyadic data") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> u(-512, 512);
    TimeSeriesMatrix x(20, 3), y(20, 3);
    for (std::size_t j = 0; j < 20; ++j) {
        for (std::size_t l = 0; l < 3; ++l) {
            x(j, l) = u(rng) / 64.0;
            y(j, l) = x(j, l) + 37.0;
        }
    }
    const std::vector<double> grid{0.3, 0.6, 1.0};
    const auto a = useq(x, all_coordinates(3), 9, 1, grid);
    const auto b = useq(y, all_coordinates(3), 9, 1, grid);
    CHECK(a.t_values == b.t_values);
}

TEST_CASE("scale equivariance and column permutation invariance") {
    std::mt19937_64 rng(10);
    const auto x = oracle::random_matrix(40, 5, rng);
    TimeSeriesMatrix cx(40, 5);
    for (std::size_t j = 0; j < 40; ++j) {
        for (std::size_t l = 0; l < 5; ++l) {
            cx(j, l) = -3.0 * x(j, l);
        }
    }
    const std::vector<double> grid{0.5, 1.0};
    const auto a = useq(x, all_coordinates(5), 17, 2, grid);
    const auto b = useq(cx, all_coordinates(5), 17, 2, grid);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        CHECK(b.t_values[g] == doctest::Approx(9.0 * a.t_values[g]).epsilon(1e-12));
    }

    const std::vector<std::size_t> perm{3, 0, 4, 2, 1};
    const auto px = x.select_columns(perm);
    const auto c = useq(px, all_coordinates(5), 17, 2, grid);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        CHECK(c.t_values[g] == doctest::Approx(a.t_values[g]).epsilon(1e-13));
    }
}

TEST_CASE("coordinate sequence is identical for any worker count") {
    std::mt19937_64 rng(3);
    const auto x = oracle::random_matrix(60, 150, rng);
    const std::vector<double> grid{0.1, 0.5, 0.9, 1.0};
    const auto one = coordinate_sequence(x, 25, 2, grid, 1);
    const auto many = coordinate_sequence(x, 25, 2, grid, 5);
    CHECK(one.values == many.values);
    CHECK(one.full == many.full);
    CHECK(one.lambda_values == many.lambda_values);

    // Lambda_n is nondecreasing and ends at 1.
    CHECK(std::is_sorted(one.lambda_values.begin(), one.lambda_values.end()));
    CHECK(one.lambda_values.back() == 1.0);
}

TEST_CASE("subset aggregation equals the statistic on the subset") {
    std::mt19937_64 rng(4);
    const auto x = oracle::random_matrix(30, 6, rng);
    const std::vector<double> grid{0.4, 1.0};
    const std::vector<std::size_t> subset{1, 4};
    const auto seq = coordinate_sequence(x, 14, 1, grid);
    const auto agg = aggregate(seq, subset);
    const auto direct = useq(x, subset, 14, 1, grid);
    CHECK(agg.norm_size == 2);
    CHECK(agg.t_full == doctest::Approx(direct.t_full).epsilon(1e-13));
    const auto lit = oracle::quadruple(x, {1, 4}, 14, 1, 1.0);
    CHECK(std::abs(agg.t_full - lit.value) <= 1e-10 * (1.0 + lit.magnitude));
}
