#include "relcpd/relevance.hpp"

#include "relcpd/cpoint.hpp"
#include "relcpd/error.hpp"
#include "relcpd/keyvalue.hpp"
#include "relcpd/selfnorm.hpp"
#include "relcpd/setestim.hpp"
#include "relcpd/trim.hpp"
#include "relcpd/ustat.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

namespace relcpd {

std::string norm_name(NormKind kind) {
    return kind == NormKind::NormalizedL2 ? "normalized_l2" : "sparsity_adjusted";
}

NormKind parse_norm(const std::string& name) {
    if (name == "normalized_l2" || name == "dense") {
        return NormKind::NormalizedL2;
    }
    if (name == "sparsity_adjusted" || name == "sparse") {
        return NormKind::SparsityAdjusted;
    }
    throw ParseError("unknown norm '" + name + "' (expected normalized_l2 or sparsity_adjusted)");
}

void TestConfig::validate() const {
    if (!(delta >= 0.0)) {
        throw DomainError("delta must be nonnegative");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("alpha must lie in (0, 1)");
    }
    if (K < 2 || set_K < 2) {
        throw DomainError("K must be at least 2");
    }
    if (!(kappa > 1.0)) {
        throw DomainError("kappa must exceed 1");
    }
    if (!(cutoff >= 0.0)) {
        throw DomainError("cutoff must be nonnegative");
    }
    if (quantiles.table.empty() && quantiles.reps < 1000) {
        throw DomainError("quantile simulation needs at least 1000 replications");
    }
}

namespace {

using DrawKey = std::tuple<std::size_t, std::size_t, std::uint64_t>;

std::shared_ptr<const std::vector<double>> sorted_G_draws(std::size_t K, std::size_t reps, std::uint64_t seed,
                                                          std::size_t threads) {
    static std::mutex mutex;
    static std::map<DrawKey, std::shared_ptr<const std::vector<double>>> cache;
    std::lock_guard lock(mutex);
    const DrawKey key{K, reps, seed};
    if (auto it = cache.find(key); it != cache.end()) {
        return it->second;
    }
    auto draws = draw_many(LimitDist::G, K, reps, seed, threads);
    std::sort(draws.begin(), draws.end());
    auto shared = std::make_shared<const std::vector<double>>(std::move(draws));
    cache.emplace(key, shared);
    return shared;
}

bool has_level(const QuantileTable& table, double level) {
    return std::any_of(table.levels.begin(), table.levels.end(),
                       [&](double l) { return std::abs(l - level) <= 1e-12; });
}

GQuantiles from_disk_cache(const TestConfig& config) {
    const auto& src = config.quantiles;
    const double lo = 1.0 - config.alpha;
    const double hi = 1.0 - config.alpha / 2.0;
    std::filesystem::create_directories(src.cache_dir);
    const auto path = src.cache_dir / ("G_K" + std::to_string(config.K) + "_reps" + std::to_string(src.reps) +
                                       "_seed" + std::to_string(src.seed) + ".csv");
    std::vector<double> levels = default_levels();
    if (std::filesystem::exists(path)) {
        auto table = read_quantile_table(path);
        if (has_level(table, lo) && has_level(table, hi)) {
            return {table.at(lo), table.at(hi)};
        }
        levels.insert(levels.end(), table.levels.begin(), table.levels.end());
    }
    levels.push_back(lo);
    levels.push_back(hi);
    const auto sorted = sorted_G_draws(config.K, src.reps, src.seed, config.threads);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end(),
                             [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
                 levels.end());
    QuantileTable table;
    table.dist = LimitDist::G;
    table.K = config.K;
    table.reps = src.reps;
    table.seed = src.seed;
    table.levels = levels;
    for (double lv : levels) {
        table.quantiles.push_back(quantile_type7(*sorted, lv));
    }
    write_quantile_table(table, path);
    return {table.at(lo), table.at(hi)};
}

} // namespace

GQuantiles resolve_quantiles(const TestConfig& config) {
    const auto& src = config.quantiles;
    const double lo = 1.0 - config.alpha;
    const double hi = 1.0 - config.alpha / 2.0;
    if (!src.table.empty()) {
        const auto table = read_quantile_table(src.table);
        if (table.dist != LimitDist::G) {
            throw DataError("quantile table '" + src.table.string() + "' does not describe G");
        }
        if (table.K != config.K) {
            throw DataError("quantile table '" + src.table.string() + "' was built for K=" +
                            std::to_string(table.K) + ", test uses K=" + std::to_string(config.K));
        }
        return {table.at(lo), table.at(hi)};
    }
    if (!src.cache_dir.empty()) {
        return from_disk_cache(config);
    }
    const auto sorted = sorted_G_draws(config.K, src.reps, src.seed, config.threads);
    return {quantile_type7(*sorted, lo), quantile_type7(*sorted, hi)};
}

void apply_decision(TestResult& r) {
    r.reject = !r.degenerate && r.T > r.delta + r.q * r.V;
    r.delta_alpha = r.degenerate ? 0.0 : std::max(r.T - r.q * r.V, 0.0);
    r.ci_upper = r.T + r.q * r.V;
    r.ci_lower_two = std::max(0.0, r.T - r.q_two * r.V);
    r.ci_upper_two = r.T + r.q_two * r.V;
    if (r.degenerate) {
        r.ci_upper = r.ci_lower_two = r.ci_upper_two = 0.0;
    }
}

namespace {

/// Change point and trimming; returns false (with a warning) when no
/// admissible statistic exists.
bool locate(const TimeSeriesMatrix& x, const TestConfig& config, TestResult& r) {
    config.validate();
    if (!x.all_finite()) {
        throw DataError("input contains missing or non-finite values; preprocess it first");
    }
    r.n = x.n();
    r.p = x.p();
    if (r.n < 4) {
        throw DomainError("at least 4 observations are required, got " + std::to_string(r.n));
    }
    const auto q = resolve_quantiles(config);
    r.q = q.q;
    r.q_two = q.q_two;

    const auto fit = estimate_cp(x);
    r.k_hat = fit.k_hat;
    r.theta_hat = fit.theta_hat;
    if (config.m) {
        r.m_manual = true;
        r.m1 = r.m2 = r.m_hat = *config.m;
    } else if (r.k_hat / 3 < 1 || (r.n - r.k_hat) / 3 < 1) {
        r.degenerate = true;
        r.warnings.push_back("degenerate split: k_hat=" + std::to_string(r.k_hat) + " leaves a segment shorter than 3 rows; no trimming choice possible");
        return false;
    } else {
        const auto sel = select_m(x, r.k_hat, config.cutoff);
        r.m1 = sel.m1;
        r.m2 = sel.m2;
        r.m_hat = sel.m_hat;
    }
    if (split_is_degenerate(r.n, r.k_hat, r.m_hat)) {
        r.degenerate = true;
        r.warnings.push_back("degenerate split: k_hat=" + std::to_string(r.k_hat) + ", m=" + std::to_string(r.m_hat) +
                             ", n=" + std::to_string(r.n) + " violates k > m+1 and k+m < n-1; statistic is 0 by definition");
        return false;
    }
    return true;
}

TestResult base_result(const TestConfig& config) {
    TestResult r;
    r.norm = config.norm;
    r.delta = config.delta;
    r.alpha = config.alpha;
    r.K = config.K;
    return r;
}

} // namespace

TestResult test_dense(const TimeSeriesMatrix& x, const TestConfig& config) {
    auto r = base_result(config);
    r.norm = NormKind::NormalizedL2;
    r.norm_size = x.p();
    if (locate(x, config, r)) {
        const NuMeasure nu(config.K);
        const auto grid = nu.grid_with_one();
        const auto seq = coordinate_sequence(x, r.k_hat, r.m_hat, grid, config.threads);
        const auto coords = all_coordinates(x.p());
        const auto agg = aggregate(seq, coords);
        r.T = agg.t_full;
        r.V = v_statistic(agg, nu);
    }
    apply_decision(r);
    return r;
}

TestResult test_sparse(const TimeSeriesMatrix& x, const TestConfig& config) {
    if (x.p() < 2) {
        throw DomainError("the sparsity-adjusted test needs p >= 2");
    }
    auto r = base_result(config);
    r.norm = NormKind::SparsityAdjusted;
    if (locate(x, config, r)) {
        const NuMeasure nu(config.K);
        const NuMeasure set_nu(config.set_K);
        const std::vector<std::vector<double>> grids{nu.grid_with_one(), set_nu.grid_with_one()};
        const auto grid = merge_grids(grids);
        const auto seq = coordinate_sequence(x, r.k_hat, r.m_hat, grid, config.threads);
        const auto set = estimate_set(seq, set_nu, config.kappa);
        r.S_hat = set.s_hat;
        r.norm_size = set.s_hat.size();
        if (set.s_hat.empty()) {
            r.warnings.push_back("empty support estimate: no coordinate passes the threshold; not rejecting");
        } else {
            const auto agg = aggregate(seq, set.s_hat);
            r.T = agg.t_full;
            r.V = v_statistic(agg, nu);
        }
    }
    apply_decision(r);
    return r;
}

TestResult run_test(const TimeSeriesMatrix& x, const TestConfig& config) {
    return config.norm == NormKind::NormalizedL2 ? test_dense(x, config) : test_sparse(x, config);
}

TestResult report_sqrt_scale(const TestResult& result) {
    if (result.sqrt_scale) {
        return result;
    }
    TestResult r = result;
    r.delta_alpha = std::sqrt(result.delta_alpha);
    r.ci_upper = std::sqrt(result.ci_upper);
    r.ci_lower_two = std::sqrt(result.ci_lower_two);
    r.ci_upper_two = std::sqrt(result.ci_upper_two);
    r.sqrt_scale = true;
    return r;
}

namespace {

std::string support_list(const std::vector<std::size_t>& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += (i ? ";" : "") + std::to_string(s[i] + 1);
    }
    return out;
}

} // namespace

std::string to_key_value(const TestResult& r) {
    std::ostringstream os;
    os << "norm=" << norm_name(r.norm) << '\n'
       << "delta=" << format_double(r.delta) << '\n'
       << "alpha=" << format_double(r.alpha) << '\n'
       << "K=" << r.K << '\n'
       << "n=" << r.n << '\n'
       << "p=" << r.p << '\n'
       << "k_hat=" << r.k_hat << '\n'
       << "theta_hat=" << format_double(r.theta_hat) << '\n'
       << "m1=" << r.m1 << '\n'
       << "m2=" << r.m2 << '\n'
       << "m_hat=" << r.m_hat << '\n'
       << "m_manual=" << (r.m_manual ? "true" : "false") << '\n';
    if (r.norm == NormKind::SparsityAdjusted) {
        os << "S_hat_size=" << r.S_hat.size() << '\n' << "S_hat=" << support_list(r.S_hat) << '\n';
    }
    os << "norm_size=" << r.norm_size << '\n'
       << "T=" << format_double(r.T) << '\n'
       << "V=" << format_double(r.V) << '\n'
       << "q=" << format_double(r.q) << '\n'
       << "q_two_sided=" << format_double(r.q_two) << '\n'
       << "reject=" << (r.reject ? "true" : "false") << '\n'
       << "sqrt_scale=" << (r.sqrt_scale ? "true" : "false") << '\n'
       << "delta_alpha=" << format_double(r.delta_alpha) << '\n'
       << "ci_one_sided=[0," << format_double(r.ci_upper) << "]\n"
       << "ci_two_sided=[" << format_double(r.ci_lower_two) << ',' << format_double(r.ci_upper_two) << "]\n"
       << "degenerate=" << (r.degenerate ? "true" : "false") << '\n';
    for (const auto& w : r.warnings) {
        os << "warning=" << w << '\n';
    }
    return os.str();
}

std::string csv_header() {
    return "norm,delta,alpha,K,n,p,k_hat,theta_hat,m1,m2,m_hat,norm_size,T,V,q,q_two_sided,reject,sqrt_scale,"
           "delta_alpha,ci_upper,ci_two_lower,ci_two_upper,degenerate,S_hat";
}

std::string to_csv_row(const TestResult& r) {
    std::ostringstream os;
    os << norm_name(r.norm) << ',' << format_double(r.delta) << ',' << format_double(r.alpha) << ',' << r.K << ','
       << r.n << ',' << r.p << ',' << r.k_hat << ',' << format_double(r.theta_hat) << ',' << r.m1 << ',' << r.m2
       << ',' << r.m_hat << ',' << r.norm_size << ',' << format_double(r.T) << ',' << format_double(r.V) << ','
       << format_double(r.q) << ',' << format_double(r.q_two) << ',' << (r.reject ? 1 : 0) << ','
       << (r.sqrt_scale ? 1 : 0) << ',' << format_double(r.delta_alpha) << ',' << format_double(r.ci_upper) << ','
       << format_double(r.ci_lower_two) << ',' << format_double(r.ci_upper_two) << ',' << (r.degenerate ? 1 : 0)
       << ',' << support_list(r.S_hat);
    return os.str();
}

} // namespace relcpd
