#include "relcpd/limitdist.hpp"

#include "relcpd/error.hpp"
#include "relcpd/keyvalue.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

namespace relcpd {

std::string dist_name(LimitDist d) { return d == LimitDist::G ? "G" : "H"; }

LimitDist parse_dist(const std::string& name) {
    if (name == "G" || name == "g") {
        return LimitDist::G;
    }
    if (name == "H" || name == "h") {
        return LimitDist::H;
    }
    throw ParseError("unknown limiting distribution '" + name + "' (expected G or H)");
}

BrownianPath sample_brownian(const std::vector<double>& times, Engine& engine) {
    if (times.empty() || std::abs(times.back() - 1.0) > 1e-12) {
        throw DomainError("Brownian grid must be nonempty and end at 1");
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    BrownianPath path;
    path.times = times;
    path.values.resize(times.size());
    double prev_t = 0.0;
    double b = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double dt = times[i] - prev_t;
        if (!(dt > 0.0)) {
            throw DomainError("Brownian grid must be strictly increasing in (0, 1]");
        }
        b += std::sqrt(dt) * normal(engine);
        path.values[i] = b;
        prev_t = times[i];
    }
    return path;
}

std::vector<double> uniform_times(std::size_t grid_size) {
    std::vector<double> t(grid_size);
    for (std::size_t i = 1; i <= grid_size; ++i) {
        t[i - 1] = static_cast<double>(i) / static_cast<double>(grid_size);
    }
    return t;
}

namespace {

void check_grid_size(std::size_t grid_size) {
    if (grid_size < 100) {
        throw DomainError("grid_size must be at least 100");
    }
}

/// Trapezoidal integral over [0, 1] of f at the uniform grid {0, 1/N, ..., 1};
/// f(0) is supplied separately.
template <typename F>
double trapezoid(std::size_t grid_size, double f0, F&& f) {
    const double h = 1.0 / static_cast<double>(grid_size);
    double acc = 0.5 * f0;
    for (std::size_t i = 1; i < grid_size; ++i) {
        acc += f(i);
    }
    acc += 0.5 * f(grid_size);
    return acc * h;
}

struct UniformPath {
    std::vector<double> b;  // b[i] = B(i/N), b[0] = 0
};

UniformPath uniform_path(std::size_t grid_size, Engine& engine) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sd = std::sqrt(1.0 / static_cast<double>(grid_size));
    UniformPath path;
    path.b.resize(grid_size + 1);
    path.b[0] = 0.0;
    for (std::size_t i = 1; i <= grid_size; ++i) {
        path.b[i] = path.b[i - 1] + sd * normal(engine);
    }
    return path;
}

/// lambda_i^alpha on the uniform grid, memoized per thread.
const std::vector<double>& power_weights(double alpha, std::size_t grid_size) {
    thread_local double cached_alpha = -1.0;
    thread_local std::vector<double> weights;
    if (cached_alpha != alpha || weights.size() != grid_size + 1) {
        weights.resize(grid_size + 1);
        for (std::size_t i = 0; i <= grid_size; ++i) {
            weights[i] = std::pow(static_cast<double>(i) / static_cast<double>(grid_size), alpha);
        }
        cached_alpha = alpha;
    }
    return weights;
}

double w_integral(const UniformPath& path, double alpha, std::size_t grid_size) {
    const auto& w = power_weights(alpha, grid_size);
    const double b1 = path.b[grid_size];
    const double m1 = b1 * b1 - 1.0;
    return trapezoid(grid_size, 0.0, [&](std::size_t i) {
        const double lam = static_cast<double>(i) / static_cast<double>(grid_size);
        const double bi = path.b[i];
        const double r = (bi * bi - lam) - lam * lam * m1;
        return w[i] * r * r;
    });
}

} // namespace

double sample_G(std::size_t K, Engine& engine, ResampleCounter* counter) {
    if (K < 2) {
        throw DomainError("sample_G: K must be at least 2");
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sd = std::sqrt(1.0 / static_cast<double>(K));
    std::vector<double> b(K);
    while (true) {
        double acc = 0.0;
        for (std::size_t j = 0; j < K; ++j) {
            acc += sd * normal(engine);
            b[j] = acc;  // B((j+1)/K)
        }
        const double b1 = b[K - 1];
        double denom = 0.0;
        for (std::size_t j = 1; j < K; ++j) {
            const double lam = static_cast<double>(j) / static_cast<double>(K);
            const double l3 = lam * lam * lam;
            const double r = b[j - 1] - lam * b1;
            denom += l3 * l3 * r * r;
        }
        denom /= static_cast<double>(K - 1);
        if (denom > 0.0) {
            return b1 / std::sqrt(denom);
        }
        if (counter) {
            ++counter->zero_denominators;
        }
    }
}

double sample_H(std::size_t grid_size, Engine& engine, ResampleCounter* counter) {
    check_grid_size(grid_size);
    while (true) {
        const auto path = uniform_path(grid_size, engine);
        const double denom = w_integral(path, 4.0, grid_size);
        if (denom > 0.0) {
            const double b1 = path.b[grid_size];
            return (b1 * b1 - 1.0) / std::sqrt(denom);
        }
        if (counter) {
            ++counter->zero_denominators;
        }
    }
}

double sample_V_alpha(double alpha, std::size_t grid_size, Engine& engine) {
    if (!(alpha >= 0.0)) {
        throw DomainError("sample_V_alpha: alpha must be nonnegative");
    }
    check_grid_size(grid_size);
    const auto path = uniform_path(grid_size, engine);
    const auto& w = power_weights(alpha, grid_size);
    const double b1 = path.b[grid_size];
    return trapezoid(grid_size, 0.0, [&](std::size_t i) {
        const double lam = static_cast<double>(i) / static_cast<double>(grid_size);
        const double r = path.b[i] - lam * b1;
        return w[i] * r * r;
    });
}

double sample_W_alpha(double alpha, std::size_t grid_size, Engine& engine) {
    if (!(alpha >= 1.0)) {
        throw DomainError("sample_W_alpha: alpha must be at least 1");
    }
    check_grid_size(grid_size);
    const auto path = uniform_path(grid_size, engine);
    return w_integral(path, alpha, grid_size);
}

double quantile_type7(const std::vector<double>& sorted, double level) {
    if (sorted.empty()) {
        throw DomainError("quantile of an empty sample");
    }
    if (!(level >= 0.0 && level <= 1.0)) {
        throw DomainError("quantile level must lie in [0, 1]");
    }
    const double h = static_cast<double>(sorted.size() - 1) * level;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double QuantileTable::at(double level) const {
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (std::abs(levels[i] - level) <= 1e-12) {
            return quantiles[i];
        }
    }
    for (std::size_t i = 1; i < levels.size(); ++i) {
        if (levels[i - 1] < level && level < levels[i]) {
            const double w = (level - levels[i - 1]) / (levels[i] - levels[i - 1]);
            return quantiles[i - 1] + w * (quantiles[i] - quantiles[i - 1]);
        }
    }
    throw DomainError("quantile level " + format_double(level) + " is outside the table");
}

std::vector<double> default_levels() { return {0.8, 0.9, 0.95, 0.975, 0.99, 0.995}; }

std::vector<double> draw_many(LimitDist dist, std::size_t K, std::size_t reps, std::uint64_t seed,
                              std::size_t threads, std::size_t grid_size, std::size_t* zero_denominators) {
    std::vector<double> draws(reps);
    std::vector<std::size_t> zeros(reps, 0);
    const std::size_t block = 256;
    const std::size_t blocks = (reps + block - 1) / block;
    parallel_for(blocks, threads, [&](std::size_t bi) {
        const std::size_t lo = bi * block;
        const std::size_t hi = std::min(reps, lo + block);
        for (std::size_t i = lo; i < hi; ++i) {
            Engine engine(derive_seed(seed, i));
            ResampleCounter counter;
            draws[i] = dist == LimitDist::G ? sample_G(K, engine, &counter) : sample_H(grid_size, engine, &counter);
            zeros[i] = counter.zero_denominators;
        }
    });
    if (zero_denominators) {
        *zero_denominators = 0;
        for (auto z : zeros) {
            *zero_denominators += z;
        }
    }
    return draws;
}

QuantileTable quantile_table(LimitDist dist, std::size_t K, std::vector<double> levels, std::size_t reps,
                             std::uint64_t seed, std::size_t threads, std::size_t grid_size) {
    if (reps < 1000) {
        throw DomainError("quantile_table: at least 1000 replications required");
    }
    for (double lv : levels) {
        if (!(lv > 0.0 && lv < 1.0)) {
            throw DomainError("quantile levels must lie in (0, 1)");
        }
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    QuantileTable table;
    table.dist = dist;
    table.K = K;
    table.grid_size = grid_size;
    table.reps = reps;
    table.seed = seed;
    auto draws = draw_many(dist, K, reps, seed, threads, grid_size, &table.zero_denominators);
    std::sort(draws.begin(), draws.end());
    table.levels = levels;
    for (double lv : levels) {
        table.quantiles.push_back(quantile_type7(draws, lv));
    }
    return table;
}

void write_quantile_table(const QuantileTable& table, std::ostream& out) {
    out << "# dist=" << dist_name(table.dist);
    if (table.dist == LimitDist::G) {
        out << " K=" << table.K;
    } else {
        out << " grid_size=" << table.grid_size;
    }
    out << " reps=" << table.reps << " seed=" << table.seed << '\n';
    out << "level,quantile\n";
    for (std::size_t i = 0; i < table.levels.size(); ++i) {
        out << format_double(table.levels[i]) << ',' << format_double(table.quantiles[i]) << '\n';
    }
}

void write_quantile_table(const QuantileTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    write_quantile_table(table, out);
    if (!out) {
        throw Error("write failed for '" + path.string() + "'");
    }
}

QuantileTable read_quantile_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path.string() + "'");
    }
    QuantileTable table;
    std::string line;
    if (!std::getline(in, line) || !line.starts_with("#")) {
        throw ParseError("'" + path.string() + "': missing quantile table header");
    }
    for (const auto& item : split(trim(line.substr(1)), ' ')) {
        if (item.empty()) {
            continue;
        }
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw ParseError("malformed quantile table header item '" + item + "'");
        }
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        if (key == "dist") {
            table.dist = parse_dist(value);
        } else if (key == "K") {
            table.K = static_cast<std::size_t>(parse_int(value, "K"));
        } else if (key == "grid_size") {
            table.grid_size = static_cast<std::size_t>(parse_int(value, "grid_size"));
        } else if (key == "reps") {
            table.reps = static_cast<std::size_t>(parse_int(value, "reps"));
        } else if (key == "seed") {
            table.seed = static_cast<std::uint64_t>(std::stoull(value));
        }
    }
    if (!std::getline(in, line) || trim(line) != "level,quantile") {
        throw ParseError("'" + path.string() + "': expected 'level,quantile' column header");
    }
    while (std::getline(in, line)) {
        if (trim(line).empty()) {
            continue;
        }
        auto fields = split(line, ',');
        if (fields.size() != 2) {
            throw ParseError("'" + path.string() + "': quantile rows need 2 fields");
        }
        table.levels.push_back(parse_double(fields[0], "level"));
        table.quantiles.push_back(parse_double(fields[1], "quantile"));
    }
    return table;
}

TailBoundConstants tail_bound_constants(double alpha) {
    if (!(alpha >= 1.0)) {
        throw DomainError("tail bound constants require alpha >= 1");
    }
    TailBoundConstants c;
    c.c_alpha = 1.0 / (16.0 * (alpha + 3.0));
    c.d_alpha = 3.0 * std::pow(c.c_alpha / 4.0, 4.0 / 3.0);
    return c;
}

double h_tail_bound(double alpha, double t) {
    return 11.0 * std::exp(-tail_bound_constants(alpha).d_alpha * std::pow(t, 0.4));
}

double w_laplace_bound(double alpha, double t) {
    return 9.0 * std::exp(-tail_bound_constants(alpha).c_alpha * std::pow(t, 0.25));
}

double v_laplace_bound(double alpha, double t) {
    if (!(alpha >= 0.0)) {
        throw DomainError("V_alpha bound requires alpha >= 0");
    }
    return std::exp(-std::sqrt(2.0 * t) / (alpha + 2.0));
}

double v_laplace_transform(double alpha, double t) {
    if (!(alpha >= 0.0) || !(t > 0.0)) {
        throw DomainError("V_alpha transform requires alpha >= 0 and t > 0");
    }
    const double x = std::sqrt(2.0 * t) / (alpha + 2.0);
    const double order = 1.0 / (alpha + 2.0);
    const double bessel = std::tgamma((alpha + 3.0) / (alpha + 2.0)) * std::cyl_bessel_i(order, 2.0 * x);
    return std::pow(x, order / 2.0) / std::sqrt(bessel);
}

} // namespace relcpd
