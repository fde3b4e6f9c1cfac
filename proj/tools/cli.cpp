#include "cli.hpp"

#include "relcpd/cpoint.hpp"
#include "relcpd/dgp.hpp"
#include "relcpd/error.hpp"
#include "relcpd/experiments.hpp"
#include "relcpd/keyvalue.hpp"
#include "relcpd/limitdist.hpp"
#include "relcpd/parallel.hpp"
#include "relcpd/relevance.hpp"
#include "relcpd/setestim.hpp"
#include "relcpd/trim.hpp"
#include "relcpd/tsdata.hpp"
#include "relcpd/version.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <set>

namespace relcpd::cli {

namespace {

/// Bad invocation discovered after CLI11 parsing (config file contents,
/// missing required values).
class UsageError : public Error {
public:
    using Error::Error;
};

const std::set<std::string> kConfigKeys{
    "delta", "alpha", "K", "m", "norm", "reps", "seed", "interpolate_missing", "zero_negatives", "header",
    "cutoff", "kappa", "set_K", "quantile_table", "quantile_cache", "threads", "format", "strict",
    "model", "spatial", "n", "p", "s", "sp", "signal", "theta0", "mu", "dist", "levels", "grid_size", "k_hat"};

struct Globals {
    std::size_t threads = 0;
    std::optional<std::uint64_t> seed;
    std::string config_path;
    std::string format = "text";
    bool strict = false;
    KeyValueConfig config;
};

/// Value of a setting: command-line flag, else config key, else fallback.
class Settings {
public:
    Settings(const KeyValueConfig& cfg) : cfg_(cfg) {}

    template <typename T>
    T pick(const CLI::Option* opt, const T& flag_value, const std::string& key, const T& fallback) const {
        if (opt && opt->count() > 0) {
            return flag_value;
        }
        if (auto v = cfg_.get(key)) {
            return from_text<T>(*v, key);
        }
        return fallback;
    }

    bool has(const CLI::Option* opt, const std::string& key) const {
        return (opt && opt->count() > 0) || cfg_.contains(key);
    }

private:
    template <typename T>
    static T from_text(const std::string& text, const std::string& key) {
        if constexpr (std::is_same_v<T, double>) {
            return parse_double(text, key);
        } else if constexpr (std::is_same_v<T, bool>) {
            return parse_bool(text, key);
        } else if constexpr (std::is_same_v<T, std::string>) {
            return text;
        } else {
            const long long v = parse_int(text, key);
            if (v < 0) {
                throw UsageError("config key '" + key + "' must be nonnegative");
            }
            return static_cast<T>(v);
        }
    }

    const KeyValueConfig& cfg_;
};

/// True when the first nonblank line holds a non-numeric, non-missing token.
bool looks_like_header(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) {
            continue;
        }
        for (const auto& raw : split(line, ',')) {
            auto tok = trim(raw);
            std::string lower;
            for (char c : tok) {
                lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            }
            if (tok.empty() || lower == "na" || lower == "nan") {
                continue;
            }
            try {
                (void)parse_double(tok, "value");
            } catch (const ParseError&) {
                return true;
            }
        }
        return false;
    }
    return false;
}

struct InputOptions {
    std::string path;
    CLI::Option* header = nullptr;
    CLI::Option* no_header = nullptr;
    CLI::Option* zero_negatives = nullptr;
    CLI::Option* no_interpolate = nullptr;
    bool header_flag = false;
    bool no_header_flag = false;
    bool zero_negatives_flag = false;
    bool no_interpolate_flag = false;

    void add(CLI::App* cmd) {
        cmd->add_option("input", path, "Input CSV, rows are time points")->required();
        header = cmd->add_flag("--header", header_flag, "First line is a header");
        no_header = cmd->add_flag("--no-header", no_header_flag, "First line is data");
        zero_negatives = cmd->add_flag("--zero-negatives", zero_negatives_flag, "Clamp negative values to 0");
        no_interpolate =
            cmd->add_flag("--no-interpolate", no_interpolate_flag, "Reject missing values instead of interpolating");
    }

    TimeSeriesMatrix load(const Settings& s) const {
        if (!std::filesystem::exists(path)) {
            throw Error("input file '" + path + "' does not exist");
        }
        bool has_header;
        if (header_flag) {
            has_header = true;
        } else if (no_header_flag) {
            has_header = false;
        } else {
            has_header = s.pick<bool>(nullptr, false, "header", looks_like_header(path));
        }
        PreprocessPolicy policy;
        policy.interpolate_missing = s.pick<bool>(no_interpolate, false, "interpolate_missing", true);
        policy.zero_negatives = s.pick<bool>(zero_negatives, true, "zero_negatives", false);
        return preprocess(load_csv(path, has_header), policy);
    }
};

std::ostream& open_output(const std::string& path, std::ofstream& file, std::ostream& fallback) {
    if (path.empty() || path == "-") {
        return fallback;
    }
    file.open(path, std::ios::binary);
    if (!file) {
        throw Error("cannot write '" + path + "'");
    }
    return file;
}

std::vector<double> parse_levels(const std::string& text) {
    std::vector<double> levels;
    for (const auto& item : split(text, ',')) {
        if (!trim(item).empty()) {
            levels.push_back(parse_double(trim(item), "levels"));
        }
    }
    return levels;
}

// ---- test ------------------------------------------------------------------

struct TestCommand {
    InputOptions input;
    double delta = 0, alpha = 0.05, cutoff = 0.01, kappa = 1.5;
    std::size_t K = 20, m = 0, set_K = 20, reps = 100000;
    std::string norm = "normalized_l2", table, cache;
    CLI::Option *o_delta, *o_alpha, *o_K, *o_m, *o_norm, *o_reps, *o_table, *o_cache, *o_cutoff, *o_kappa, *o_setK;

    void add(CLI::App* cmd) {
        input.add(cmd);
        o_delta = cmd->add_option("--delta", delta, "Threshold on the squared-norm scale (required)");
        o_alpha = cmd->add_option("--alpha", alpha, "Level");
        o_K = cmd->add_option("--K", K, "Atoms of the self-normalizing measure");
        o_m = cmd->add_option("--m", m, "Manual trimming parameter (default: data-driven)");
        o_norm = cmd->add_option("--norm", norm, "normalized_l2 (dense) or sparsity_adjusted (sparse)");
        o_reps = cmd->add_option("--quantile-reps", reps, "Monte Carlo draws for the G quantiles");
        o_table = cmd->add_option("--quantile-table", table, "Precomputed G quantile table (CSV)");
        o_cache = cmd->add_option("--quantile-cache", cache, "Directory caching simulated quantile tables");
        o_cutoff = cmd->add_option("--cutoff", cutoff, "Flatness cutoff of the trimming rule");
        o_kappa = cmd->add_option("--kappa", kappa, "Exponent of the support threshold log(p)^kappa");
        o_setK = cmd->add_option("--set-K", set_K, "Atoms used by the support estimate");
    }

    int run(const Globals& g, std::ostream& out, std::ostream& err) const {
        const Settings s(g.config);
        if (!s.has(o_delta, "delta")) {
            throw UsageError("test: --delta is required (the relevance threshold is problem-specific)");
        }
        TestConfig cfg;
        cfg.delta = s.pick(o_delta, delta, "delta", 0.0);
        cfg.alpha = s.pick(o_alpha, alpha, "alpha", 0.05);
        cfg.K = s.pick<std::size_t>(o_K, K, "K", 20);
        if (s.has(o_m, "m")) {
            cfg.m = s.pick<std::size_t>(o_m, m, "m", 0);
        }
        cfg.norm = parse_norm(s.pick<std::string>(o_norm, norm, "norm", "normalized_l2"));
        cfg.cutoff = s.pick(o_cutoff, cutoff, "cutoff", 0.01);
        cfg.kappa = s.pick(o_kappa, kappa, "kappa", 1.5);
        cfg.set_K = s.pick<std::size_t>(o_setK, set_K, "set_K", 20);
        cfg.quantiles.reps = s.pick<std::size_t>(o_reps, reps, "reps", cfg.quantiles.reps);
        if (g.seed) {
            cfg.quantiles.seed = *g.seed;
        } else if (auto v = g.config.get("seed")) {
            cfg.quantiles.seed = static_cast<std::uint64_t>(parse_int(*v, "seed"));
        }
        cfg.quantiles.table = s.pick<std::string>(o_table, table, "quantile_table", "");
        cfg.quantiles.cache_dir = s.pick<std::string>(o_cache, cache, "quantile_cache", "");
        cfg.threads = g.threads;
        try {
            cfg.validate();
        } catch (const DomainError& e) {
            throw UsageError(std::string("test: ") + e.what());
        }

        const auto x = input.load(s);
        const auto result = run_test(x, cfg);
        const auto root = report_sqrt_scale(result);
        for (const auto& w : result.warnings) {
            err << "warning: " << w << '\n';
        }
        if (g.format == "csv") {
            out << csv_header() << ",delta_alpha_sqrt,ci_upper_sqrt,ci_two_lower_sqrt,ci_two_upper_sqrt\n";
            out << to_csv_row(result) << ',' << format_double(root.delta_alpha) << ',' << format_double(root.ci_upper)
                << ',' << format_double(root.ci_lower_two) << ',' << format_double(root.ci_upper_two) << '\n';
        } else {
            out << to_key_value(result);
            out << "delta_alpha_sqrt=" << format_double(root.delta_alpha) << '\n'
                << "ci_one_sided_sqrt=[0," << format_double(root.ci_upper) << "]\n"
                << "ci_two_sided_sqrt=[" << format_double(root.ci_lower_two) << ','
                << format_double(root.ci_upper_two) << "]\n";
        }
        if (result.degenerate && g.strict) {
            err << "error: degenerate statistic (--strict)\n";
            return kDegenerate;
        }
        return kSuccess;
    }
};

// ---- quantiles ---------------------------------------------------------------

struct QuantilesCommand {
    std::string dist = "G", levels, out_path;
    std::size_t K = 20, reps = 100000, grid_size = kDefaultGridSize;
    CLI::Option *o_dist, *o_K, *o_levels, *o_reps, *o_grid;

    void add(CLI::App* cmd) {
        o_dist = cmd->add_option("dist", dist, "G or H");
        o_K = cmd->add_option("K", K, "Atoms of the measure (G only)");
        o_levels = cmd->add_option("--levels", levels, "Comma-separated levels (default 0.8,...,0.995)");
        o_reps = cmd->add_option("--reps", reps, "Monte Carlo draws (>= 1000)");
        o_grid = cmd->add_option("--grid-size", grid_size, "Path resolution for H");
        cmd->add_option("--out", out_path, "Output CSV (default: stdout)");
    }

    int run(const Globals& g, std::ostream& out, std::ostream&) const {
        const Settings s(g.config);
        const auto d = parse_dist(s.pick<std::string>(o_dist, dist, "dist", "G"));
        const auto k = s.pick<std::size_t>(o_K, K, "K", 20);
        const auto lv_text = s.pick<std::string>(o_levels, levels, "levels", "");
        const auto lv = lv_text.empty() ? default_levels() : parse_levels(lv_text);
        const auto r = s.pick<std::size_t>(o_reps, reps, "reps", 100000);
        const auto grid = s.pick<std::size_t>(o_grid, grid_size, "grid_size", kDefaultGridSize);
        std::uint64_t seed = 1;
        if (g.seed) {
            seed = *g.seed;
        } else if (auto v = g.config.get("seed")) {
            seed = static_cast<std::uint64_t>(parse_int(*v, "seed"));
        }
        if (r < 1000) {
            throw UsageError("quantiles: --reps must be at least 1000");
        }
        const auto table = quantile_table(d, k, lv, r, seed, g.threads, grid);
        std::ofstream file;
        auto& os = open_output(out_path, file, out);
        write_quantile_table(table, os);
        return kSuccess;
    }
};

// ---- select-m / estimate-cp / estimate-set ----------------------------------

std::size_t resolve_k_hat(const TimeSeriesMatrix& x, const Settings& s, const CLI::Option* opt, std::size_t flag) {
    if (s.has(opt, "k_hat")) {
        return s.pick<std::size_t>(opt, flag, "k_hat", 0);
    }
    return estimate_cp(x).k_hat;
}

struct SelectMCommand {
    InputOptions input;
    std::size_t k_hat = 0;
    double cutoff = 0.01;
    std::string plot;
    CLI::Option *o_k, *o_cutoff;

    void add(CLI::App* cmd) {
        input.add(cmd);
        o_k = cmd->add_option("--k-hat", k_hat, "Change point (default: estimated)");
        o_cutoff = cmd->add_option("--cutoff", cutoff, "Flatness cutoff");
        cmd->add_option("--plot", plot, "Write the Delta F curves to this SVG (and a CSV alongside)");
    }

    int run(const Globals& g, std::ostream& out, std::ostream&) const {
        const Settings s(g.config);
        const auto x = input.load(s);
        const auto k = resolve_k_hat(x, s, o_k, k_hat);
        const auto sel = select_m(x, k, s.pick(o_cutoff, cutoff, "cutoff", 0.01));
        if (!plot.empty()) {
            std::filesystem::path stem(plot);
            if (stem.extension() == ".svg") {
                stem.replace_extension();
            }
            emit_delta_f(sel, stem);
        }
        if (g.format == "csv") {
            out << "m,deltaF1,deltaF2\n";
            const auto rows = std::max(sel.delta_f1.size(), sel.delta_f2.size());
            for (std::size_t i = 0; i < rows; ++i) {
                out << i + 1 << ',' << (i < sel.delta_f1.size() ? format_double(sel.delta_f1[i]) : "") << ','
                    << (i < sel.delta_f2.size() ? format_double(sel.delta_f2[i]) : "") << '\n';
            }
        } else {
            out << "k_hat=" << k << "\ncap1=" << sel.cap1 << "\ncap2=" << sel.cap2 << "\nm1=" << sel.m1
                << "\nm2=" << sel.m2 << "\nm_hat=" << sel.m_hat << "\ncutoff=" << format_double(sel.cutoff) << '\n';
        }
        return kSuccess;
    }
};

struct EstimateCpCommand {
    InputOptions input;

    void add(CLI::App* cmd) { input.add(cmd); }

    int run(const Globals& g, std::ostream& out, std::ostream&) const {
        const Settings s(g.config);
        const auto x = input.load(s);
        const auto fit = estimate_cp(x);
        if (g.format == "csv") {
            out << "n,p,k_hat,theta_hat,objective\n"
                << x.n() << ',' << x.p() << ',' << fit.k_hat << ',' << format_double(fit.theta_hat) << ','
                << format_double(fit.objective) << '\n';
        } else {
            out << "n=" << x.n() << "\np=" << x.p() << "\nk_hat=" << fit.k_hat
                << "\ntheta_hat=" << format_double(fit.theta_hat) << "\nobjective=" << format_double(fit.objective)
                << '\n';
        }
        return kSuccess;
    }
};

struct EstimateSetCommand {
    InputOptions input;
    std::size_t k_hat = 0, m = 0, K = 20;
    double kappa = 1.5, cutoff = 0.01;
    std::string out_path;
    CLI::Option *o_k, *o_m, *o_K, *o_kappa, *o_cutoff;

    void add(CLI::App* cmd) {
        input.add(cmd);
        o_k = cmd->add_option("--k-hat", k_hat, "Change point (default: estimated)");
        o_m = cmd->add_option("--m", m, "Trimming parameter (default: data-driven)");
        o_K = cmd->add_option("--K", K, "Atoms approximating Lebesgue measure");
        o_kappa = cmd->add_option("--kappa", kappa, "Threshold exponent");
        o_cutoff = cmd->add_option("--cutoff", cutoff, "Flatness cutoff of the trimming rule");
        cmd->add_option("--out", out_path, "Per-coordinate CSV");
    }

    int run(const Globals& g, std::ostream& out, std::ostream&) const {
        const Settings s(g.config);
        const auto x = input.load(s);
        const auto k = resolve_k_hat(x, s, o_k, k_hat);
        std::size_t mm;
        if (s.has(o_m, "m")) {
            mm = s.pick<std::size_t>(o_m, m, "m", 0);
        } else {
            mm = select_m(x, k, s.pick(o_cutoff, cutoff, "cutoff", 0.01)).m_hat;
        }
        const auto est = estimate_S(x, k, mm, s.pick<std::size_t>(o_K, K, "set_K", 20),
                                    s.pick(o_kappa, kappa, "kappa", 1.5), g.threads);
        if (!out_path.empty()) {
            write_set_csv(est, out_path);
        }
        if (g.format == "csv") {
            write_set_csv(est, out);
        } else {
            out << "k_hat=" << k << "\nm=" << mm << "\nthreshold=" << format_double(est.threshold)
                << "\nS_hat_size=" << est.s_hat.size() << "\nS_hat=";
            for (std::size_t i = 0; i < est.s_hat.size(); ++i) {
                out << (i ? ";" : "") << est.s_hat[i] + 1;
            }
            out << '\n';
        }
        return kSuccess;
    }
};

// ---- simulate ----------------------------------------------------------------

struct SimulateCommand {
    std::string model = "IND", spatial, out_path;
    std::size_t n = 200, p = 100, s = 0;
    double signal = 0, theta0 = 0.6, mu = 10, sp = 1.0;
    CLI::Option *o_model, *o_spatial, *o_n, *o_p, *o_s, *o_sp, *o_signal, *o_theta0, *o_mu;

    void add(CLI::App* cmd) {
        o_model = cmd->add_option("--model", model, "IND, MA<q>, AR<c>, MA*<q>, AR*<c>");
        o_spatial = cmd->add_option("--spatial", spatial, "diagonal or toeplitz (default follows the model)");
        o_n = cmd->add_option("--n", n, "Sample size");
        o_p = cmd->add_option("--p", p, "Dimension");
        o_s = cmd->add_option("--s", s, "Number of shifted coordinates");
        o_sp = cmd->add_option("--sp", sp, "Fraction of shifted coordinates (default 1)");
        o_signal = cmd->add_option("--signal", signal, "delta_l^2 on each shifted coordinate");
        o_theta0 = cmd->add_option("--theta0", theta0, "Relative change location");
        o_mu = cmd->add_option("--mu", mu, "Pre-change mean");
        cmd->add_option("--out", out_path, "Output CSV (default: stdout)");
    }

    int run(const Globals& g, std::ostream& out, std::ostream&) const {
        // Config keys first, flags on top.
        KeyValueConfig cfg;
        for (const auto& [key, value] : g.config.entries()) {
            if (is_dgp_name(key)) {
                cfg.set(key, value);
            }
        }
        auto put = [&](const CLI::Option* opt, const std::string& key, const std::string& value) {
            if (opt->count() > 0) {
                cfg.set(key, value);
            }
        };
        put(o_model, "model", model);
        put(o_spatial, "spatial", spatial);
        put(o_n, "n", std::to_string(n));
        put(o_p, "p", std::to_string(p));
        put(o_s, "s", std::to_string(s));
        put(o_sp, "sp", format_double(sp));
        put(o_signal, "signal", format_double(signal));
        put(o_theta0, "theta0", format_double(theta0));
        put(o_mu, "mu", format_double(mu));
        if (!cfg.contains("s") && !cfg.contains("sp")) {
            cfg.set("sp", "1");
        }
        if (g.seed) {
            cfg.set("seed", std::to_string(*g.seed));
        } else if (auto v = g.config.get("seed")) {
            cfg.set("seed", *v);
        }
        auto spec = dgp_from_config(cfg);
        try {
            spec.validate();
        } catch (const DomainError& e) {
            throw UsageError(std::string("simulate: ") + e.what());
        }
        std::ofstream file;
        auto& os = open_output(out_path, file, out);
        write_csv(simulate(spec), os);
        return kSuccess;
    }
};

// ---- experiment ----------------------------------------------------------------

struct ExperimentCommand {
    std::string plan_path, out_dir;
    std::size_t reps = 0;
    CLI::Option* o_reps;

    void add(CLI::App* cmd) {
        cmd->add_option("plan", plan_path, "Plan file (key=value)")->required();
        cmd->add_option("--out", out_dir, "Output directory (overrides the plan's 'out')");
        o_reps = cmd->add_option("--reps", reps, "Replications per cell (overrides the plan)");
    }

    int run(const Globals& g, std::ostream& out, std::ostream&) const {
        if (!std::filesystem::exists(plan_path)) {
            throw Error("plan file '" + plan_path + "' does not exist");
        }
        auto cfg = KeyValueConfig::load(plan_path);
        if (g.seed) {
            cfg.set("seed", std::to_string(*g.seed));
        }
        if (o_reps->count() > 0) {
            cfg.set("reps", std::to_string(reps));
        }
        ExperimentPlan plan;
        try {
            plan = ExperimentPlan::from_config(cfg);
        } catch (const DomainError& e) {
            throw UsageError(std::string("experiment: ") + e.what());
        }
        plan.threads = g.threads;
        if (!out_dir.empty()) {
            plan.out_dir = out_dir;
        }
        for (const auto& path : run_plan(plan)) {
            out << "wrote " << path.string() << '\n';
        }
        return kSuccess;
    }
};

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Relevant change-point tests for high-dimensional time series", "relcpd"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(version_string()));

    Globals g;
    std::size_t threads_flag = 0;
    std::uint64_t seed_flag = 0;
    auto* o_threads = app.add_option("--threads", threads_flag, "Worker threads (default: $RELCPD_THREADS or 1)");
    auto* o_seed = app.add_option("--seed", seed_flag, "Random seed");
    app.add_option("--config", g.config_path, "key=value configuration file");
    auto* o_format = app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "csv"}));
    auto* o_strict = app.add_flag("--strict", g.strict, "Exit with code 3 on a degenerate statistic");

    TestCommand test;
    QuantilesCommand quantiles;
    SelectMCommand select;
    EstimateCpCommand cp;
    EstimateSetCommand set;
    SimulateCommand sim;
    ExperimentCommand exp;
    auto* c_test = app.add_subcommand("test", "Test for a relevant change");
    auto* c_quant = app.add_subcommand("quantiles", "Monte Carlo quantiles of G or H");
    auto* c_select = app.add_subcommand("select-m", "Data-driven trimming parameter");
    auto* c_cp = app.add_subcommand("estimate-cp", "Change-point location");
    auto* c_set = app.add_subcommand("estimate-set", "Support of the mean shift");
    auto* c_sim = app.add_subcommand("simulate", "Draw a sample from a simulation design");
    auto* c_exp = app.add_subcommand("experiment", "Run a simulation plan");
    test.add(c_test);
    quantiles.add(c_quant);
    select.add(c_select);
    cp.add(c_cp);
    set.add(c_set);
    sim.add(c_sim);
    exp.add(c_exp);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsage;
    }

    try {
        if (!g.config_path.empty()) {
            if (!std::filesystem::exists(g.config_path)) {
                throw Error("config file '" + g.config_path + "' does not exist");
            }
            g.config = KeyValueConfig::load(g.config_path);
            try {
                g.config.require_known(kConfigKeys);
            } catch (const ParseError& e) {
                throw UsageError(e.what());
            }
        }
        const Settings s(g.config);
        g.threads = s.pick<std::size_t>(o_threads, threads_flag, "threads", default_threads());
        if (g.threads < 1) {
            throw UsageError("--threads must be at least 1");
        }
        if (o_seed->count() > 0) {
            g.seed = seed_flag;
        }
        g.format = s.pick<std::string>(o_format, g.format, "format", "text");
        if (g.format != "text" && g.format != "csv") {
            throw UsageError("format must be text or csv");
        }
        g.strict = s.pick<bool>(o_strict, g.strict, "strict", false);

        if (c_test->parsed()) {
            return test.run(g, out, err);
        }
        if (c_quant->parsed()) {
            return quantiles.run(g, out, err);
        }
        if (c_select->parsed()) {
            return select.run(g, out, err);
        }
        if (c_cp->parsed()) {
            return cp.run(g, out, err);
        }
        if (c_set->parsed()) {
            return set.run(g, out, err);
        }
        if (c_sim->parsed()) {
            return sim.run(g, out, err);
        }
        if (c_exp->parsed()) {
            return exp.run(g, out, err);
        }
        err << "error: no command given\n";
        return kUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
}

} // namespace relcpd::cli
