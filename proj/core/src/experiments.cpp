#include "relcpd/experiments.hpp"

#include "relcpd/cpoint.hpp"
#include "relcpd/error.hpp"
#include "relcpd/parallel.hpp"
#include "relcpd/setestim.hpp"
#include "relcpd/trim.hpp"
#include "relcpd/version.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace relcpd {

namespace {

const std::vector<std::pair<TableKind, std::string>>& table_names() {
    static const std::vector<std::pair<TableKind, std::string>> names{
        {TableKind::Rejection, "rejection"},
        {TableKind::MDistribution, "m_distribution"},
        {TableKind::Support, "support"},
        {TableKind::CpAccuracy, "cp_accuracy"},
        {TableKind::KSensitivity, "k_sensitivity"},
    };
    return names;
}

const std::set<std::string> kDgpNames{"model", "spatial", "n", "p", "s", "sp", "signal", "theta0", "mu"};
const std::set<std::string> kTestNames{"K", "delta", "alpha", "test", "m", "kappa"};

std::string join(const std::vector<std::string>& items, char sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += (i ? std::string(1, sep) : std::string()) + items[i];
    }
    return out;
}

std::size_t parse_size(const std::string& text, const char* what) {
    const long long v = parse_int(text, what);
    if (v < 0) {
        throw ParseError(std::string(what) + " must be nonnegative");
    }
    return static_cast<std::size_t>(v);
}

void apply_test_value(TestConfig& test, const std::string& name, const std::string& value) {
    if (name == "K") {
        test.K = parse_size(value, "K");
    } else if (name == "delta") {
        test.delta = parse_double(value, "delta");
    } else if (name == "alpha") {
        test.alpha = parse_double(value, "alpha");
    } else if (name == "test") {
        test.norm = parse_norm(value);
    } else if (name == "m") {
        if (value == "auto") {
            test.m.reset();
        } else {
            test.m = parse_size(value, "m");
        }
    } else if (name == "kappa") {
        test.kappa = parse_double(value, "kappa");
    } else {
        throw DomainError("'" + name + "' is not a test parameter");
    }
}

/// Mean and standard error of the mean; SE is undefined below 2 values.
struct Moments {
    double mean = 0.0;
    std::optional<double> se;
};

Moments moments(const std::vector<double>& xs) {
    Moments m;
    if (xs.empty()) {
        m.mean = std::nan("");
        return m;
    }
    m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    if (xs.size() >= 2) {
        double ss = 0.0;
        for (double x : xs) {
            ss += (x - m.mean) * (x - m.mean);
        }
        m.se = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
    }
    return m;
}

/// Binomial proportion with SE sqrt(r(1-r)/N); undefined for N < 2.
std::pair<std::string, std::string> proportion(std::size_t hits, std::size_t total) {
    if (total == 0) {
        return {kUndefined, kUndefined};
    }
    const double r = static_cast<double>(hits) / static_cast<double>(total);
    if (total < 2) {
        return {format_double(r), kUndefined};
    }
    return {format_double(r), format_double(std::sqrt(r * (1.0 - r) / static_cast<double>(total)))};
}

std::string fmt(double v) { return std::isnan(v) ? std::string(kUndefined) : format_double(v); }
std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(kUndefined); }

std::vector<std::string> label_columns(const ExperimentPlan& plan) {
    std::vector<std::string> cols;
    for (const auto& axis : plan.sweep) {
        cols.push_back(axis.name);
    }
    return cols;
}

std::vector<std::string> label_values(const Cell& cell) {
    std::vector<std::string> vals;
    for (const auto& [name, value] : cell.labels) {
        vals.push_back(value);
    }
    return vals;
}

/// Trimming parameter the test would use: manual, else the data-driven rule.
std::size_t trimming(const TimeSeriesMatrix& x, std::size_t k_hat, const TestConfig& test) {
    return test.m ? *test.m : select_m(x, k_hat, test.cutoff).m_hat;
}

} // namespace

std::string table_name(TableKind kind) {
    for (const auto& [k, name] : table_names()) {
        if (k == kind) {
            return name;
        }
    }
    return "unknown";
}

TableKind parse_table_kind(const std::string& name) {
    for (const auto& [k, n] : table_names()) {
        if (n == name) {
            return k;
        }
    }
    throw ParseError("unknown table kind '" + name +
                     "' (expected rejection, m_distribution, support, cp_accuracy or k_sensitivity)");
}

const std::vector<std::string>& sweepable_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v(kDgpNames.begin(), kDgpNames.end());
        v.insert(v.end(), kTestNames.begin(), kTestNames.end());
        return v;
    }();
    return names;
}

bool is_dgp_name(const std::string& name) { return kDgpNames.contains(name); }

void ExperimentPlan::validate() const {
    if (reps < 1) {
        throw DomainError("reps must be at least 1");
    }
    if (threads < 1) {
        throw DomainError("threads must be at least 1");
    }
    if (!(cp_window >= 0.0)) {
        throw DomainError("cp_window must be nonnegative");
    }
    if (sp && !(*sp > 0.0 && *sp <= 1.0)) {
        throw DomainError("sp must lie in (0, 1]");
    }
    for (auto K : k_values) {
        if (K < 2) {
            throw DomainError("k_values entries must be at least 2");
        }
    }
    std::set<std::string> seen;
    for (const auto& axis : sweep) {
        if (!kDgpNames.contains(axis.name) && !kTestNames.contains(axis.name)) {
            throw DomainError("sweep name '" + axis.name + "' matches no design or test parameter");
        }
        if (!seen.insert(axis.name).second) {
            throw DomainError("sweep name '" + axis.name + "' appears twice");
        }
    }
    test.validate();
}

ExperimentPlan ExperimentPlan::from_config(const KeyValueConfig& cfg) {
    static const std::set<std::string> allowed{
        "kind", "outputs", "model", "spatial", "n", "p", "s", "sp", "signal", "theta0", "mu",
        "reps", "seed", "alpha", "delta", "test", "K", "m", "kappa", "cp_window", "k_values",
        "quantile_reps", "quantile_seed", "threads", "out", "cutoff", "set_K"};
    cfg.require_known(allowed, {"sweep."});

    ExperimentPlan plan;
    plan.dgp = dgp_from_config(cfg, plan.dgp);
    if (cfg.contains("s")) {
        plan.sp.reset();
    } else if (auto sp = cfg.get("sp")) {
        plan.sp = parse_double(*sp, "sp");
    }
    plan.reps = parse_size(cfg.get_string("reps", "200"), "reps");
    plan.seed = static_cast<std::uint64_t>(parse_int(cfg.get_string("seed", "1"), "seed"));
    plan.dgp.seed = plan.seed;
    for (const char* key : {"K", "delta", "alpha", "test", "m", "kappa"}) {
        if (auto v = cfg.get(key)) {
            apply_test_value(plan.test, key, *v);
        }
    }
    plan.test.cutoff = cfg.get_double("cutoff", plan.test.cutoff);
    plan.test.set_K = parse_size(cfg.get_string("set_K", std::to_string(plan.test.set_K)), "set_K");
    plan.test.quantiles.reps =
        parse_size(cfg.get_string("quantile_reps", std::to_string(plan.test.quantiles.reps)), "quantile_reps");
    if (auto qs = cfg.get("quantile_seed")) {
        plan.test.quantiles.seed = static_cast<std::uint64_t>(parse_int(*qs, "quantile_seed"));
    }
    plan.cp_window = cfg.get_double("cp_window", plan.cp_window);
    if (auto kv = cfg.get("k_values")) {
        plan.k_values.clear();
        for (const auto& item : split(*kv, ',')) {
            plan.k_values.push_back(parse_size(trim(item), "k_values"));
        }
    }
    plan.threads = parse_size(cfg.get_string("threads", "1"), "threads");
    plan.out_dir = cfg.get_string("out", plan.out_dir.string());

    auto outputs = cfg.get("outputs");
    if (!outputs) {
        outputs = cfg.get("kind");
    }
    if (outputs) {
        for (const auto& item : split(*outputs, ',')) {
            const auto name = trim(item);
            if (!name.empty()) {
                plan.outputs.push_back(parse_table_kind(name));
            }
        }
    }
    for (const auto& [key, value] : cfg.entries()) {
        if (!key.starts_with("sweep.")) {
            continue;
        }
        SweepAxis axis{key.substr(6), {}};
        for (const auto& item : split(value, ',')) {
            const auto v = trim(item);
            if (!v.empty()) {
                axis.values.push_back(v);
            }
        }
        plan.sweep.push_back(std::move(axis));
    }
    plan.validate();
    return plan;
}

KeyValueConfig ExperimentPlan::to_config() const {
    KeyValueConfig cfg = relcpd::to_config(dgp);
    if (sp) {
        cfg.erase("s");
        cfg.set("sp", format_double(*sp));
    }
    std::vector<std::string> outs;
    for (auto kind : outputs) {
        outs.push_back(table_name(kind));
    }
    cfg.set("outputs", join(outs, ','));
    cfg.set("reps", std::to_string(reps));
    cfg.set("seed", std::to_string(seed));
    cfg.set("alpha", format_double(test.alpha));
    cfg.set("delta", format_double(test.delta));
    cfg.set("test", norm_name(test.norm));
    cfg.set("K", std::to_string(test.K));
    cfg.set("m", test.m ? std::to_string(*test.m) : "auto");
    cfg.set("kappa", format_double(test.kappa));
    cfg.set("cutoff", format_double(test.cutoff));
    cfg.set("set_K", std::to_string(test.set_K));
    cfg.set("quantile_reps", std::to_string(test.quantiles.reps));
    cfg.set("quantile_seed", std::to_string(test.quantiles.seed));
    cfg.set("cp_window", format_double(cp_window));
    std::vector<std::string> ks;
    for (auto K : k_values) {
        ks.push_back(std::to_string(K));
    }
    cfg.set("k_values", join(ks, ','));
    cfg.set("out", out_dir.string());
    for (const auto& axis : sweep) {
        cfg.set("sweep." + axis.name, join(axis.values, ','));
    }
    return cfg;
}

std::vector<Cell> expand_cells(const ExperimentPlan& plan) {
    std::vector<std::vector<std::pair<std::string, std::string>>> combos{{}};
    for (const auto& axis : plan.sweep) {
        std::vector<std::vector<std::pair<std::string, std::string>>> next;
        for (const auto& combo : combos) {
            for (const auto& value : axis.values) {
                auto c = combo;
                c.emplace_back(axis.name, value);
                next.push_back(std::move(c));
            }
        }
        combos = std::move(next);
    }

    std::vector<Cell> cells;
    for (auto& labels : combos) {
        Cell cell;
        cell.labels = labels;
        KeyValueConfig dcfg;
        cell.test = plan.test;
        bool s_fixed = !plan.sp.has_value();
        std::optional<double> sp = plan.sp;
        for (const auto& [name, value] : labels) {
            if (name == "s") {
                s_fixed = true;
            } else if (name == "sp") {
                sp = parse_double(value, "sp");
                continue;
            }
            if (kDgpNames.contains(name)) {
                dcfg.set(name, value);
            } else {
                apply_test_value(cell.test, name, value);
            }
        }
        cell.dgp = dgp_from_config(dcfg, plan.dgp);
        if (!s_fixed && sp) {
            cell.dgp.s = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::llround(*sp * static_cast<double>(cell.dgp.p))));
        }
        cell.dgp.validate();
        cell.test.validate();

        // Data seeds see only the data-generating coordinates, so cells that
        // differ in test settings alone analyse identical samples.
        std::vector<std::string> parts;
        for (const auto& [name, value] : labels) {
            if (kDgpNames.contains(name)) {
                parts.push_back(name + "=" + value);
            }
        }
        std::sort(parts.begin(), parts.end());
        cell.data_seed = derive_seed(plan.seed, hash_label(join(parts, ';')));
        cells.push_back(std::move(cell));
    }
    return cells;
}

DGPSpec replication_spec(const Cell& cell, std::size_t rep) {
    DGPSpec spec = cell.dgp;
    spec.seed = derive_seed(cell.data_seed, rep);
    return spec;
}

std::string ResultTable::to_csv() const {
    std::string out = join(columns, ',') + "\n";
    for (const auto& row : rows) {
        out += join(row, ',') + "\n";
    }
    return out;
}

void ResultTable::write(const std::filesystem::path& path) const {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    out << to_csv();
    if (!out) {
        throw Error("write failed for '" + path.string() + "'");
    }
}

ResultTable run_rejection(const ExperimentPlan& plan) {
    plan.validate();
    ResultTable table;
    table.columns = label_columns(plan);
    for (const char* c : {"reps", "valid", "failures", "degenerate", "rejections", "rate", "se"}) {
        table.columns.emplace_back(c);
    }
    for (const auto& cell : expand_cells(plan)) {
        auto test = cell.test;
        test.threads = 1;
        resolve_quantiles(test);
        enum Outcome : int { Fail = -1, Accept = 0, Reject = 1, Degenerate = 2 };
        std::vector<int> outcome(plan.reps, Fail);
        parallel_for(plan.reps, plan.threads, [&](std::size_t r) {
            try {
                const auto x = simulate(replication_spec(cell, r));
                const auto res = run_test(x, test);
                outcome[r] = res.degenerate ? Degenerate : (res.reject ? Reject : Accept);
            } catch (const std::exception&) {
                outcome[r] = Fail;
            }
        });
        const auto failures = static_cast<std::size_t>(std::count(outcome.begin(), outcome.end(), Fail));
        const auto degenerate = static_cast<std::size_t>(std::count(outcome.begin(), outcome.end(), Degenerate));
        const auto rejections = static_cast<std::size_t>(std::count(outcome.begin(), outcome.end(), Reject));
        const std::size_t valid = plan.reps - failures;
        auto row = label_values(cell);
        const auto [rate, se] = proportion(rejections, valid);
        for (auto v : {plan.reps, valid, failures, degenerate, rejections}) {
            row.push_back(std::to_string(v));
        }
        row.push_back(rate);
        row.push_back(se);
        table.rows.push_back(std::move(row));
    }
    return table;
}

ResultTable run_m_distribution(const ExperimentPlan& plan) {
    plan.validate();
    ResultTable table;
    table.columns = label_columns(plan);
    table.columns.emplace_back("reps");
    table.columns.emplace_back("valid");
    for (int j = 2; j <= 18; j += 2) {
        table.columns.push_back("ge" + std::to_string(j));
    }
    table.columns.emplace_back("mean_m");
    table.columns.emplace_back("mean_m_se");
    for (const auto& cell : expand_cells(plan)) {
        std::vector<double> m_hat(plan.reps, -1.0);
        parallel_for(plan.reps, plan.threads, [&](std::size_t r) {
            try {
                const auto x = simulate(replication_spec(cell, r));
                const auto fit = estimate_cp(x);
                m_hat[r] = static_cast<double>(select_m(x, fit.k_hat, cell.test.cutoff).m_hat);
            } catch (const std::exception&) {
                m_hat[r] = -1.0;
            }
        });
        std::vector<double> ok;
        for (double v : m_hat) {
            if (v >= 0.0) {
                ok.push_back(v);
            }
        }
        auto row = label_values(cell);
        row.push_back(std::to_string(plan.reps));
        row.push_back(std::to_string(ok.size()));
        for (int j = 2; j <= 18; j += 2) {
            const auto hits = static_cast<std::size_t>(
                std::count_if(ok.begin(), ok.end(), [&](double v) { return v >= j; }));
            row.push_back(proportion(hits, ok.size()).first);
        }
        const auto mom = moments(ok);
        row.push_back(fmt(mom.mean));
        row.push_back(fmt(mom.se));
        table.rows.push_back(std::move(row));
    }
    return table;
}

ResultTable run_support(const ExperimentPlan& plan) {
    plan.validate();
    ResultTable table;
    table.columns = label_columns(plan);
    for (const char* c : {"reps", "valid", "precision", "precision_se", "recall", "recall_se", "f_score", "f_score_se",
                          "mean_size"}) {
        table.columns.emplace_back(c);
    }
    for (const auto& cell : expand_cells(plan)) {
        std::vector<std::size_t> truth;
        if (cell.dgp.signal > 0.0) {
            for (std::size_t l = 0; l < cell.dgp.s; ++l) {
                truth.push_back(l);
            }
        }
        struct Rep {
            bool ok = false;
            SupportMetrics metrics;
            double size = 0.0;
        };
        std::vector<Rep> reps(plan.reps);
        parallel_for(plan.reps, plan.threads, [&](std::size_t r) {
            try {
                const auto x = simulate(replication_spec(cell, r));
                const auto fit = estimate_cp(x);
                const auto m = trimming(x, fit.k_hat, cell.test);
                const auto est = estimate_S(x, fit.k_hat, m, cell.test.set_K, cell.test.kappa, 1);
                reps[r].metrics = support_metrics(truth, est.s_hat);
                reps[r].size = static_cast<double>(est.s_hat.size());
                reps[r].ok = true;
            } catch (const std::exception&) {
                reps[r].ok = false;
            }
        });
        std::vector<double> prec, rec, f, size;
        for (const auto& rep : reps) {
            if (!rep.ok) {
                continue;
            }
            prec.push_back(rep.metrics.precision);
            rec.push_back(rep.metrics.recall);
            f.push_back(rep.metrics.f_score);
            size.push_back(rep.size);
        }
        auto row = label_values(cell);
        row.push_back(std::to_string(plan.reps));
        row.push_back(std::to_string(prec.size()));
        const auto mp = moments(prec);
        row.push_back(fmt(mp.mean));
        row.push_back(fmt(mp.se));
        if (truth.empty()) {
            for (int i = 0; i < 4; ++i) {
                row.emplace_back(kUndefined);
            }
        } else {
            const auto mr = moments(rec);
            const auto mf = moments(f);
            row.push_back(fmt(mr.mean));
            row.push_back(fmt(mr.se));
            row.push_back(fmt(mf.mean));
            row.push_back(fmt(mf.se));
        }
        row.push_back(fmt(moments(size).mean));
        table.rows.push_back(std::move(row));
    }
    return table;
}

ResultTable run_cp_accuracy(const ExperimentPlan& plan) {
    plan.validate();
    ResultTable table;
    table.columns = label_columns(plan);
    for (const char* c : {"reps", "hits", "accuracy", "se", "mean_abs_error"}) {
        table.columns.emplace_back(c);
    }
    for (const auto& cell : expand_cells(plan)) {
        std::vector<double> err(plan.reps, 0.0);
        parallel_for(plan.reps, plan.threads, [&](std::size_t r) {
            const auto spec = replication_spec(cell, r);
            const auto fit = estimate_cp(simulate(spec));
            err[r] = std::abs(fit.theta_hat - spec.theta0);
        });
        const auto hits = static_cast<std::size_t>(
            std::count_if(err.begin(), err.end(), [&](double e) { return e <= plan.cp_window + 1e-12; }));
        auto row = label_values(cell);
        row.push_back(std::to_string(plan.reps));
        row.push_back(std::to_string(hits));
        const auto [rate, se] = proportion(hits, plan.reps);
        row.push_back(rate);
        row.push_back(se);
        row.push_back(fmt(moments(err).mean));
        table.rows.push_back(std::move(row));
    }
    return table;
}

ResultTable run_K_sensitivity(const ExperimentPlan& plan) {
    plan.validate();
    ResultTable table;
    table.columns = label_columns(plan);
    for (const char* c : {"K", "reps", "valid", "rejections", "rate", "se"}) {
        table.columns.emplace_back(c);
    }
    const std::size_t nk = plan.k_values.size();
    for (const auto& cell : expand_cells(plan)) {
        std::vector<TestConfig> tests;
        for (auto K : plan.k_values) {
            auto t = cell.test;
            t.K = K;
            t.threads = 1;
            resolve_quantiles(t);
            tests.push_back(t);
        }
        // outcome[r * nk + i]: -1 failure, 0 accept, 1 reject.
        std::vector<int> outcome(plan.reps * nk, -1);
        parallel_for(plan.reps, plan.threads, [&](std::size_t r) {
            TimeSeriesMatrix x;
            try {
                x = simulate(replication_spec(cell, r));
            } catch (const std::exception&) {
                return;
            }
            for (std::size_t i = 0; i < nk; ++i) {
                try {
                    outcome[r * nk + i] = run_test(x, tests[i]).reject ? 1 : 0;
                } catch (const std::exception&) {
                    outcome[r * nk + i] = -1;
                }
            }
        });
        for (std::size_t i = 0; i < nk; ++i) {
            std::size_t valid = 0, rejections = 0;
            for (std::size_t r = 0; r < plan.reps; ++r) {
                const int o = outcome[r * nk + i];
                valid += o >= 0 ? 1 : 0;
                rejections += o == 1 ? 1 : 0;
            }
            auto row = label_values(cell);
            row.push_back(std::to_string(plan.k_values[i]));
            row.push_back(std::to_string(plan.reps));
            row.push_back(std::to_string(valid));
            row.push_back(std::to_string(rejections));
            const auto [rate, se] = proportion(rejections, valid);
            row.push_back(rate);
            row.push_back(se);
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

ResultTable run_table(const ExperimentPlan& plan, TableKind kind) {
    switch (kind) {
    case TableKind::Rejection:
        return run_rejection(plan);
    case TableKind::MDistribution:
        return run_m_distribution(plan);
    case TableKind::Support:
        return run_support(plan);
    case TableKind::CpAccuracy:
        return run_cp_accuracy(plan);
    case TableKind::KSensitivity:
        return run_K_sensitivity(plan);
    }
    throw DomainError("unknown table kind");
}

std::vector<std::filesystem::path> run_plan(const ExperimentPlan& plan) {
    plan.validate();
    if (plan.outputs.empty()) {
        throw DomainError("the plan requests no outputs");
    }
    std::filesystem::create_directories(plan.out_dir);
    std::vector<std::filesystem::path> written;
    for (auto kind : plan.outputs) {
        const auto path = plan.out_dir / (table_name(kind) + ".csv");
        run_table(plan, kind).write(path);
        written.push_back(path);
    }
    const auto manifest = plan.out_dir / "manifest.txt";
    std::ofstream out(manifest, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + manifest.string() + "'");
    }
    out << "# relcpd experiment manifest\n";
    out << "version=" << version_string() << '\n';
    out << "cells=" << expand_cells(plan).size() << '\n';
    for (const auto& p : written) {
        out << "table=" << p.filename().string() << '\n';
    }
    out << "# plan\n" << plan.to_config().to_string();
    written.push_back(manifest);
    return written;
}

} // namespace relcpd
