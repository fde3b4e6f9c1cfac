#pragma once

#include "relcpd/dgp.hpp"
#include "relcpd/keyvalue.hpp"
#include "relcpd/relevance.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace relcpd {

enum class TableKind { Rejection, MDistribution, Support, CpAccuracy, KSensitivity };

std::string table_name(TableKind kind);
/// rejection, m_distribution, support, cp_accuracy, k_sensitivity.
TableKind parse_table_kind(const std::string& name);

/// One swept parameter and its values, kept as text so that model names and
/// numbers share a representation.
struct SweepAxis {
    std::string name;
    std::vector<std::string> values;
};

/// Names accepted on a sweep axis. Data-generating names: model, spatial, n,
/// p, s, sp, signal, theta0, mu. Test names: K, delta, alpha, test, m, kappa.
const std::vector<std::string>& sweepable_names();
bool is_dgp_name(const std::string& name);

/// A simulation study: a design template, a cartesian grid of cells, and the
/// tables to produce.
///
/// Key=value form: `outputs=rejection,support`, the DGPSpec keys, `reps`,
/// `seed`, `alpha`, `delta`, `test`, `K`, `m`, `kappa`, `cp_window`,
/// `k_values`, `quantile_reps`, `quantile_seed`, `threads`, `out`, and
/// `sweep.<name>=v1,v2,...` (axes vary in name order, last fastest).
/// Without `s` or `sp` the shift covers every coordinate (sp = 1).
struct ExperimentPlan {
    DGPSpec dgp;
    std::optional<double> sp = 1.0;              ///< s/p applied after p; unset when `s` is fixed
    std::vector<SweepAxis> sweep;
    std::size_t reps = 200;
    std::uint64_t seed = 1;
    TestConfig test;                              ///< delta, alpha, K, norm, m, kappa
    std::vector<TableKind> outputs;
    double cp_window = 0.05;                      ///< |theta_hat - theta0| tolerance
    std::vector<std::size_t> k_values{10, 15, 20, 25};
    std::size_t threads = 1;
    std::filesystem::path out_dir = "experiment_out";

    /// Throws DomainError (reps < 1, unknown sweep name, ...).
    void validate() const;
    static ExperimentPlan from_config(const KeyValueConfig& cfg);
    KeyValueConfig to_config() const;
};

/// A fully resolved cell of the sweep.
struct Cell {
    std::vector<std::pair<std::string, std::string>> labels;  ///< swept name, value
    DGPSpec dgp;
    TestConfig test;
    std::uint64_t data_seed = 0;  ///< derived from the plan seed and the data-generating labels only
};

/// Cartesian product of the sweep axes applied to the template. No axes
/// gives one cell; an axis without values gives none.
std::vector<Cell> expand_cells(const ExperimentPlan& plan);

/// The DGP of replication `rep` in `cell`.
DGPSpec replication_spec(const Cell& cell, std::size_t rep);

/// Rectangular text table written as CSV.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const;
    void write(const std::filesystem::path& path) const;
};

/// Marker written where a quantity is undefined (for example a standard
/// error from one replication).
inline constexpr const char* kUndefined = "NA";

/// Fraction of replications where the configured test rejects, with the
/// binomial standard error. Failing replications are counted and excluded.
ResultTable run_rejection(const ExperimentPlan& plan);
/// Mean of m_hat and P(m_hat >= j) for j = 2, 4, ..., 18.
ResultTable run_m_distribution(const ExperimentPlan& plan);
/// Mean precision, recall and F-score of the support estimate.
ResultTable run_support(const ExperimentPlan& plan);
/// Fraction of replications with |theta_hat - theta0| <= cp_window.
ResultTable run_cp_accuracy(const ExperimentPlan& plan);
/// Rejection rates for each K in plan.k_values on shared data.
ResultTable run_K_sensitivity(const ExperimentPlan& plan);

ResultTable run_table(const ExperimentPlan& plan, TableKind kind);

/// Runs every requested table, writes `<out_dir>/<table>.csv` and
/// `<out_dir>/manifest.txt`, and returns the written paths.
std::vector<std::filesystem::path> run_plan(const ExperimentPlan& plan);

} // namespace relcpd
