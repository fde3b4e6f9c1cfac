#include "relcpd/setestim.hpp"

#include "relcpd/error.hpp"
#include "relcpd/keyvalue.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace relcpd {

bool SetEstimate::contains(std::size_t l) const {
    return std::binary_search(s_hat.begin(), s_hat.end(), l);
}

CoordinateSequence delta_seq_all(const TimeSeriesMatrix& x, std::size_t k_hat, std::size_t m,
                                 std::span<const double> grid, std::size_t threads) {
    return coordinate_sequence(x, k_hat, m, grid, threads);
}

double support_threshold(std::size_t p, double kappa) {
    if (p < 2) {
        throw DomainError("support threshold needs p >= 2");
    }
    return std::pow(std::log(static_cast<double>(p)), kappa);
}

SetEstimate estimate_set(const CoordinateSequence& seq, const NuMeasure& nu, double kappa) {
    if (seq.p < 2) {
        throw DomainError("set estimation needs p >= 2; use the dense test for a single coordinate");
    }
    if (!(kappa > 1.0)) {
        throw DomainError("set estimation exponent kappa must exceed 1");
    }
    SetEstimate est;
    est.threshold = support_threshold(seq.p, kappa);
    est.delta_sq = seq.full;
    est.v_ell.resize(seq.p);
    for (std::size_t l = 0; l < seq.p; ++l) {
        const auto values = seq.coordinate(l);
        est.v_ell[l] = v_ell(values, seq.grid, seq.full[l], nu);
        if (est.delta_sq[l] > est.v_ell[l] * est.threshold) {
            est.s_hat.push_back(l);
        }
    }
    return est;
}

SetEstimate estimate_S(const TimeSeriesMatrix& x, std::size_t k_hat, std::size_t m, std::size_t grid_K, double kappa,
                       std::size_t threads) {
    if (x.p() < 2) {
        throw DomainError("set estimation needs p >= 2; use the dense test for a single coordinate");
    }
    NuMeasure nu(grid_K);
    const auto grid = nu.grid_with_one();
    return estimate_set(delta_seq_all(x, k_hat, m, grid, threads), nu, kappa);
}

SupportMetrics support_metrics(std::span<const std::size_t> truth, std::span<const std::size_t> estimate) {
    std::set<std::size_t> s(truth.begin(), truth.end());
    std::set<std::size_t> e(estimate.begin(), estimate.end());
    std::size_t hits = 0;
    for (auto v : e) {
        hits += s.count(v);
    }
    SupportMetrics out;
    if (e.empty()) {
        out.precision = s.empty() ? 1.0 : 0.0;
    } else {
        out.precision = static_cast<double>(hits) / static_cast<double>(e.size());
    }
    out.recall = s.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(s.size());
    const double denom = out.precision + out.recall;
    out.f_score = denom > 0.0 ? 2.0 * out.precision * out.recall / denom : 0.0;
    return out;
}

void write_set_csv(const SetEstimate& est, std::ostream& out) {
    out << "coordinate,delta_sq,v_ell,member\n";
    for (std::size_t l = 0; l < est.delta_sq.size(); ++l) {
        out << (l + 1) << ',' << format_double(est.delta_sq[l]) << ',' << format_double(est.v_ell[l]) << ','
            << (est.contains(l) ? 1 : 0) << '\n';
    }
}

void write_set_csv(const SetEstimate& est, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    write_set_csv(est, out);
    if (!out) {
        throw Error("write failed for '" + path.string() + "'");
    }
}

} // namespace relcpd
