#include "relcpd/cpoint.hpp"

#include "relcpd/error.hpp"

namespace relcpd {

std::vector<double> cusum_criterion(const TimeSeriesMatrix& x) {
    const std::size_t n = x.n();
    const std::size_t p = x.p();
    if (n < 2 || p == 0) {
        throw DomainError("estimate_cp requires n >= 2 and p >= 1");
    }
    const auto ref = x.row(0);
    std::vector<double> total(p, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const auto row = x.row(j);
        for (std::size_t l = 0; l < p; ++l) {
            total[l] += row[l] - ref[l];
        }
    }

    std::vector<double> crit(n - 1, 0.0);
    std::vector<double> head(p, 0.0);
    const double nd = static_cast<double>(n);
    for (std::size_t k = 1; k < n; ++k) {
        const auto row = x.row(k - 1);
        for (std::size_t l = 0; l < p; ++l) {
            head[l] += row[l] - ref[l];
        }
        const double kd = static_cast<double>(k);
        const double w = kd * (nd - kd) / (nd * nd);
        double acc = 0.0;
        for (std::size_t l = 0; l < p; ++l) {
            const double diff = head[l] / kd - (total[l] - head[l]) / (nd - kd);
            acc += diff * diff;
        }
        crit[k - 1] = w * w * acc;
    }
    return crit;
}

ChangeFit estimate_cp(const TimeSeriesMatrix& x) {
    const auto crit = cusum_criterion(x);
    ChangeFit fit;
    fit.k_hat = 1;
    fit.objective = crit[0];
    for (std::size_t k = 2; k <= crit.size(); ++k) {
        if (crit[k - 1] > fit.objective) {
            fit.objective = crit[k - 1];
            fit.k_hat = k;
        }
    }
    fit.theta_hat = static_cast<double>(fit.k_hat) / static_cast<double>(x.n());
    return fit;
}

} // namespace relcpd
