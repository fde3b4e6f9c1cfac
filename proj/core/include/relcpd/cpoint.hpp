#pragma once

#include "relcpd/tsdata.hpp"

#include <cstddef>
#include <vector>

namespace relcpd {

/// Location estimate for a single mean change.
struct ChangeFit {
    std::size_t k_hat = 0;   ///< size of the first segment, in {1, ..., n-1}
    double theta_hat = 0.0;  ///< k_hat / n
    double objective = 0.0;  ///< criterion value at k_hat
};

/// Weighted CUSUM criterion
///   C(k) = || k(n-k)/n^2 * (mean(X_1..X_k) - mean(X_{k+1}..X_n)) ||^2
/// for k = 1..n-1 (index k-1 of the result). O(n p).
std::vector<double> cusum_criterion(const TimeSeriesMatrix& x);

/// argmax of `cusum_criterion`, smallest k on ties. Throws DomainError for n < 2.
ChangeFit estimate_cp(const TimeSeriesMatrix& x);

} // namespace relcpd
