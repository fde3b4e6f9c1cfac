#pragma once

#include "relcpd/tsdata.hpp"

#include <cstddef>
#include <filesystem>
#include <vector>

namespace relcpd {

/// Outcome of the data-adaptive trimming rule.
struct TrimSelection {
    std::size_t m1 = 0;        ///< choice for the segment before k_hat
    std::size_t m2 = 0;        ///< choice for the segment after k_hat
    std::size_t m_hat = 0;     ///< max(m1, m2)
    double cutoff = 0.01;
    std::size_t cap1 = 0;      ///< M_1 = floor(k_hat / 3)
    std::size_t cap2 = 0;      ///< M_2 = floor((n - k_hat) / 3)
    std::vector<double> delta_f1;  ///< Delta F_1(m) for m = 1..cap1 (index m-1)
    std::vector<double> delta_f2;  ///< Delta F_2(m) for m = 1..cap2
};

/// Centered trace statistic on rows [first, first + len):
///   F(m) = N_m(len)^{-1} sum_{|j1 - j2| > m} (X_j1 - Xbar)'(X_j2 - Xbar).
/// Throws DomainError when N_m(len) = 0.
double trace_stat(const TimeSeriesMatrix& x, std::size_t first, std::size_t len, std::size_t m);

/// F(0), ..., F(max_m) in one pass over the segment.
std::vector<double> trace_curve(const TimeSeriesMatrix& x, std::size_t first, std::size_t len, std::size_t max_m);

/// m^(i) = min{m <= M_i : |Delta F_i(m)| <= cutoff} - 1, falling back to M_i
/// when no lag qualifies. Throws DomainError when either cap is zero.
TrimSelection select_m(const TimeSeriesMatrix& x, std::size_t k_hat, double cutoff = 0.01);

/// m^(i) for one Delta F curve (index m-1 holds Delta F(m)).
std::size_t first_flat_lag(const std::vector<double>& delta_f, double cutoff);

/// Writes `<stem>.csv` with columns m,deltaF1,deltaF2 (shorter curve padded
/// with empty fields) and `<stem>.svg`, a line plot of both curves.
void emit_delta_f(const TrimSelection& selection, const std::filesystem::path& stem);

/// Reads back the CSV written by `emit_delta_f`.
void read_delta_f(const std::filesystem::path& csv, std::vector<double>& delta_f1, std::vector<double>& delta_f2);

} // namespace relcpd
