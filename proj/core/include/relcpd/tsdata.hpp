#pragma once

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace relcpd {

/// Dense n x p observation matrix, row-major, rows are time points.
///
/// Entries may hold `missing()` (a quiet NaN) until the matrix has been run
/// through `preprocess`. Statistics assume every entry is finite.
class TimeSeriesMatrix {
public:
    TimeSeriesMatrix() = default;
    TimeSeriesMatrix(std::size_t n, std::size_t p, double fill = 0.0);
    TimeSeriesMatrix(std::size_t n, std::size_t p, std::vector<double> values);

    static constexpr double missing() noexcept { return std::numeric_limits<double>::quiet_NaN(); }

    std::size_t n() const noexcept { return n_; }
    std::size_t p() const noexcept { return p_; }
    bool empty() const noexcept { return n_ == 0 || p_ == 0; }

    double operator()(std::size_t j, std::size_t l) const noexcept { return values_[j * p_ + l]; }
    double& operator()(std::size_t j, std::size_t l) noexcept { return values_[j * p_ + l]; }

    std::span<const double> row(std::size_t j) const noexcept { return {values_.data() + j * p_, p_}; }
    std::span<double> row(std::size_t j) noexcept { return {values_.data() + j * p_, p_}; }

    std::vector<double> column(std::size_t l) const;
    const std::vector<double>& values() const noexcept { return values_; }

    bool has_missing() const noexcept;
    bool all_finite() const noexcept;

    /// Rows [first, first + count).
    TimeSeriesMatrix rows(std::size_t first, std::size_t count) const;
    /// Keeps the listed columns, in the listed order.
    TimeSeriesMatrix select_columns(std::span<const std::size_t> cols) const;

    friend bool operator==(const TimeSeriesMatrix& a, const TimeSeriesMatrix& b) noexcept;

private:
    std::size_t n_ = 0;
    std::size_t p_ = 0;
    std::vector<double> values_;
};

struct PreprocessPolicy {
    bool interpolate_missing = true;
    bool zero_negatives = false;
};

/// Parses a comma-separated file. Empty fields and NA/NaN tokens (any case)
/// become `TimeSeriesMatrix::missing()`.
///
/// Throws ParseError on ragged rows or non-numeric tokens (row numbers are
/// 1-based and count data rows), DataError when nothing remains.
TimeSeriesMatrix load_csv(const std::filesystem::path& path, bool has_header);
TimeSeriesMatrix parse_csv(const std::string& text, bool has_header);

/// Interior gaps are filled by linear interpolation, leading and trailing
/// gaps by the nearest observed value; negatives are then clamped to zero
/// when requested. Throws DataError naming the first fully missing column.
TimeSeriesMatrix preprocess(const TimeSeriesMatrix& x, const PreprocessPolicy& policy);

/// Writes the matrix with full round-trip precision.
void write_csv(const TimeSeriesMatrix& x, const std::filesystem::path& path,
               const std::vector<std::string>& header = {});
void write_csv(const TimeSeriesMatrix& x, std::ostream& out, const std::vector<std::string>& header = {});

} // namespace relcpd
