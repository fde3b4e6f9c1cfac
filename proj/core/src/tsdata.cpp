#include "relcpd/tsdata.hpp"

#include "relcpd/error.hpp"
#include "relcpd/keyvalue.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace relcpd {

TimeSeriesMatrix::TimeSeriesMatrix(std::size_t n, std::size_t p, double fill)
    : n_(n), p_(p), values_(n * p, fill) {}

TimeSeriesMatrix::TimeSeriesMatrix(std::size_t n, std::size_t p, std::vector<double> values)
    : n_(n), p_(p), values_(std::move(values)) {
    if (values_.size() != n_ * p_) {
        throw DomainError("TimeSeriesMatrix: value count does not match n*p");
    }
}

std::vector<double> TimeSeriesMatrix::column(std::size_t l) const {
    std::vector<double> out(n_);
    for (std::size_t j = 0; j < n_; ++j) {
        out[j] = (*this)(j, l);
    }
    return out;
}

bool TimeSeriesMatrix::has_missing() const noexcept {
    return std::any_of(values_.begin(), values_.end(), [](double v) { return std::isnan(v); });
}

bool TimeSeriesMatrix::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

TimeSeriesMatrix TimeSeriesMatrix::rows(std::size_t first, std::size_t count) const {
    if (first + count > n_) {
        throw DomainError("TimeSeriesMatrix::rows: range exceeds n");
    }
    std::vector<double> v(values_.begin() + static_cast<std::ptrdiff_t>(first * p_),
                          values_.begin() + static_cast<std::ptrdiff_t>((first + count) * p_));
    return TimeSeriesMatrix(count, p_, std::move(v));
}

TimeSeriesMatrix TimeSeriesMatrix::select_columns(std::span<const std::size_t> cols) const {
    TimeSeriesMatrix out(n_, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c] >= p_) {
            throw DomainError("TimeSeriesMatrix::select_columns: column out of range");
        }
    }
    for (std::size_t j = 0; j < n_; ++j) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            out(j, c) = (*this)(j, cols[c]);
        }
    }
    return out;
}

bool operator==(const TimeSeriesMatrix& a, const TimeSeriesMatrix& b) noexcept {
    if (a.n_ != b.n_ || a.p_ != b.p_) {
        return false;
    }
    // Bitwise comparison so missing markers compare equal to each other.
    for (std::size_t i = 0; i < a.values_.size(); ++i) {
        double x = a.values_[i];
        double y = b.values_[i];
        if (std::isnan(x) && std::isnan(y)) {
            continue;
        }
        if (x != y) {
            return false;
        }
    }
    return true;
}

namespace {

bool is_missing_token(const std::string& token) {
    if (token.empty()) {
        return true;
    }
    std::string lower = token;
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    return lower == "na" || lower == "nan";
}

} // namespace

TimeSeriesMatrix parse_csv(const std::string& text, bool has_header) {
    std::vector<double> values;
    std::size_t width = 0;
    std::size_t rows = 0;
    bool header_pending = has_header;

    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (header_pending) {
            header_pending = false;
            continue;
        }
        if (trim(line).empty()) {
            continue;
        }
        auto fields = split(line, ',');
        std::size_t row_no = rows + 1;
        if (rows == 0) {
            width = fields.size();
        } else if (fields.size() != width) {
            throw ParseError("row " + std::to_string(row_no) + ": expected " + std::to_string(width) +
                             " fields, found " + std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            std::string token = trim(fields[c]);
            if (is_missing_token(token)) {
                values.push_back(TimeSeriesMatrix::missing());
                continue;
            }
            try {
                values.push_back(parse_double(token, "CSV field"));
            } catch (const ParseError&) {
                throw ParseError("row " + std::to_string(row_no) + ", column " + std::to_string(c + 1) +
                                 ": non-numeric token '" + token + "'");
            }
        }
        ++rows;
    }
    if (rows == 0 || width == 0) {
        throw DataError("CSV input contains no data rows");
    }
    return TimeSeriesMatrix(rows, width, std::move(values));
}

TimeSeriesMatrix load_csv(const std::filesystem::path& path, bool has_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path.string() + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str(), has_header);
}

TimeSeriesMatrix preprocess(const TimeSeriesMatrix& x, const PreprocessPolicy& policy) {
    TimeSeriesMatrix out = x;
    const std::size_t n = x.n();
    for (std::size_t l = 0; l < x.p(); ++l) {
        std::vector<std::size_t> observed;
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isnan(x(j, l))) {
                observed.push_back(j);
            }
        }
        if (observed.size() != n) {
            if (!policy.interpolate_missing) {
                throw DataError("column " + std::to_string(l + 1) +
                                " has missing values and interpolation is disabled");
            }
            if (observed.empty()) {
                throw DataError("column " + std::to_string(l + 1) + " has no observed values");
            }
            for (std::size_t j = 0; j < observed.front(); ++j) {
                out(j, l) = x(observed.front(), l);
            }
            for (std::size_t j = observed.back() + 1; j < n; ++j) {
                out(j, l) = x(observed.back(), l);
            }
            for (std::size_t i = 0; i + 1 < observed.size(); ++i) {
                std::size_t a = observed[i];
                std::size_t b = observed[i + 1];
                if (b == a + 1) {
                    continue;
                }
                const double va = x(a, l);
                const double vb = x(b, l);
                const double span = static_cast<double>(b - a);
                for (std::size_t j = a + 1; j < b; ++j) {
                    const double w = static_cast<double>(j - a) / span;
                    out(j, l) = va + w * (vb - va);
                }
            }
        }
        if (policy.zero_negatives) {
            for (std::size_t j = 0; j < n; ++j) {
                if (out(j, l) < 0.0) {
                    out(j, l) = 0.0;
                }
            }
        }
    }
    return out;
}

void write_csv(const TimeSeriesMatrix& x, std::ostream& out, const std::vector<std::string>& header) {
    if (!header.empty()) {
        for (std::size_t c = 0; c < header.size(); ++c) {
            out << (c ? "," : "") << header[c];
        }
        out << '\n';
    }
    for (std::size_t j = 0; j < x.n(); ++j) {
        for (std::size_t l = 0; l < x.p(); ++l) {
            if (l) {
                out << ',';
            }
            double v = x(j, l);
            if (!std::isnan(v)) {
                out << format_double(v);
            }
        }
        out << '\n';
    }
}

void write_csv(const TimeSeriesMatrix& x, const std::filesystem::path& path,
               const std::vector<std::string>& header) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    write_csv(x, out, header);
    if (!out) {
        throw Error("write failed for '" + path.string() + "'");
    }
}

} // namespace relcpd
