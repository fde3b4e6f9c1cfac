#include "relcpd/trim.hpp"

#include "relcpd/error.hpp"
#include "relcpd/keyvalue.hpp"
#include "relcpd/ustat.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace relcpd {

std::vector<double> trace_curve(const TimeSeriesMatrix& x, std::size_t first, std::size_t len, std::size_t max_m) {
    if (first + len > x.n()) {
        throw DomainError("trace_stat: segment exceeds the sample");
    }
    if (pair_count(static_cast<long long>(len), static_cast<long long>(max_m)) == 0) {
        throw DomainError("trace_stat: segment of length " + std::to_string(len) + " has no pairs at lag > " +
                          std::to_string(max_m));
    }
    const std::size_t p = x.p();
    std::vector<double> mean(p, 0.0);
    for (std::size_t j = first; j < first + len; ++j) {
        const auto row = x.row(j);
        for (std::size_t l = 0; l < p; ++l) {
            mean[l] += row[l];
        }
    }
    for (auto& v : mean) {
        v /= static_cast<double>(len);
    }

    // Centered rows, then S = ||sum y||^2 - gamma_0 - 2 sum_{h=1}^{m} gamma_h.
    std::vector<double> y(len * p);
    std::vector<double> colsum(p, 0.0);
    for (std::size_t j = 0; j < len; ++j) {
        const auto row = x.row(first + j);
        for (std::size_t l = 0; l < p; ++l) {
            y[j * p + l] = row[l] - mean[l];
            colsum[l] += y[j * p + l];
        }
    }
    double total = 0.0;
    for (double v : colsum) {
        total += v * v;
    }
    std::vector<double> gamma(max_m + 1, 0.0);
    for (std::size_t h = 0; h <= max_m; ++h) {
        double acc = 0.0;
        for (std::size_t j = 0; j + h < len; ++j) {
            const double* a = &y[j * p];
            const double* b = &y[(j + h) * p];
            for (std::size_t l = 0; l < p; ++l) {
                acc += a[l] * b[l];
            }
        }
        gamma[h] = acc;
    }

    std::vector<double> f(max_m + 1);
    double near = gamma[0];
    for (std::size_t m = 0; m <= max_m; ++m) {
        if (m > 0) {
            near += 2.0 * gamma[m];
        }
        const double pairs = static_cast<double>(pair_count(static_cast<long long>(len), static_cast<long long>(m)));
        f[m] = (total - near) / pairs;
    }
    return f;
}

double trace_stat(const TimeSeriesMatrix& x, std::size_t first, std::size_t len, std::size_t m) {
    return trace_curve(x, first, len, m).back();
}

std::size_t first_flat_lag(const std::vector<double>& delta_f, double cutoff) {
    for (std::size_t m = 1; m <= delta_f.size(); ++m) {
        if (std::abs(delta_f[m - 1]) <= cutoff) {
            return m - 1;
        }
    }
    return delta_f.size();
}

TrimSelection select_m(const TimeSeriesMatrix& x, std::size_t k_hat, double cutoff) {
    const std::size_t n = x.n();
    if (k_hat < 1 || k_hat >= n) {
        throw DomainError("select_m: k_hat must lie in {1, ..., n-1}");
    }
    if (!(cutoff >= 0.0)) {
        throw DomainError("select_m: cutoff must be nonnegative");
    }
    TrimSelection sel;
    sel.cutoff = cutoff;
    sel.cap1 = k_hat / 3;
    sel.cap2 = (n - k_hat) / 3;
    if (sel.cap1 < 1 || sel.cap2 < 1) {
        throw DomainError("select_m: segments of length " + std::to_string(k_hat) + " and " +
                          std::to_string(n - k_hat) + " are too short (need at least 3 rows each)");
    }
    auto deltas = [&](std::size_t first, std::size_t len, std::size_t cap) {
        const auto f = trace_curve(x, first, len, cap);
        std::vector<double> d(cap);
        for (std::size_t m = 1; m <= cap; ++m) {
            d[m - 1] = f[m] - f[m - 1];
        }
        return d;
    };
    sel.delta_f1 = deltas(0, k_hat, sel.cap1);
    sel.delta_f2 = deltas(k_hat, n - k_hat, sel.cap2);
    sel.m1 = first_flat_lag(sel.delta_f1, cutoff);
    sel.m2 = first_flat_lag(sel.delta_f2, cutoff);
    sel.m_hat = std::max(sel.m1, sel.m2);
    return sel;
}

namespace {

std::string svg_polyline(const std::vector<double>& ys, double x0, double y0, double w, double h, std::size_t max_m,
                         double lo, double hi, const char* colour) {
    std::ostringstream os;
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double px = x0 + w * static_cast<double>(i + 1) / static_cast<double>(std::max<std::size_t>(max_m, 1));
        const double py = y0 + h - h * (ys[i] - lo) / (hi - lo);
        os << (i ? " " : "") << px << ',' << py;
    }
    os << "\"/>\n";
    return os.str();
}

} // namespace

void emit_delta_f(const TrimSelection& selection, const std::filesystem::path& stem) {
    if (selection.delta_f1.empty() && selection.delta_f2.empty()) {
        throw DomainError("emit_delta_f: selection holds no Delta F values");
    }
    const std::size_t rows = std::max(selection.delta_f1.size(), selection.delta_f2.size());

    auto csv_path = stem;
    csv_path += ".csv";
    {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) {
            throw Error("cannot write '" + csv_path.string() + "'");
        }
        out << "m,deltaF1,deltaF2\n";
        for (std::size_t i = 0; i < rows; ++i) {
            out << (i + 1) << ',';
            if (i < selection.delta_f1.size()) {
                out << format_double(selection.delta_f1[i]);
            }
            out << ',';
            if (i < selection.delta_f2.size()) {
                out << format_double(selection.delta_f2[i]);
            }
            out << '\n';
        }
        if (!out) {
            throw Error("write failed for '" + csv_path.string() + "'");
        }
    }

    double lo = std::min(0.0, -selection.cutoff);
    double hi = std::max(0.0, selection.cutoff);
    for (const auto* curve : {&selection.delta_f1, &selection.delta_f2}) {
        for (double v : *curve) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (hi - lo < 1e-12) {
        hi = lo + 1.0;
    }
    const double width = 640, height = 400, left = 60, top = 20, pw = 560, ph = 340;
    auto ypos = [&](double v) { return top + ph - ph * (v - lo) / (hi - lo); };

    auto svg_path = stem;
    svg_path += ".svg";
    std::ofstream svg(svg_path, std::ios::binary);
    if (!svg) {
        throw Error("cannot write '" + svg_path.string() + "'");
    }
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    // zero line and +/- cutoff band
    svg << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << ypos(0.0) << "\" y2=\"" << ypos(0.0)
        << "\" stroke=\"grey\"/>\n";
    for (double c : {selection.cutoff, -selection.cutoff}) {
        svg << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << ypos(c) << "\" y2=\"" << ypos(c)
            << "\" stroke=\"grey\" stroke-dasharray=\"4,3\"/>\n";
    }
    svg << svg_polyline(selection.delta_f1, left, top, pw, ph, rows, lo, hi, "steelblue");
    svg << svg_polyline(selection.delta_f2, left, top, pw, ph, rows, lo, hi, "darkorange");
    svg << "<text x=\"" << left << "\" y=\"" << height - 10 << "\" font-size=\"12\">m = 1.." << rows
        << "   blue: DeltaF1   orange: DeltaF2   dashed: +/- cutoff</text>\n";
    svg << "<text x=\"4\" y=\"" << top + 10 << "\" font-size=\"10\">" << format_double(hi) << "</text>\n";
    svg << "<text x=\"4\" y=\"" << top + ph << "\" font-size=\"10\">" << format_double(lo) << "</text>\n";
    svg << "</svg>\n";
    if (!svg) {
        throw Error("write failed for '" + svg_path.string() + "'");
    }
}

void read_delta_f(const std::filesystem::path& csv, std::vector<double>& delta_f1, std::vector<double>& delta_f2) {
    std::ifstream in(csv, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + csv.string() + "'");
    }
    delta_f1.clear();
    delta_f2.clear();
    std::string line;
    std::getline(in, line);
    if (trim(line) != "m,deltaF1,deltaF2") {
        throw ParseError("'" + csv.string() + "' is not a Delta F table");
    }
    while (std::getline(in, line)) {
        if (trim(line).empty()) {
            continue;
        }
        auto fields = split(line, ',');
        if (fields.size() != 3) {
            throw ParseError("Delta F table row must have 3 fields");
        }
        if (!trim(fields[1]).empty()) {
            delta_f1.push_back(parse_double(fields[1], "deltaF1"));
        }
        if (!trim(fields[2]).empty()) {
            delta_f2.push_back(parse_double(fields[2], "deltaF2"));
        }
    }
}

} // namespace relcpd
