#include "vmort/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "vmort/errors.hpp"

namespace vmort {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::uint64_t fnv1a_hash(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

CsvWriter::CsvWriter(const std::string& file, const std::vector<std::string>& header)
    : out_(file), n_cols_(header.size()) {
    if (!out_) throw InputError("CsvWriter: cannot open " + file);
    for (std::size_t i = 0; i < header.size(); ++i)
        out_ << header[i] << (i + 1 < header.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != n_cols_) throw InputError("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i)
        out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

void CsvWriter::row_values(const std::vector<double>& cells) {
    std::vector<std::string> s(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) s[i] = format_double(cells[i]);
    row(s);
}

void CsvWriter::finish(std::uint64_t config_hash, std::uint64_t seed) {
    char line[80];
    std::snprintf(line, sizeof(line), "# config_hash=%016llx seed=%llu\n",
                  static_cast<unsigned long long>(config_hash),
                  static_cast<unsigned long long>(seed));
    out_ << line;
    finished_ = true;
}

CsvWriter::~CsvWriter() {
    if (!finished_) out_ << "# config_hash=0 seed=0\n";
}

namespace {

constexpr int kW = 760, kH = 480, kMargin = 60;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Range {
    double lo = 0.0, hi = 1.0;
    double map(double v, double a, double b) const {
        const double w = hi > lo ? (v - lo) / (hi - lo) : 0.5;
        return a + w * (b - a);
    }
};

Range find_range(const std::vector<double>& vals) {
    Range r{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
    for (double v : vals)
        if (std::isfinite(v)) {
            r.lo = std::min(r.lo, v);
            r.hi = std::max(r.hi, v);
        }
    if (!(r.hi > r.lo)) {
        r.lo -= 0.5;
        r.hi += 0.5;
    }
    const double pad = 0.04 * (r.hi - r.lo);
    r.lo -= pad;
    r.hi += pad;
    return r;
}

void svg_head(std::ofstream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
        << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
           "font-family=\"sans-serif\">"
        << title << "</text>\n";
}

void svg_axes(std::ofstream& out, const Range& rx, const Range& ry, const std::string& xl,
              const std::string& yl) {
    out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kW - 2 * kMargin
        << "\" height=\"" << kH - 2 * kMargin
        << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = rx.lo + (rx.hi - rx.lo) * i / 4.0;
        const double px = kMargin + (kW - 2.0 * kMargin) * i / 4.0;
        out << "<text x=\"" << px << "\" y=\"" << kH - kMargin + 18
            << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
            << format_double(std::round(fx * 1e4) / 1e4) << "</text>\n";
        const double fy = ry.lo + (ry.hi - ry.lo) * i / 4.0;
        const double py = kH - kMargin - (kH - 2.0 * kMargin) * i / 4.0;
        out << "<text x=\"" << kMargin - 6 << "\" y=\"" << py + 4
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
            << format_double(std::round(fy * 1e4) / 1e4) << "</text>\n";
    }
    out << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << xl
        << "</text>\n"
        << "<text x=\"16\" y=\"" << kH / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
           "transform=\"rotate(-90 16 "
        << kH / 2 << ")\">" << yl << "</text>\n";
}

} // namespace

void write_line_chart(const std::string& file, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<PlotSeries>& series) {
    std::ofstream out(file);
    if (!out) throw InputError("write_line_chart: cannot open " + file);
    std::vector<double> all_x, all_y;
    for (const auto& s : series) {
        all_x.insert(all_x.end(), s.x.begin(), s.x.end());
        all_y.insert(all_y.end(), s.y.begin(), s.y.end());
    }
    const Range rx = find_range(all_x), ry = find_range(all_y);
    svg_head(out, title);
    svg_axes(out, rx, ry, x_label, y_label);
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kColors[si % 6];
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double px = rx.map(s.x[i], kMargin, kW - kMargin);
            const double py = ry.map(s.y[i], kH - kMargin, kMargin);
            out << format_double(std::round(px * 100) / 100) << ','
                << format_double(std::round(py * 100) / 100) << ' ';
        }
        out << "\"/>\n";
        out << "<text x=\"" << kW - kMargin - 6 << "\" y=\"" << kMargin + 16 + 16 * si
            << "\" text-anchor=\"end\" font-size=\"12\" font-family=\"sans-serif\" fill=\""
            << color << "\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

void write_histogram(const std::string& file, const std::string& title,
                     const std::string& x_label, const std::vector<double>& values, int n_bins) {
    std::ofstream out(file);
    if (!out) throw InputError("write_histogram: cannot open " + file);
    if (values.empty() || n_bins < 1) throw InputError("write_histogram: empty input");
    const Range rx = find_range(values);
    std::vector<double> counts(n_bins, 0.0);
    for (double v : values) {
        int b = static_cast<int>((v - rx.lo) / (rx.hi - rx.lo) * n_bins);
        b = std::clamp(b, 0, n_bins - 1);
        counts[b] += 1.0;
    }
    Range ry{0.0, *std::max_element(counts.begin(), counts.end()) * 1.05};
    svg_head(out, title);
    svg_axes(out, rx, ry, x_label, "count");
    const double bw = (kW - 2.0 * kMargin) / n_bins;
    for (int b = 0; b < n_bins; ++b) {
        const double x = kMargin + b * bw;
        const double top = ry.map(counts[b], kH - kMargin, kMargin);
        out << "<rect x=\"" << format_double(std::round(x * 100) / 100) << "\" y=\""
            << format_double(std::round(top * 100) / 100) << "\" width=\""
            << format_double(std::round(bw * 90) / 100) << "\" height=\""
            << format_double(std::round((kH - kMargin - top) * 100) / 100)
            << "\" fill=\"#1f77b4\" opacity=\"0.8\"/>\n";
    }
    out << "</svg>\n";
}

} // namespace vmort
