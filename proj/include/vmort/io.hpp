#ifndef VMORT_IO_HPP
#define VMORT_IO_HPP

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace vmort {

// Shortest round-trip decimal representation (bitwise reproducible output
// regardless of locale or thread count).
std::string format_double(double v);

// CSV with a mandatory header row and a trailing metadata comment line
// recording the config hash and master seed.
class CsvWriter {
public:
    CsvWriter(const std::string& file, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);
    void row_values(const std::vector<double>& cells);
    void finish(std::uint64_t config_hash, std::uint64_t seed);
    ~CsvWriter();

private:
    std::ofstream out_;
    std::size_t n_cols_;
    bool finished_ = false;
};

// Minimal native SVG plotting for the experiment outputs.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

void write_line_chart(const std::string& file, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<PlotSeries>& series);

void write_histogram(const std::string& file, const std::string& title,
                     const std::string& x_label, const std::vector<double>& values, int n_bins);

std::uint64_t fnv1a_hash(const std::string& bytes);

} // namespace vmort

#endif
