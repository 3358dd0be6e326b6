#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace tcdyn {

/// Comma-separated table with a fixed header; values in full-precision
/// scientific notation (%.17e), one flushed line per row.
class CsvWriter {
 public:
  /// Truncates the file and writes the header, or with `append` keeps the
  /// existing content (whose header must match).
  CsvWriter(const std::string& path, const std::vector<std::string>& header, bool append = false);

  void row(const std::vector<double>& values);
  /// Current size of the file in bytes.
  std::uint64_t bytes();
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::size_t columns_;
  std::ofstream out_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  /// Column by name; throws std::out_of_range if absent.
  std::vector<double> column(const std::string& name) const;
};
CsvTable read_csv(const std::string& path);

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};

/// Static line plot; non-positive values are skipped on a log axis.
void write_svg_plot(const std::string& path, const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, const std::vector<PlotSeries>& series, bool log_y = false);

}  // namespace tcdyn
