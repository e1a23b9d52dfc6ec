#pragma once

#include <string>
#include <vector>

namespace holopush {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

// Throws Error(Io, "cli.figures", ...) when the file is missing or malformed.
CsvTable read_csv(const std::string& path);

// Plot bodies; each returns a complete SVG document.
std::string boundary_residual_svg(const CsvTable& boundary);
std::string curves_heatmap_svg(const CsvTable& curves);
std::string image_projections_svg(const CsvTable& boundary);

// Reads boundary.csv and curves.csv from dir and writes the three SVGs to dir/figures.
// Returns the written file names.
std::vector<std::string> write_figures(const std::string& dir);

}  // namespace holopush
