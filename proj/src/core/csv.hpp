#pragma once

#include <string>
#include <vector>

#include "grid.hpp"

namespace gfkit {

/// Fixed 17-significant-digit decimal formatting; byte-stable round-trips.
std::string format_double(double v);

/// Two-column "x,value" file.
void write_grid_function_csv(const std::string& path, const GridFunction& f);

/// Reads "x,value" and validates the x column against the grid nodes.
GridFunction read_grid_function_csv(const std::string& path, const Grid& grid);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a named column, -1 when absent.
  int column(const std::string& name) const;
};

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

CsvTable read_csv(const std::string& path);

}  // namespace gfkit
