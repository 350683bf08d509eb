#include "csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace gfkit {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_grid_function_csv(const std::string& path, const GridFunction& f) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "x,value\n";
  for (int i = 0; i < f.size(); ++i)
    out << format_double(f.grid.node(i)) << ',' << format_double(f[i]) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

GridFunction read_grid_function_csv(const std::string& path, const Grid& grid) {
  CsvTable table = read_csv(path);
  const int xc = table.column("x");
  const int vc = table.column("value");
  if (xc < 0 || vc < 0) throw IoError(path + ": expected columns x,value");
  if (static_cast<int>(table.rows.size()) != grid.n_nodes())
    throw IoError(path + ": row count does not match the grid");
  GridFunction out = make_grid_function(grid);
  for (int i = 0; i < grid.n_nodes(); ++i) {
    const auto& row = table.rows[static_cast<size_t>(i)];
    if (std::abs(row[static_cast<size_t>(xc)] - grid.node(i)) >
        1e-9 * std::max(1.0, grid.x_max()))
      throw IoError(path + ": x column does not match the grid nodes");
    out[i] = row[static_cast<size_t>(vc)];
  }
  return out;
}

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty file");
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) table.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(cell.empty() ? std::nan("") : std::stod(cell));
      } catch (const std::exception&) {
        throw IoError(path + ": non-numeric cell '" + cell + "'");
      }
    }
    if (row.size() != table.header.size())
      throw IoError(path + ": ragged row");
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace gfkit
