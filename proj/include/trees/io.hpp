#pragma once

#include <string>
#include <utility>
#include <vector>

#include "trees/rational.hpp"

namespace trees {

enum class OutputFormat { csv, json };

// Rectangular report: header plus string-rendered cells. CSV is the canonical
// rendering; JSON mirrors the same fields as an array of flat objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

OutputFormat parse_format(const std::string& name);

std::string render_table(const Table& table, OutputFormat format);
void write_table(const std::string& path, const Table& table, OutputFormat format);

// Shortest round-trip decimal; identical inputs give identical bytes.
std::string fmt_double(double v);
std::string fmt_int(const Int& z);
std::string fmt_rat(const Rat& q);  // exact; integers render without "/1"

// Flat scatter plot on a fixed canvas; no external tooling.
void write_svg_scatter(const std::string& path,
                       const std::vector<std::pair<double, double>>& points,
                       const std::string& xlabel, const std::string& ylabel,
                       const std::string& title);

}  // namespace trees
