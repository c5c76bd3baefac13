#include "trees/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace trees {

namespace {

std::string csv_cell(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void check_rect(const Table& table) {
  for (const auto& row : table.rows)
    if (row.size() != table.columns.size())
      throw std::invalid_argument("table row width does not match the header");
}

}  // namespace

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown format '" + name + "' (expected csv or json)");
}

std::string render_table(const Table& table, OutputFormat format) {
  check_rect(table);
  if (format == OutputFormat::csv) {
    std::string out;
    for (size_t j = 0; j < table.columns.size(); ++j) {
      if (j) out += ',';
      out += csv_cell(table.columns[j]);
    }
    out += '\n';
    for (const auto& row : table.rows) {
      for (size_t j = 0; j < row.size(); ++j) {
        if (j) out += ',';
        out += csv_cell(row[j]);
      }
      out += '\n';
    }
    return out;
  }
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    for (size_t j = 0; j < row.size(); ++j) obj[table.columns[j]] = row[j];
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

void write_table(const std::string& path, const Table& table, OutputFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << render_table(table, format);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_int(const Int& z) { return z.get_str(); }

std::string fmt_rat(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

void write_svg_scatter(const std::string& path,
                       const std::vector<std::pair<double, double>>& points,
                       const std::string& xlabel, const std::string& ylabel,
                       const std::string& title) {
  if (points.empty()) throw std::invalid_argument("scatter plot needs at least one point");
  double xmin = points[0].first, xmax = xmin, ymin = points[0].second, ymax = ymin;
  for (const auto& [x, y] : points) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  // Degenerate spans still get a visible box.
  if (xmax == xmin) (xmax += 1.0), (xmin -= 1.0);
  if (ymax == ymin) (ymax += 1.0), (ymin -= 1.0);
  const double W = 640, H = 480, L = 70, R = 20, T = 40, B = 50;
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };
  auto coord = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n"
      << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n"
      << "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">"
      << title << "</text>\n"
      << "<rect x=\"" << coord(L) << "\" y=\"" << coord(T) << "\" width=\"" << coord(W - L - R)
      << "\" height=\"" << coord(H - T - B)
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (const auto& [x, y] : points)
    out << "<circle cx=\"" << coord(px(x)) << "\" cy=\"" << coord(py(y))
        << "\" r=\"3\" fill=\"#1f77b4\" fill-opacity=\"0.7\"/>\n";
  out << "<text x=\"" << coord(L) << "\" y=\"" << coord(H - B + 16)
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << num(xmin) << "</text>\n"
      << "<text x=\"" << coord(W - R) << "\" y=\"" << coord(H - B + 16)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(xmax)
      << "</text>\n"
      << "<text x=\"" << coord(L - 6) << "\" y=\"" << coord(H - B)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(ymin)
      << "</text>\n"
      << "<text x=\"" << coord(L - 6) << "\" y=\"" << coord(T + 10)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(ymax)
      << "</text>\n"
      << "<text x=\"" << coord((L + W - R) / 2) << "\" y=\"" << coord(H - 14)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xlabel
      << "</text>\n"
      << "<text x=\"16\" y=\"" << coord((T + H - B) / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 16 "
      << coord((T + H - B) / 2) << ")\">" << ylabel << "</text>\n"
      << "</svg>\n";
}

}  // namespace trees
