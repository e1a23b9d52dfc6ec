#include "holopush/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "holopush/error.hpp"

namespace holopush {

namespace {

const char* kStage = "cli.figures";
constexpr double kWidth = 640.0, kHeight = 400.0, kMargin = 48.0;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string short_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double x) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  void pad() {
    if (!(hi > lo)) {
      const double d = std::max(1e-12, std::abs(lo) * 1e-3);
      lo -= d;
      hi += d;
    }
  }
  double frac(double x) const { return (x - lo) / (hi - lo); }
};

std::string header(double w, double h) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h) << "\" viewBox=\"0 0 "
     << num(w) << ' ' << num(h) << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return os.str();
}

std::string text(double x, double y, const std::string& s, const char* anchor = "middle") {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"" +
         anchor + "\">" + s + "</text>\n";
}

std::string frame(double x0, double y0, double w, double h) {
  return "<rect x=\"" + num(x0) + "\" y=\"" + num(y0) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string heat_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(255 * t));
  const int b = static_cast<int>(std::lround(255 * (1.0 - t)));
  const int g = static_cast<int>(std::lround(255 * (1.0 - std::abs(2.0 * t - 1.0)) * 0.8));
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

int require(const CsvTable& t, const std::string& name) {
  const int c = t.column(name);
  if (c < 0) throw Error(ErrorKind::Io, kStage, "CSV lacks column '" + name + "'");
  return c;
}

}  // namespace

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, kStage, "missing " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Io, kStage, path + " is empty");
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) t.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
      }
    }
    if (row.size() != t.header.size()) throw Error(ErrorKind::Io, kStage, path + ": ragged row");
    t.rows.push_back(std::move(row));
  }
  if (t.rows.empty()) throw Error(ErrorKind::Io, kStage, path + " has no rows");
  return t;
}

std::string boundary_residual_svg(const CsvTable& b) {
  const int cc = require(b, "component"), cs = require(b, "s"), cr = require(b, "rho");
  Range y;
  for (const auto& r : b.rows) y.add(r[cr]);
  y.pad();
  const double pw = kWidth - 2 * kMargin, ph = kHeight - 2 * kMargin;
  std::map<int, std::string> paths;
  for (const auto& r : b.rows) {
    const int comp = static_cast<int>(r[cc]);
    std::string& p = paths[comp];
    p += (p.empty() ? "M" : " L") + num(kMargin + pw * r[cs] / (2.0 * std::numbers::pi)) + ' ' +
         num(kMargin + ph * (1.0 - y.frac(r[cr])));
  }
  std::string out = header(kWidth, kHeight) + frame(kMargin, kMargin, pw, ph);
  for (const auto& [comp, p] : paths)
    out += "<path d=\"" + p + "\" fill=\"none\" stroke=\"" + kColors[comp % 6] + "\" stroke-width=\"1.5\"/>\n";
  out += text(kWidth / 2, kMargin / 2, "rho(f) on the boundary");
  out += text(kWidth / 2, kHeight - 12, "boundary parameter s in [0, 2pi]");
  out += text(kMargin - 4, kMargin + 4, short_num(y.hi), "end");
  out += text(kMargin - 4, kHeight - kMargin, short_num(y.lo), "end");
  return out + "</svg>\n";
}

std::string curves_heatmap_svg(const CsvTable& c) {
  const int cc = require(c, "component"), ck = require(c, "k"), ca = require(c, "a"), cr = require(c, "radius");
  int K = 0, A = 0, comps = 0;
  Range z;
  for (const auto& r : c.rows) {
    K = std::max(K, static_cast<int>(r[ck]) + 1);
    A = std::max(A, static_cast<int>(r[ca]) + 1);
    comps = std::max(comps, static_cast<int>(r[cc]) + 1);
    z.add(r[cr]);
  }
  z.pad();
  const int sk = std::max(1, K / 64), sa = std::max(1, A / 64);
  const double panel_h = (kHeight - 2 * kMargin) / comps, pw = kWidth - 2 * kMargin;
  const double cw = pw / ((K + sk - 1) / sk), ch = panel_h / ((A + sa - 1) / sa);
  std::string out = header(kWidth, kHeight);
  for (const auto& r : c.rows) {
    const int k = static_cast<int>(r[ck]), a = static_cast<int>(r[ca]), comp = static_cast<int>(r[cc]);
    if (k % sk || a % sa) continue;
    const double x = kMargin + cw * (k / sk), y = kMargin + comp * panel_h + ch * (a / sa);
    out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(cw + 0.05) + "\" height=\"" + num(ch + 0.05) +
           "\" fill=\"" + heat_color(z.frac(r[cr])) + "\"/>\n";
  }
  for (int comp = 0; comp < comps; ++comp) out += frame(kMargin, kMargin + comp * panel_h, pw, panel_h);
  out += text(kWidth / 2, kMargin / 2, "curve radius R(x_k, theta): k across, theta down");
  out += text(kWidth / 2, kHeight - 12, "min " + short_num(z.lo) + "  max " + short_num(z.hi));
  return out + "</svg>\n";
}

std::string image_projections_svg(const CsvTable& b) {
  const int cc = require(b, "component");
  int n = 0;
  while (b.column("f" + std::to_string(n) + "_re") >= 0) ++n;
  if (n == 0) throw Error(ErrorKind::Io, kStage, "boundary CSV lacks map columns");
  const double side = 240.0, gap = 24.0;
  const double w = kMargin + n * (side + gap), h = side + 2 * kMargin;
  std::string out = header(w, h);
  for (int i = 0; i < n; ++i) {
    const int cre = require(b, "f" + std::to_string(i) + "_re"), cim = require(b, "f" + std::to_string(i) + "_im");
    double extent = 1e-12;
    for (const auto& r : b.rows) extent = std::max({extent, std::abs(r[cre]), std::abs(r[cim])});
    extent *= 1.05;
    const double x0 = kMargin / 2 + i * (side + gap), y0 = kMargin;
    out += frame(x0, y0, side, side);
    std::map<int, std::string> paths;
    for (const auto& r : b.rows) {
      std::string& p = paths[static_cast<int>(r[cc])];
      p += (p.empty() ? "M" : " L") + num(x0 + side * (0.5 + 0.5 * r[cre] / extent)) + ' ' +
           num(y0 + side * (0.5 - 0.5 * r[cim] / extent));
    }
    for (const auto& [comp, p] : paths)
      out += "<path d=\"" + p + " Z\" fill=\"none\" stroke=\"" + kColors[comp % 6] + "\" stroke-width=\"1.5\"/>\n";
    out += text(x0 + side / 2, y0 - 8, "z" + std::to_string(i + 1) + " plane, |.| <= " + short_num(extent));
  }
  return out + "</svg>\n";
}

std::vector<std::string> write_figures(const std::string& dir) {
  namespace fs = std::filesystem;
  const CsvTable boundary = read_csv((fs::path(dir) / "boundary.csv").string());
  const CsvTable curves = read_csv((fs::path(dir) / "curves.csv").string());
  const fs::path fig = fs::path(dir) / "figures";
  fs::create_directories(fig);
  const std::vector<std::pair<std::string, std::string>> files = {
      {"boundary_residual.svg", boundary_residual_svg(boundary)},
      {"curves_heatmap.svg", curves_heatmap_svg(curves)},
      {"image_projections.svg", image_projections_svg(boundary)},
  };
  std::vector<std::string> names;
  for (const auto& [name, body] : files) {
    std::ofstream out(fig / name, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, kStage, "cannot write " + (fig / name).string());
    out << body;
    names.push_back(name);
  }
  return names;
}

}  // namespace holopush
