#include "wfpca/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "wfpca/errors.hpp"

namespace wfpca::harness {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double parse_double(const std::string& field, const std::string& path, int line) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (field.empty() || end != field.c_str() + field.size()) {
    throw IoError(path, "line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  return v;
}

long long parse_int(const std::string& field, const std::string& path, int line) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (field.empty() || used != field.size()) {
    throw IoError(path, "line " + std::to_string(line) + ": bad integer '" + field + "'");
  }
  return v;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

void write_csv(const std::vector<metrics::ErrorRecord>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open for writing");
  out << kResultHeader << '\n';
  for (const auto& r : rows) {
    out << r.model << ',' << fmt17(r.alpha) << ',' << r.n << ',' << r.p << ',' << r.replicate << ','
        << fmt17(r.mse_eigenfunction) << ',' << fmt17(r.rse_eigenvalue) << ',' << (r.is_population ? 1 : 0) << '\n';
  }
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

std::vector<metrics::ErrorRecord> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open for reading");
  std::string line;
  if (!std::getline(in, line)) throw IoError(path, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultHeader) throw IoError(path, "unexpected header '" + line + "'");

  std::vector<metrics::ErrorRecord> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() != 8) throw IoError(path, "line " + std::to_string(lineno) + ": expected 8 fields");
    metrics::ErrorRecord r;
    r.model = f[0];
    r.alpha = parse_double(f[1], path, lineno);
    r.n = parse_int(f[2], path, lineno);
    r.p = parse_int(f[3], path, lineno);
    r.replicate = parse_int(f[4], path, lineno);
    r.mse_eigenfunction = parse_double(f[5], path, lineno);
    r.rse_eigenvalue = parse_double(f[6], path, lineno);
    r.is_population = parse_int(f[7], path, lineno) != 0;
    rows.push_back(std::move(r));
  }
  return rows;
}

FigureKind parse_figure(const std::string& s) {
  if (s == "mse_vs_n") return FigureKind::MseVsN;
  if (s == "mse_vs_p") return FigureKind::MseVsP;
  if (s == "mean_mse_vs_p") return FigureKind::MeanMseVsP;
  if (s == "rse_vs_p") return FigureKind::RseVsP;
  if (s == "mean_rse_vs_p") return FigureKind::MeanRseVsP;
  throw InvalidArgument("unknown figure kind '" + s + "'");
}

std::string figure_name(FigureKind k) {
  switch (k) {
    case FigureKind::MseVsN: return "mse_vs_n";
    case FigureKind::MseVsP: return "mse_vs_p";
    case FigureKind::MeanMseVsP: return "mean_mse_vs_p";
    case FigureKind::RseVsP: return "rse_vs_p";
    case FigureKind::MeanRseVsP: return "mean_rse_vs_p";
  }
  return "?";
}

double reference_slope(FigureKind kind, double alpha) {
  switch (kind) {
    case FigureKind::MseVsN: return -1.0;
    case FigureKind::MseVsP:
    case FigureKind::MeanMseVsP: return -2.0 * alpha;
    case FigureKind::RseVsP:
    case FigureKind::MeanRseVsP: return -4.0 * alpha;
  }
  return 0.0;
}

std::vector<Series> figure_series(const std::vector<metrics::ErrorRecord>& rows, FigureKind kind) {
  const bool population = kind == FigureKind::MseVsP || kind == FigureKind::RseVsP;
  const bool use_rse = kind == FigureKind::RseVsP || kind == FigureKind::MeanRseVsP;

  // (model, alpha, curve parameter) -> x -> (sum, count)
  using Key = std::tuple<std::string, double, long long>;
  std::map<Key, std::map<long long, std::pair<double, long long>>> cells;
  for (const auto& r : rows) {
    if (r.is_population != population) continue;
    long long curve = 0;
    long long x = r.p;
    if (kind == FigureKind::MseVsN) {
      curve = r.p;
      x = r.n;
    } else if (!population) {
      curve = r.n;
    }
    auto& cell = cells[Key{r.model, r.alpha, curve}][x];
    cell.first += use_rse ? r.rse_eigenvalue : r.mse_eigenfunction;
    cell.second += 1;
  }

  std::vector<Series> out;
  for (const auto& [key, xs] : cells) {
    const auto& [model, alpha, curve] = key;
    Series s;
    s.alpha = alpha;
    s.label = model + " alpha=" + fmt_short(alpha);
    if (kind == FigureKind::MseVsN) s.label += " p=" + std::to_string(curve);
    if (!population && kind != FigureKind::MseVsN) s.label += " n=" + std::to_string(curve);
    for (const auto& [x, acc] : xs) {
      const double mean = acc.first / static_cast<double>(acc.second);
      if (mean > 0.0) s.points.emplace_back(static_cast<double>(x), mean);
    }
    if (!s.points.empty()) out.push_back(std::move(s));
  }
  if (out.empty()) throw EmptyTable("no rows match figure " + figure_name(kind));
  return out;
}

void emit_svg(const std::vector<metrics::ErrorRecord>& rows, FigureKind kind, const std::string& path) {
  const auto series = figure_series(rows, kind);

  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, std::log10(x));
      xmax = std::max(xmax, std::log10(x));
      ymin = std::min(ymin, std::log10(y));
      ymax = std::max(ymax, std::log10(y));
    }
  }
  if (xmax - xmin < 1e-9) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax - ymin < 1e-9) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double pad_y = 0.05 * (ymax - ymin);
  ymin -= pad_y;
  ymax += pad_y;

  const double width = 720, height = 480;
  const double left = 80, right = 220, top = 40, bottom = 60;
  const double pw = width - left - right;
  const double ph = height - top - bottom;
  auto sx = [&](double lx) { return left + (lx - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double ly) { return top + (ymax - ly) / (ymax - ymin) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" data-figure=\"" << figure_name(kind) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << figure_name(kind)
      << " (log-log)</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int e = static_cast<int>(std::ceil(xmin)); e <= static_cast<int>(std::floor(xmax)); ++e) {
    svg << "<text x=\"" << sx(e) << "\" y=\"" << top + ph + 18 << "\" font-family=\"sans-serif\" font-size=\"11\""
        << " text-anchor=\"middle\">1e" << e << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(ymin)); e <= static_cast<int>(std::floor(ymax)); ++e) {
    svg << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << sy(e) << "\" y2=\"" << sy(e)
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << sy(e) + 4 << "\" font-family=\"sans-serif\" font-size=\"11\""
        << " text-anchor=\"end\">1e" << e << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 16
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
      << (kind == FigureKind::MseVsN ? "n" : "p") << "</text>\n";

  std::map<double, bool> drawn_ref;
  double legend_y = top + 10;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kPalette[i % (sizeof kPalette / sizeof kPalette[0])];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : s.points) svg << sx(std::log10(x)) << ',' << sy(std::log10(y)) << ' ';
    svg << "\"/>\n";
    for (const auto& [x, y] : s.points) {
      svg << "<circle cx=\"" << sx(std::log10(x)) << "\" cy=\"" << sy(std::log10(y)) << "\" r=\"2.5\" fill=\"" << color
          << "\"/>\n";
    }
    svg << "<text x=\"" << left + pw + 10 << "\" y=\"" << legend_y << "\" font-family=\"sans-serif\" font-size=\"11\""
        << " fill=\"" << color << "\">" << s.label << "</text>\n";
    legend_y += 16;

    if (!drawn_ref[s.alpha]) {
      drawn_ref[s.alpha] = true;
      const double slope = reference_slope(kind, s.alpha);
      const double x0 = std::log10(s.points.front().first);
      const double y0 = std::log10(s.points.front().second);
      const double x1 = xmax;
      const double y1 = y0 + slope * (x1 - x0);
      svg << "<line class=\"reference\" data-slope=\"" << fmt_short(slope) << "\" x1=\"" << sx(x0) << "\" y1=\""
          << sy(y0) << "\" x2=\"" << sx(x1) << "\" y2=\"" << sy(y1)
          << "\" stroke=\"#555555\" stroke-dasharray=\"6,4\" clip-path=\"url(#plot)\"/>\n";
      svg << "<text x=\"" << left + pw + 10 << "\" y=\"" << legend_y
          << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#555555\">slope " << fmt_short(slope)
          << "</text>\n";
      legend_y += 16;
    }
  }
  svg << "<clipPath id=\"plot\"><rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\"/></clipPath>\n";
  svg << "</svg>\n";

  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open for writing");
  out << svg.str();
  if (!out) throw IoError(path, "write failed");
}

}  // namespace wfpca::harness
