#include "kep/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "kep/instance.hpp"

namespace kep::svg {
namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 60, kRight = 170, kTop = 40, kBottom = 50;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v, int digits = 2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// A round step giving roughly `ticks` intervals over [0, max].
double nice_step(double max, int ticks) {
  const double raw = max / ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10 * mag;
}

void header(std::ostringstream& out, double w, double h, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
      << ' ' << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
      << "</text>\n";
}

std::string cap_label(Cap c) { return c.finite() ? std::to_string(c.value()) : "inf"; }

}  // namespace

std::string ramp(double t) {
  t = std::clamp(t, 0.0, 1.0);
  // #ffffcc -> #253494
  const int r = static_cast<int>(std::lround(255 + (37 - 255) * t));
  const int g = static_cast<int>(std::lround(255 + (52 - 255) * t));
  const int b = static_cast<int>(std::lround(204 + (148 - 204) * t));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string render(const LineChart& chart) {
  std::size_t points = 0;
  double ymax = 0;
  for (const Series& s : chart.series) {
    points = std::max(points, s.values.size());
    for (double v : s.values) ymax = std::max(ymax, v);
  }
  if (ymax <= 0) ymax = 1;
  const double step = nice_step(ymax, 5);
  ymax = std::ceil(ymax / step) * step;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](std::size_t i) { return kLeft + (points <= 1 ? pw / 2 : pw * static_cast<double>(i) / (points - 1)); };
  auto py = [&](double v) { return kTop + ph * (1 - v / ymax); };

  std::ostringstream out;
  header(out, kWidth, kHeight, chart.title);
  for (double v = 0; v <= ymax + 1e-9; v += step) {
    out << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\"" << fixed(py(v)) << "\" y2=\""
        << fixed(py(v)) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << fixed(py(v) + 4) << "\" text-anchor=\"end\">" << format_number(v)
        << "</text>\n";
  }
  for (std::size_t i = 0; i < points; ++i) {
    out << "<text x=\"" << fixed(px(i)) << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">" << i + 1
        << "</text>\n";
  }
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
      << escape(chart.x_label) << "</text>\n";
  out << "<text transform=\"translate(16," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(chart.y_label) << "</text>\n";

  double ly = kTop + 10;
  for (const Series& s : chart.series) {
    const std::string dash = s.dashed ? " stroke-dasharray=\"5,4\"" : "";
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\"" << dash << " points=\"";
    for (std::size_t i = 0; i < s.values.size(); ++i) out << (i ? " " : "") << fixed(px(i)) << ',' << fixed(py(s.values[i]));
    out << "\"/>\n";
    out << "<line x1=\"" << kWidth - kRight + 12 << "\" x2=\"" << kWidth - kRight + 40 << "\" y1=\"" << ly << "\" y2=\""
        << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"" << dash << "/>\n";
    out << "<text x=\"" << kWidth - kRight + 46 << "\" y=\"" << ly + 4 << "\">" << escape(s.label) << "</text>\n";
    ly += 18;
  }
  out << "</svg>\n";
  return out.str();
}

std::string render(const Heatmap& map) {
  const double cell = 64;
  const double left = 90, top = 60;
  const double w = left + cell * static_cast<double>(map.columns.size()) + 120;
  const double h = top + cell * static_cast<double>(map.rows.size()) + 60;
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& row : map.values)
    for (const auto& v : row)
      if (v) lo = std::min(lo, *v), hi = std::max(hi, *v);

  std::ostringstream out;
  header(out, w, h, map.title);
  for (std::size_t r = 0; r < map.rows.size(); ++r) {
    const double y = top + cell * static_cast<double>(r);
    out << "<text x=\"" << left - 8 << "\" y=\"" << y + cell / 2 + 4 << "\" text-anchor=\"end\">" << escape(map.rows[r])
        << "</text>\n";
    for (std::size_t c = 0; c < map.columns.size(); ++c) {
      const double x = left + cell * static_cast<double>(c);
      const bool has = r < map.values.size() && c < map.values[r].size() && map.values[r][c].has_value();
      const double v = has ? *map.values[r][c] : 0.0;
      const double t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
      out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\""
          << (has ? ramp(t) : std::string("#cccccc")) << "\" stroke=\"white\" data-row=\"" << r << "\" data-col=\"" << c
          << "\"/>\n";
      if (has) {
        out << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4 << "\" text-anchor=\"middle\" fill=\""
            << (t > 0.55 ? "white" : "black") << "\">" << fixed(v, 3) << "</text>\n";
      }
    }
  }
  for (std::size_t c = 0; c < map.columns.size(); ++c) {
    out << "<text x=\"" << left + cell * (static_cast<double>(c) + 0.5) << "\" y=\"" << top - 8
        << "\" text-anchor=\"middle\">" << escape(map.columns[c]) << "</text>\n";
  }
  const double gx = left + cell * static_cast<double>(map.columns.size()) + 24;
  for (int i = 0; i <= 10; ++i) {
    out << "<rect x=\"" << gx << "\" y=\"" << top + 12 * (10 - i) << "\" width=\"16\" height=\"12\" fill=\""
        << ramp(i / 10.0) << "\"/>\n";
  }
  if (hi >= lo) {
    out << "<text x=\"" << gx + 22 << "\" y=\"" << top + 10 << "\">" << fixed(hi, 3) << "</text>\n";
    out << "<text x=\"" << gx + 22 << "\" y=\"" << top + 130 << "\">" << fixed(lo, 3) << "</text>\n";
  }
  out << "<text x=\"" << left + cell * static_cast<double>(map.columns.size()) / 2 << "\" y=\"" << h - 20
      << "\" text-anchor=\"middle\">" << escape(map.column_label) << "</text>\n";
  out << "<text transform=\"translate(20," << top + cell * static_cast<double>(map.rows.size()) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(map.row_label) << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

LineChart stage_chart(const std::vector<StageRow>& rows, CountryId k) {
  static const char* colors[] = {"#d62728", "#ff7f0e", "#1f77b4"};
  LineChart chart;
  chart.title = "Country " + std::to_string(k) + ": transplants and dropouts per stage";
  chart.x_label = "stage";
  chart.y_label = "pairs (average over instances)";
  for (std::size_t r = 0; r < std::size(kAllRegimes); ++r) {
    std::map<int, double> tx, drop;
    std::set<int> instances;
    for (const StageRow& row : rows) {
      if (row.regime != kAllRegimes[r] || row.country != k) continue;
      tx[row.stage] += row.transplants;
      drop[row.stage] += row.dropouts;
      instances.insert(row.instance);
    }
    if (instances.empty()) continue;
    const double n = static_cast<double>(instances.size());
    Series t{std::string(to_string(kAllRegimes[r])) + " transplants", {}, colors[r], false};
    Series d{std::string(to_string(kAllRegimes[r])) + " dropouts", {}, colors[r], true};
    for (const auto& [stage, v] : tx) t.values.push_back(v / n);
    for (const auto& [stage, v] : drop) d.values.push_back(v / n);
    chart.series.push_back(std::move(t));
    chart.series.push_back(std::move(d));
  }
  return chart;
}

Heatmap benefit_heatmap(const std::vector<RunReport>& reports, CountryId k) {
  std::set<Cap> c1, c2;
  std::set<PoolRatio> sizes;
  for (const RunReport& r : reports) {
    c1.insert(r.c1_bound);
    c2.insert(r.c2_bound);
    sizes.insert(r.c2_size);
  }
  const bool by_size = sizes.size() > 1;
  Heatmap map;
  map.title = "Country " + std::to_string(k) + " benefit (merged / local)";
  map.row_label = "country 1 bound";
  map.column_label = by_size ? "country 2 pool size" : "country 2 bound";
  for (Cap b : c1) map.rows.push_back(cap_label(b));
  std::vector<PoolRatio> size_cols(sizes.rbegin(), sizes.rend());
  std::sort(size_cols.begin(), size_cols.end(), [](PoolRatio a, PoolRatio b) { return a.fraction() > b.fraction(); });
  if (by_size) {
    for (PoolRatio p : size_cols) map.columns.push_back(p.to_string());
  } else {
    for (Cap b : c2) map.columns.push_back(cap_label(b));
  }
  map.values.assign(map.rows.size(), std::vector<std::optional<double>>(map.columns.size()));
  const std::vector<Cap> rows(c1.begin(), c1.end()), cols(c2.begin(), c2.end());
  for (const RunReport& r : reports) {
    const auto ri = static_cast<std::size_t>(std::find(rows.begin(), rows.end(), r.c1_bound) - rows.begin());
    const auto ci = by_size
                        ? static_cast<std::size_t>(std::find(size_cols.begin(), size_cols.end(), r.c2_size) - size_cols.begin())
                        : static_cast<std::size_t>(std::find(cols.begin(), cols.end(), r.c2_bound) - cols.begin());
    const auto& side = k == 1 ? r.c1 : r.c2;
    if (side[0] && side[2] && *side[0] > 0) map.values[ri][ci] = *side[2] / *side[0];
  }
  return map;
}

}  // namespace kep::svg
