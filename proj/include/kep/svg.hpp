#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kep/simulator.hpp"

namespace kep::svg {

struct Series {
  std::string label;
  std::vector<double> values;  // y at x = 1, 2, ...
  std::string color = "#1f77b4";
  bool dashed = false;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

struct Heatmap {
  std::string title;
  std::string row_label;
  std::string column_label;
  std::vector<std::string> rows;
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> values;  // [row][column]; nullopt draws grey
};

std::string render(const LineChart& chart);
std::string render(const Heatmap& map);

/// Fill for a value at position t in [0,1] of the colour ramp: light yellow
/// to dark blue, so larger values are darker.
std::string ramp(double t);

/// Per-stage average transplants (solid) and dropouts (dashed) of country k,
/// one pair of lines per regime present in `rows`.
LineChart stage_chart(const std::vector<StageRow>& rows, CountryId k);

/// Merged-over-local benefit of country k across a sweep. Rows are country-1
/// bounds; columns are country-2 bounds, or country-2 pool sizes when the
/// sweep varies those.
Heatmap benefit_heatmap(const std::vector<RunReport>& reports, CountryId k);

}  // namespace kep::svg
