#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mvlsw/array.hpp"
#include "mvlsw/inference.hpp"

namespace mvlsw {

/// Slice plots of an MvLswArray. Channels and levels in `info` are 1-based.
///   style 1: one curve for (p, q, j), info = {p, q, j}
///   style 2: panel of channel pairs p <= q at level j, info = {j}
///   style 3: panel of levels for pair (p, q), info = {p, q}
///   style 4: heatmap of levels x locations for pair (p, q), info = {p, q}
struct PlotSpec {
  int style = 1;
  std::vector<int> info;
  std::optional<std::pair<double, double>> ylim;
  double line_width = 1.5;
  bool include_diagonal = true;  // style 2 only
  std::string ylab;
};

/// Parses "1,2,2" style lists.
std::vector<int> parse_plot_info(std::string_view text);

/// Throws InfoMismatch when the style is unknown or info does not fit the
/// style or the array's dimensions.
void validate_plot_spec(const PlotSpec& spec, const MvLswArray& x);

struct RenderedPlot {
  std::string svg;
  std::string csv;
};

/// Styles 1-3 give a line plot and a CSV of the plotted series (column k,
/// then one column per curve, plus _lower/_upper columns with an interval).
/// Style 4 gives a heatmap and a headerless CSV grid, one row per level
/// (finest first) and one column per location. CSV values are the array
/// values written with round-trip precision.
RenderedPlot render_plot(const MvLswArray& x, const PlotSpec& spec, const IntervalPair* interval = nullptr);

/// Writes the SVG to `out` and the CSV next to it with extension .csv; an
/// `out` ending in .csv receives the CSV alone.
void emit_plot(const MvLswArray& x, const PlotSpec& spec, const IntervalPair* interval,
               const std::filesystem::path& out);

}  // namespace mvlsw
