#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mvlsw/array.hpp"

namespace mvlsw {

/// How to reach a dyadic length when the row count N is not a power of two.
/// Truncation keeps 2^floor(log2 N) rows, padding extends to 2^ceil(log2 N).
///   truncate-head  drop the oldest rows (default)
///   truncate-tail  drop the newest rows
///   zero-pad       append zeros
///   reflect-pad    append the series mirrored about its last row
///   periodic-pad   append the series from its start again
///   error          throw NonDyadicLength
enum class PadPolicy { TruncateHead, TruncateTail, ZeroPad, ReflectPad, PeriodicPad, Error };

std::string_view to_string(PadPolicy policy);
PadPolicy parse_pad_policy(std::string_view name);

enum class HeaderMode { Auto, Present, Absent };

/// Numeric table read from CSV, row-major.
struct DataTable {
  std::vector<std::string> names;  // empty strings when the file has no header
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

/// RFC-4180 reader (quoted fields, doubled quotes, CRLF). In Auto mode the
/// first record is a header when none of its cells parse as numbers; a first
/// record mixing numbers and text is rejected. Errors report 1-based
/// record and column numbers.
DataTable read_csv_table(std::istream& in, HeaderMode header = HeaderMode::Auto);

struct LoadOptions {
  /// Column names or 1-based indices; empty selects every column except the
  /// time column.
  std::vector<std::string> columns;
  std::optional<std::string> time_column;
  HeaderMode header = HeaderMode::Auto;
  bool log_returns = false;
  PadPolicy pad = PadPolicy::TruncateHead;
};

/// out[t] = ln(x[t+1]) - ln(x[t]) for each column of a rows x cols row-major
/// matrix. Throws NonPositiveValue naming the first offending cell.
std::vector<double> log_returns(std::span<const double> values, std::size_t rows, std::size_t cols);

/// Row indices (into the input) making up a dyadic-length series under the
/// policy; -1 marks a zero row. Throws NonDyadicLength for policy error or
/// when fewer than four rows would remain.
std::vector<long> dyadic_row_map(std::size_t rows, PadPolicy policy);

TimeSeriesMatrix load_timeseries(std::istream& in, const LoadOptions& options = {});
TimeSeriesMatrix load_timeseries(const std::filesystem::path& path, const LoadOptions& options = {});

/// Header row of channel names (X1.. when unnamed), preceded by a time
/// column when the series carries sample times.
void write_timeseries_csv(const TimeSeriesMatrix& x, std::ostream& out);
void write_timeseries_csv(const TimeSeriesMatrix& x, const std::filesystem::path& path);

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);
/// Whole-string parse; nullopt when the text is not a number.
std::optional<double> parse_double(std::string_view text);

/// A bundle is a directory holding meta.json (format version, kind,
/// dimensions, wavelet, kernel, settings, diagnostics, channel names) and
/// values.csv with columns p,q,j,k,value for p <= q. p, q and j are 1-based
/// (j = 1 is the finest level), k is 0-based.
void save_bundle(const MvLswArray& array, const std::filesystem::path& dir);
MvLswArray load_bundle(const std::filesystem::path& dir);

inline constexpr int kBundleFormatVersion = 1;

}  // namespace mvlsw
