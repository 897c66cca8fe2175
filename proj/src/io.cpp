#include "mvlsw/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "mvlsw/error.hpp"

namespace mvlsw {

namespace {

using Record = std::vector<std::string>;

std::string where(std::size_t row, std::size_t col) {
  return "row " + std::to_string(row) + ", column " + std::to_string(col);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits RFC-4180 text into records. Blank lines are skipped; `lines` gets
// the 1-based physical line each record starts on.
std::vector<Record> split_records(const std::string& text, std::vector<std::size_t>& lines) {
  std::vector<Record> records;
  Record current;
  std::string field;
  bool quoted = false, field_started = false, record_has_content = false;
  std::size_t line = 1, record_line = 1;

  auto end_field = [&] {
    current.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    if (record_has_content || !current.empty()) {
      end_field();
      records.push_back(std::move(current));
      lines.push_back(record_line);
    }
    current.clear();
    field.clear();
    field_started = false;
    record_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (!record_has_content && current.empty() && !field_started) record_line = line;
    switch (c) {
      case '"':
        if (trim(field).empty()) {
          field.clear();
          quoted = true;
        } else {
          throw Error(ErrorCode::ParseError, where(records.size() + 1, current.size() + 1) + ": stray quote");
        }
        field_started = record_has_content = true;
        break;
      case ',':
        end_field();
        record_has_content = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field.push_back(c);
        field_started = true;
        if (!std::isspace(static_cast<unsigned char>(c))) record_has_content = true;
    }
  }
  if (quoted) throw Error(ErrorCode::ParseError, where(records.size() + 1, current.size() + 1) + ": unterminated quote");
  end_record();
  return records;
}

struct RawTable {
  Record header;  // empty when absent
  std::vector<Record> rows;
  std::size_t first_data_row = 1;  // 1-based record number of rows[0]
};

RawTable read_raw(std::istream& in, HeaderMode mode) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::size_t> lines;
  std::vector<Record> records = split_records(text, lines);
  RawTable t;
  if (records.empty()) throw Error(ErrorCode::ParseError, "input holds no records");

  bool has_header = mode == HeaderMode::Present;
  if (mode == HeaderMode::Auto) {
    const Record& first = records.front();
    std::size_t numeric = 0, first_text = 0;
    for (std::size_t c = 0; c < first.size(); ++c) {
      if (parse_double(first[c]))
        ++numeric;
      else if (first_text == 0)
        first_text = c + 1;
    }
    if (numeric == first.size()) {
      has_header = false;
    } else if (numeric == 0) {
      has_header = true;
    } else {
      throw Error(ErrorCode::ParseError,
                  where(1, first_text) + ": first row mixes numbers and text (use an explicit header setting)");
    }
  }
  if (has_header) {
    t.header = std::move(records.front());
    records.erase(records.begin());
    t.first_data_row = 2;
  }
  const std::size_t width = has_header ? t.header.size() : (records.empty() ? 0 : records.front().size());
  for (std::size_t r = 0; r < records.size(); ++r)
    if (records[r].size() != width)
      throw Error(ErrorCode::ParseError, where(r + t.first_data_row, std::min(records[r].size(), width) + 1) +
                                             ": expected " + std::to_string(width) + " fields, found " +
                                             std::to_string(records[r].size()));
  t.rows = std::move(records);
  return t;
}

double cell_value(const RawTable& t, std::size_t r, std::size_t c) {
  const auto v = parse_double(t.rows[r][c]);
  if (!v || !std::isfinite(*v))
    throw Error(ErrorCode::ParseError,
                where(r + t.first_data_row, c + 1) + ": '" + t.rows[r][c] + "' is not a finite number");
  return *v;
}

std::size_t resolve_column(const RawTable& t, const std::string& spec, std::size_t width) {
  for (std::size_t c = 0; c < t.header.size(); ++c)
    if (std::string(trim(t.header[c])) == spec) return c;
  std::size_t index = 0;
  const auto* end = spec.data() + spec.size();
  const auto res = std::from_chars(spec.data(), end, index);
  if (res.ec == std::errc() && res.ptr == end) {
    if (index < 1 || index > width)
      throw Error(ErrorCode::IndexOutOfRange,
                  "column index " + spec + " outside 1.." + std::to_string(width));
    return index - 1;
  }
  throw Error(ErrorCode::DomainError, "no column named '" + spec + "'");
}

std::size_t floor_pow2(std::size_t n) { return n == 0 ? 0 : std::bit_floor(n); }

}  // namespace

std::string_view to_string(PadPolicy policy) {
  switch (policy) {
    case PadPolicy::TruncateHead: return "truncate-head";
    case PadPolicy::TruncateTail: return "truncate-tail";
    case PadPolicy::ZeroPad: return "zero-pad";
    case PadPolicy::ReflectPad: return "reflect-pad";
    case PadPolicy::PeriodicPad: return "periodic-pad";
    case PadPolicy::Error: return "error";
  }
  return "truncate-head";
}

PadPolicy parse_pad_policy(std::string_view name) {
  for (PadPolicy p : {PadPolicy::TruncateHead, PadPolicy::TruncateTail, PadPolicy::ZeroPad, PadPolicy::ReflectPad,
                      PadPolicy::PeriodicPad, PadPolicy::Error})
    if (to_string(p) == name) return p;
  throw Error(ErrorCode::DomainError, "unknown pad policy '" + std::string(name) + "'");
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

DataTable read_csv_table(std::istream& in, HeaderMode header) {
  const RawTable raw = read_raw(in, header);
  DataTable t;
  t.rows = raw.rows.size();
  t.cols = raw.header.empty() ? (raw.rows.empty() ? 0 : raw.rows.front().size()) : raw.header.size();
  t.names = raw.header.empty() ? std::vector<std::string>(t.cols) : raw.header;
  t.values.resize(t.rows * t.cols);
  for (std::size_t r = 0; r < t.rows; ++r)
    for (std::size_t c = 0; c < t.cols; ++c) t.values[r * t.cols + c] = cell_value(raw, r, c);
  return t;
}

std::vector<double> log_returns(std::span<const double> values, std::size_t rows, std::size_t cols) {
  if (values.size() != rows * cols) throw Error(ErrorCode::DimensionMismatch, "value count does not match shape");
  if (rows < 2) throw Error(ErrorCode::DomainError, "log returns need at least two rows");
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (!(values[r * cols + c] > 0.0))
        throw Error(ErrorCode::NonPositiveValue,
                    "row " + std::to_string(r + 1) + ", column " + std::to_string(c + 1) + " is not positive");
  std::vector<double> out((rows - 1) * cols);
  for (std::size_t r = 0; r + 1 < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      out[r * cols + c] = std::log(values[(r + 1) * cols + c]) - std::log(values[r * cols + c]);
  return out;
}

std::vector<long> dyadic_row_map(std::size_t rows, PadPolicy policy) {
  const auto n = static_cast<long>(rows);
  std::vector<long> map;
  if (rows >= 4 && std::has_single_bit(rows)) {
    for (long i = 0; i < n; ++i) map.push_back(i);
    return map;
  }
  const std::size_t lower = floor_pow2(rows);
  const std::size_t upper = std::max<std::size_t>(std::bit_ceil(std::max<std::size_t>(rows, 1)), 4);
  switch (policy) {
    case PadPolicy::Error:
      throw Error(ErrorCode::NonDyadicLength, std::to_string(rows) + " rows is not a power of two >= 4");
    case PadPolicy::TruncateHead:
    case PadPolicy::TruncateTail: {
      if (lower < 4)
        throw Error(ErrorCode::NonDyadicLength, "truncating " + std::to_string(rows) + " rows leaves fewer than 4");
      const long start = policy == PadPolicy::TruncateHead ? n - static_cast<long>(lower) : 0;
      for (long i = 0; i < static_cast<long>(lower); ++i) map.push_back(start + i);
      return map;
    }
    default: break;
  }
  if (rows == 0) throw Error(ErrorCode::NonDyadicLength, "no rows to pad");
  for (long i = 0; i < static_cast<long>(upper); ++i) {
    if (i < n) {
      map.push_back(i);
    } else if (policy == PadPolicy::ZeroPad) {
      map.push_back(-1);
    } else if (policy == PadPolicy::PeriodicPad || n == 1) {
      map.push_back(i % n);
    } else {
      const long period = 2 * (n - 1);
      const long m = i % period;
      map.push_back(m < n ? m : period - m);
    }
  }
  return map;
}

TimeSeriesMatrix load_timeseries(std::istream& in, const LoadOptions& options) {
  const RawTable raw = read_raw(in, options.header);
  const std::size_t width = raw.header.empty() ? (raw.rows.empty() ? 0 : raw.rows.front().size()) : raw.header.size();

  std::optional<std::size_t> time_col;
  if (options.time_column) time_col = resolve_column(raw, *options.time_column, width);
  std::vector<std::size_t> cols;
  if (options.columns.empty()) {
    for (std::size_t c = 0; c < width; ++c)
      if (c != time_col) cols.push_back(c);
  } else {
    for (const auto& spec : options.columns) cols.push_back(resolve_column(raw, spec, width));
  }
  if (cols.empty()) throw Error(ErrorCode::DimensionMismatch, "no data columns selected");

  std::size_t rows = raw.rows.size();
  const std::size_t P = cols.size();
  std::vector<double> values(rows * P);
  std::vector<double> times;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < P; ++c) values[r * P + c] = cell_value(raw, r, cols[c]);
    if (time_col) times.push_back(cell_value(raw, r, *time_col));
  }

  if (options.log_returns) {
    values = log_returns(values, rows, P);
    if (!times.empty()) times.erase(times.begin());
    --rows;
  }

  const std::vector<long> map = dyadic_row_map(rows, options.pad);
  std::vector<double> out(map.size() * P, 0.0);
  std::vector<double> out_times;
  const bool padded = map.size() > rows;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map[i] >= 0)
      std::copy_n(&values[static_cast<std::size_t>(map[i]) * P], P, &out[i * P]);
    if (!times.empty()) {
      if (!padded || i < rows) {
        out_times.push_back(times[padded ? i : static_cast<std::size_t>(map[i])]);
      } else {
        const double step = rows >= 2 ? times[rows - 1] - times[rows - 2] : 1.0;
        out_times.push_back(times[rows - 1] + step * static_cast<double>(i - rows + 1));
      }
    }
  }

  std::vector<std::string> names;
  for (std::size_t c = 0; c < P; ++c) {
    std::string name = raw.header.empty() ? std::string() : std::string(trim(raw.header[cols[c]]));
    names.push_back(name.empty() ? "X" + std::to_string(cols[c] + 1) : name);
  }
  return TimeSeriesMatrix(map.size(), P, std::move(out), std::move(names), std::move(out_times));
}

TimeSeriesMatrix load_timeseries(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return load_timeseries(in, options);
}

void write_timeseries_csv(const TimeSeriesMatrix& x, std::ostream& out) {
  const bool with_time = !x.sample_times().empty();
  const auto& names = x.channel_names();
  std::string line;
  if (with_time) line += "time";
  for (std::size_t p = 0; p < x.channels(); ++p) {
    if (with_time || p > 0) line += ',';
    line += names.empty() ? "X" + std::to_string(p + 1) : names[p];
  }
  out << line << '\n';
  for (std::size_t t = 0; t < x.length(); ++t) {
    line.clear();
    if (with_time) line += format_double(x.sample_times()[t]);
    for (std::size_t p = 0; p < x.channels(); ++p) {
      if (with_time || p > 0) line += ',';
      line += format_double(x(t, p));
    }
    out << line << '\n';
  }
}

void write_timeseries_csv(const TimeSeriesMatrix& x, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write_timeseries_csv(x, out);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<double> read_optional_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

void save_bundle(const MvLswArray& array, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());

  const ArrayMeta& m = array.meta();
  ordered_json meta;
  meta["format_version"] = kBundleFormatVersion;
  meta["kind"] = std::string(to_string(array.kind()));
  meta["channels"] = array.channels();
  meta["levels"] = array.levels();
  meta["length"] = array.length();
  meta["filter"] = {{"family", std::string(to_string(m.family))}, {"number", m.filter_number}};
  if (m.smoothing)
    meta["smoothing"] = {{"kernel", std::string(to_string(m.smoothing->name))},
                         {"half_widths", m.smoothing->half_widths}};
  else
    meta["smoothing"] = nullptr;
  meta["bias_corrected"] = m.bias_corrected;
  meta["regularization_tol"] = optional_number(m.regularization_tol);
  meta["min_eigenvalue"] = optional_number(m.min_eigenvalue);
  meta["raw_min_eigenvalue"] = optional_number(m.raw_min_eigenvalue);
  meta["gcv"] = optional_number(m.gcv);
  meta["channel_names"] = m.channel_names;

  {
    std::ofstream out(dir / "meta.json", std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + (dir / "meta.json").string());
    out << meta.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + (dir / "meta.json").string());
  }

  std::ofstream out(dir / "values.csv", std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + (dir / "values.csv").string());
  std::string buf = "p,q,j,k,value\n";
  for (std::size_t p = 0; p < array.channels(); ++p)
    for (std::size_t q = p; q < array.channels(); ++q)
      for (std::size_t j = 0; j < array.levels(); ++j) {
        const auto s = array.series(p, q, j);
        const std::string prefix =
            std::to_string(p + 1) + ',' + std::to_string(q + 1) + ',' + std::to_string(j + 1) + ',';
        for (std::size_t k = 0; k < s.size(); ++k) {
          buf += prefix;
          buf += std::to_string(k);
          buf += ',';
          buf += format_double(s[k]);
          buf += '\n';
        }
        out << buf;
        buf.clear();
      }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + (dir / "values.csv").string());
}

MvLswArray load_bundle(const std::filesystem::path& dir) {
  std::ifstream meta_in(dir / "meta.json", std::ios::binary);
  if (!meta_in) throw Error(ErrorCode::IoError, "cannot open " + (dir / "meta.json").string());

  ArrayMeta meta;
  std::size_t P = 0, J = 0, T = 0;
  ArrayKind kind = ArrayKind::Spectrum;
  try {
    const nlohmann::json j = nlohmann::json::parse(meta_in);
    const int version = j.at("format_version").get<int>();
    if (version != kBundleFormatVersion)
      throw Error(ErrorCode::ParseError, "unsupported bundle format version " + std::to_string(version));
    kind = parse_array_kind(j.at("kind").get<std::string>());
    P = j.at("channels").get<std::size_t>();
    J = j.at("levels").get<std::size_t>();
    T = j.at("length").get<std::size_t>();
    meta.family = parse_wavelet_family(j.at("filter").at("family").get<std::string>());
    meta.filter_number = j.at("filter").at("number").get<int>();
    if (j.contains("smoothing") && !j.at("smoothing").is_null()) {
      SmoothingSpec s;
      s.name = parse_kernel_name(j.at("smoothing").at("kernel").get<std::string>());
      s.half_widths = j.at("smoothing").at("half_widths").get<std::vector<int>>();
      meta.smoothing = s;
    }
    meta.bias_corrected = j.at("bias_corrected").get<bool>();
    meta.regularization_tol = read_optional_number(j, "regularization_tol");
    meta.min_eigenvalue = read_optional_number(j, "min_eigenvalue");
    meta.raw_min_eigenvalue = read_optional_number(j, "raw_min_eigenvalue");
    meta.gcv = read_optional_number(j, "gcv");
    if (j.contains("channel_names")) meta.channel_names = j.at("channel_names").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, (dir / "meta.json").string() + ": " + e.what());
  }
  if (P == 0 || J == 0 || T == 0) throw Error(ErrorCode::ParseError, "bundle dimensions must be positive");

  MvLswArray array(P, J, T, kind, std::move(meta));
  std::ifstream in(dir / "values.csv", std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + (dir / "values.csv").string());

  std::vector<bool> seen(P * P * J * T, false);
  std::size_t count = 0;
  std::string line;
  std::size_t row = 0;
  if (!std::getline(in, line) || trim(line) != "p,q,j,k,value")
    throw Error(ErrorCode::ParseError, "values.csv: row 1: expected header p,q,j,k,value");
  ++row;
  while (std::getline(in, line)) {
    ++row;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    std::size_t idx[4];
    const char* ptr = text.data();
    const char* end = text.data() + text.size();
    for (int f = 0; f < 4; ++f) {
      const auto res = std::from_chars(ptr, end, idx[f]);
      if (res.ec != std::errc() || res.ptr == end || *res.ptr != ',')
        throw Error(ErrorCode::ParseError, "values.csv: " + where(row, static_cast<std::size_t>(f) + 1) +
                                               ": expected an integer");
      ptr = res.ptr + 1;
    }
    const auto value = parse_double(std::string_view(ptr, static_cast<std::size_t>(end - ptr)));
    if (!value) throw Error(ErrorCode::ParseError, "values.csv: " + where(row, 5) + ": expected a number");
    const std::size_t p = idx[0], q = idx[1], j = idx[2], k = idx[3];
    if (p < 1 || q < p || q > P || j < 1 || j > J || k >= T)
      throw Error(ErrorCode::ParseError, "values.csv: row " + std::to_string(row) + ": index out of range");
    const std::size_t flat = (((p - 1) * P + (q - 1)) * J + (j - 1)) * T + k;
    if (seen[flat]) throw Error(ErrorCode::ParseError, "values.csv: row " + std::to_string(row) + ": duplicate entry");
    seen[flat] = true;
    ++count;
    array.set(p - 1, q - 1, j - 1, k, *value);
  }
  if (count != P * (P + 1) / 2 * J * T)
    throw Error(ErrorCode::ParseError, "values.csv holds " + std::to_string(count) + " rows, expected " +
                                           std::to_string(P * (P + 1) / 2 * J * T));
  return array;
}

}  // namespace mvlsw
