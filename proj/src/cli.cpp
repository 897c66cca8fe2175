#include "mvlsw/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mvlsw/error.hpp"
#include "mvlsw/inference.hpp"
#include "mvlsw/io.hpp"
#include "mvlsw/plot.hpp"
#include "mvlsw/simulate.hpp"
#include "mvlsw/spectrum.hpp"

namespace mvlsw {

namespace {

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

std::vector<double> parse_kernel_params(const std::string& text) {
  if (text == "auto") return {};
  std::vector<double> out;
  for (const auto& item : split_commas(text)) {
    const auto v = parse_double(item);
    if (!v) throw Error(ErrorCode::UsageError, "--param expects an integer, a comma list or 'auto', got '" + text + "'");
    out.push_back(*v);
  }
  return out;
}

HeaderMode parse_header_mode(const std::string& text) {
  if (text == "auto") return HeaderMode::Auto;
  if (text == "yes" || text == "true") return HeaderMode::Present;
  if (text == "no" || text == "false") return HeaderMode::Absent;
  throw Error(ErrorCode::UsageError, "--header expects auto, yes or no");
}

InnovationSpec make_innovation(const std::string& dist, double dof) {
  InnovationSpec spec;
  try {
    spec.distribution = parse_innovation_distribution(dist);
  } catch (const Error& e) {
    throw Error(ErrorCode::UsageError, e.what());
  }
  spec.dof = dof;
  return spec;
}

void print_optional(std::ostream& out, const char* label, const std::optional<double>& v) {
  out << label << '=';
  if (v)
    out << format_double(*v);
  else
    out << "none";
  out << '\n';
}

AutoCorrProducts products_for(const MvLswArray& spectrum, long max_lag) {
  const auto system =
      build_wavelet_system(make_filter(spectrum.meta().family, spectrum.meta().filter_number),
                           static_cast<int>(spectrum.levels()));
  return autocorr_inner_products(system, spectrum.length(), {.max_lag = max_lag});
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multivariate locally stationary wavelet analysis", "mvlsw"};
  app.require_subcommand(1);

  // fixture
  auto* fixture = app.add_subcommand("fixture", "Write a built-in test spectrum as a bundle");
  bool eq3 = false;
  std::size_t fixture_length = 1024;
  std::string fixture_out;
  fixture->add_flag("--eq3", eq3, "Trivariate spectrum with power at level 2")->required();
  fixture->add_option("--length", fixture_length, "Series length T (power of two, at least 8)");
  fixture->add_option("--out", fixture_out, "Output bundle directory")->required();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Draw a series from a spectrum bundle");
  std::string sim_spectrum, sim_out, sim_dist = "gauss";
  std::uint64_t sim_seed = 1;
  double sim_dof = 5.0;
  simulate->add_option("--spectrum", sim_spectrum, "Spectrum bundle")->required();
  simulate->add_option("--seed", sim_seed, "Random seed");
  simulate->add_option("--dist", sim_dist, "Innovation law: gauss, uniform or t");
  simulate->add_option("--dof", sim_dof, "Degrees of freedom for t innovations (> 4)");
  simulate->add_option("--out", sim_out, "Output CSV")->required();

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Estimate the spectrum of a CSV series");
  std::string est_in, est_out, est_family = "daubexphase", est_kernel = "daniell", est_param = "auto";
  std::string est_pad = "truncate-head", est_columns, est_time, est_header = "auto";
  int est_number = 1;
  bool est_bias = false, est_log = false;
  double est_tol = 1e-10;
  estimate->add_option("--in", est_in, "Input CSV")->required();
  estimate->add_option("--family", est_family, "Wavelet family (daubexphase)");
  estimate->add_option("--number", est_number, "Vanishing moments, 1..10");
  estimate->add_option("--kernel", est_kernel, "daniell or modified-daniell");
  estimate->add_option("--param", est_param, "Kernel half-width: integer, per-level comma list, or auto (sqrt T)");
  estimate->add_flag("--bias-correct", est_bias, "Apply the inner-product bias correction");
  estimate->add_option("--tol", est_tol, "Eigenvalue floor for each spectral matrix");
  estimate->add_option("--pad", est_pad,
                       "Non-dyadic length policy: truncate-head, truncate-tail, zero-pad, reflect-pad, periodic-pad, error");
  estimate->add_option("--columns", est_columns, "Comma list of column names or 1-based indices");
  estimate->add_option("--time-column", est_time, "Column holding sample times");
  estimate->add_flag("--log-returns", est_log, "Use log returns of the selected columns");
  estimate->add_option("--header", est_header, "auto, yes or no");
  estimate->add_option("--out", est_out, "Output bundle directory")->required();

  // coherence
  auto* coh = app.add_subcommand("coherence", "Coherence or partial coherence of a spectrum bundle");
  std::string coh_in, coh_out;
  bool coh_partial = false;
  coh->add_option("--in", coh_in, "Spectrum bundle")->required();
  coh->add_flag("--partial", coh_partial, "Partial coherence");
  coh->add_option("--out", coh_out, "Output bundle directory")->required();

  // ci
  auto* ci = app.add_subcommand("ci", "Approximate point-wise confidence intervals");
  std::string ci_in, ci_lower, ci_upper, ci_variance;
  double ci_alpha = 0.05;
  ci->add_option("--in", ci_in, "Spectrum bundle")->required();
  ci->add_option("--alpha", ci_alpha, "Significance level");
  ci->add_option("--out-lower", ci_lower, "Lower bound bundle")->required();
  ci->add_option("--out-upper", ci_upper, "Upper bound bundle")->required();
  ci->add_option("--out-variance", ci_variance, "Variance bundle");

  // bootstrap
  auto* boot = app.add_subcommand("bootstrap", "Parametric bootstrap intervals");
  std::string boot_in, boot_lower, boot_median, boot_upper, boot_dist = "gauss";
  int boot_reps = 100;
  double boot_alpha = 0.05, boot_dof = 5.0;
  std::uint64_t boot_seed = 1;
  boot->add_option("--in", boot_in, "Spectrum bundle")->required();
  boot->add_option("--reps", boot_reps, "Number of replicates");
  boot->add_option("--alpha", boot_alpha, "Significance level");
  boot->add_option("--seed", boot_seed, "Random seed");
  boot->add_option("--dist", boot_dist, "Innovation law: gauss, uniform or t");
  boot->add_option("--dof", boot_dof, "Degrees of freedom for t innovations (> 4)");
  boot->add_option("--out-lower", boot_lower, "Lower quantile bundle");
  boot->add_option("--out-median", boot_median, "Median bundle");
  boot->add_option("--out-upper", boot_upper, "Upper quantile bundle");

  // plot
  auto* plot = app.add_subcommand("plot", "Plot a slice of a bundle as SVG and CSV");
  std::string plot_in, plot_info, plot_out, plot_ylab;
  int plot_style = 1;
  std::vector<std::string> plot_interval;
  std::vector<double> plot_ylim;
  bool plot_no_diag = false;
  double plot_lwd = 1.5;
  plot->add_option("--in", plot_in, "Bundle to plot")->required();
  plot->add_option("--style", plot_style, "1 single curve, 2 pair panel, 3 level panel, 4 heatmap")->required();
  plot->add_option("--info", plot_info, "p,q,j (style 1), j (style 2) or p,q (styles 3, 4)")->required();
  plot->add_option("--interval", plot_interval, "Lower and upper bound bundles")->expected(2);
  plot->add_flag("--no-diag", plot_no_diag, "Leave out the diagonal panels (style 2)");
  plot->add_option("--ylim", plot_ylim, "Lower and upper y limit")->expected(2);
  plot->add_option("--lwd", plot_lwd, "Line width");
  plot->add_option("--ylab", plot_ylab, "Y axis label");
  plot->add_option("--out", plot_out, "Output .svg (with .csv sidecar) or .csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: UsageError: " << msg << '\n';
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }

  try {
    if (fixture->parsed()) {
      save_bundle(build_eq3_fixture(fixture_length), fixture_out);
    } else if (simulate->parsed()) {
      const MvLswArray s = load_bundle(sim_spectrum);
      if (s.kind() != ArrayKind::Spectrum) throw Error(ErrorCode::DomainError, "simulate needs a spectrum bundle");
      const TimeSeriesMatrix x = rmvlsw(s, InnovationSource{make_innovation(sim_dist, sim_dof), sim_seed});
      write_timeseries_csv(x, std::filesystem::path(sim_out));
    } else if (estimate->parsed()) {
      LoadOptions load;
      if (!est_columns.empty()) load.columns = split_commas(est_columns);
      if (!est_time.empty()) load.time_column = est_time;
      load.header = parse_header_mode(est_header);
      load.log_returns = est_log;
      load.pad = parse_pad_policy(est_pad);
      const TimeSeriesMatrix x = load_timeseries(std::filesystem::path(est_in), load);

      EstimateOptions options;
      options.family = parse_wavelet_family(est_family);
      options.filter_number = est_number;
      options.kernel = parse_kernel_name(est_kernel);
      options.kernel_params = parse_kernel_params(est_param);
      options.bias_correct = est_bias;
      options.tol = est_tol;
      const MvLswArray s = mv_ews(x, options);
      save_bundle(s, est_out);

      const ArrayMeta& m = s.meta();
      out << "length=" << x.length() << '\n' << "channels=" << x.channels() << '\n' << "levels=" << s.levels() << '\n';
      out << "kernel=" << to_string(m.smoothing->name) << '\n' << "half_widths=";
      for (std::size_t i = 0; i < m.smoothing->half_widths.size(); ++i)
        out << (i ? "," : "") << m.smoothing->half_widths[i];
      out << '\n';
      print_optional(out, "gcv", m.gcv);
      print_optional(out, "raw_min_eigenvalue", m.raw_min_eigenvalue);
      print_optional(out, "min_eigenvalue", m.min_eigenvalue);
    } else if (coh->parsed()) {
      const MvLswArray s = load_bundle(coh_in);
      save_bundle(coh_partial ? partial_coherence(s) : coherence(s), coh_out);
    } else if (ci->parsed()) {
      const MvLswArray s = load_bundle(ci_in);
      if (!s.meta().smoothing)
        throw Error(ErrorCode::DomainError, "bundle records no smoothing kernel; estimate it with this tool");
      int max_m = 0;
      for (std::size_t j = 0; j < s.levels(); ++j)
        max_m = std::max(max_m, s.meta().smoothing->half_width(static_cast<int>(j)));
      const AutoCorrProducts products = products_for(s, 2L * max_m);
      const MvLswArray v = var_ews(s, products);
      const IntervalPair bounds = apx_ci(s, v, ci_alpha);
      save_bundle(bounds.lower, ci_lower);
      save_bundle(bounds.upper, ci_upper);
      if (!ci_variance.empty()) save_bundle(v, ci_variance);
    } else if (boot->parsed()) {
      if (boot_lower.empty() && boot_median.empty() && boot_upper.empty())
        throw Error(ErrorCode::UsageError, "bootstrap needs at least one of --out-lower, --out-median, --out-upper");
      const MvLswArray s = load_bundle(boot_in);
      const BootstrapResult r =
          bootstrap_interval(s, boot_reps, boot_alpha, boot_seed, make_innovation(boot_dist, boot_dof));
      if (!boot_lower.empty()) save_bundle(r.interval.lower, boot_lower);
      if (!boot_median.empty()) save_bundle(r.median, boot_median);
      if (!boot_upper.empty()) save_bundle(r.interval.upper, boot_upper);
    } else if (plot->parsed()) {
      const MvLswArray x = load_bundle(plot_in);
      PlotSpec spec;
      spec.style = plot_style;
      spec.info = parse_plot_info(plot_info);
      if (!plot_ylim.empty()) spec.ylim = std::make_pair(plot_ylim[0], plot_ylim[1]);
      spec.line_width = plot_lwd;
      spec.include_diagonal = !plot_no_diag;
      spec.ylab = plot_ylab;
      std::optional<IntervalPair> interval;
      if (!plot_interval.empty())
        interval = IntervalPair{load_bundle(plot_interval[0]), load_bundle(plot_interval[1])};
      emit_plot(x, spec, interval ? &*interval : nullptr, plot_out);
    }
  } catch (const Error& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: " << to_string(e.code()) << ": " << msg << '\n';
    if (e.code() != ErrorCode::UsageError) return 1;
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: IoError: " << msg << '\n';
    return 1;
  }
  return 0;
}

}  // namespace mvlsw
