#include "commands.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "panel_csv.hpp"
#include "result_document.hpp"
#include "simcorr/distributions.hpp"
#include "simcorr/errors.hpp"
#include "simcorr/garch.hpp"
#include "simcorr/inference.hpp"
#include "simcorr/numerics.hpp"
#include "simcorr/reference_estimators.hpp"
#include "simcorr/similarity.hpp"
#include "simcorr/simulation.hpp"

namespace simcorr::cli {

namespace {

// ---- shared option plumbing ---------------------------------------------------------------

struct InputOptions {
  std::string file;
  std::string delimiter = ",";
  bool header = false;
  bool no_header = false;
};

struct OutputOptions {
  std::string output;
};

void add_input_options(CLI::App& cmd, InputOptions& in) {
  cmd.add_option("file", in.file, "CSV panel, one column per series")->required();
  cmd.add_option("--delimiter", in.delimiter, "Cell delimiter")->capture_default_str();
  auto* h = cmd.add_flag("--header", in.header, "First row is a header");
  auto* nh = cmd.add_flag("--no-header", in.no_header, "First row is data");
  h->excludes(nh);
}

void add_output_option(CLI::App& cmd, OutputOptions& o) {
  cmd.add_option("-o,--output", o.output, "Write the JSON document here instead of stdout");
}

struct LoadedPanel {
  Panel panel;
  std::string digest;
};

LoadedPanel load_panel(const InputOptions& in) {
  if (in.delimiter.size() != 1) throw DomainError("--delimiter must be a single character");
  PanelOptions options;
  options.delimiter = in.delimiter.front();
  if (in.header) options.header = HeaderMode::present;
  if (in.no_header) options.header = HeaderMode::absent;
  const std::string text = read_file(in.file);
  return {parse_panel(text, options), sha256_hex(text)};
}

struct StandardizeChoice {
  Standardization method = Standardization::none;
  std::vector<double> scales;
  std::string label = "none";
};

StandardizeChoice parse_standardize(const std::string& spec) {
  StandardizeChoice choice;
  choice.label = spec;
  if (spec == "none") return choice;
  if (spec == "sample") {
    choice.method = Standardization::sample_stdev;
    return choice;
  }
  constexpr std::string_view prefix = "scales=";
  if (spec.starts_with(prefix)) {
    choice.method = Standardization::external_scales;
    std::string_view rest = std::string_view(spec).substr(prefix.size());
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto cell = rest.substr(0, comma);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw DomainError("--standardize: cannot parse scale '" + std::string(cell) + "'");
      }
      choice.scales.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (choice.scales.empty()) throw DomainError("--standardize scales= needs at least one value");
    return choice;
  }
  throw DomainError("--standardize must be none, sample or scales=a,b,...");
}

Sample apply_standardize(const Sample& s, const StandardizeChoice& choice) {
  switch (choice.method) {
    case Standardization::none:
      return s;
    case Standardization::sample_stdev:
      return standardize(s);
    case Standardization::external_scales:
      return standardize(s, choice.scales);
  }
  return s;
}

void emit(const ResultDocument& doc, const OutputOptions& o, std::ostream& out) {
  const std::string text = dump(doc.to_json()) + "\n";
  if (o.output.empty()) {
    out << text;
  } else {
    write_atomically(o.output, text);
  }
}

std::string shortest(double v) {
  std::array<char, 40> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

std::string format17(double v) {
  std::array<char, 40> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return {buf.data(), res.ptr};
}

Json pair_json(double a, double b) { return Json::array({a, b}); }

void require_interval_invariants(const ConfidenceInterval& ci) {
  const double floor = ci.n == 2 ? -1.0 : -1.0 / static_cast<double>(ci.n - 1);
  if (!(floor <= ci.lower && ci.lower <= ci.upper && ci.upper <= 1.0)) {
    throw NumericalError("interval failed validation before writing");
  }
}

// ---- estimate ------------------------------------------------------------------------------

struct EstimateOptions {
  InputOptions in;
  OutputOptions out;
  bool demean = false;
  std::string standardize = "none";
  bool bias_correct = false;
  bool benchmarks = false;
};

int cmd_estimate(const EstimateOptions& o, std::ostream& out) {
  const auto [panel, digest] = load_panel(o.in);
  const StandardizeChoice choice = parse_standardize(o.standardize);
  Sample sample = o.demean ? panel.sample.demeaned() : panel.sample;
  sample = apply_standardize(sample, choice);
  const std::size_t n = sample.cols();

  ResultDocument doc;
  doc.command = "estimate";
  doc.inputs_digest = digest;
  doc.parameters = {{"file", o.in.file},
                    {"columns", panel.names},
                    {"T", sample.rows()},
                    {"n", n},
                    {"demean", o.demean},
                    {"standardize", choice.label},
                    {"bias-correct", o.bias_correct},
                    {"benchmarks", o.benchmarks}};

  const SimilarityEstimate raw = gamma_hat(sample);
  const double omega = omega_n(n);
  doc.estimates["gamma_hat"] = raw.gamma_hat;
  if (o.bias_correct) doc.estimates["gamma_hat_bias_corrected"] = raw.gamma_hat + omega;
  doc.estimates["omega_n"] = omega;
  doc.estimates["rho_hat"] = equicorr_phi_inverse(raw.gamma_hat + omega, n);
  if (n > 2 && !o.bias_correct) {
    doc.diagnostics["note"] = "rho_hat maps gamma_hat + omega_n, the consistent estimate";
  }

  if (o.benchmarks) {
    if (n != 2) throw DataError("--benchmarks needs a two-column panel");
    Json b = Json::object();
    b["sample"] = estimate(ReferenceEstimator::sample, sample).value;
    b["fisher-sample"] = estimate(ReferenceEstimator::fisher_sample, sample).value;
    if (sample.rows() >= 2) {
      b["kendall"] = estimate(ReferenceEstimator::kendall, sample).value;
      b["kendall-greiner"] = estimate(ReferenceEstimator::kendall_greiner, sample).value;
    }
    b["quadrant"] = estimate(ReferenceEstimator::quadrant, sample).value;
    doc.estimates["benchmarks"] = b;
  }
  emit(doc, o.out, out);
  return ok;
}

// ---- ci ----------------------------------------------------------------------------------

struct CiCommandOptions {
  InputOptions in;
  OutputOptions out;
  double level = 0.95;
  std::string law = "auto";
  std::string target = "rho";
  bool demean = false;
  std::string standardize = "none";
  double test_level = 0.05;
};

int cmd_ci(const CiCommandOptions& o, std::ostream& out) {
  const auto [panel, digest] = load_panel(o.in);
  const StandardizeChoice choice = parse_standardize(o.standardize);
  const Sample sample = o.demean ? panel.sample.demeaned() : panel.sample;

  CiOptions options;
  options.level = o.level;
  options.law = o.law == "exact" ? Law::exact : o.law == "asymptotic" ? Law::asymptotic : Law::automatic;
  options.target = o.target == "xi" ? Target::xi : Target::rho;
  options.standardization = choice.method;
  options.scales = choice.scales;
  const ConfidenceInterval ci = correlation_ci(sample, options);
  require_interval_invariants(ci);

  ResultDocument doc;
  doc.command = "ci";
  doc.inputs_digest = digest;
  doc.parameters = {{"file", o.in.file},
                    {"columns", panel.names},
                    {"T", ci.T},
                    {"n", ci.n},
                    {"level", o.level},
                    {"law", o.law},
                    {"target", o.target},
                    {"demean", o.demean},
                    {"standardize", choice.label}};

  doc.estimates["center"] = ci.center;
  doc.estimates["point"] = ci.point;

  const char* scale_name = ci.n == 2 ? "fisher-scale" : "log-matrix-scale";
  doc.intervals = {{"level", ci.level},
                   {"law", std::string(to_string(ci.law))},
                   {"target", std::string(to_string(ci.target))},
                   {scale_name, pair_json(ci.transformed_lower, ci.transformed_upper)},
                   {"correlation-scale", pair_json(ci.lower, ci.upper)},
                   {"conservative", ci.conservative},
                   {"approximately-exact", ci.approximately_exact}};

  const Sample tested = apply_standardize(sample, choice);
  const ZeroCorrelationTest test = zero_correlation_test(tested, o.test_level, ci.law);
  doc.estimates["zero-correlation-test"] = {{"statistic", test.statistic},
                                            {"p-value", test.p_value},
                                            {"level", test.level},
                                            {"reject", test.reject}};
  emit(doc, o.out, out);
  return ok;
}

// ---- quantiles -----------------------------------------------------------------------------

struct QuantileOptions {
  OutputOptions out;
  std::vector<std::size_t> T_list{1,  2,  3,  4,  5,  6,  7,  8,  9,  10, 11, 12,
                                  13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24,
                                  25, 30, 35, 40, 45, 50, 55, 60, 70, 80, 90, 100};
  std::vector<double> p_list{0.90, 0.95, 0.96, 0.97, 0.975, 0.98, 0.985, 0.99, 0.995, 0.9975, 0.9995};
  std::size_t n = 2;
  std::string format = "text";
  bool normal_row = true;
};

int cmd_quantiles(const QuantileOptions& o, std::ostream& out) {
  for (double p : o.p_list) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("--p-list values must lie in (0, 1)");
  }
  for (auto T : o.T_list) {
    if (T < 1) throw DomainError("--T-list values must be at least 1");
  }
  if (o.n < 2) throw DomainError("--n must be at least 2");

  std::vector<std::vector<double>> table;
  for (auto T : o.T_list) {
    FiniteSampleLaw law(T, o.n);
    std::vector<double> row;
    for (double p : o.p_list) row.push_back(law.quantile(p));
    table.push_back(std::move(row));
  }
  std::vector<double> normal;
  for (double p : o.p_list) normal.push_back(numerics::normal_quantile(p));

  std::ostringstream text;
  if (o.format == "json") {
    ResultDocument doc;
    doc.command = "quantiles";
    doc.parameters = {{"T-list", o.T_list}, {"p-list", o.p_list}, {"n", o.n}};
    doc.inputs_digest = sha256_hex(dump(doc.parameters, 0));
    Json rows = Json::array();
    for (std::size_t i = 0; i < table.size(); ++i) rows.push_back({{"T", o.T_list[i]}, {"quantiles", table[i]}});
    doc.estimates["rows"] = rows;
    if (o.normal_row) doc.estimates["normal"] = normal;
    text << dump(doc.to_json()) << "\n";
  } else if (o.format == "csv") {
    text << "T";
    for (double p : o.p_list) text << ',' << p;
    text << "\n" << std::fixed << std::setprecision(4);
    for (std::size_t i = 0; i < table.size(); ++i) {
      text << o.T_list[i];
      for (double q : table[i]) text << ',' << q;
      text << "\n";
    }
    if (o.normal_row) {
      text << "N(0,1)";
      for (double q : normal) text << ',' << q;
      text << "\n";
    }
  } else {
    text << std::setw(8) << "T";
    for (double p : o.p_list) text << std::setw(9) << p;
    text << "\n" << std::fixed << std::setprecision(4);
    for (std::size_t i = 0; i < table.size(); ++i) {
      text << std::setw(8) << o.T_list[i];
      for (double q : table[i]) text << std::setw(9) << q;
      text << "\n";
    }
    if (o.normal_row) {
      text << std::setw(8) << "N(0,1)";
      for (double q : normal) text << std::setw(9) << q;
      text << "\n";
    }
  }
  if (o.out.output.empty()) {
    out << text.str();
  } else {
    write_atomically(o.out.output, text.str());
  }
  return ok;
}

// ---- simulate ------------------------------------------------------------------------------

struct SimulateOptions {
  OutputOptions out;
  std::string family = "gaussian";
  double nu = 5.0;
  double rho = 0.5;
  std::size_t n = 2;
  std::size_t T = 8;
  std::size_t reps = 10000;
  std::uint64_t seed = 0;
  std::vector<std::string> estimators{"similarity"};
  std::string histogram;
  std::size_t bins = 80;
  std::size_t threads = 1;
};

int cmd_simulate(const SimulateOptions& o, std::ostream& out) {
  const Eigen::MatrixXd scatter = build_equicorrelation(1.0, o.rho, o.n);
  EllipticalFamily family;
  if (o.family == "gaussian") {
    family = EllipticalFamily::gaussian(scatter);
  } else if (o.family == "t" || o.family == "student-t") {
    family = EllipticalFamily::student_t(o.nu, scatter);
  } else if (o.family == "cauchy") {
    family = EllipticalFamily::cauchy(scatter);
  } else {
    throw DomainError("--family must be gaussian, t or cauchy");
  }

  StudyConfig config;
  config.T = o.T;
  config.replications = o.reps;
  config.histogram_bins = o.bins;
  config.threads = o.threads;
  config.estimators.clear();
  for (const auto& e : o.estimators) config.estimators.push_back(parse_study_estimator(e));
  const StudyResult result = mc_sampling_study(family, config, SeededRng(o.seed));

  ResultDocument doc;
  doc.command = "simulate";
  doc.seed = o.seed;
  doc.parameters = {{"family", std::string(to_string(family.kind))},
                    {"nu", family.kind == FamilyKind::gaussian ? Json(nullptr) : Json(family.nu)},
                    {"rho", o.rho},
                    {"n", o.n},
                    {"T", o.T},
                    {"reps", o.reps},
                    {"estimators", o.estimators},
                    {"bins", o.bins}};
  doc.inputs_digest = sha256_hex(dump(doc.parameters, 0) + std::to_string(o.seed));

  const double root_tr = std::sqrt(static_cast<double>(o.T) * static_cast<double>(o.reps));
  for (const auto& s : result.estimators) {
    const bool similarity = s.estimator == StudyEstimator::similarity;
    Json quantiles = Json::object();
    for (std::size_t i = 0; i < s.quantile_levels.size(); ++i) {
      quantiles[shortest(s.quantile_levels[i])] = s.quantiles[i];
    }
    const double target = similarity ? result.target_phi : fisher(result.target_rho);
    Json entry = {{"target", target},
                  {"raw-mean", s.raw_mean},
                  {"raw-variance", s.raw_variance},
                  {"standardized-mean", s.standardized_mean},
                  {"standardized-variance", s.standardized_variance},
                  {"standardized-quantiles", quantiles}};
    if (similarity) {
      const double band = 3.0 * result.similarity_scale / root_tr;
      entry["mc-band"] = band;
      entry["mean-within-band"] = std::abs(s.raw_mean - target) <= band;
    }
    entry["histogram"] = {{"lower", s.histogram.lower},
                          {"upper", s.histogram.upper},
                          {"counts", s.histogram.counts},
                          {"below", s.histogram.below},
                          {"above", s.histogram.above}};
    doc.estimates[std::string(to_string(s.estimator))] = entry;
  }
  doc.diagnostics = {{"redraws", result.redraws},
                     {"rng", std::string(SeededRng::algorithm)},
                     {"similarity-scale", result.similarity_scale}};

  if (!o.histogram.empty()) {
    std::ostringstream csv;
    csv << "estimator,bin_lower,bin_upper,count,density\n";
    for (const auto& s : result.estimators) {
      const auto density = s.histogram.density();
      const double w = s.histogram.bin_width();
      for (std::size_t b = 0; b < s.histogram.counts.size(); ++b) {
        const double lo = s.histogram.lower + w * static_cast<double>(b);
        csv << to_string(s.estimator) << ',' << format17(lo) << ',' << format17(lo + w) << ','
            << s.histogram.counts[b] << ',' << format17(density[b]) << "\n";
      }
    }
    write_atomically(o.histogram, csv.str());
    doc.paths["histogram"] = o.histogram;
  }
  emit(doc, o.out, out);
  return ok;
}

// ---- garch ---------------------------------------------------------------------------------

struct GarchOptions {
  InputOptions in;
  OutputOptions out;
  std::string mode = "bivariate";
  std::string emit_paths;
  std::optional<double> winsorize;
  std::size_t min_T = 100;
  std::size_t starts = 5;
};

Json se_json(const std::vector<double>& se, std::initializer_list<const char*> names) {
  if (se.empty()) return nullptr;
  Json j = Json::object();
  std::size_t i = 0;
  for (const char* name : names) j[name] = se[i++];
  return j;
}

int cmd_garch(const GarchOptions& o, std::ostream& out) {
  const auto [panel, digest] = load_panel(o.in);
  FitConfig config;
  config.mode = o.mode == "deco" ? CorrMode::deco : CorrMode::bivariate;
  config.min_T = o.min_T;
  config.starts = o.starts;
  config.winsorize = o.winsorize;
  const TwoStepFit fit = fit_two_step(panel.sample, config);
  const std::size_t n = panel.sample.cols();
  const std::size_t T = panel.sample.rows();

  const double floor = n == 2 ? -1.0 : -1.0 / static_cast<double>(n - 1);
  for (double r : fit.paths.correlation.rho) {
    if (!(r > floor && r < 1.0)) throw NumericalError("filtered correlation left its admissible range");
  }
  for (const auto& h : fit.paths.h) {
    for (double v : h) {
      if (!(v > 0.0) || !std::isfinite(v)) throw NumericalError("filtered variance is not positive");
    }
  }

  ResultDocument doc;
  doc.command = "garch";
  doc.inputs_digest = digest;
  doc.parameters = {{"file", o.in.file},
                    {"columns", panel.names},
                    {"T", T},
                    {"n", n},
                    {"mode", std::string(to_string(config.mode))},
                    {"min-T", o.min_T},
                    {"starts", o.starts},
                    {"winsorize", o.winsorize ? Json(*o.winsorize) : Json(nullptr)}};

  Json assets = Json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = fit.assets[i];
    assets.push_back({{"name", panel.names[i]},
                      {"mu", a.mu},
                      {"h0", a.h0},
                      {"alpha", a.params.alpha},
                      {"beta", a.params.beta},
                      {"kappa", a.params.kappa},
                      {"eta", a.params.eta},
                      {"standard-errors", se_json(a.standard_errors, {"alpha", "beta", "kappa", "eta"})},
                      {"log-likelihood", a.log_likelihood},
                      {"converged", a.converged},
                      {"boundary", a.boundary}});
  }
  const auto& c = fit.correlation;
  Json corr = {{"alpha", c.params.alpha},
               {"beta", c.params.beta},
               {"kappa", c.params.kappa},
               {"standard-errors", se_json(c.standard_errors, {"alpha", "beta", "kappa"})},
               {"phi0", c.phi0},
               {"log-likelihood", c.log_likelihood},
               {"start-log-likelihood", c.start_log_likelihood},
               {"converged", c.converged},
               {"boundary", c.boundary}};
  if (c.params.beta + c.params.kappa < 1.0) {
    const double phi_bar = c.params.unconditional_phi(n);
    corr["unconditional-phi"] = phi_bar;
    corr["unconditional-rho"] = equicorr_phi_inverse(phi_bar, n);
  }
  doc.estimates = {{"assets", assets}, {"correlation", corr}, {"log-likelihood", fit.log_likelihood}};
  doc.diagnostics = {{"status", fit.status},
                     {"converged", fit.converged},
                     {"degenerate-rows", fit.paths.correlation.degenerate_rows}};

  if (!o.emit_paths.empty()) {
    std::ostringstream csv;
    csv << "t";
    for (const auto& name : panel.names) csv << ",h_" << name;
    csv << ",phi,rho\n";
    for (std::size_t t = 0; t < T; ++t) {
      csv << t;
      for (std::size_t i = 0; i < n; ++i) csv << ',' << format17(fit.paths.h[i][t]);
      csv << ',' << format17(fit.paths.correlation.phi[t]) << ',' << format17(fit.paths.correlation.rho[t]) << "\n";
    }
    write_atomically(o.emit_paths, csv.str());
    doc.paths = {{"file", o.emit_paths}, {"rows", T}};
  }
  emit(doc, o.out, out);
  return fit.converged ? ok : numerical_error;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust similarity-based correlation estimation", "simcorr"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  EstimateOptions est;
  auto* c_est = app.add_subcommand("estimate", "Similarity estimate of the correlation");
  add_input_options(*c_est, est.in);
  add_output_option(*c_est, est.out);
  c_est->add_flag("--demean", est.demean, "Subtract column means first");
  c_est->add_option("--standardize", est.standardize, "none | sample | scales=a,b,...")->capture_default_str();
  c_est->add_flag("--bias-correct", est.bias_correct, "Report gamma_hat + omega_n");
  c_est->add_flag("--benchmarks", est.benchmarks, "Also report the reference estimators");

  CiCommandOptions ci;
  auto* c_ci = app.add_subcommand("ci", "Confidence interval and zero-correlation test");
  add_input_options(*c_ci, ci.in);
  add_output_option(*c_ci, ci.out);
  c_ci->add_option("--level", ci.level, "Coverage probability")->capture_default_str();
  c_ci->add_option("--law", ci.law, "exact | asymptotic | auto")
      ->check(CLI::IsMember({"exact", "asymptotic", "auto"}))
      ->capture_default_str();
  c_ci->add_option("--target", ci.target, "rho | xi")->check(CLI::IsMember({"rho", "xi"}))->capture_default_str();
  c_ci->add_flag("--demean", ci.demean, "Subtract column means first");
  c_ci->add_option("--standardize", ci.standardize, "none | sample | scales=a,b,...")->capture_default_str();
  c_ci->add_option("--test-level", ci.test_level, "Size of the zero-correlation test")->capture_default_str();

  QuantileOptions q;
  auto* c_q = app.add_subcommand("quantiles", "Critical values of the standardized estimator");
  add_output_option(*c_q, q.out);
  c_q->add_option("--T-list", q.T_list, "Sample sizes")->delimiter(',');
  c_q->add_option("--p-list", q.p_list, "Probability levels")->delimiter(',');
  c_q->add_option("--n", q.n, "Dimension")->capture_default_str();
  c_q->add_option("--format", q.format, "text | csv | json")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
  c_q->add_flag("!--no-normal-row", q.normal_row, "Omit the N(0,1) row");

  SimulateOptions sim;
  auto* c_sim = app.add_subcommand("simulate", "Monte Carlo sampling study");
  add_output_option(*c_sim, sim.out);
  c_sim->add_option("--family", sim.family, "gaussian | t | cauchy")
      ->check(CLI::IsMember({"gaussian", "t", "student-t", "cauchy"}))
      ->capture_default_str();
  c_sim->add_option("--nu", sim.nu, "Student t degrees of freedom")->capture_default_str();
  c_sim->add_option("--rho", sim.rho, "Common correlation")->capture_default_str();
  c_sim->add_option("--n", sim.n, "Dimension")->capture_default_str();
  c_sim->add_option("--T", sim.T, "Sample size")->capture_default_str();
  c_sim->add_option("--reps", sim.reps, "Replications")->capture_default_str();
  c_sim->add_option("--seed", sim.seed, "Master seed")->required();
  c_sim->add_option("--estimators", sim.estimators, "similarity,fisher-sample,kendall-greiner,quadrant")
      ->delimiter(',');
  c_sim->add_option("--histogram", sim.histogram, "Write binned densities to this CSV");
  c_sim->add_option("--bins", sim.bins, "Histogram bins")->capture_default_str();
  c_sim->add_option("--threads", sim.threads, "Worker threads")->capture_default_str();

  GarchOptions g;
  auto* c_g = app.add_subcommand("garch", "Two-step robust correlation GARCH fit");
  add_input_options(*c_g, g.in);
  add_output_option(*c_g, g.out);
  c_g->add_option("--mode", g.mode, "bivariate | deco")
      ->check(CLI::IsMember({"bivariate", "deco"}))
      ->capture_default_str();
  c_g->add_option("--emit-paths", g.emit_paths, "Write per-date h, phi and rho to this CSV");
  c_g->add_option("--winsorize", g.winsorize, "Cap |phi_r| innovations at this value");
  c_g->add_option("--min-T", g.min_T, "Smallest admissible sample")->capture_default_str();
  c_g->add_option("--starts", g.starts, "Optimizer starting points (1 to 5)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return usage_error;
  }

  try {
    if (*c_est) return cmd_estimate(est, out);
    if (*c_ci) return cmd_ci(ci, out);
    if (*c_q) return cmd_quantiles(q, out);
    if (*c_sim) return cmd_simulate(sim, out);
    if (*c_g) return cmd_garch(g, out);
  } catch (const DegenerateObservation& e) {
    err << "simcorr: degenerate observation: " << e.what() << "\n";
    return data_error;
  } catch (const DataError& e) {
    err << "simcorr: data error: " << e.what() << "\n";
    return data_error;
  } catch (const DomainError& e) {
    err << "simcorr: invalid argument: " << e.what() << "\n";
    return usage_error;
  } catch (const NumericalError& e) {
    err << "simcorr: numerical failure: " << e.what();
    if (!e.diagnostics().empty()) err << " (" << e.diagnostics() << ")";
    err << "\n";
    return numerical_error;
  } catch (const std::exception& e) {
    err << "simcorr: " << e.what() << "\n";
    return internal_error;
  }
  return usage_error;
}

}  // namespace simcorr::cli
