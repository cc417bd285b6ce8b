// Command-line surface: single-point evaluations, sweeps, phase-diagram data
// and oracle verification. Temperatures are always the scaled quantity
// 2 k_B T / (hbar omega); energies are in units of hbar omega.

#include <CLI11.hpp>
#include <Eigen/Dense>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "harmlat/covariance.hpp"
#include "harmlat/entanglement.hpp"
#include "harmlat/errors.hpp"
#include "harmlat/lattice.hpp"
#include "harmlat/oracle.hpp"
#include "harmlat/sweep.hpp"
#include "harmlat/version.hpp"
#include "harmlat/witness.hpp"

namespace {

using namespace harmlat;

struct CommonOpts {
  int dim = 1;
  int sites = 49;
  double omega = 1.0;
  double delta = 0.0;
  std::string format = "csv";
  std::string out;
  double tol = 1e-6;
  std::string convention;  // "", "paper" or "mean"

  LatticeSpec spec() const { return LatticeSpec{dim, sites, omega, delta}; }
  std::optional<BoundConvention> bound_convention() const {
    if (convention.empty()) return std::nullopt;
    if (convention == "paper") return BoundConvention::paper;
    if (convention == "mean") return BoundConvention::mean_frequency;
    fail(errc::invalid_request, "bound convention must be 'paper' or 'mean'");
  }
};

void add_spec_flags(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--dim", opts.dim, "lattice dimension (1-3)")->capture_default_str();
  cmd->add_option("--sites", opts.sites, "sites per direction (odd, >= 3)")->capture_default_str();
  cmd->add_option("--omega", opts.omega, "nearest-neighbour coupling")->capture_default_str();
  cmd->add_option("--delta", opts.delta, "on-site trap")->capture_default_str();
}

void add_output_flags(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--format", opts.format, "csv or json")->capture_default_str();
  cmd->add_option("--out", opts.out, "output path (default: stdout)");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (const char ch : text) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(errc::invalid_request, "cannot parse " + what + " from '" + text + "'");
  }
}

/// "lo:hi:count[:log|lin]"
AxisRange parse_range(const std::string& text, SweepAxis axis) {
  const auto parts = split(text, ':');
  if (parts.size() < 3 || parts.size() > 4) {
    fail(errc::invalid_request, "range must be lo:hi:count[:log|lin], got '" + text + "'");
  }
  AxisRange r;
  r.axis = axis;
  r.min = parse_number(parts[0], "range minimum");
  r.max = parse_number(parts[1], "range maximum");
  r.count = static_cast<int>(parse_number(parts[2], "range count"));
  if (parts.size() == 4) {
    if (parts[3] == "log") r.spacing = Spacing::logarithmic;
    else if (parts[3] == "lin" || parts[3] == "linear") r.spacing = Spacing::linear;
    else fail(errc::invalid_request, "spacing must be 'log' or 'lin', got '" + parts[3] + "'");
  }
  return r;
}

/// "name:lo:hi:count[:log|lin]" with name in temp|trap|sites|dim
AxisRange parse_axis(const std::string& text) {
  const auto pos = text.find(':');
  if (pos == std::string::npos) {
    fail(errc::invalid_request, "axis must be name:lo:hi:count[:log|lin], got '" + text + "'");
  }
  const std::string name = text.substr(0, pos);
  SweepAxis axis;
  if (name == "temp" || name == "temperature") axis = SweepAxis::temperature;
  else if (name == "trap" || name == "delta") axis = SweepAxis::trap_ratio;
  else if (name == "sites") axis = SweepAxis::sites;
  else if (name == "dim" || name == "dimension") axis = SweepAxis::dimension;
  else fail(errc::invalid_request, "unknown axis '" + name + "' (temp|trap|sites|dim)");
  return parse_range(text.substr(pos + 1), axis);
}

/// comma-separated vectors, components joined by 'x': "1,2" or "1x0,2x1"
std::vector<std::vector<int>> parse_separations(const std::string& text) {
  std::vector<std::vector<int>> out;
  for (const auto& vec : split(text, ',')) {
    std::vector<int> components;
    for (const auto& comp : split(vec, 'x')) {
      const double v = parse_number(comp, "separation component");
      const int c = static_cast<int>(v);
      if (static_cast<double>(c) != v) {
        fail(errc::invalid_request, "separation component '" + comp + "' is not an integer");
      }
      components.push_back(c);
    }
    out.push_back(std::move(components));
  }
  return out;
}

ObservableSet parse_observables(const std::string& text) {
  ObservableSet obs;
  for (const auto& name : split(text, ',')) {
    if (name == "negativity") obs.negativity = true;
    else if (name == "s1") obs.s1 = true;
    else if (name == "s2") obs.s2 = true;
    else if (name == "covariance_entries" || name == "cov") obs.covariance_entries = true;
    else if (name == "witness_verdict" || name == "witness") obs.witness_verdict = true;
    else if (name == "internal_energy" || name == "energy") obs.internal_energy = true;
    else fail(errc::invalid_request, "unknown observable '" + name + "'");
  }
  return obs;
}

void write_output(const DataTable& table, const CommonOpts& opts) {
  EmitFormat format;
  if (opts.format == "csv") format = EmitFormat::csv;
  else if (opts.format == "json") format = EmitFormat::json;
  else fail(errc::invalid_request, "format must be 'csv' or 'json'");

  const std::string payload = emit(table, format);
  if (opts.out.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream file(opts.out, std::ios::binary);
  if (!file) fail(errc::io_failure, "cannot open '" + opts.out + "' for writing");
  file << payload;
  if (!file) fail(errc::io_failure, "write to '" + opts.out + "' failed");
}

// ---------------------------------------------------------------------------

int run_spectrum(const CommonOpts& opts) {
  const LatticeSpec spec = validate_spec(opts.spec());
  DataTable table;
  detail::base_metadata(table, "spectrum");
  table.columns = {"dimension", "sites", "omega", "delta_over_omega"};
  for (int j = 0; j < spec.dimension; ++j) table.columns.push_back("l" + std::to_string(j + 1));
  table.columns.push_back("x");        // omega_l / omega
  table.columns.push_back("omega_l");  // absolute
  for (const auto& mode : ModeRange(spec)) {
    const double x = mode_frequency(spec, mode);
    std::vector<Cell> row{Cell{std::int64_t{spec.dimension}}, Cell{std::int64_t{spec.side}},
                          Cell{spec.coupling}, Cell{spec.trap_ratio()}};
    for (int j = 0; j < spec.dimension; ++j) {
      row.emplace_back(std::int64_t{mode.l[static_cast<std::size_t>(j)]});
    }
    row.emplace_back(x);
    row.emplace_back(x * spec.coupling);
    table.rows.push_back(std::move(row));
  }
  write_output(table, opts);
  return 0;
}

int run_pointwise(const std::string& command, const CommonOpts& opts, double temp,
                  const std::string& temp_range, const std::string& separations,
                  const ObservableSet& observables) {
  SweepRequest req;
  req.base = opts.spec();
  req.observables = observables;
  req.convention = opts.bound_convention();
  req.tolerance = opts.tol;
  if (temp_range.empty()) {
    req.base_temp_scaled = temp;
  } else {
    req.axis1 = parse_range(temp_range, SweepAxis::temperature);
  }
  if (!separations.empty()) req.separations = parse_separations(separations);

  auto table = sweep_table(req, run_sweep(req));
  for (auto& [key, value] : table.metadata) {
    if (key == "command") value = Cell{command};
  }
  write_output(table, opts);

  // single-point commands surface a computation failure through the exit
  // code; range sweeps isolate errors to their rows instead
  if (!temp_range.empty()) return 0;
  bool any_error = false;
  for (const auto& row : table.rows) {
    if (!std::holds_alternative<std::monostate>(row.back())) any_error = true;
  }
  return any_error ? 2 : 0;
}

int run_tcrit(const CommonOpts& opts, const std::string& separations, double scan_max) {
  const LatticeSpec spec = validate_spec(opts.spec());
  std::vector<std::vector<int>> seps;
  if (separations.empty()) {
    seps.push_back(std::vector<int>(static_cast<std::size_t>(spec.dimension), 0));
    seps.back()[0] = 1;
  } else {
    seps = parse_separations(separations);
  }

  DataTable table;
  detail::base_metadata(table, "tcrit");
  table.metadata.emplace_back("scan_max", Cell{scan_max});
  table.metadata.emplace_back("tolerance", Cell{opts.tol});
  table.columns = {"dimension", "sites", "omega", "delta_over_omega", "r", "tcrit_scaled", "error"};

  bool any_error = false;
  for (auto sep : seps) {
    sep.resize(static_cast<std::size_t>(spec.dimension), 0);
    std::vector<Cell> row{Cell{std::int64_t{spec.dimension}}, Cell{std::int64_t{spec.side}},
                          Cell{spec.coupling}, Cell{spec.trap_ratio()},
                          Cell{detail::separation_label(sep)}};
    try {
      const auto canonical = canonical_separation(spec, sep);
      row.emplace_back(critical_temperature(
          spec, std::span<const int>(canonical.data(), static_cast<std::size_t>(spec.dimension)),
          scan_max, opts.tol));
      row.emplace_back(std::monostate{});
    } catch (const Error& e) {
      any_error = true;
      row.emplace_back(std::monostate{});
      row.emplace_back(std::string(errc_name(e.code())));
    }
    table.rows.push_back(std::move(row));
  }
  write_output(table, opts);
  return any_error ? 2 : 0;
}

int run_witness(const CommonOpts& opts, double temp) {
  const LatticeSpec spec = validate_spec(opts.spec());
  const BoundConvention convention = opts.bound_convention().value_or(default_convention(spec));
  const auto report = witness_verdict(spec, temp, convention);

  DataTable table;
  detail::base_metadata(table, "witness");
  table.metadata.emplace_back("bound_convention", Cell{std::string(convention_name(convention))});
  if (spec.dimension > 1) {
    table.metadata.emplace_back(
        "bound_convention_note",
        Cell{std::string("printed and mean-frequency bounds differ above 1D")});
  }
  table.columns = {"dimension",       "sites",           "omega",
                   "delta_over_omega", "temp_scaled",     "internal_energy",
                   "separable_bound", "witness_temperature", "witness_verdict"};
  table.rows.push_back({Cell{std::int64_t{spec.dimension}}, Cell{std::int64_t{spec.side}},
                        Cell{spec.coupling}, Cell{spec.trap_ratio()}, Cell{temp},
                        Cell{report.internal_energy}, Cell{report.separable_bound},
                        Cell{report.witness_temperature},
                        Cell{std::string(verdict_name(report.verdict))}});
  write_output(table, opts);
  return 0;
}

int run_sweep_cmd(const CommonOpts& opts, double temp, const std::string& axis1,
                  const std::string& axis2, const std::string& separations,
                  const std::string& observables, bool annotate) {
  SweepRequest req;
  req.base = opts.spec();
  req.base_temp_scaled = temp;
  req.observables = observables.empty() ? parse_observables("negativity,s1,s2")
                                        : parse_observables(observables);
  req.convention = opts.bound_convention();
  req.tolerance = opts.tol;
  req.annotate_literature = annotate;
  if (!axis1.empty()) req.axis1 = parse_axis(axis1);
  if (!axis2.empty()) req.axis2 = parse_axis(axis2);
  if (!separations.empty()) req.separations = parse_separations(separations);

  write_output(sweep_table(req, run_sweep(req)), opts);
  return 0;
}

int run_phase_diagram(const CommonOpts& opts, const std::string& delta_range, double scan_max,
                      bool annotate) {
  AxisRange axis = parse_range(delta_range, SweepAxis::trap_ratio);
  if (delta_range.find(":lin") == std::string::npos && split(delta_range, ':').size() == 3) {
    axis.spacing = Spacing::logarithmic;  // log spacing is the natural default here
  }
  const auto table = phase_diagram(opts.spec(), axis, scan_max, opts.tol,
                                   opts.bound_convention(), annotate);
  write_output(table, opts);
  return 0;
}

std::string fmt_dev(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

int run_verify() {
  int failures = 0;
  const auto report = [&failures](const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.empty() ? "" : ": ",
                detail.c_str());
    if (!ok) ++failures;
  };

  // dispersion vs dense normal modes
  {
    double worst = 0.0;
    for (const LatticeSpec spec : {LatticeSpec{1, 7, 1.0, 0.4}, LatticeSpec{2, 5, 1.0, 0.8},
                                   LatticeSpec{3, 3, 1.0, 0.2}}) {
      const auto decomp = oracle::dense_modes(spec);
      std::vector<double> analytic;
      for (const auto& m : ModeRange(spec)) analytic.push_back(mode_frequency(spec, m));
      std::sort(analytic.begin(), analytic.end());
      for (std::size_t i = 0; i < analytic.size(); ++i) {
        worst = std::max(worst,
                         std::fabs(analytic[i] - decomp.frequencies(static_cast<Eigen::Index>(i))));
      }
    }
    report("dispersion equals dense normal modes", worst < 1e-10,
           "max deviation " + fmt_dev(worst));
  }

  // analytic covariance vs mode reconstruction
  {
    double worst = 0.0;
    const LatticeSpec chain{1, 7, 1.0, 0.3};
    const auto decomp = oracle::dense_modes(chain);
    for (const double tau : {0.0, 0.7}) {
      for (const int r : {1, 2, 3}) {
        const auto lhs = two_site_covariance(chain, tau, std::vector<int>{r});
        const auto rhs = oracle::covariance_from_modes(decomp, tau, 0, r);
        worst = std::max({worst, std::fabs(lhs.a - rhs.a), std::fabs(lhs.b - rhs.b),
                          std::fabs(lhs.e - rhs.e), std::fabs(lhs.f - rhs.f)});
      }
    }
    const LatticeSpec plane{2, 5, 1.0, 0.6};
    const auto pdec = oracle::dense_modes(plane);
    const auto lhs = two_site_covariance(plane, 0.9, std::vector<int>{1, 2});
    const auto rhs = oracle::covariance_from_modes(pdec, 0.9, 0, 1 * 5 + 2);
    worst = std::max({worst, std::fabs(lhs.a - rhs.a), std::fabs(lhs.b - rhs.b),
                      std::fabs(lhs.e - rhs.e), std::fabs(lhs.f - rhs.f)});
    report("covariance equals mode reconstruction", worst < 1e-10,
           "max deviation " + fmt_dev(worst));
  }

  // negativity formula vs symplectic eigenvalues
  {
    std::mt19937_64 gen(1234);
    std::uniform_int_distribution<int> side_pick(2, 15);
    std::uniform_real_distribution<double> ratio_pick(std::log(0.05), std::log(3.0));
    std::uniform_real_distribution<double> tau_pick(0.05, 5.0);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const LatticeSpec spec{1, 2 * side_pick(gen) + 1, 1.0, std::exp(ratio_pick(gen))};
      const double tau = tau_pick(gen);
      std::uniform_int_distribution<int> r_pick(1, spec.half_span());
      const std::vector<int> r{r_pick(gen)};
      const auto cov = two_site_covariance(spec, tau, r);
      const double direct = log_negativity(separability_functions(cov)).value;
      worst = std::max(worst,
                       std::fabs(direct - oracle::symplectic_negativity(assemble_matrix(cov))));
    }
    report("separability-function negativity equals symplectic negativity", worst <= 1e-10,
           "max deviation over 200 states " + fmt_dev(worst));
  }

  // truncated-Fock thermal moments
  {
    const LatticeSpec ring{1, 3, 1.0, 1.0};
    const auto fock = oracle::fock_thermal_moments({3, 10, 2.0}, ring);
    const auto analytic = two_site_covariance(ring, 0.5, std::vector<int>{1});
    const double worst = std::max({std::fabs(fock.a - analytic.a), std::fabs(fock.b - analytic.b),
                                   std::fabs(fock.e - analytic.e), std::fabs(fock.f - analytic.f)});
    report("truncated-Fock moments match analytic covariance", worst < 1e-4,
           "max deviation " + fmt_dev(worst));
  }

  // mode-transform sandwich
  {
    const LatticeSpec spec{1, 15, 1.0, 0.1};
    const int n = static_cast<int>(spec.total_sites());
    const double lower = internal_energy(spec, 0.0);
    const double upper = 0.5 * n * std::sqrt(2.0 + spec.trap_ratio() * spec.trap_ratio());
    std::mt19937_64 gen(9);
    std::normal_distribution<double> gauss(0.0, 1.0);
    bool ok = true;
    for (int trial = 0; trial < 20 && ok; ++trial) {
      Eigen::MatrixXd g(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) g(i, j) = gauss(gen);
      }
      const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
      std::vector<std::vector<double>> rows(static_cast<std::size_t>(n),
                                            std::vector<double>(static_cast<std::size_t>(n)));
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
          rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = q(i, j);
        }
      }
      const double bound = mode_transform_bound(spec, rows);
      ok = bound - lower >= -1e-10 && upper - bound >= -1e-10;
    }
    report("mode-transform bound sandwich", ok, "");
  }

  std::printf("%s\n", failures == 0 ? "verification passed" : "verification FAILED");
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thermal-state entanglement in periodic harmonic lattices"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonOpts opts;
  double temp = 0.0;
  std::string temp_range, separations, axis1, axis2, observables;
  double scan_max = 3.0;
  bool annotate = false;
  std::string delta_range = "1e-4:3.1622776601683795:25";

  auto* spectrum = app.add_subcommand("spectrum", "phononic mode frequencies");
  add_spec_flags(spectrum, opts);
  add_output_flags(spectrum, opts);

  auto* covariance = app.add_subcommand("covariance", "two-site covariance entries");
  add_spec_flags(covariance, opts);
  add_output_flags(covariance, opts);
  covariance->add_option("--temp", temp, "scaled temperature (0 = ground state)")->capture_default_str();
  covariance->add_option("--r", separations, "separations, e.g. 1,2 or 1x0,2x1");

  auto* negativity = app.add_subcommand("negativity", "separability functions and negativity");
  add_spec_flags(negativity, opts);
  add_output_flags(negativity, opts);
  negativity->add_option("--temp", temp, "scaled temperature (0 = ground state)")->capture_default_str();
  negativity->add_option("--temp-range", temp_range, "lo:hi:count[:log|lin]");
  negativity->add_option("--r", separations, "separations, e.g. 1,2 or 1x0,2x1");

  auto* tcrit = app.add_subcommand("tcrit", "critical temperature of two-site negativity");
  add_spec_flags(tcrit, opts);
  add_output_flags(tcrit, opts);
  tcrit->add_option("--r", separations, "separations, e.g. 1,2 (default 1)");
  tcrit->add_option("--scan-max", scan_max, "upper end of the temperature scan")->capture_default_str();
  tcrit->add_option("--tol", opts.tol, "bisection tolerance")->capture_default_str();

  auto* witness = app.add_subcommand("witness", "energy-witness report");
  add_spec_flags(witness, opts);
  add_output_flags(witness, opts);
  witness->add_option("--temp", temp, "scaled temperature (0 = ground state)")->capture_default_str();
  witness->add_option("--bound-convention", opts.convention, "paper or mean");

  auto* sweep = app.add_subcommand("sweep", "parameter sweep over up to two axes");
  add_spec_flags(sweep, opts);
  add_output_flags(sweep, opts);
  sweep->add_option("--temp", temp, "base scaled temperature when not swept")->capture_default_str();
  sweep->add_option("--axis1", axis1, "axis spec: name:lo:hi:count[:log|lin]");
  sweep->add_option("--axis2", axis2, "second axis spec");
  sweep->add_option("--r", separations, "separations (default 1,2)");
  sweep->add_option("--observables", observables,
                    "comma list: negativity,s1,s2,cov,witness,energy (default negativity,s1,s2)");
  sweep->add_option("--bound-convention", opts.convention, "paper or mean");
  sweep->add_option("--tol", opts.tol, "tolerance recorded in metadata")->capture_default_str();
  sweep->add_flag("--annotate-literature", annotate, "attach cited thresholds to metadata");

  auto* phase = app.add_subcommand("phase-diagram", "critical and witness temperatures vs trap");
  add_spec_flags(phase, opts);
  add_output_flags(phase, opts);
  phase->add_option("--delta-range", delta_range, "lo:hi:count[:log|lin] (log by default)")
      ->capture_default_str();
  phase->add_option("--scan-max", scan_max, "upper end of the temperature scan")->capture_default_str();
  phase->add_option("--tol", opts.tol, "bisection tolerance")->capture_default_str();
  phase->add_option("--bound-convention", opts.convention, "paper or mean");
  phase->add_flag("--annotate-literature", annotate, "attach cited thresholds to metadata");

  auto* verify = app.add_subcommand("verify", "run the oracle equivalence suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (spectrum->parsed()) return run_spectrum(opts);
    if (covariance->parsed()) {
      return run_pointwise("covariance", opts, temp, "", separations,
                           parse_observables("cov"));
    }
    if (negativity->parsed()) {
      return run_pointwise("negativity", opts, temp, temp_range, separations,
                           parse_observables("negativity,s1,s2"));
    }
    if (tcrit->parsed()) return run_tcrit(opts, separations, scan_max);
    if (witness->parsed()) return run_witness(opts, temp);
    if (sweep->parsed()) {
      return run_sweep_cmd(opts, temp, axis1, axis2, separations, observables, annotate);
    }
    if (phase->parsed()) return run_phase_diagram(opts, delta_range, scan_max, annotate);
    if (verify->parsed()) return run_verify();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == errc::invalid_request ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
