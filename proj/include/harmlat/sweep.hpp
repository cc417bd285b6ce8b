#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "harmlat/covariance.hpp"
#include "harmlat/entanglement.hpp"
#include "harmlat/errors.hpp"
#include "harmlat/lattice.hpp"
#include "harmlat/version.hpp"
#include "harmlat/witness.hpp"

namespace harmlat {

enum class SweepAxis { temperature, trap_ratio, sites, dimension };
enum class Spacing { linear, logarithmic };

inline const char* axis_name(SweepAxis a) noexcept {
  switch (a) {
    case SweepAxis::temperature: return "temperature";
    case SweepAxis::trap_ratio: return "trap_ratio";
    case SweepAxis::sites: return "sites";
    case SweepAxis::dimension: return "dimension";
  }
  return "unknown";
}

struct AxisRange {
  SweepAxis axis = SweepAxis::temperature;
  double min = 0.0;
  double max = 0.0;
  int count = 0;
  Spacing spacing = Spacing::linear;
};

struct ObservableSet {
  bool negativity = false;
  bool s1 = false;
  bool s2 = false;
  bool covariance_entries = false;
  bool witness_verdict = false;
  bool internal_energy = false;

  bool any() const noexcept {
    return negativity || s1 || s2 || covariance_entries || witness_verdict || internal_energy;
  }
  bool needs_covariance() const noexcept { return negativity || s1 || s2 || covariance_entries; }
};

struct SweepRequest {
  LatticeSpec base;
  double base_temp_scaled = 0.0;  ///< used when temperature is not a swept axis
  std::optional<AxisRange> axis1;
  std::optional<AxisRange> axis2;
  std::vector<std::vector<int>> separations;  ///< empty selects the default {1}, {2}
  ObservableSet observables;
  std::optional<BoundConvention> convention;  ///< empty selects the per-dimension default
  double tolerance = 1e-6;                    ///< recorded in metadata
  bool annotate_literature = false;
};

/// One (parameters -> observables) row. Unset optionals mean "not requested"
/// or "lost to the error recorded in `error`"; a singular grid point never
/// suppresses the other rows.
struct SweepRecord {
  int dimension = 1;
  int side = 3;
  double coupling = 1.0;
  double trap_ratio = 0.0;
  double temp_scaled = 0.0;
  std::vector<int> separation;  ///< as requested; computation folds to canonical

  std::optional<double> negativity, s1, s2;
  std::optional<double> cov_a, cov_b, cov_e, cov_f;
  std::optional<double> internal_energy_v, separable_bound_v, witness_temperature_v;
  std::optional<bool> witnessed;
  std::string error;  ///< empty when every requested observable was computed
};

namespace detail {

inline std::vector<double> axis_values(const AxisRange& r) {
  std::vector<double> v(static_cast<std::size_t>(r.count));
  if (r.count == 1) {
    v[0] = r.min;
    return v;
  }
  if (r.spacing == Spacing::linear) {
    for (int i = 0; i < r.count; ++i) {
      v[static_cast<std::size_t>(i)] = r.min + (r.max - r.min) * i / (r.count - 1);
    }
  } else {
    const double llo = std::log(r.min);
    const double lhi = std::log(r.max);
    for (int i = 0; i < r.count; ++i) {
      v[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * i / (r.count - 1));
    }
  }
  return v;
}

inline int nearest_odd_side(double v) {
  const auto k = static_cast<int>(std::llround((v - 1.0) / 2.0));
  return std::max(3, 2 * k + 1);
}

inline void check_axis(const AxisRange& r) {
  if (!(r.min > 0.0) || !(r.max > 0.0) || !(r.max >= r.min)) {
    fail(errc::invalid_request, "axis range must be positive with max >= min");
  }
  if (r.count < 2 || r.count > 10000) {
    fail(errc::invalid_request, "axis count must lie in [2, 10^4]");
  }
}

}  // namespace detail

/// Evaluates the request on the full grid: axis1 outer, axis2 inner,
/// separations innermost; rows in lexicographic grid order. Fully
/// deterministic for a given request.
inline std::vector<SweepRecord> run_sweep(const SweepRequest& request) {
  if (!request.observables.any()) {
    fail(errc::invalid_request, "at least one observable must be requested");
  }
  try {
    validate_spec(request.base);
  } catch (const Error& e) {
    fail(errc::invalid_request, std::string("invalid base spec: ") + e.what());
  }
  if (!(request.base_temp_scaled >= 0.0)) {
    fail(errc::invalid_request, "base temperature must be >= 0");
  }
  if (request.axis1) detail::check_axis(*request.axis1);
  if (request.axis2) detail::check_axis(*request.axis2);
  if (request.axis1 && request.axis2 && request.axis1->axis == request.axis2->axis) {
    fail(errc::invalid_request, "the two sweep axes must differ");
  }
  if (!request.axis1 && request.axis2) {
    fail(errc::invalid_request, "axis2 given without axis1");
  }

  std::vector<std::vector<int>> separations = request.separations;
  if (separations.empty()) {
    separations.push_back(std::vector<int>(static_cast<std::size_t>(request.base.dimension), 0));
    separations.back()[0] = 1;
    separations.push_back(std::vector<int>(static_cast<std::size_t>(request.base.dimension), 0));
    separations.back()[0] = 2;
  }

  const std::vector<double> v1 =
      request.axis1 ? detail::axis_values(*request.axis1) : std::vector<double>{0.0};
  const std::vector<double> v2 =
      request.axis2 ? detail::axis_values(*request.axis2) : std::vector<double>{0.0};

  const auto apply_axis = [](LatticeSpec& spec, double& tau, const AxisRange& axis, double value) {
    switch (axis.axis) {
      case SweepAxis::temperature: tau = value; break;
      case SweepAxis::trap_ratio: spec.trap = value * spec.coupling; break;
      case SweepAxis::sites: spec.side = detail::nearest_odd_side(value); break;
      case SweepAxis::dimension: {
        const auto d = static_cast<int>(std::llround(value));
        spec.dimension = std::min(3, std::max(1, d));
        break;
      }
    }
  };

  std::vector<SweepRecord> records;
  records.reserve(v1.size() * v2.size() * separations.size());

  for (const double a1 : v1) {
    for (const double a2 : v2) {
      LatticeSpec spec = request.base;
      double tau = request.base_temp_scaled;
      if (request.axis1) apply_axis(spec, tau, *request.axis1, a1);
      if (request.axis2) apply_axis(spec, tau, *request.axis2, a2);
      const BoundConvention convention = request.convention.value_or(default_convention(spec));

      for (const auto& sep : separations) {
        SweepRecord rec;
        rec.dimension = spec.dimension;
        rec.side = spec.side;
        rec.coupling = spec.coupling;
        rec.trap_ratio = spec.trap_ratio();
        rec.temp_scaled = tau;
        rec.separation = sep;

        const auto note_error = [&rec](const Error& e) {
          if (rec.error.empty()) rec.error = errc_name(e.code());
        };

        if (request.observables.needs_covariance()) {
          try {
            const LatticeSpec checked = validate_spec(spec);
            std::vector<int> sep_in = sep;
            sep_in.resize(static_cast<std::size_t>(checked.dimension), 0);
            const auto canonical = canonical_separation(checked, sep_in);
            bool all_zero = true;
            for (int j = 0; j < checked.dimension; ++j) {
              if (canonical[static_cast<std::size_t>(j)] != 0) all_zero = false;
            }
            if (all_zero) fail(errc::bad_separation, "separation reduces to the zero vector");
            const auto cov = two_site_covariance(
                checked, tau,
                std::span<const int>(canonical.data(), static_cast<std::size_t>(checked.dimension)));
            if (request.observables.covariance_entries) {
              rec.cov_a = cov.a;
              rec.cov_b = cov.b;
              rec.cov_e = cov.e;
              rec.cov_f = cov.f;
            }
            const auto pair = separability_functions(cov);
            if (request.observables.s1) rec.s1 = pair.s1;
            if (request.observables.s2) rec.s2 = pair.s2;
            if (request.observables.negativity) rec.negativity = log_negativity(pair).value;
          } catch (const Error& e) {
            note_error(e);
          }
        }
        if (request.observables.internal_energy || request.observables.witness_verdict) {
          try {
            const LatticeSpec checked = validate_spec(spec);
            if (request.observables.witness_verdict) {
              const auto report = witness_verdict(checked, tau, convention);
              rec.internal_energy_v = report.internal_energy;
              rec.separable_bound_v = report.separable_bound;
              rec.witness_temperature_v = report.witness_temperature;
              rec.witnessed = report.verdict == WitnessVerdict::witnessed_entangled;
            } else {
              rec.internal_energy_v = internal_energy(checked, tau);
            }
          } catch (const Error& e) {
            note_error(e);
          }
        }
        records.push_back(std::move(rec));
      }
    }
  }
  return records;
}

// ---------------------------------------------------------------------------
// Tabular emission (CSV / JSON), shared by every CLI surface.

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct DataTable {
  std::vector<std::pair<std::string, Cell>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

enum class EmitFormat { csv, json };

namespace detail {

inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

inline std::string cell_to_csv(const Cell& c) {
  if (std::holds_alternative<std::monostate>(c)) return "";
  if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
  if (std::holds_alternative<std::int64_t>(c)) return std::to_string(std::get<std::int64_t>(c));
  return csv_quote(std::get<std::string>(c));
}

inline nlohmann::ordered_json cell_to_json(const Cell& c) {
  if (std::holds_alternative<double>(c)) return std::get<double>(c);
  if (std::holds_alternative<std::int64_t>(c)) return std::get<std::int64_t>(c);
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return nullptr;
}

}  // namespace detail

/// CSV: a `# key=value` comment block for metadata, then the header row and
/// one data row per record. Floats use shortest round-trip formatting, so
/// identical tables emit identical bytes.
inline std::string emit_csv(const DataTable& table) {
  if (table.rows.empty()) fail(errc::invalid_request, "refusing to emit an empty table");
  std::string out;
  for (const auto& [key, value] : table.metadata) {
    out += "# " + key + "=" + detail::cell_to_csv(value) + "\n";
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ",";
    out += detail::csv_quote(table.columns[i]);
  }
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += detail::cell_to_csv(row[i]);
    }
    out += "\n";
  }
  return out;
}

/// JSON: an array whose first element is the metadata header object and whose
/// remaining elements are flat row objects. Parse -> re-dump round-trips to
/// identical bytes.
inline std::string emit_json(const DataTable& table) {
  if (table.rows.empty()) fail(errc::invalid_request, "refusing to emit an empty table");
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  nlohmann::ordered_json meta;
  for (const auto& [key, value] : table.metadata) {
    meta[key] = detail::cell_to_json(value);
  }
  doc.push_back(nlohmann::ordered_json{{"metadata", meta}});
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
      if (std::holds_alternative<std::monostate>(row[i])) continue;
      obj[table.columns[i]] = detail::cell_to_json(row[i]);
    }
    doc.push_back(std::move(obj));
  }
  return doc.dump(2) + "\n";
}

namespace detail {

inline std::string separation_label(std::span<const int> sep) {
  std::string out;
  for (std::size_t j = 0; j < sep.size(); ++j) {
    if (j) out += "x";
    out += std::to_string(sep[j]);
  }
  return out;
}

inline void base_metadata(DataTable& table, const std::string& command) {
  table.metadata.emplace_back("tool", Cell{std::string("harmlat")});
  table.metadata.emplace_back("version", Cell{std::string(kVersion)});
  table.metadata.emplace_back("command", Cell{command});
  table.metadata.emplace_back("seed", Cell{std::int64_t{0}});
}

inline void literature_metadata(DataTable& table) {
  // cited thresholds from prior literature, scaled units 2 k_B T / (hbar omega);
  // annotation only, never mixed into computed columns
  table.metadata.emplace_back("literature.t_blocks_scaled", Cell{1.26});
  table.metadata.emplace_back("literature.t_blocks_delta_over_omega", Cell{0.22360679774997896});
  table.metadata.emplace_back("literature.t_crit_scaled", Cell{2.0 / 1.2});
  table.metadata.emplace_back("literature.t_crit_delta_over_omega", Cell{0.0});
}

}  // namespace detail

/// Flattens sweep records into the emission table.
inline DataTable sweep_table(const SweepRequest& request, const std::vector<SweepRecord>& records) {
  const ObservableSet& obs = request.observables;
  const BoundConvention convention = request.convention.value_or(default_convention(request.base));

  DataTable table;
  detail::base_metadata(table, "sweep");
  table.metadata.emplace_back("bound_convention", Cell{std::string(convention_name(convention))});
  if (request.base.dimension > 1 || (request.axis1 && request.axis1->axis == SweepAxis::dimension) ||
      (request.axis2 && request.axis2->axis == SweepAxis::dimension)) {
    table.metadata.emplace_back(
        "bound_convention_note",
        Cell{std::string("printed and mean-frequency bounds differ above 1D; rows use the "
                         "per-dimension default unless a convention was forced")});
  }
  table.metadata.emplace_back("tolerance", Cell{request.tolerance});
  if (request.annotate_literature) detail::literature_metadata(table);

  table.columns = {"dimension", "sites", "omega", "delta_over_omega", "temp_scaled", "r"};
  if (obs.negativity) table.columns.push_back("negativity");
  if (obs.s1) table.columns.push_back("s1");
  if (obs.s2) table.columns.push_back("s2");
  if (obs.covariance_entries) {
    table.columns.insert(table.columns.end(), {"cov_a", "cov_b", "cov_e", "cov_f"});
  }
  if (obs.internal_energy || obs.witness_verdict) table.columns.push_back("internal_energy");
  if (obs.witness_verdict) {
    table.columns.insert(table.columns.end(),
                         {"separable_bound", "witness_temperature", "witness_verdict"});
  }
  table.columns.push_back("error");

  const auto opt_cell = [](const std::optional<double>& v) {
    return v ? Cell{*v} : Cell{std::monostate{}};
  };

  for (const auto& rec : records) {
    std::vector<Cell> row;
    row.emplace_back(std::int64_t{rec.dimension});
    row.emplace_back(std::int64_t{rec.side});
    row.emplace_back(rec.coupling);
    row.emplace_back(rec.trap_ratio);
    row.emplace_back(rec.temp_scaled);
    row.emplace_back(detail::separation_label(rec.separation));
    if (obs.negativity) row.push_back(opt_cell(rec.negativity));
    if (obs.s1) row.push_back(opt_cell(rec.s1));
    if (obs.s2) row.push_back(opt_cell(rec.s2));
    if (obs.covariance_entries) {
      row.push_back(opt_cell(rec.cov_a));
      row.push_back(opt_cell(rec.cov_b));
      row.push_back(opt_cell(rec.cov_e));
      row.push_back(opt_cell(rec.cov_f));
    }
    if (obs.internal_energy || obs.witness_verdict) row.push_back(opt_cell(rec.internal_energy_v));
    if (obs.witness_verdict) {
      row.push_back(opt_cell(rec.separable_bound_v));
      row.push_back(opt_cell(rec.witness_temperature_v));
      row.push_back(rec.witnessed ? Cell{std::string(*rec.witnessed ? "witnessed_entangled"
                                                                    : "inconclusive")}
                                  : Cell{std::monostate{}});
    }
    row.emplace_back(rec.error.empty() ? Cell{std::monostate{}} : Cell{rec.error});
    table.rows.push_back(std::move(row));
  }
  return table;
}

/// Phase-diagram data: for each trap ratio on the axis, the nearest-neighbour
/// critical temperature and the witness temperature (both scaled). Critical
/// temperatures that do not exist on the scan window become error cells.
inline DataTable phase_diagram(const LatticeSpec& base_in, const AxisRange& delta_axis,
                               double scan_max, double tol,
                               std::optional<BoundConvention> convention_opt,
                               bool annotate_literature) {
  const LatticeSpec base = validate_spec(base_in);
  if (delta_axis.axis != SweepAxis::trap_ratio) {
    fail(errc::invalid_request, "phase diagram sweeps the trap ratio axis");
  }
  detail::check_axis(delta_axis);
  const BoundConvention convention = convention_opt.value_or(default_convention(base));

  DataTable table;
  detail::base_metadata(table, "phase-diagram");
  table.metadata.emplace_back("bound_convention", Cell{std::string(convention_name(convention))});
  table.metadata.emplace_back("tolerance", Cell{tol});
  table.metadata.emplace_back("scan_max", Cell{scan_max});
  if (annotate_literature) detail::literature_metadata(table);
  table.columns = {"dimension", "sites", "omega", "delta_over_omega",
                   "tcrit_nn",  "t_ew",  "error"};

  std::vector<int> r(static_cast<std::size_t>(base.dimension), 0);
  r[0] = 1;
  for (const double ratio : detail::axis_values(delta_axis)) {
    LatticeSpec spec = base;
    spec.trap = ratio * spec.coupling;
    std::vector<Cell> row;
    row.emplace_back(std::int64_t{spec.dimension});
    row.emplace_back(std::int64_t{spec.side});
    row.emplace_back(spec.coupling);
    row.emplace_back(ratio);
    std::string error;
    try {
      row.emplace_back(critical_temperature(spec, r, scan_max, tol));
    } catch (const Error& e) {
      row.emplace_back(std::monostate{});
      error = errc_name(e.code());
    }
    row.emplace_back(witness_temperature(spec, convention));
    row.emplace_back(error.empty() ? Cell{std::monostate{}} : Cell{error});
    table.rows.push_back(std::move(row));
  }
  return table;
}

inline std::string emit(const DataTable& table, EmitFormat format) {
  return format == EmitFormat::csv ? emit_csv(table) : emit_json(table);
}

}  // namespace harmlat
