#include "u1d/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "u1d/error.hpp"

namespace u1d {

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void spec_fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::SpecError, path + ": " + what);
}

void validate_axis_shape(const SweepAxis& axis, const std::string& path) {
  if (axis.n_points < 1) spec_fail(path + ".n_points", "must be >= 1");
  if (!std::isfinite(axis.lo) || !std::isfinite(axis.hi)) spec_fail(path, "bounds must be finite");
  if (axis.hi < axis.lo) spec_fail(path, "hi must be >= lo");
}

bool is_gapless_failure(const Error& e) {
  return e.code() == ErrorCode::GaplessPoint || e.code() == ErrorCode::UnwrapAmbiguity ||
         e.code() == ErrorCode::StepTooLarge;
}

struct Column {
  std::optional<Model> model;
  int omega1 = 0;
  bool gapless = false;
};

}  // namespace

std::vector<double> SweepAxis::values() const {
  std::vector<double> v(static_cast<std::size_t>(std::max(n_points, 0)));
  if (n_points == 1) {
    v[0] = lo;
    return v;
  }
  for (int i = 0; i < n_points; ++i) {
    v[i] = (i == n_points - 1) ? hi : lo + (hi - lo) * i / (n_points - 1);
  }
  return v;
}

std::string_view to_string(CellStatus s) {
  switch (s) {
    case CellStatus::Ok: return "ok";
    case CellStatus::Gapless: return "gapless";
    case CellStatus::AtCriticality: return "at_criticality";
  }
  return "ok";
}

std::string_view to_string(PhaseMethod m) {
  return m == PhaseMethod::ClosedForm ? "closed_form" : "holonomy";
}

std::vector<std::string> family_parameters(std::string_view family) {
  if (family == "creutz") return {"m", "theta"};
  if (family == "majorana") return {"m", "c"};
  if (family == "ssh") return {"j1", "j2"};
  return {};
}

Model make_family_model(std::string_view family, std::string_view name1, double v1,
                        std::string_view name2, double v2) {
  const auto names = family_parameters(family);
  if (names.empty()) spec_fail("$.family", "unknown or non-sweepable family '" + std::string(family) + "'");
  double p0 = 0.0;
  double p1 = 0.0;
  if (name1 == names[0] && name2 == names[1]) {
    p0 = v1;
    p1 = v2;
  } else if (name1 == names[1] && name2 == names[0]) {
    p0 = v2;
    p1 = v1;
  } else {
    spec_fail("$.axis", "parameters must be {" + names[0] + ", " + names[1] + "} for " + std::string(family));
  }
  if (family == "creutz") return Model::creutz(p0, p1);
  if (family == "majorana") return Model::majorana(p0, p1);
  return Model::ssh(p0, p1);
}

void validate(const SweepSpec& spec) {
  const auto names = family_parameters(spec.family);
  if (names.empty()) spec_fail("$.family", "must be one of creutz, majorana, ssh");
  validate_axis_shape(spec.axis1, "$.axis1");
  validate_axis_shape(spec.axis2, "$.axis2");
  validate_axis_shape(spec.t_axis, "$.t_axis");
  auto known = [&](const std::string& n) { return std::find(names.begin(), names.end(), n) != names.end(); };
  if (!known(spec.axis1.name)) spec_fail("$.axis1.name", "'" + spec.axis1.name + "' is not a parameter of " + spec.family);
  if (!known(spec.axis2.name)) spec_fail("$.axis2.name", "'" + spec.axis2.name + "' is not a parameter of " + spec.family);
  if (spec.axis1.name == spec.axis2.name) spec_fail("$.axis2.name", "must differ from axis1");
  if (!(spec.t_axis.lo > 0.0)) spec_fail("$.t_axis.lo", "temperature must be > 0");

  // Every corner of the parameter box must be a valid model.
  for (double a : {spec.axis1.lo, spec.axis1.hi}) {
    for (double b : {spec.axis2.lo, spec.axis2.hi}) {
      try {
        make_family_model(spec.family, spec.axis1.name, a, spec.axis2.name, b);
      } catch (const Error& e) {
        spec_fail("$.axis", std::string("parameter box leaves the model domain (") + e.what() + ")");
      }
    }
  }
  if (spec.policy.holonomy_steps < 64) spec_fail("$.policy.holonomy_steps", "must be >= 64");
  if (spec.policy.quad_panels < 64) spec_fail("$.policy.quad_panels", "must be >= 64");
  if (spec.policy.winding_samples < 64) spec_fail("$.policy.winding_samples", "must be >= 64");
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<PhaseGridCell> run_sweep(const SweepSpec& spec) {
  validate(spec);
  const auto v1 = spec.axis1.values();
  const auto v2 = spec.axis2.values();
  const auto vt = spec.t_axis.values();
  const NumericPolicy& policy = spec.policy;

  std::vector<Column> columns(v1.size() * v2.size());
  parallel_for(columns.size(), spec.threads, [&](std::size_t c) {
    Column& col = columns[c];
    col.model = make_family_model(spec.family, spec.axis1.name, v1[c / v2.size()], spec.axis2.name,
                                  v2[c % v2.size()]);
    try {
      col.omega1 = winding_number(*col.model, policy.winding_samples, policy).omega1;
    } catch (const Error& e) {
      if (!is_gapless_failure(e)) throw;
      col.gapless = true;
    }
  });

  std::vector<PhaseGridCell> cells(columns.size() * vt.size());
  parallel_for(cells.size(), spec.threads, [&](std::size_t i) {
    const std::size_t c = i / vt.size();
    const Column& col = columns[c];
    PhaseGridCell& cell = cells[i];
    cell.axis1 = v1[c / v2.size()];
    cell.axis2 = v2[c % v2.size()];
    cell.temperature = vt[i % vt.size()];
    cell.omega1 = col.omega1;
    if (col.gapless) {
      cell.status = CellStatus::Gapless;
      cell.phi_u = {};
      return;
    }
    try {
      if (spec.method == PhaseMethod::ClosedForm) {
        const double x = closed_form_operand(*col.model, cell.temperature, policy.quad_panels, policy);
        cell.phi_u = phase_of_real(x, policy.tau_quant);
        if (std::abs(x) < policy.degenerate_arg) {
          cell.status = CellStatus::AtCriticality;
          cell.phi_u.quantized = Quantization::Unquantized;
        }
      } else {
        HolonomySetup setup;
        setup.n_steps = policy.holonomy_steps;
        setup.temperature = cell.temperature;
        cell.phi_u = uhlmann_phase(*col.model, setup, policy).phase;
        if (cell.phi_u.quantized == Quantization::Unquantized) cell.status = CellStatus::AtCriticality;
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DegenerateArg) {
        cell.status = CellStatus::AtCriticality;
        cell.phi_u = {};
      } else if (is_gapless_failure(e)) {
        cell.status = CellStatus::Gapless;
        cell.phi_u = {};
      } else {
        throw;
      }
    }
  });
  return cells;
}

std::vector<Model> table1_default_models() {
  return {Model::creutz(0.5, kPi / 4), Model::majorana(0.5, 1.0), Model::ssh(0.5, 1.0)};
}

Table1Row table1_row(const Model& model, const Table1Options& options, const NumericPolicy& policy) {
  Table1Row row;
  row.model = model.describe();
  row.omega1 = winding_number(model, options.winding_samples, policy).omega1;
  row.berry = berry_phase(model, options.winding_samples, policy);

  CriticalTemperatureOptions tc_opts;
  tc_opts.n_quad = policy.quad_panels;
  row.tc = critical_temperature(model, tc_opts, policy);
  const double reference = row.tc.value_or(flat_band_critical_temperature());
  row.t_low = options.low_fraction * reference;
  row.t_high = options.high_fraction * reference;

  HolonomySetup setup;
  setup.n_steps = options.n_steps;
  setup.temperature = row.t_low;
  row.uhlmann_low = uhlmann_phase(model, setup, policy).phase;
  setup.temperature = row.t_high;
  row.uhlmann_high = uhlmann_phase(model, setup, policy).phase;

  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int l = 0; l < options.winding_samples; ++l) {
    const double d = bloch_at(model, -kPi + 2.0 * kPi * l / options.winding_samples, policy).delta;
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  row.flat_band = hi - lo < 1e-12;
  return row;
}

std::string format_table1(const std::vector<Table1Row>& rows) {
  auto phase = [](const PhaseValue& p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s (%.6f)", std::string(to_string(p.quantized)).c_str(), p.value);
    return std::string(buf);
  };
  std::ostringstream os;
  char line[512];
  std::snprintf(line, sizeof line, "%-34s %7s %-22s %-22s %-22s %s\n", "model", "omega1", "berry",
                "uhlmann(T<Tc)", "uhlmann(T>Tc)", "T_c");
  os << line;
  for (const auto& r : rows) {
    std::string tc = r.tc ? std::to_string(*r.tc) : std::string("none");
    if (r.flat_band) tc += " (flat band, 1/ln(2+sqrt3) = " + std::to_string(flat_band_critical_temperature()) + ")";
    std::snprintf(line, sizeof line, "%-34s %7d %-22s %-22s %-22s %s\n", r.model.c_str(), r.omega1,
                  phase(r.berry).c_str(), phase(r.uhlmann_low).c_str(), phase(r.uhlmann_high).c_str(),
                  tc.c_str());
    os << line;
  }
  return os.str();
}

}  // namespace u1d
