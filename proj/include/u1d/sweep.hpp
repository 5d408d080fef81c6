#pragma once

// Parameter x temperature grids over the built-in model families.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "u1d/bandmodels.hpp"
#include "u1d/policy.hpp"
#include "u1d/uhlmann.hpp"
#include "u1d/zerotemp.hpp"

namespace u1d {

struct SweepAxis {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  int n_points = 2;

  // Uniform samples lo..hi inclusive; a single point sits at lo.
  std::vector<double> values() const;
};

struct SweepSpec {
  std::string family;  // creutz | majorana | ssh
  SweepAxis axis1;
  SweepAxis axis2;
  SweepAxis t_axis;  // name is ignored; always "T"
  PhaseMethod method = PhaseMethod::ClosedForm;
  int threads = 0;   // 0 -> hardware concurrency
  NumericPolicy policy;
};

enum class CellStatus { Ok, Gapless, AtCriticality };

std::string_view to_string(CellStatus s);
std::string_view to_string(PhaseMethod m);

struct PhaseGridCell {
  double axis1 = 0.0;
  double axis2 = 0.0;
  double temperature = 0.0;
  PhaseValue phi_u;
  int omega1 = 0;
  CellStatus status = CellStatus::Ok;

  friend bool operator==(const PhaseGridCell&, const PhaseGridCell&) = default;
};

// Parameter names per family: creutz {m, theta}, majorana {m, c}, ssh {j1, j2}.
std::vector<std::string> family_parameters(std::string_view family);

// Builds a model from a family and two named parameter values.
Model make_family_model(std::string_view family, std::string_view name1, double v1,
                        std::string_view name2, double v2);

// Throws SpecError with a field path on an invalid spec.
void validate(const SweepSpec& spec);

// Cells ordered lexicographically by (axis1, axis2, T). Gapless parameter
// points become Gapless cells, never errors.
std::vector<PhaseGridCell> run_sweep(const SweepSpec& spec);

// Runs fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

struct Table1Row {
  std::string model;
  int omega1 = 0;
  PhaseValue berry;
  std::optional<double> tc;
  double t_low = 0.0;
  double t_high = 0.0;
  PhaseValue uhlmann_low;
  PhaseValue uhlmann_high;
  bool flat_band = false;
};

struct Table1Options {
  int n_steps = 4096;
  int winding_samples = 2048;
  double low_fraction = 0.3;
  double high_fraction = 2.0;
};

// Creutz(0.5, pi/4), Majorana(0.5, 1), Ssh(0.5, 1).
std::vector<Model> table1_default_models();

// Winding number, Berry phase, and holonomy Uhlmann phase at 0.3 T_c and
// 2 T_c. Models without a transition use the flat-band T_c as reference.
Table1Row table1_row(const Model& model, const Table1Options& options = {},
                     const NumericPolicy& policy = {});

std::string format_table1(const std::vector<Table1Row>& rows);

}  // namespace u1d
