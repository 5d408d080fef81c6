#pragma once

// Two-band Bloch models H_k = f(k) + (Delta_k / 2) n_k . sigma.

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "u1d/policy.hpp"
#include "u1d/smallmat.hpp"

namespace u1d {

enum class Axis : int { X = 0, Y = 1, Z = 2 };

// Ordered pair of Cartesian axes spanned by the winding vector. The winding
// angle is atan2(n[first], n[second]).
struct Plane {
  Axis first;
  Axis second;

  Axis normal() const;
  friend bool operator==(const Plane&, const Plane&) = default;
};

// Creutz ladder, vertical hopping m = M/2R and flux theta, units 2R = 1.
struct Creutz {
  double m;
  double theta;
};

// Kitaev chain with m = mu/2|M|, c = J/|M| and zero pairing phase.
struct Majorana {
  double m;
  double c;
};

// Polyacetylene with intra- (j1) and inter-cell (j2) hopping.
struct Ssh {
  double j1;
  double j2;
};

// User-supplied field h(k), with H_k = h(k) . sigma, so Delta_k = 2|h(k)|.
struct Generic {
  std::function<Vec3(double)> field;
  std::string units;
  bool planar = true;
};

class Model {
 public:
  using Params = std::variant<Creutz, Majorana, Ssh, Generic>;

  static Model creutz(double m, double theta);
  static Model majorana(double m, double c);
  static Model ssh(double j1, double j2);
  static Model generic(std::function<Vec3(double)> field, Plane plane, std::string units = {},
                       bool planar = true);
  // Periodic linear interpolation of a tabulated field on an ascending grid in [-pi, pi].
  static Model generic_table(std::vector<double> k_grid, std::vector<Vec3> table, Plane plane,
                             bool planar = true);

  const Params& params() const { return params_; }
  Plane plane() const { return plane_; }
  std::string_view family() const;
  std::string describe() const;
  bool is_generic() const { return std::holds_alternative<Generic>(params_); }
  // Planar models keep n_k exactly inside plane() for every k.
  bool declared_planar() const;

  // Unnormalized field h(k); n_k = h / |h| and Delta_k = 2 |h|.
  Vec3 field(double k) const;

 private:
  Model(Params params, Plane plane) : params_(std::move(params)), plane_(plane) {}

  Params params_;
  Plane plane_;
};

struct BlochData {
  Vec3 n;
  double delta;
  double f;
};

struct BandStates {
  Vector2c u_minus;
  Vector2c u_plus;
  double theta;
  double phi;
};

// Throws GaplessPoint when Delta_k < tau_gap.
BlochData bloch_at(const Model& model, double k, const NumericPolicy& policy = {});

Matrix2c hamiltonian_at(const Model& model, double k, const NumericPolicy& policy = {});

BandStates band_states(const BlochData& bloch);

// Smallest Delta_k over a uniform grid of n_samples points starting at -pi.
double min_gap(const Model& model, int n_samples);

// Parses the model config JSON. Throws SchemaError / InvalidParameter with a
// JSON-path style location in the message.
Model load_model(std::string_view config_text);

}  // namespace u1d
