#include "u1d/bandmodels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "u1d/error.hpp"

namespace u1d {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleSlack = 1e-12;

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidParameter, path + ": " + what);
}

void require_finite(double v, const std::string& path) {
  require(std::isfinite(v), path, "must be finite");
}

// Periodic piecewise-linear table over one Brillouin zone.
class TableField {
 public:
  TableField(std::vector<double> k_grid, std::vector<Vec3> table)
      : k_(std::move(k_grid)), h_(std::move(table)) {}

  Vec3 operator()(double k) const {
    const double k0 = k_.front();
    double q = std::fmod(k - k0, 2.0 * kPi);
    if (q < 0.0) q += 2.0 * kPi;
    q += k0;
    const auto it = std::upper_bound(k_.begin(), k_.end(), q);
    const std::size_t hi = static_cast<std::size_t>(it - k_.begin());
    if (hi == 0) return h_.front();
    const std::size_t lo = hi - 1;
    double k_lo = k_[lo];
    double k_hi;
    Vec3 a = h_[lo];
    Vec3 b;
    if (hi < k_.size()) {
      k_hi = k_[hi];
      b = h_[hi];
    } else {
      k_hi = k0 + 2.0 * kPi;
      b = h_.front();
    }
    const double span = k_hi - k_lo;
    if (span <= 0.0) return a;
    const double t = (q - k_lo) / span;
    return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])};
  }

 private:
  std::vector<double> k_;
  std::vector<Vec3> h_;
};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Axis Plane::normal() const { return static_cast<Axis>(3 - static_cast<int>(first) - static_cast<int>(second)); }

// Built-in plane orientations give omega_1 = +1 in the topological phase
// (theta > 0 for the Creutz ladder).
Model Model::creutz(double m, double theta) {
  require_finite(m, "$.m");
  require_finite(theta, "$.theta");
  require(m >= 0.0, "$.m", "must be >= 0");
  require(std::abs(theta) <= kPi / 2 + kAngleSlack, "$.theta", "must lie in [-pi/2, pi/2]");
  return Model(Creutz{m, theta}, Plane{Axis::Z, Axis::X});
}

Model Model::majorana(double m, double c) {
  require_finite(m, "$.m");
  require_finite(c, "$.c");
  require(m >= 0.0, "$.m", "must be >= 0");
  require(c > 0.0, "$.c", "must be > 0");
  return Model(Majorana{m, c}, Plane{Axis::Z, Axis::Y});
}

Model Model::ssh(double j1, double j2) {
  require_finite(j1, "$.j1");
  require_finite(j2, "$.j2");
  require(j1 >= 0.0, "$.j1", "must be >= 0");
  require(j2 >= 0.0, "$.j2", "must be >= 0");
  return Model(Ssh{j1, j2}, Plane{Axis::X, Axis::Y});
}

Model Model::generic(std::function<Vec3(double)> field, Plane plane, std::string units,
                     bool planar) {
  require(static_cast<bool>(field), "$.field", "callback is empty");
  require(plane.first != plane.second, "$.plane", "axes must differ");
  return Model(Generic{std::move(field), std::move(units), planar}, plane);
}

Model Model::generic_table(std::vector<double> k_grid, std::vector<Vec3> table, Plane plane,
                           bool planar) {
  require(plane.first != plane.second, "$.plane", "axes must differ");
  require(k_grid.size() >= 2, "$.k_grid", "needs at least two points");
  require(k_grid.size() == table.size(), "$.n_table", "length must match k_grid");
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    const std::string path = "$.k_grid[" + std::to_string(i) + "]";
    require_finite(k_grid[i], path);
    require(k_grid[i] >= -kPi - kAngleSlack && k_grid[i] <= kPi + kAngleSlack, path,
            "must lie in [-pi, pi]");
    if (i > 0) require(k_grid[i] > k_grid[i - 1], path, "grid must be strictly ascending");
  }
  const int out = static_cast<int>(plane.normal());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const std::string path = "$.n_table[" + std::to_string(i) + "]";
    for (double x : table[i]) require_finite(x, path);
    if (planar) {
      require(std::abs(table[i][out]) <= kAngleSlack, path,
              "out-of-plane component is nonzero for the declared plane");
    }
  }
  return Model(Generic{TableField(std::move(k_grid), std::move(table)), "table", planar}, plane);
}

std::string_view Model::family() const {
  return std::visit(Overloaded{[](const Creutz&) { return std::string_view("creutz"); },
                               [](const Majorana&) { return std::string_view("majorana"); },
                               [](const Ssh&) { return std::string_view("ssh"); },
                               [](const Generic&) { return std::string_view("generic"); }},
                    params_);
}

std::string Model::describe() const {
  std::ostringstream os;
  os.precision(6);
  std::visit(Overloaded{[&](const Creutz& p) { os << "creutz(m=" << p.m << ", theta=" << p.theta << ")"; },
                        [&](const Majorana& p) { os << "majorana(m=" << p.m << ", c=" << p.c << ")"; },
                        [&](const Ssh& p) { os << "ssh(j1=" << p.j1 << ", j2=" << p.j2 << ")"; },
                        [&](const Generic& p) { os << "generic(" << p.units << ")"; }},
             params_);
  return os.str();
}

bool Model::declared_planar() const {
  if (const auto* g = std::get_if<Generic>(&params_)) return g->planar;
  return true;
}

Vec3 Model::field(double k) const {
  return std::visit(
      Overloaded{[k](const Creutz& p) -> Vec3 {
                   return {p.m + std::cos(k), 0.0, std::sin(p.theta) * std::sin(k)};
                 },
                 [k](const Majorana& p) -> Vec3 {
                   return {0.0, -std::sin(k), -p.m + p.c * std::cos(k)};
                 },
                 [k](const Ssh& p) -> Vec3 {
                   return {-p.j1 - p.j2 * std::cos(k), p.j2 * std::sin(k), 0.0};
                 },
                 [k](const Generic& p) -> Vec3 { return p.field(k); }},
      params_);
}

BlochData bloch_at(const Model& model, double k, const NumericPolicy& policy) {
  if (!std::isfinite(k)) throw Error(ErrorCode::InvalidParameter, "bloch_at: momentum is not finite");
  const Vec3 h = model.field(k);
  const double len = std::sqrt(h[0] * h[0] + h[1] * h[1] + h[2] * h[2]);
  if (!std::isfinite(len)) throw Error(ErrorCode::NonFinite, "bloch_at: non-finite field at k=" + std::to_string(k));
  const double delta = 2.0 * len;
  if (delta < policy.tau_gap) {
    throw Error(ErrorCode::GaplessPoint,
                model.describe() + " is gapless at k=" + std::to_string(k));
  }
  return {{h[0] / len, h[1] / len, h[2] / len}, delta, 0.0};
}

Matrix2c hamiltonian_at(const Model& model, double k, const NumericPolicy& policy) {
  const BlochData b = bloch_at(model, k, policy);
  return Complex(b.f) * Matrix2c::identity() + Complex(0.5 * b.delta) * pauli_dot(b.n);
}

BandStates band_states(const BlochData& bloch) {
  const Vec3& n = bloch.n;
  const double theta = std::acos(std::clamp(n[2], -1.0, 1.0));
  const double phi = (n[0] == 0.0 && n[1] == 0.0) ? 0.0 : std::atan2(n[1], n[0]);
  const Complex eph = std::polar(1.0, -phi);
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  return {{-eph * s, c}, {eph * c, s}, theta, phi};
}

double min_gap(const Model& model, int n_samples) {
  double best = std::numeric_limits<double>::infinity();
  for (int l = 0; l < n_samples; ++l) {
    const double k = -kPi + 2.0 * kPi * l / n_samples;
    const Vec3 h = model.field(k);
    best = std::min(best, 2.0 * std::sqrt(h[0] * h[0] + h[1] * h[1] + h[2] * h[2]));
  }
  return best;
}

namespace {

using nlohmann::json;

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::SchemaError, path + ": " + what);
}

void check_keys(const json& doc, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : doc.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      schema_fail("$." + key, "unknown field");
    }
  }
}

double number_at(const json& doc, const std::string& key) {
  const auto it = doc.find(key);
  if (it == doc.end()) schema_fail("$." + key, "missing required number");
  if (!it->is_number()) schema_fail("$." + key, "must be a number");
  return it->get<double>();
}

Axis axis_at(const json& v, const std::string& path) {
  if (!v.is_number_integer()) schema_fail(path, "must be an axis index 0, 1 or 2");
  const int i = v.get<int>();
  if (i < 0 || i > 2) throw Error(ErrorCode::InvalidParameter, path + ": axis index out of range");
  return static_cast<Axis>(i);
}

Model load_generic(const json& doc) {
  check_keys(doc, {"model", "plane", "k_grid", "n_table", "planar", "units"});
  const auto plane_it = doc.find("plane");
  if (plane_it == doc.end() || !plane_it->is_array() || plane_it->size() != 2) {
    schema_fail("$.plane", "must be an array [i, j]");
  }
  const Plane plane{axis_at((*plane_it)[0], "$.plane[0]"), axis_at((*plane_it)[1], "$.plane[1]")};

  const auto grid_it = doc.find("k_grid");
  if (grid_it == doc.end() || !grid_it->is_array()) schema_fail("$.k_grid", "must be an array of numbers");
  std::vector<double> grid;
  for (std::size_t i = 0; i < grid_it->size(); ++i) {
    const auto& v = (*grid_it)[i];
    if (!v.is_number()) schema_fail("$.k_grid[" + std::to_string(i) + "]", "must be a number");
    grid.push_back(v.get<double>());
  }

  const auto table_it = doc.find("n_table");
  if (table_it == doc.end() || !table_it->is_array()) schema_fail("$.n_table", "must be an array of 3-vectors");
  std::vector<Vec3> table;
  for (std::size_t i = 0; i < table_it->size(); ++i) {
    const auto& row = (*table_it)[i];
    const std::string path = "$.n_table[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != 3) schema_fail(path, "must be a 3-vector");
    Vec3 h{};
    for (std::size_t c = 0; c < 3; ++c) {
      if (!row[c].is_number()) schema_fail(path + "[" + std::to_string(c) + "]", "must be a number");
      h[c] = row[c].get<double>();
    }
    table.push_back(h);
  }

  bool planar = true;
  if (const auto it = doc.find("planar"); it != doc.end()) {
    if (!it->is_boolean()) schema_fail("$.planar", "must be a boolean");
    planar = it->get<bool>();
  }
  if (const auto it = doc.find("units"); it != doc.end() && !it->is_string()) {
    schema_fail("$.units", "must be a string");
  }
  return Model::generic_table(std::move(grid), std::move(table), plane, planar);
}

}  // namespace

Model load_model(std::string_view config_text) {
  json doc;
  try {
    doc = json::parse(config_text);
  } catch (const json::parse_error& e) {
    schema_fail("$", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_fail("$", "model config must be a JSON object");
  const auto model_it = doc.find("model");
  if (model_it == doc.end() || !model_it->is_string()) schema_fail("$.model", "missing model name");
  const std::string name = model_it->get<std::string>();
  if (name == "creutz") {
    check_keys(doc, {"model", "m", "theta"});
    return Model::creutz(number_at(doc, "m"), number_at(doc, "theta"));
  }
  if (name == "majorana") {
    check_keys(doc, {"model", "m", "c"});
    return Model::majorana(number_at(doc, "m"), number_at(doc, "c"));
  }
  if (name == "ssh") {
    check_keys(doc, {"model", "j1", "j2"});
    return Model::ssh(number_at(doc, "j1"), number_at(doc, "j2"));
  }
  if (name == "generic") return load_generic(doc);
  schema_fail("$.model", "unknown model '" + name + "'");
}

}  // namespace u1d
