#include "u1d/uhlmann.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "u1d/error.hpp"

namespace u1d {

namespace {

constexpr double kPi = std::numbers::pi;

void require_temperature(double t) {
  if (std::isnan(t) || t < 0.0) {
    throw Error(ErrorCode::InvalidParameter, "temperature " + std::to_string(t) + " must be >= 0");
  }
}

// Overflow-free sech for x >= 0.
double sech(double x) {
  const double e = std::exp(-std::abs(x));
  return 2.0 * e / (1.0 + e * e);
}

double thermal_r(double delta, double t) {
  if (t == kZeroTemperature) return 1.0;
  if (std::isinf(t)) return 0.0;
  return std::tanh(delta / (2.0 * t));
}

double mixing_factor(double delta, double t) {
  if (t == kZeroTemperature) return 1.0;
  if (std::isinf(t)) return 0.0;
  return 1.0 - sech(delta / (2.0 * t));
}

Matrix2c sqrt_rho(const Model& model, double k, double t, const NumericPolicy& policy) {
  return thermal_sqrt(thermal_state(model, k, t, policy));
}

Matrix2c sqrt_rho_derivative(const Model& model, double k, double t, double h,
                             const NumericPolicy& policy) {
  return Complex(1.0 / (2.0 * h)) *
         (sqrt_rho(model, k + h, t, policy) - sqrt_rho(model, k - h, t, policy));
}

// A_ij = <i|[dS, S]|j> / (p_i + p_j) off the diagonal, zero on it.
Matrix2c spectral_connection(const Matrix2c& rho, const Matrix2c& s, const Matrix2c& ds,
                             const NumericPolicy& policy) {
  const Matrix2c c = ds * s - s * ds;
  const EigenPair2 eig = eigh2(rho, policy);
  const Vector2c& v0 = eig.vectors[0];
  const Vector2c& v1 = eig.vectors[1];
  const double denom = eig.values[0] + eig.values[1];
  if (denom <= 0.0) return Matrix2c::zero();
  const Complex a01 = inner(v0, c * v1) / denom;
  const Complex a10 = inner(v1, c * v0) / denom;
  return a01 * outer(v0, v1) + a10 * outer(v1, v0);
}

Matrix2c connection_unchecked(const Model& model, double k, double t, double h,
                              const NumericPolicy& policy) {
  const ThermalState rho = thermal_state(model, k, t, policy);
  const Matrix2c s = thermal_sqrt(rho);
  return spectral_connection(rho.matrix, s, sqrt_rho_derivative(model, k, t, h, policy), policy);
}

void validate_setup(const HolonomySetup& setup) {
  if (setup.n_steps < 64) {
    throw Error(ErrorCode::InvalidParameter,
                "holonomy n_steps = " + std::to_string(setup.n_steps) + " must be >= 64");
  }
  if (!std::isfinite(setup.base_k)) throw Error(ErrorCode::InvalidParameter, "base_k must be finite");
  require_temperature(setup.temperature);
}

double eval_point(const HolonomySetup& setup, int l, double dk) {
  const double offset = setup.scheme == Scheme::Midpoint ? 0.5 : 0.0;
  return setup.base_k + (l + offset) * dk;
}

// Transports the amplitude gauge around the zone, reporting the running
// product after every step.
template <class OnStep>
Matrix2c transport(const Model& model, const HolonomySetup& setup, const NumericPolicy& policy,
                   OnStep&& on_step) {
  validate_setup(setup);
  const int n = setup.n_steps;
  const double dk = 2.0 * kPi / n;
  const double h = dk * policy.diff_step_fraction;

  // Single Richardson check at the smallest gap.
  int worst = 0;
  double smallest = std::numeric_limits<double>::infinity();
  for (int l = 0; l < n; ++l) {
    const double delta = bloch_at(model, eval_point(setup, l, dk), policy).delta;
    if (delta < smallest) {
      smallest = delta;
      worst = l;
    }
  }
  (void)connection_at(model, eval_point(setup, worst, dk), setup.temperature, h, policy);

  Matrix2c v = Matrix2c::identity();
  for (int l = 0; l < n; ++l) {
    const Matrix2c a = connection_unchecked(model, eval_point(setup, l, dk), setup.temperature, h, policy);
    v = expm2(Complex(dk) * a) * v;
    on_step(l, v);
  }
  return v;
}

}  // namespace

double flat_band_critical_temperature() { return 1.0 / std::log(2.0 + std::sqrt(3.0)); }

ThermalState thermal_state(const Model& model, double k, double temperature,
                           const NumericPolicy& policy) {
  require_temperature(temperature);
  const BlochData b = bloch_at(model, k, policy);
  const double r = thermal_r(b.delta, temperature);
  const Matrix2c rho = Complex(0.5) * (Matrix2c::identity() - Complex(r) * pauli_dot(b.n));
  ThermalState out{r, b.n, rho};
  if (temperature == kZeroTemperature) {
    out.p_low = 0.0;
    out.p_high = 1.0;
  } else if (!std::isinf(temperature)) {
    const double x = b.delta / temperature;
    out.p_low = 1.0 / (std::exp(x) + 1.0);
    out.p_high = 1.0 / (std::exp(-x) + 1.0);
  }
  return out;
}

Matrix2c thermal_sqrt(const ThermalState& state) {
  // rho = p_low P+ + p_high P-, P+- = (1 +- n.sigma)/2
  const Matrix2c ns = pauli_dot(state.n);
  const double a = std::sqrt(state.p_low);
  const double b = std::sqrt(state.p_high);
  return Complex(0.5 * (a + b)) * Matrix2c::identity() + Complex(0.5 * (a - b)) * ns;
}

Matrix2c connection_at(const Model& model, double k, double temperature, double dk,
                       const NumericPolicy& policy) {
  if (!(dk > 0.0) || !std::isfinite(dk)) {
    throw Error(ErrorCode::InvalidParameter, "differentiation step must be positive and finite");
  }
  const ThermalState rho = thermal_state(model, k, temperature, policy);
  const Matrix2c s = thermal_sqrt(rho);
  const Matrix2c d_full = sqrt_rho_derivative(model, k, temperature, dk, policy);
  const Matrix2c d_half = sqrt_rho_derivative(model, k, temperature, 0.5 * dk, policy);
  // Central differences are second order: error(h) ~ (4/3) |D(h) - D(h/2)|.
  const double err = (4.0 / 3.0) * frobenius_norm(d_full - d_half);
  if (err > 10.0 * policy.tau_diff * frobenius_norm(d_full) + 1e-12) {
    throw Error(ErrorCode::StepTooLarge,
                model.describe() + ": derivative of sqrt(rho) unresolved at k=" + std::to_string(k) +
                    " with dk=" + std::to_string(dk));
  }
  return spectral_connection(rho.matrix, s, d_full, policy);
}

Matrix2c connection_band_formula(const Model& model, double k, double temperature, double dk,
                                 const NumericPolicy& policy) {
  require_temperature(temperature);
  const BlochData b = bloch_at(model, k, policy);
  const BandStates here = band_states(b);
  auto aligned_plus = [&](double kk) {
    Vector2c u = band_states(bloch_at(model, kk, policy)).u_plus;
    const Complex ov = inner(here.u_plus, u);
    const Complex fix = std::conj(ov) / std::abs(ov);
    return Vector2c{u[0] * fix, u[1] * fix};
  };
  const Vector2c up = aligned_plus(k + dk);
  const Vector2c um = aligned_plus(k - dk);
  const Vector2c du{(up[0] - um[0]) / (2.0 * dk), (up[1] - um[1]) / (2.0 * dk)};
  const Complex c = inner(here.u_minus, du);
  const double m12 = mixing_factor(b.delta, temperature);
  // <u+|d u-> = -conj(<u-|d u+>)
  return Complex(m12) * (c * outer(here.u_minus, here.u_plus) -
                         std::conj(c) * outer(here.u_plus, here.u_minus));
}

Matrix2c holonomy(const Model& model, const HolonomySetup& setup, const NumericPolicy& policy) {
  return transport(model, setup, policy, [](int, const Matrix2c&) {});
}

UhlmannResult uhlmann_phase(const Model& model, const HolonomySetup& setup,
                            const NumericPolicy& policy) {
  UhlmannResult out;
  out.holonomy = holonomy(model, setup, policy);
  const ThermalState rho0 = thermal_state(model, setup.base_k, setup.temperature, policy);
  out.trace_arg_operand = trace(rho0.matrix * out.holonomy);
  out.n_steps_used = setup.n_steps;
  if (std::abs(out.trace_arg_operand) < policy.degenerate_arg) {
    throw Error(ErrorCode::DegenerateArg,
                model.describe() + ": |Tr[rho V]| vanishes at T=" + std::to_string(setup.temperature));
  }
  out.phase = classify_phase(std::arg(out.trace_arg_operand), policy.tau_quant);
  return out;
}

namespace {

struct QuadratureSum {
  double half_integral = 0.0;  // (1/2) \oint sech dalpha
  double total_angle = 0.0;
  double max_step = 0.0;
};

QuadratureSum integrate_planar(const Model& model, double t, int n, const NumericPolicy& policy) {
  const int normal = static_cast<int>(model.plane().normal());
  const double dk = 2.0 * kPi / n;
  std::vector<double> alpha(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    const double k = -kPi + l * dk;
    const BlochData b = bloch_at(model, k, policy);
    if (std::abs(b.n[normal]) > policy.tau_planar) {
      throw Error(ErrorCode::NotPlanar,
                  model.describe() + ": winding vector leaves its plane at k=" + std::to_string(k));
    }
    alpha[l] = planar_angle(b.n, model.plane());
  }
  QuadratureSum q;
  for (int l = 0; l < n; ++l) {
    const double da = angle_step(alpha[l], alpha[(l + 1) % n]);
    const double k_mid = -kPi + (l + 0.5) * dk;
    const double weight = 1.0 - mixing_factor(bloch_at(model, k_mid, policy).delta, t);
    q.half_integral += 0.5 * weight * da;
    q.total_angle += da;
    q.max_step = std::max(q.max_step, std::abs(da));
  }
  return q;
}

}  // namespace

double closed_form_operand(const Model& model, double temperature, int n_quad,
                           const NumericPolicy& policy) {
  require_temperature(temperature);
  if (n_quad < 64) {
    throw Error(ErrorCode::InvalidParameter, "n_quad = " + std::to_string(n_quad) + " must be >= 64");
  }
  QuadratureSum q = integrate_planar(model, temperature, n_quad, policy);
  if (q.max_step > kPi / 2) {
    q = integrate_planar(model, temperature, 2 * n_quad, policy);
    if (q.max_step > kPi / 2) {
      throw Error(ErrorCode::UnwrapAmbiguity,
                  model.describe() + ": winding angle unresolved by the quadrature grid");
    }
  }
  const long omega1 = std::lround(q.total_angle / (2.0 * kPi));
  return std::cos(kPi * static_cast<double>(omega1)) * std::cos(q.half_integral);
}

PhaseValue closed_form_phase(const Model& model, double temperature, int n_quad,
                             const NumericPolicy& policy) {
  return phase_of_real(closed_form_operand(model, temperature, n_quad, policy), policy.tau_quant);
}

std::optional<double> critical_temperature(const Model& model,
                                           const CriticalTemperatureOptions& options,
                                           const NumericPolicy& policy) {
  if (!(options.t_lo >= 0.0) || !(options.t_hi > options.t_lo) || !std::isfinite(options.t_hi)) {
    throw Error(ErrorCode::InvalidParameter, "temperature bracket must satisfy 0 <= T_lo < T_hi < inf");
  }
  if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidParameter, "tol must be positive");

  auto is_pi = [&](double t) {
    if (options.method == PhaseMethod::ClosedForm) {
      return closed_form_operand(model, t, options.n_quad, policy) < 0.0;
    }
    HolonomySetup setup;
    setup.n_steps = options.n_steps;
    setup.temperature = t;
    const Matrix2c v = holonomy(model, setup, policy);
    const ThermalState rho0 = thermal_state(model, setup.base_k, t, policy);
    return trace(rho0.matrix * v).real() < 0.0;
  };

  double lo = options.t_lo;
  double hi = options.t_hi;
  if (!is_pi(lo)) return std::nullopt;
  if (is_pi(hi)) {
    throw Error(ErrorCode::BracketError,
                model.describe() + ": phase is still pi at T_hi=" + std::to_string(hi));
  }
  while (hi - lo > options.tol) {
    const double mid = 0.5 * (lo + hi);
    if (is_pi(mid)) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

KinkResult critical_momentum(const Model& model, const HolonomySetup& setup,
                             const NumericPolicy& policy) {
  validate_setup(setup);
  const double dk = 2.0 * kPi / setup.n_steps;
  const Matrix2c rho0 = thermal_state(model, setup.base_k, setup.temperature, policy).matrix;

  KinkResult out;
  out.k.reserve(setup.n_steps + 1);
  out.partial_phase.reserve(setup.n_steps + 1);
  out.k.push_back(setup.base_k);
  out.partial_phase.push_back(std::arg(trace(rho0)));

  bool prev_pi = false;
  transport(model, setup, policy, [&](int l, const Matrix2c& v) {
    const double k = setup.base_k + (l + 1) * dk;
    const Complex tr = trace(rho0 * v);
    out.k.push_back(k);
    out.partial_phase.push_back(std::arg(tr));
    const bool now_pi = tr.real() < 0.0;
    if (now_pi && !prev_pi && !out.k_c) out.k_c = wrap_phase(k);
    prev_pi = now_pi;
  });
  return out;
}

}  // namespace u1d
