#include "u1d/zerotemp.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "u1d/error.hpp"

namespace u1d {

namespace {

constexpr double kPi = std::numbers::pi;

void require_samples(int n_samples) {
  if (n_samples < 64) {
    throw Error(ErrorCode::InvalidParameter,
                "n_samples = " + std::to_string(n_samples) + " must be >= 64");
  }
}

double grid_k(int l, int n) { return -kPi + 2.0 * kPi * l / n; }

struct AngleSum {
  double total = 0.0;
  double max_step = 0.0;
};

AngleSum accumulate_angle(const Model& model, int n, const NumericPolicy& policy) {
  std::vector<double> alpha(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) alpha[l] = planar_angle(bloch_at(model, grid_k(l, n), policy).n, model.plane());
  AngleSum s;
  for (int l = 0; l < n; ++l) {
    const double d = angle_step(alpha[l], alpha[(l + 1) % n]);
    s.total += d;
    s.max_step = std::max(s.max_step, std::abs(d));
  }
  return s;
}

}  // namespace

std::string_view to_string(Quantization q) {
  switch (q) {
    case Quantization::Zero: return "0";
    case Quantization::Pi: return "pi";
    case Quantization::Unquantized: return "unquantized";
  }
  return "unquantized";
}

double wrap_phase(double angle) {
  double a = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

PhaseValue classify_phase(double angle, double tau_quant) {
  const double a = wrap_phase(angle);
  if (std::abs(a) <= tau_quant) return {a, Quantization::Zero};
  if (kPi - std::abs(a) <= tau_quant) return {a, Quantization::Pi};
  return {a, Quantization::Unquantized};
}

PhaseValue phase_of_real(double x, double tau_quant) {
  return classify_phase(x < 0.0 ? kPi : 0.0, tau_quant);
}

double planar_angle(const Vec3& n, Plane plane) {
  return std::atan2(n[static_cast<int>(plane.first)], n[static_cast<int>(plane.second)]);
}

double angle_step(double a0, double a1) { return wrap_phase(a1 - a0); }

WindingResult winding_number(const Model& model, int n_samples, const NumericPolicy& policy) {
  require_samples(n_samples);
  int n = n_samples;
  AngleSum s = accumulate_angle(model, n, policy);
  if (s.max_step > kPi / 2) {
    n *= 2;
    s = accumulate_angle(model, n, policy);
    if (s.max_step > kPi / 2) {
      throw Error(ErrorCode::UnwrapAmbiguity,
                  model.describe() + ": winding angle jumps by " + std::to_string(s.max_step) +
                      " rad in one step at n=" + std::to_string(n));
    }
  }
  WindingResult r;
  r.alpha_total = s.total;
  r.omega1 = static_cast<int>(std::lround(s.total / (2.0 * kPi)));
  r.n_samples = n;
  return r;
}

PhaseValue berry_phase(const Model& model, int n_samples, const NumericPolicy& policy) {
  require_samples(n_samples);
  std::vector<Vector2c> u(static_cast<std::size_t>(n_samples));
  for (int l = 0; l < n_samples; ++l) {
    u[l] = band_states(bloch_at(model, grid_k(l, n_samples), policy)).u_minus;
  }
  // Accumulate the argument link by link; the product of unit phases drifts.
  double arg_sum = 0.0;
  for (int l = 0; l < n_samples; ++l) {
    const Complex link = inner(u[l], u[(l + 1) % n_samples]);
    if (std::abs(link) < policy.min_overlap) {
      throw Error(ErrorCode::ZeroOverlap,
                  model.describe() + ": vanishing overlap at k=" + std::to_string(grid_k(l, n_samples)));
    }
    arg_sum += std::arg(link);
  }
  return classify_phase(-arg_sum, policy.tau_quant);
}

PhaseValue uhlmann_zero_t(const Model& model, const NumericPolicy& policy) {
  const WindingResult w = winding_number(model, policy.winding_samples, policy);
  return phase_of_real(std::cos(kPi * w.omega1), policy.tau_quant);
}

}  // namespace u1d
