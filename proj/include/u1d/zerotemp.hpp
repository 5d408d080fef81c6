#pragma once

// Zero-temperature diagnostics: planar winding number, discrete Berry phase
// and the T -> 0 Uhlmann phase.

#include <string_view>

#include "u1d/bandmodels.hpp"
#include "u1d/policy.hpp"

namespace u1d {

enum class Quantization { Zero, Pi, Unquantized };

std::string_view to_string(Quantization q);

// Phase in (-pi, pi] with its {0, pi} classification.
struct PhaseValue {
  double value = 0.0;
  Quantization quantized = Quantization::Unquantized;

  friend bool operator==(const PhaseValue&, const PhaseValue&) = default;
};

// Reduces an angle to (-pi, pi].
double wrap_phase(double angle);

// Circle distance to 0 / pi decides the label.
PhaseValue classify_phase(double angle, double tau_quant);

// arg of a real number: 0 for positive, pi for negative.
PhaseValue phase_of_real(double x, double tau_quant);

struct WindingResult {
  int omega1 = 0;
  double alpha_total = 0.0;
  int n_samples = 0;
};

// Winding angle alpha = atan2(n[first], n[second]).
double planar_angle(const Vec3& n, Plane plane);

// Difference a1 - a0 reduced to (-pi, pi].
double angle_step(double a0, double a1);

// Counts turns of n_k in the model plane by summing branch-unwrapped angle
// steps over a uniform grid. A single step above pi/2 triggers one grid
// doubling; if it persists, UnwrapAmbiguity.
WindingResult winding_number(const Model& model, int n_samples = 2048,
                             const NumericPolicy& policy = {});

// Discrete Wilson loop of the lower band, -arg prod <u_-(k_l)|u_-(k_{l+1})>.
PhaseValue berry_phase(const Model& model, int n_samples = 2048,
                       const NumericPolicy& policy = {});

// arg cos(pi * omega_1).
PhaseValue uhlmann_zero_t(const Model& model, const NumericPolicy& policy = {});

}  // namespace u1d
