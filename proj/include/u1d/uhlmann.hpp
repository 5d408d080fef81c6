#pragma once

// Thermal states, the Uhlmann connection and holonomy, the closed-form
// planar phase, critical temperatures and the critical-momentum kink.

#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "u1d/bandmodels.hpp"
#include "u1d/policy.hpp"
#include "u1d/smallmat.hpp"
#include "u1d/zerotemp.hpp"

namespace u1d {

// Temperature value that selects the pure-state limit r = 1.
inline constexpr double kZeroTemperature = 0.0;

// rho = (1 - r n . sigma) / 2 with r = tanh(Delta / 2T).
struct ThermalState {
  double r;
  Vec3 n;
  Matrix2c matrix;
  // Eigenvalues (1 -+ r)/2 evaluated as Fermi factors, free of cancellation.
  double p_low = 0.5;
  double p_high = 0.5;
};

// T = 0 gives r = 1 exactly; T = +inf gives the maximally mixed state.
ThermalState thermal_state(const Model& model, double k, double temperature,
                           const NumericPolicy& policy = {});

// sqrt(rho) assembled from the stored spectrum. Agrees with sqrt_psd(matrix)
// but keeps full relative accuracy in the small eigenvalue near T = 0.
Matrix2c thermal_sqrt(const ThermalState& state);

// Coefficient A(k) of the Uhlmann connection A_U = A(k) dk, built from central
// differences of sqrt(rho) in the spectral basis of rho. Skew-adjoint and
// traceless. Runs a Richardson check (step vs half step) and throws
// StepTooLarge when the estimated derivative error exceeds 10 * tau_diff.
Matrix2c connection_at(const Model& model, double k, double temperature, double dk,
                       const NumericPolicy& policy = {});

// Same connection from the band-basis formula
//   A = m12 <u-|d u+> |u-><u+| + m12 <u+|d u-> |u+><u-|,  m12 = 1 - sech(Delta/2T),
// with a gauge-aligned central difference of the band states. Used as an
// independent cross-check of connection_at.
Matrix2c connection_band_formula(const Model& model, double k, double temperature, double dk,
                                 const NumericPolicy& policy = {});

enum class Scheme { Midpoint, LeftEndpoint };

struct HolonomySetup {
  int n_steps = 4096;
  Scheme scheme = Scheme::Midpoint;
  double base_k = -std::numbers::pi;
  double temperature = kZeroTemperature;
};

// Path-ordered product V = E_{n-1} ... E_1 E_0 with E_l = exp(A(k_l) dk),
// traversing the Brillouin zone once from base_k.
Matrix2c holonomy(const Model& model, const HolonomySetup& setup, const NumericPolicy& policy = {});

struct UhlmannResult {
  PhaseValue phase;
  Matrix2c holonomy;
  Complex trace_arg_operand;  // Tr[rho(base_k) V]
  int n_steps_used = 0;
};

// Phi_U = arg Tr[rho(base_k) V]. Throws DegenerateArg when |Tr[rho V]| falls
// below policy.degenerate_arg (the state sits at a transition).
UhlmannResult uhlmann_phase(const Model& model, const HolonomySetup& setup,
                            const NumericPolicy& policy = {});

// cos(pi omega_1) cos( (1/2) \oint sech(Delta_k / 2T) dalpha ), by composite
// midpoint quadrature over n_quad panels. Real-valued; its sign is the phase.
// Throws NotPlanar for models whose n_k leaves the plane.
double closed_form_operand(const Model& model, double temperature, int n_quad = 8192,
                           const NumericPolicy& policy = {});

PhaseValue closed_form_phase(const Model& model, double temperature, int n_quad = 8192,
                             const NumericPolicy& policy = {});

enum class PhaseMethod { ClosedForm, Holonomy };

struct CriticalTemperatureOptions {
  double t_lo = 1e-3;
  double t_hi = 10.0;
  double tol = 1e-4;
  PhaseMethod method = PhaseMethod::ClosedForm;
  int n_steps = 4096;
  int n_quad = 8192;
};

// Bisection on the quantized phase (pi below T_c, 0 above). Returns nullopt if
// the phase is already 0 at t_lo; throws BracketError if it is still pi at t_hi.
std::optional<double> critical_temperature(const Model& model,
                                           const CriticalTemperatureOptions& options = {},
                                           const NumericPolicy& policy = {});

struct KinkResult {
  std::optional<double> k_c;
  std::vector<double> k;              // grid points, k[0] = base_k
  std::vector<double> partial_phase;  // arg Tr[rho(base_k) V(base_k -> k)]
};

// Partial Uhlmann phase along the transport; k_c is the first grid point where
// the quantized profile flips from 0 to pi.
KinkResult critical_momentum(const Model& model, const HolonomySetup& setup,
                             const NumericPolicy& policy = {});

// 1 / ln(2 + sqrt 3), the flat-band critical temperature for Delta_k = 2.
double flat_band_critical_temperature();

}  // namespace u1d
