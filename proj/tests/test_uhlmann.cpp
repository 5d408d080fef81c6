#include <doctest.h>

#include <cmath>
#include <limits>

#include "test_support.hpp"
#include "u1d/error.hpp"
#include "u1d/uhlmann.hpp"
#include "u1d/zerotemp.hpp"

using namespace u1d;
using namespace u1d::testing;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sech(double x) { return 1.0 / std::cosh(x); }

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an u1d::Error");
  return ErrorCode::SpecError;
}

Model flat_creutz() { return Model::creutz(0.0, kPi / 2); }

// Flat band with unit winding: operand is -cos(pi sech(1/T)).
double flat_band_operand(double t) { return -std::cos(kPi * sech(1.0 / t)); }

// Composite Simpson for cos(pi w) cos((1/2) \oint sech(Delta/2T) alpha'(k) dk)
// on the SSH chain, with the analytic angle derivative in the (x, y) plane.
double ssh_simpson_operand(double j1, double j2, double t, int n) {
  auto integrand = [&](double k) {
    const double h2 = j1 * j1 + j2 * j2 + 2 * j1 * j2 * std::cos(k);
    const double dalpha = (j2 * j2 + j1 * j2 * std::cos(k)) / h2;
    return sech(std::sqrt(h2) / t) * dalpha;
  };
  const double h = 2 * kPi / n;
  double s = integrand(-kPi) + integrand(kPi);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * integrand(-kPi + i * h);
  const double integral = s * h / 3;
  const double omega = j2 > j1 ? 1.0 : 0.0;
  return std::cos(kPi * omega) * std::cos(0.5 * integral);
}

HolonomySetup at(double t, int n = 4096) {
  HolonomySetup s;
  s.temperature = t;
  s.n_steps = n;
  return s;
}

}  // namespace

TEST_CASE("thermal state examples") {
  const ThermalState s = thermal_state(flat_creutz(), 0.3, 1.0);
  CHECK(s.r == doctest::Approx(0.76159).epsilon(1e-5));
  const EigenPair2 e = eigh2(s.matrix);
  CHECK(e.values[0] == doctest::Approx(0.11920).epsilon(1e-4));
  CHECK(e.values[1] == doctest::Approx(0.88080).epsilon(1e-4));

  const ThermalState hot = thermal_state(flat_creutz(), 0.3, kInf);
  CHECK(hot.r == 0.0);
  CHECK(frobenius_norm(hot.matrix - Complex(0.5) * Matrix2c::identity()) == 0.0);
  CHECK(thermal_state(flat_creutz(), 0.3, 1e6).r < 1e-5);

  const Model m = Model::creutz(0.5, kPi / 4);
  const ThermalState pure = thermal_state(m, 0.3, kZeroTemperature);
  CHECK(pure.r == 1.0);
  const Vector2c u = band_states(bloch_at(m, 0.3)).u_minus;
  CHECK(frobenius_norm(pure.matrix - outer(u, u)) < 1e-14);

  CHECK(code_of([] { thermal_state(flat_creutz(), 0.0, -1.0); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { thermal_state(flat_creutz(), 0.0, std::nan("")); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("thermal states are unit-trace PSD with eigenvalues (1 -+ r)/2") {
  for (int trial = 0; trial < 300; ++trial) {
    const Model m = random_gapped_model(trial % 3, 0.05);
    const double k = uniform(-kPi, kPi);
    const double t = uniform(0.01, 5.0);
    const ThermalState s = thermal_state(m, k, t);
    CHECK(std::abs(trace(s.matrix) - 1.0) < 1e-12);
    CHECK(is_hermitian(s.matrix, 1e-14));
    const EigenPair2 e = eigh2(s.matrix);
    CHECK(e.values[0] == doctest::Approx((1 - s.r) / 2).epsilon(1e-12));
    CHECK(e.values[1] == doctest::Approx((1 + s.r) / 2).epsilon(1e-12));
    CHECK(e.values[0] >= 0.0);
    CHECK(e.values[1] <= 1.0);
  }
}

TEST_CASE("thermal square root matches sqrt_psd and stays accurate near T = 0") {
  for (int trial = 0; trial < 300; ++trial) {
    const Model m = random_gapped_model(trial % 3, 0.05);
    const double k = uniform(-kPi, kPi);
    const ThermalState s = thermal_state(m, k, uniform(0.05, 5.0));
    const Matrix2c root = thermal_sqrt(s);
    CHECK(frobenius_norm(root - sqrt_psd(s.matrix)) < 1e-7);
    CHECK(frobenius_norm(root * root - s.matrix) < 1e-14);
    CHECK(s.p_low + s.p_high == doctest::Approx(1.0).epsilon(1e-15));
  }
  // Delta = 2, T = 0.02: p_low = 1/(e^100 + 1)
  const ThermalState cold = thermal_state(flat_creutz(), 0.0, 0.02);
  CHECK(cold.p_low == doctest::Approx(std::exp(-100.0)).epsilon(1e-12));
  const EigenPair2 e = eigh2(thermal_sqrt(cold));
  CHECK(e.values[0] == doctest::Approx(std::exp(-50.0)).epsilon(1e-10));
}

TEST_CASE("flat-band connection magnitude is m12 / 2") {
  const double m12 = 1.0 - sech(1.0);
  CHECK(m12 == doctest::Approx(0.3519457).epsilon(1e-7));
  for (double k : {-2.0, 0.1, 1.3}) {
    const Matrix2c a = connection_at(flat_creutz(), k, 1.0, 1e-4);
    const BandStates u = band_states(bloch_at(flat_creutz(), k));
    CHECK(std::abs(inner(u.u_minus, a * u.u_plus)) == doctest::Approx(m12 / 2).epsilon(1e-7));
    CHECK(std::abs(inner(u.u_minus, a * u.u_minus)) < 1e-12);
    CHECK(std::abs(inner(u.u_plus, a * u.u_plus)) < 1e-12);
  }
}

TEST_CASE("connection vanishes in the infinite-temperature limit") {
  CHECK(frobenius_norm(connection_at(flat_creutz(), 0.4, kInf, 1e-3)) == 0.0);
  const double big = frobenius_norm(connection_at(flat_creutz(), 0.4, 1e4, 1e-3));
  CHECK(big < 1e-8);
}

TEST_CASE("connection is skew-adjoint, traceless, zero-diagonal in the rho eigenbasis") {
  for (int trial = 0; trial < 300; ++trial) {
    const Model m = random_gapped_model(trial % 3, 0.1);
    const double k = uniform(-kPi, kPi);
    const double t = uniform(0.02, 5.0);
    const Matrix2c a = connection_at(m, k, t, 1e-4);
    CHECK(frobenius_norm(a + adjoint(a)) < 1e-10);
    CHECK(std::abs(trace(a)) < 1e-10);
    const EigenPair2 e = eigh2(thermal_state(m, k, t).matrix);
    CHECK(std::abs(inner(e.vectors[0], a * e.vectors[0])) < 1e-10);
    CHECK(std::abs(inner(e.vectors[1], a * e.vectors[1])) < 1e-10);
  }
}

TEST_CASE("spectral and band-basis connections agree away from gap minima") {
  int compared = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const Model m = random_gapped_model(trial % 3, 0.05);
    const double k = uniform(-kPi, kPi);
    if (bloch_at(m, k).delta <= 0.1) continue;
    const double t = uniform(0.02, 5.0);
    const Matrix2c a3 = connection_at(m, k, t, 1e-5);
    const Matrix2c a9 = connection_band_formula(m, k, t, 1e-5);
    CHECK(frobenius_norm(a3 - a9) < 1e-6);
    ++compared;
  }
  CHECK(compared > 300);
}

TEST_CASE("a coarse step near a small gap fails the Richardson check") {
  const Model m = Model::ssh(0.98, 1.0);
  CHECK(code_of([&] { connection_at(m, kPi, 0.01, 0.05); }) == ErrorCode::StepTooLarge);
  CHECK(code_of([&] { connection_at(m, kPi, 0.01, 0.0); }) == ErrorCode::InvalidParameter);
  CHECK_NOTHROW(connection_at(m, kPi, 0.01, 1e-4));
}

TEST_CASE("holonomy at high temperature approaches the identity") {
  // flat gap 1: 1 - sech(0.005) ~ 1.25e-5
  const Matrix2c v1 = holonomy(Model::ssh(0.0, 0.5), at(100.0));
  CHECK(frobenius_norm(v1 - Matrix2c::identity()) < 1e-4);
  // flat gap 2: V = exp(i sigma pi m12), |V - 1|_F = 2 sqrt2 sin(pi m12 / 2)
  const double m12 = 1.0 - sech(0.01);
  const Matrix2c v2 = holonomy(Model::ssh(0.0, 1.0), at(100.0));
  CHECK(frobenius_norm(v2 - Matrix2c::identity()) ==
        doctest::Approx(2 * std::sqrt(2.0) * std::sin(kPi * m12 / 2)).epsilon(1e-6));
}

TEST_CASE("holonomy is special unitary") {
  for (int trial = 0; trial < 30; ++trial) {
    const Model m = random_gapped_model(trial % 3, 0.1);
    const Matrix2c v = holonomy(m, at(uniform(0.02, 3.0), 2048));
    CHECK(is_unitary(v, 1e-8));
    CHECK(std::abs(det(v) - 1.0) < 1e-8);
  }
  CHECK(code_of([] { holonomy(flat_creutz(), at(0.5, 32)); }) == ErrorCode::InvalidParameter);
  HolonomySetup left = at(0.5, 128);
  left.scheme = Scheme::LeftEndpoint;
  CHECK(code_of([&] { holonomy(Model::ssh(1.0, 1.0), left); }) == ErrorCode::GaplessPoint);
}

TEST_CASE("Uhlmann phase examples") {
  CHECK(uhlmann_phase(flat_creutz(), at(0.5)).phase.quantized == Quantization::Pi);
  CHECK(uhlmann_phase(flat_creutz(), at(1.0)).phase.quantized == Quantization::Zero);
  CHECK(uhlmann_phase(Model::ssh(0.0, 1.0), at(0.2)).phase.quantized == Quantization::Pi);
  for (double t : {0.05, 0.5, 2.0}) {
    const UhlmannResult r = uhlmann_phase(Model::ssh(2.0, 1.0), at(t));
    CHECK(r.trace_arg_operand.real() > 0.0);
    CHECK(r.phase.quantized == Quantization::Zero);
  }
  const UhlmannResult r = uhlmann_phase(flat_creutz(), at(0.5, 1024));
  CHECK(r.n_steps_used == 1024);
  CHECK(r.trace_arg_operand.real() == doctest::Approx(flat_band_operand(0.5)).epsilon(1e-6));
  CHECK(std::abs(r.trace_arg_operand.imag()) < 1e-10);
  // -cos(pi sech 2) = -0.67115
  CHECK(flat_band_operand(0.5) == doctest::Approx(-0.67115).epsilon(1e-5));
}

TEST_CASE("zero-temperature limit") {
  const UhlmannResult r = uhlmann_phase(Model::ssh(0.0, 1.0), at(kZeroTemperature, 1024));
  CHECK(r.trace_arg_operand.real() == doctest::Approx(-1.0).epsilon(1e-6));
  for (int trial = 0; trial < 15; ++trial) {
    const Model m = random_gapped_model(trial % 3, 0.2);
    const double t = 0.01 * min_gap(m, 4096);
    CHECK(uhlmann_phase(m, at(t)).phase.quantized == uhlmann_zero_t(m).quantized);
  }
}

TEST_CASE("closed form on flat bands") {
  for (const Model& m : {flat_creutz(), Model::majorana(0.0, 1.0), Model::ssh(0.0, 1.0)}) {
    for (double t : {0.1, 0.4, 0.7, 0.75, 0.77, 1.0, 3.0}) {
      CHECK(closed_form_operand(m, t) == doctest::Approx(flat_band_operand(t)).epsilon(1e-9));
      const Quantization expected =
          t < flat_band_critical_temperature() ? Quantization::Pi : Quantization::Zero;
      CHECK(closed_form_phase(m, t).quantized == expected);
    }
  }
}

TEST_CASE("closed form matches an independent Simpson integral on SSH") {
  for (int trial = 0; trial < 60; ++trial) {
    const double j1 = uniform(0.0, 2.0);
    const double j2 = uniform(0.0, 2.0);
    if (std::abs(j1 - j2) < 0.1) continue;
    const double t = uniform(0.05, 2.0);
    const double oracle = ssh_simpson_operand(j1, j2, t, 20000);
    CHECK(closed_form_operand(Model::ssh(j1, j2), t) == doctest::Approx(oracle).epsilon(1e-6));
  }
  // trivial chains sit at zero for every temperature
  for (double t : {0.01, 0.3, 1.0, 10.0}) {
    CHECK(closed_form_phase(Model::ssh(2.0, 1.0), t).quantized == Quantization::Zero);
  }
}

TEST_CASE("closed form agrees with the holonomy trace") {
  for (int trial = 0; trial < 30; ++trial) {
    const Model m = random_gapped_model(trial % 3, 0.1);
    const double t = uniform(0.05, 2.0);
    const double closed = closed_form_operand(m, t);
    const UhlmannResult r = uhlmann_phase(m, at(t));
    CHECK(r.trace_arg_operand.real() == doctest::Approx(closed).epsilon(1e-4));
    CHECK(std::abs(r.trace_arg_operand.imag()) < 1e-8);
  }
  const Model creutz = Model::creutz(0.5, kPi / 4);
  CHECK(closed_form_phase(creutz, 0.3) == classify_phase(std::arg(Complex(closed_form_operand(creutz, 0.3))), 1e-3));
  CHECK(closed_form_phase(creutz, 0.3).quantized == uhlmann_phase(creutz, at(0.3)).phase.quantized);
}

TEST_CASE("closed form rejects non-planar models") {
  const Model tilted = Model::generic([](double k) -> Vec3 { return {std::cos(k), std::sin(k), 0.3}; },
                                      Plane{Axis::Y, Axis::X}, "tilted", false);
  CHECK(code_of([&] { closed_form_operand(tilted, 0.5); }) == ErrorCode::NotPlanar);
  // holonomy still works off the plane
  CHECK(is_unitary(holonomy(tilted, at(0.5, 512)), 1e-8));
}

TEST_CASE("critical temperature") {
  const double exact = 1.0 / std::log(2.0 + std::sqrt(3.0));
  CHECK(flat_band_critical_temperature() == doctest::Approx(exact));
  CHECK(exact == doctest::Approx(0.759326).epsilon(1e-6));
  for (const Model& m : {flat_creutz(), Model::majorana(0.0, 1.0), Model::ssh(0.0, 1.0)}) {
    const auto tc = critical_temperature(m);
    REQUIRE(tc.has_value());
    CHECK(std::abs(*tc - exact) < 1e-4);
  }
  CHECK_FALSE(critical_temperature(Model::ssh(2.0, 1.0)).has_value());

  CriticalTemperatureOptions narrow;
  narrow.t_hi = 0.5;
  CHECK(code_of([&] { critical_temperature(flat_creutz(), narrow); }) == ErrorCode::BracketError);
  CriticalTemperatureOptions inverted;
  inverted.t_lo = 2.0;
  inverted.t_hi = 1.0;
  CHECK(code_of([&] { critical_temperature(flat_creutz(), inverted); }) == ErrorCode::InvalidParameter);

  CriticalTemperatureOptions hol;
  hol.method = PhaseMethod::Holonomy;
  hol.n_steps = 1024;
  const auto tc_h = critical_temperature(Model::ssh(0.0, 1.0), hol);
  REQUIRE(tc_h.has_value());
  CHECK(std::abs(*tc_h - exact) < 1e-3);

  const Model creutz = Model::creutz(0.5, kPi / 4);
  const auto a = critical_temperature(creutz);
  const auto b = critical_temperature(creutz, hol);
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  CHECK(std::abs(*a - *b) < 1e-3);
}

TEST_CASE("phase flips once across T_c on random topological draws") {
  for (int trial = 0; trial < 12; ++trial) {
    const Model m = random_gapped_model(trial % 3, 0.1);
    if (winding_number(m).omega1 == 0) continue;
    const auto tc = critical_temperature(m);
    REQUIRE(tc.has_value());
    CHECK(closed_form_phase(m, *tc - 0.01).quantized == Quantization::Pi);
    CHECK(closed_form_phase(m, *tc + 0.01).quantized == Quantization::Zero);
  }
}

TEST_CASE("critical momentum on the flat band") {
  const double dk = 2 * kPi / 4096;
  double previous = -kInf;
  for (double t : {0.1, 0.3, 0.5, 0.7}) {
    const KinkResult kink = critical_momentum(flat_creutz(), at(t));
    REQUIRE(kink.k_c.has_value());
    const double analytic = kPi / (1.0 - sech(1.0 / t)) - kPi;
    CHECK(std::abs(*kink.k_c - analytic) < 2 * dk);
    CHECK(*kink.k_c >= previous);
    previous = *kink.k_c;
  }
  const KinkResult edge = critical_momentum(flat_creutz(), at(0.99 * flat_band_critical_temperature()));
  REQUIRE(edge.k_c.has_value());
  CHECK(kPi - *edge.k_c < 0.2);

  // partial phase jumps by about pi within one grid step
  const KinkResult mid = critical_momentum(flat_creutz(), at(0.5));
  CHECK(mid.k.size() == 4097);
  CHECK(mid.partial_phase.size() == mid.k.size());
  for (std::size_t i = 1; i < mid.k.size(); ++i) {
    if (std::abs(wrap_phase(mid.k[i]) - *mid.k_c) < 1e-12) {
      CHECK(std::abs(wrap_phase(mid.partial_phase[i] - mid.partial_phase[i - 1])) > kPi - 1e-3);
    }
  }
}

TEST_CASE("no kink without a transition") {
  CHECK_FALSE(critical_momentum(Model::ssh(2.0, 1.0), at(0.3)).k_c.has_value());
  CHECK_FALSE(critical_momentum(Model::majorana(1.5, 1.0), at(0.05)).k_c.has_value());
  CHECK_FALSE(critical_momentum(flat_creutz(), at(1.0)).k_c.has_value());
}

TEST_CASE("holonomy converges at second order") {
  const Model m = Model::ssh(0.5, 1.0);
  const Matrix2c ref = holonomy(m, at(0.3, 16384));
  double prev = 0.0;
  for (int n : {128, 256, 512, 1024}) {
    const double err = frobenius_norm(holonomy(m, at(0.3, n)) - ref);
    if (prev > 0.0) CHECK(prev / err >= 3.5);
    prev = err;
  }
}

TEST_CASE("trace operand is independent of the base point") {
  const Model m = Model::creutz(0.5, kPi / 4);
  HolonomySetup s = at(0.4);
  const Complex a = uhlmann_phase(m, s).trace_arg_operand;
  s.base_k = 0.7;
  const Complex b = uhlmann_phase(m, s).trace_arg_operand;
  CHECK(std::abs(a - b) < 1e-6);
  s.scheme = Scheme::LeftEndpoint;
  CHECK(uhlmann_phase(m, s).phase.quantized == Quantization::Pi);
}

TEST_CASE("phase at the transition is flagged as degenerate") {
  NumericPolicy loose;
  loose.degenerate_arg = 1e-6;
  CHECK(code_of([&] {
          uhlmann_phase(Model::ssh(0.0, 1.0), at(flat_band_critical_temperature(), 1024), loose);
        }) == ErrorCode::DegenerateArg);
}
