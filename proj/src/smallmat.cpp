#include "u1d/smallmat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "u1d/error.hpp"

namespace u1d {

Matrix2c& Matrix2c::operator+=(const Matrix2c& o) {
  for (int i = 0; i < 4; ++i) e[i] += o.e[i];
  return *this;
}

Matrix2c& Matrix2c::operator-=(const Matrix2c& o) {
  for (int i = 0; i < 4; ++i) e[i] -= o.e[i];
  return *this;
}

Matrix2c& Matrix2c::operator*=(Complex s) {
  for (auto& x : e) x *= s;
  return *this;
}

Matrix2c operator+(Matrix2c a, const Matrix2c& b) { return a += b; }
Matrix2c operator-(Matrix2c a, const Matrix2c& b) { return a -= b; }
Matrix2c operator-(const Matrix2c& a) { return Complex(-1.0) * a; }
Matrix2c operator*(Complex s, Matrix2c a) { return a *= s; }
Matrix2c operator*(Matrix2c a, Complex s) { return a *= s; }

Matrix2c operator*(const Matrix2c& a, const Matrix2c& b) {
  return {a.e[0] * b.e[0] + a.e[1] * b.e[2], a.e[0] * b.e[1] + a.e[1] * b.e[3],
          a.e[2] * b.e[0] + a.e[3] * b.e[2], a.e[2] * b.e[1] + a.e[3] * b.e[3]};
}

Vector2c operator*(const Matrix2c& m, const Vector2c& v) {
  return {m.e[0] * v[0] + m.e[1] * v[1], m.e[2] * v[0] + m.e[3] * v[1]};
}

Matrix2c matmul(const Matrix2c& a, const Matrix2c& b) { return a * b; }

Matrix2c adjoint(const Matrix2c& m) {
  return {std::conj(m.e[0]), std::conj(m.e[2]), std::conj(m.e[1]), std::conj(m.e[3])};
}

Complex trace(const Matrix2c& m) { return m.e[0] + m.e[3]; }

Complex det(const Matrix2c& m) { return m.e[0] * m.e[3] - m.e[1] * m.e[2]; }

double frobenius_norm(const Matrix2c& m) {
  double s = 0.0;
  for (const auto& x : m.e) s += std::norm(x);
  return std::sqrt(s);
}

bool is_finite(const Matrix2c& m) {
  return std::all_of(m.e.begin(), m.e.end(), [](const Complex& x) {
    return std::isfinite(x.real()) && std::isfinite(x.imag());
  });
}

bool is_hermitian(const Matrix2c& m, double tol) {
  const double scale = std::max(1.0, frobenius_norm(m));
  return std::abs(m.e[1] - std::conj(m.e[2])) <= tol * scale &&
         std::abs(m.e[0].imag()) <= tol * scale && std::abs(m.e[3].imag()) <= tol * scale;
}

bool is_unitary(const Matrix2c& m, double tol) {
  return frobenius_norm(m * adjoint(m) - Matrix2c::identity()) <= tol;
}

Matrix2c pauli_dot(const Vec3& n) {
  return {n[2], Complex(n[0], -n[1]), Complex(n[0], n[1]), -n[2]};
}

Complex inner(const Vector2c& a, const Vector2c& b) {
  return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
}

Matrix2c outer(const Vector2c& a, const Vector2c& b) {
  return {a[0] * std::conj(b[0]), a[0] * std::conj(b[1]), a[1] * std::conj(b[0]),
          a[1] * std::conj(b[1])};
}

double norm(const Vector2c& v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1])); }

namespace {

void require_finite(const Matrix2c& m, const char* what) {
  if (!is_finite(m)) throw Error(ErrorCode::NonFinite, std::string(what) + ": non-finite entry");
}

void require_hermitian(const Matrix2c& m, const NumericPolicy& policy, const char* what) {
  require_finite(m, what);
  if (!is_hermitian(m, policy.tau_herm)) {
    throw Error(ErrorCode::NotHermitian, std::string(what) + ": matrix is not Hermitian");
  }
}

// Rotate the global phase so the first nonzero component is real positive.
Vector2c fix_gauge(Vector2c v) {
  const Complex lead = v[0] != Complex(0.0) ? v[0] : v[1];
  const double mag = std::abs(lead);
  if (mag == 0.0) return v;
  const Complex phase = std::conj(lead) / mag;
  v[0] *= phase;
  v[1] *= phase;
  if (v[0] != Complex(0.0)) v[0] = Complex(v[0].real(), 0.0);
  else v[1] = Complex(v[1].real(), 0.0);
  return v;
}

struct Spectrum {
  double mean;
  double radius;
};

// H = mean + radius (n . sigma) with the off-diagonal symmetrized.
Spectrum spectrum_of(const Matrix2c& m, Complex& off) {
  const double a = m.e[0].real();
  const double d = m.e[3].real();
  off = 0.5 * (m.e[1] + std::conj(m.e[2]));
  return {0.5 * (a + d), std::hypot(0.5 * (a - d), std::abs(off))};
}

}  // namespace

EigenPair2 eigh2(const Matrix2c& m, const NumericPolicy& policy) {
  require_hermitian(m, policy, "eigh2");
  Complex b;
  const Spectrum s = spectrum_of(m, b);
  EigenPair2 out;
  out.values = {s.mean - s.radius, s.mean + s.radius};
  if (s.radius == 0.0) {
    out.vectors = {Vector2c{1.0, 0.0}, Vector2c{0.0, 1.0}};
    return out;
  }
  // m - mean = radius * (n . sigma), where (n_x + i n_y) = conj(b) / radius.
  const double half_diff = 0.5 * (m.e[0].real() - m.e[3].real());
  const double theta = std::atan2(std::abs(b), half_diff);
  const double phi = std::arg(std::conj(b));
  const Complex eph = std::polar(1.0, -phi);
  const double c = std::cos(0.5 * theta);
  const double sn = std::sin(0.5 * theta);
  out.vectors[0] = fix_gauge({-eph * sn, c});
  out.vectors[1] = fix_gauge({eph * c, sn});
  return out;
}

Matrix2c sqrt_psd(const Matrix2c& m, const NumericPolicy& policy) {
  require_hermitian(m, policy, "sqrt_psd");
  Complex b;
  const Spectrum s = spectrum_of(m, b);
  const double lo = s.mean - s.radius;
  const double hi = s.mean + s.radius;
  if (lo < -policy.tau_eig) {
    throw Error(ErrorCode::NotPSD, "sqrt_psd: eigenvalue " + std::to_string(lo) + " below zero");
  }
  if (lo >= 0.0) {
    // sqrt(M) = (M + sqrt(det) I) / (sqrt(l0) + sqrt(l1)) for PSD 2x2 M.
    const double r0 = std::sqrt(lo);
    const double r1 = std::sqrt(hi);
    const double t = r0 + r1;
    if (t == 0.0) return Matrix2c::zero();
    const Matrix2c herm{m.e[0].real(), b, std::conj(b), m.e[3].real()};
    return Complex(1.0 / t) * (herm + Complex(r0 * r1) * Matrix2c::identity());
  }
  // Clamped branch: rebuild from the spectral decomposition.
  const EigenPair2 eig = eigh2(m, policy);
  const double r1 = std::sqrt(std::max(0.0, eig.values[1]));
  return Complex(r1) * outer(eig.vectors[1], eig.vectors[1]);
}

Matrix2c expm2(const Matrix2c& m) {
  require_finite(m, "expm2");
  const Complex c = 0.5 * trace(m);
  const Matrix2c m0 = m - c * Matrix2c::identity();
  const Complex mu2 = m0.e[0] * m0.e[0] + m0.e[1] * m0.e[2];
  Complex ch;
  Complex sh_over_mu;
  if (std::abs(mu2) < 1e-8) {
    // Taylor tails; truncation error below 1e-32 in this range.
    ch = 1.0 + mu2 / 2.0 + mu2 * mu2 / 24.0 + mu2 * mu2 * mu2 / 720.0;
    sh_over_mu = 1.0 + mu2 / 6.0 + mu2 * mu2 / 120.0 + mu2 * mu2 * mu2 / 5040.0;
  } else {
    const Complex mu = std::sqrt(mu2);
    ch = std::cosh(mu);
    sh_over_mu = std::sinh(mu) / mu;
  }
  const Complex scale = std::exp(c);
  return scale * (ch * Matrix2c::identity() + sh_over_mu * m0);
}

}  // namespace u1d
