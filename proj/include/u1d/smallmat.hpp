#pragma once

// Dense 2x2 complex linear algebra with closed-form spectral routines.

#include <array>
#include <complex>

#include "u1d/policy.hpp"

namespace u1d {

using Complex = std::complex<double>;
using Vector2c = std::array<Complex, 2>;
using Vec3 = std::array<double, 3>;

struct Matrix2c {
  // Row-major: e[0] = (0,0), e[1] = (0,1), e[2] = (1,0), e[3] = (1,1).
  std::array<Complex, 4> e{};

  constexpr Matrix2c() = default;
  constexpr Matrix2c(Complex m00, Complex m01, Complex m10, Complex m11) : e{m00, m01, m10, m11} {}

  Complex& operator()(int row, int col) { return e[2 * row + col]; }
  const Complex& operator()(int row, int col) const { return e[2 * row + col]; }

  static Matrix2c identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Matrix2c zero() { return {}; }
  static Matrix2c diag(Complex d0, Complex d1) { return {d0, 0.0, 0.0, d1}; }
  static Matrix2c pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
  static Matrix2c pauli_y() { return {0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0}; }
  static Matrix2c pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

  Matrix2c& operator+=(const Matrix2c& o);
  Matrix2c& operator-=(const Matrix2c& o);
  Matrix2c& operator*=(Complex s);
};

Matrix2c operator+(Matrix2c a, const Matrix2c& b);
Matrix2c operator-(Matrix2c a, const Matrix2c& b);
Matrix2c operator-(const Matrix2c& a);
Matrix2c operator*(const Matrix2c& a, const Matrix2c& b);
Matrix2c operator*(Complex s, Matrix2c a);
Matrix2c operator*(Matrix2c a, Complex s);
Vector2c operator*(const Matrix2c& m, const Vector2c& v);

Matrix2c matmul(const Matrix2c& a, const Matrix2c& b);
Matrix2c adjoint(const Matrix2c& m);
Complex trace(const Matrix2c& m);
Complex det(const Matrix2c& m);
double frobenius_norm(const Matrix2c& m);
bool is_finite(const Matrix2c& m);

bool is_hermitian(const Matrix2c& m, double tol);
bool is_unitary(const Matrix2c& m, double tol);

// n . sigma for a real 3-vector.
Matrix2c pauli_dot(const Vec3& n);

// <a|b>
Complex inner(const Vector2c& a, const Vector2c& b);
// |a><b|
Matrix2c outer(const Vector2c& a, const Vector2c& b);
double norm(const Vector2c& v);

struct EigenPair2 {
  std::array<double, 2> values;    // ascending
  std::array<Vector2c, 2> vectors;  // vectors[i] belongs to values[i]
};

// Closed-form Hermitian eigendecomposition. Each eigenvector has its first
// nonzero component real and positive; exactly degenerate input yields the
// canonical basis. Throws NotHermitian.
EigenPair2 eigh2(const Matrix2c& m, const NumericPolicy& policy = {});

// Principal square root of a Hermitian positive semidefinite matrix.
// Eigenvalues in [-tau_eig, 0) are clamped to zero; anything lower throws NotPSD.
Matrix2c sqrt_psd(const Matrix2c& m, const NumericPolicy& policy = {});

// Matrix exponential via e^{c + M0} = e^c (cosh(mu) + sinh(mu)/mu M0), with
// M0 traceless and M0^2 = mu^2.
Matrix2c expm2(const Matrix2c& m);

}  // namespace u1d
