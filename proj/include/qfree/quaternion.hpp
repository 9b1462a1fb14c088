#pragma once

#include <cmath>
#include <complex>

#include "qfree/errors.hpp"

namespace qfree {

using Complex = std::complex<double>;

/// Quaternion stored as the Cayley-Dickson pair (first, second):
/// q = first + second * j.  Equivalent to the 2x2 complex matrix
/// [[first, second], [-conj(second), conj(first)]]; the first row of that
/// matrix is the pair itself.
struct Quaternion {
  Complex first{};
  Complex second{};

  Quaternion() = default;
  Quaternion(Complex z, Complex w) : first(z), second(w) {}
  explicit Quaternion(Complex z) : first(z), second(0.0) {}
  explicit Quaternion(double a) : first(a), second(0.0) {}

  static Quaternion one() { return {Complex(1, 0), Complex(0, 0)}; }
  static Quaternion unit_i() { return {Complex(0, 1), Complex(0, 0)}; }
  static Quaternion unit_j() { return {Complex(0, 0), Complex(1, 0)}; }
  static Quaternion unit_k() { return {Complex(0, 0), Complex(0, 1)}; }

  Quaternion& operator+=(const Quaternion& o) {
    first += o.first;
    second += o.second;
    return *this;
  }
  Quaternion& operator-=(const Quaternion& o) {
    first -= o.first;
    second -= o.second;
    return *this;
  }

  friend Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
  friend Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
  friend Quaternion operator-(const Quaternion& a) { return {-a.first, -a.second}; }

  /// Cayley-Dickson product: (z,w)(v,y) = (zv - w*conj(y), zy + w*conj(v)).
  friend Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.first * b.first - a.second * std::conj(b.second),
            a.first * b.second + a.second * std::conj(b.first)};
  }

  // Complex scalars do not commute with general quaternions; the overloads
  // embed the scalar as (c, 0) on the matching side.
  friend Quaternion operator*(Complex c, const Quaternion& q) {
    return {c * q.first, c * q.second};
  }
  friend Quaternion operator*(const Quaternion& q, Complex c) {
    return {q.first * c, q.second * std::conj(c)};
  }
  friend Quaternion operator*(double s, const Quaternion& q) {
    return {s * q.first, s * q.second};
  }
  friend Quaternion operator*(const Quaternion& q, double s) { return s * q; }
  friend Quaternion operator/(const Quaternion& q, double s) {
    return {q.first / s, q.second / s};
  }

  friend bool operator==(const Quaternion& a, const Quaternion& b) {
    return a.first == b.first && a.second == b.second;
  }
};

/// q* = (conj(z), -w): negates the i, j, k parts.
inline Quaternion conj(const Quaternion& q) { return {std::conj(q.first), -q.second}; }

/// ||q||^2 = |z|^2 + |w|^2 = det of the matrix representation.
inline double norm2(const Quaternion& q) { return std::norm(q.first) + std::norm(q.second); }

inline double norm(const Quaternion& q) { return std::sqrt(norm2(q)); }

/// q^{-1} = q* / ||q||^2.  Inputs with ||q||^2 < 1e-300 are treated as zero.
inline Quaternion inverse(const Quaternion& q) {
  const double n2 = norm2(q);
  if (n2 < 1e-300) throw SingularInputError("inverse of zero quaternion");
  return conj(q) / n2;
}

enum class RotationSide { Left, Right };

/// Conjugation by U = diag(e^{i phi/4}, e^{-i phi/4}) in the matrix
/// representation: [q]^L = U q U^dag keeps the first part and multiplies the
/// second by e^{i phi/2}; [q]^R uses the opposite phase.
inline Quaternion rotate(const Quaternion& q, double phi, RotationSide side) {
  const double half = (side == RotationSide::Left) ? 0.5 * phi : -0.5 * phi;
  return {q.first, q.second * std::polar(1.0, half)};
}

inline double abs_diff(const Quaternion& a, const Quaternion& b) { return norm(a - b); }

}  // namespace qfree
