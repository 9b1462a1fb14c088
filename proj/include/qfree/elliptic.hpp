#pragma once

#include <Eigen/Dense>

#include "qfree/quaternion.hpp"

namespace qfree {

/// Gaussian elliptic law with linear quaternionic R transform
///   R(z + wj) = x + sigma^2 (mu e^{2 i phi} z + w j).
/// Parameters: center x, scale sigma > 0, eccentricity mu in [-1, 1],
/// rotation phi in [-pi, pi).  The limiting eigenvalue density is uniform on
/// an ellipse centered at x with semi-axes sigma (1 + mu) and sigma (1 - mu)
/// along directions phi and phi + pi/2.
struct EllipticLaw {
  Complex center{0.0, 0.0};
  double sigma = 1.0;
  double mu = 0.0;
  double phi = 0.0;

  EllipticLaw() = default;
  EllipticLaw(Complex x, double sigma_, double mu_, double phi_);

  static EllipticLaw gue() { return {Complex(0, 0), 1.0, 1.0, 0.0}; }
  static EllipticLaw ginibre() { return {Complex(0, 0), 1.0, 0.0, 0.0}; }

  double sigma1() const { return sigma * std::sqrt(0.5 * (1.0 + mu)); }
  double sigma2() const { return sigma * std::sqrt(0.5 * (1.0 - mu)); }

  /// First-cumulant matrix diag(x, conj(x)).
  Eigen::Matrix2cd k1() const;
  /// Second-cumulant matrix sigma^2 [[mu e^{2i phi}, 1], [1, mu e^{-2i phi}]].
  Eigen::Matrix2cd k2() const;

  Quaternion r_transform(const Quaternion& q) const {
    const Complex twist = sigma * sigma * mu * std::polar(1.0, 2.0 * phi);
    return {center + twist * q.first, sigma * sigma * q.second};
  }

  /// First Cayley-Dickson part of the R transform as a function of the first
  /// part of the argument (the second parts never mix in).
  Complex r_first(Complex g) const {
    return center + sigma * sigma * mu * std::polar(1.0, 2.0 * phi) * g;
  }

  /// Semi-axis along direction phi.
  double semi_axis_major() const { return sigma * (1.0 + mu); }
  /// Semi-axis along direction phi + pi/2.
  double semi_axis_minor() const { return sigma * (1.0 - mu); }

  /// Uniform density value inside the support, 1 / (pi sigma^2 (1 - mu^2)).
  double interior_density() const;

  /// True when z lies inside the support ellipse dilated by `dilation`.
  bool inside_support(Complex z, double dilation = 0.0) const;
};

/// Law of A + B for independent draws: cumulant matrices add.
EllipticLaw add_elliptic(const EllipticLaw& a, const EllipticLaw& b);

/// Law of x0 + alpha A: center -> x0 + alpha x, sigma -> |alpha| sigma,
/// phi -> phi + Arg(alpha), mu unchanged.
EllipticLaw scale_shift_law(const EllipticLaw& law, Complex alpha, Complex x0);

}  // namespace qfree
