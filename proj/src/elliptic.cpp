#include "qfree/elliptic.hpp"

#include <numbers>
#include <stdexcept>

namespace qfree {

namespace {

double wrap_angle(double phi) {
  // Reduce to [-pi, pi).
  const double two_pi = 2.0 * std::numbers::pi;
  phi = std::fmod(phi + std::numbers::pi, two_pi);
  if (phi < 0) phi += two_pi;
  return phi - std::numbers::pi;
}

}  // namespace

EllipticLaw::EllipticLaw(Complex x, double sigma_, double mu_, double phi_)
    : center(x), sigma(sigma_), mu(mu_), phi(wrap_angle(phi_)) {
  if (!(sigma > 0.0)) throw std::invalid_argument("EllipticLaw: sigma must be positive");
  if (!(mu >= -1.0 && mu <= 1.0)) throw std::invalid_argument("EllipticLaw: mu must be in [-1, 1]");
}

Eigen::Matrix2cd EllipticLaw::k1() const {
  Eigen::Matrix2cd m;
  m << center, 0.0, 0.0, std::conj(center);
  return m;
}

Eigen::Matrix2cd EllipticLaw::k2() const {
  const Complex e = std::polar(1.0, 2.0 * phi);
  Eigen::Matrix2cd m;
  m << mu * e, 1.0, 1.0, mu * std::conj(e);
  return m * (sigma * sigma);
}

double EllipticLaw::interior_density() const {
  const double area = std::numbers::pi * sigma * sigma * (1.0 - mu * mu);
  if (area <= 0.0) throw std::domain_error("interior_density undefined for |mu| = 1");
  return 1.0 / area;
}

bool EllipticLaw::inside_support(Complex z, double dilation) const {
  const Complex zeta = std::polar(1.0, -phi) * (z - center);
  const double a = semi_axis_major() + dilation;
  const double b = semi_axis_minor() + dilation;
  if (a <= 0.0 || b <= 0.0) return false;
  const double u = zeta.real() / a;
  const double v = zeta.imag() / b;
  return u * u + v * v <= 1.0;
}

EllipticLaw add_elliptic(const EllipticLaw& a, const EllipticLaw& b) {
  const Complex x = a.center + b.center;
  const double s2 = a.sigma * a.sigma + b.sigma * b.sigma;
  // Off-hermitian entries of K^(2) add directly: mu_C sigma_C^2 e^{2i phi_C}
  // = mu_A sigma_A^2 e^{2i phi_A} + mu_B sigma_B^2 e^{2i phi_B}.
  const Complex twist = a.mu * a.sigma * a.sigma * std::polar(1.0, 2.0 * a.phi) +
                        b.mu * b.sigma * b.sigma * std::polar(1.0, 2.0 * b.phi);
  const double mu = std::abs(twist) / s2;
  const double phi = (std::abs(twist) == 0.0) ? 0.0 : 0.5 * std::arg(twist);
  return {x, std::sqrt(s2), mu, phi};
}

EllipticLaw scale_shift_law(const EllipticLaw& law, Complex alpha, Complex x0) {
  if (std::abs(alpha) == 0.0) throw SingularInputError("scale_shift_law: alpha must be nonzero");
  return {x0 + alpha * law.center, std::abs(alpha) * law.sigma, law.mu,
          law.phi + std::arg(alpha)};
}

}  // namespace qfree
