#include "qfree/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qfree {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_to_2pi(double phi) {
  phi = std::fmod(phi, kTwoPi);
  if (phi < 0) phi += kTwoPi;
  return phi;
}

}  // namespace

ContourIndex::ContourIndex(const ContourCurve& curve) {
  // Group samples into rays; angles are quantized to merge samples produced
  // at the same grid angle.
  std::vector<std::pair<double, double>> ray_samples;  // (phi, r)
  for (const auto& branch : curve.branches)
    for (const auto& s : branch.samples) {
      ray_samples.emplace_back(wrap_to_2pi(s.phi), s.r);
      points_.push_back(s.z);
    }
  std::sort(ray_samples.begin(), ray_samples.end());
  const double merge_tol = 1e-9;
  for (const auto& [phi, r] : ray_samples) {
    if (phis_.empty() || phi - phis_.back() > merge_tol) {
      phis_.push_back(phi);
      roots_.emplace_back();
    }
    roots_.back().push_back(r);
  }
  for (auto& rs : roots_) std::sort(rs.begin(), rs.end());
}

bool ContourIndex::inside(Complex z) const {
  if (phis_.empty()) return false;
  const double phi = wrap_to_2pi(std::arg(z));
  // Nearest sampled ray, with wraparound.
  auto it = std::lower_bound(phis_.begin(), phis_.end(), phi);
  std::size_t idx;
  if (it == phis_.begin()) {
    const double d_lo = phis_.front() - phi;
    const double d_hi = phi + kTwoPi - phis_.back();
    idx = (d_lo <= d_hi) ? 0 : phis_.size() - 1;
  } else if (it == phis_.end()) {
    const double d_lo = phi - phis_.back();
    const double d_hi = phis_.front() + kTwoPi - phi;
    idx = (d_lo <= d_hi) ? phis_.size() - 1 : 0;
  } else {
    const std::size_t hi = std::size_t(it - phis_.begin());
    idx = (phis_[hi] - phi <= phi - phis_[hi - 1]) ? hi : hi - 1;
  }
  const double radius = std::abs(z);
  std::size_t crossings_beyond = 0;
  for (const double r : roots_[idx])
    if (r > radius) ++crossings_beyond;
  return crossings_beyond % 2 == 1;
}

double ContourIndex::distance(Complex z) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Complex& p : points_) best = std::min(best, std::abs(z - p));
  return best;
}

ContourCurve ellipse_contour(const EllipticLaw& law, int samples) {
  // Per-ray crossings: substitute z = r e^{i phi} into the support inequality
  // |cos' / a|^2 + |sin' / b|^2 = 1 written in the frame of the law; this is
  // a quadratic in r per angle.
  ContourCurve curve;
  ContourBranch branch;
  const double a = law.semi_axis_major();
  const double b = law.semi_axis_minor();
  for (int k = 0; k < samples; ++k) {
    const double phi = kTwoPi * k / samples;
    const Complex dir = std::polar(1.0, phi - law.phi);
    const Complex x0 = std::polar(1.0, -law.phi) * (-law.center);
    // zeta(r) = x0 + r dir; ellipse: (Re zeta / a)^2 + (Im zeta / b)^2 = 1.
    const double ca = dir.real() / a, sb = dir.imag() / b;
    const double xa = x0.real() / a, yb = x0.imag() / b;
    const double qa = ca * ca + sb * sb;
    const double qb = 2.0 * (ca * xa + sb * yb);
    const double qc = xa * xa + yb * yb - 1.0;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0 || qa == 0.0) continue;
    for (const double r : {(-qb - std::sqrt(disc)) / (2.0 * qa), (-qb + std::sqrt(disc)) / (2.0 * qa)}) {
      if (r <= 0.0) continue;
      const Complex zeta = x0 + r * dir;
      const double res = std::abs(zeta.real() * zeta.real() / (a * a) +
                                  zeta.imag() * zeta.imag() / (b * b) - 1.0);
      branch.samples.push_back({phi, r, std::polar(r, phi), res});
    }
  }
  branch.last_good_phi = kTwoPi;
  curve.branches.push_back(std::move(branch));
  return curve;
}

}  // namespace qfree
