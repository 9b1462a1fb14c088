#pragma once

#include <string>
#include <vector>

#include "qfree/elliptic.hpp"
#include "qfree/quaternion.hpp"

namespace qfree {

struct ContourSample {
  double phi = 0.0;
  double r = 0.0;
  Complex z;              // r e^{i phi}
  double residual = 0.0;  // of the sample's defining boundary equation
};

/// One branch of a support boundary.  `lost` marks a branch whose
/// continuation failed before closing; `last_good_phi` is the angle of the
/// last converged sample.
struct ContourBranch {
  std::vector<ContourSample> samples;
  bool lost = false;
  double last_good_phi = 0.0;
};

/// Support boundary sampled along rays from the origin: every sample is a
/// boundary crossing of its ray, so any ray holds an even number of crossings
/// (odd when the boundary passes through the origin).
struct ContourCurve {
  std::vector<ContourBranch> branches;
  std::vector<std::string> warnings;

  bool has_samples() const {
    for (const auto& b : branches)
      if (!b.samples.empty()) return true;
    return false;
  }
};

/// Point-in-support and distance queries over a sampled boundary.  Inside-ness
/// counts the crossings beyond |z| along the nearest sampled ray (radial
/// even-odd parity); distance is the minimum over all boundary samples.
class ContourIndex {
 public:
  explicit ContourIndex(const ContourCurve& curve);

  bool inside(Complex z) const;
  double distance(Complex z) const;
  bool covered(Complex z, double dilation) const {
    return inside(z) || distance(z) <= dilation;
  }

 private:
  std::vector<double> phis_;                // sorted, in [0, 2pi)
  std::vector<std::vector<double>> roots_;  // ascending radii per ray
  std::vector<Complex> points_;
};

/// Boundary ellipse of an elliptic law, sampled per ray so radial parity
/// applies (0, 1 or 2 crossings per angle).
ContourCurve ellipse_contour(const EllipticLaw& law, int samples = 720);

}  // namespace qfree
