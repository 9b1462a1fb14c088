#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qfree/elliptic.hpp"
#include "qfree/quaternion.hpp"

namespace qfree {

enum class Regime { Interior, Exterior };

struct GreensResult {
  Quaternion value;  // (G, Gamma)
  Regime regime = Regime::Exterior;
  double residual = 0.0;  // of G (q - R(G)) - 1
  int iterations = 0;
};

using RMap = std::function<Quaternion(const Quaternion&)>;

/// Solves the fixed point G = (q - R(G))^{-1}.
///
/// At w = 0 the second part carries a free phase; it is gauged real and
/// nonnegative.  The interior branch (Gamma > 0) is preferred when it
/// converges; otherwise the holomorphic exterior branch is found by Newton
/// continuation from large |z| with seed G ~ 1/z.  For w != 0 the solution is
/// reached by damped fixed-point iteration from q^{-1} plus Newton polish.
GreensResult solve_quaternionic_greens(const RMap& r, const Quaternion& q,
                                       std::optional<Quaternion> seed = std::nullopt);

GreensResult solve_quaternionic_greens(const EllipticLaw& law, const Quaternion& q,
                                       std::optional<Quaternion> seed = std::nullopt);

struct GridSpec {
  double xmin, xmax, ymin, ymax;
  int nx, ny;
};

/// Density sampled at cell centers of a rectangular complex-plane grid.
/// Cells where the solver failed are flagged invalid and excluded from mass.
struct DensityGrid {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  int nx = 0, ny = 0;
  std::vector<double> values;        // row-major, index iy * nx + ix
  std::vector<std::uint8_t> valid;   // 1 = converged cell
  double max_imag_residual = 0.0;    // largest |Im rho| seen on valid cells

  static DensityGrid zeros(const GridSpec& g);
  double dx() const { return (xmax - xmin) / nx; }
  double dy() const { return (ymax - ymin) / ny; }
  double cell_area() const { return dx() * dy(); }
  double x_center(int ix) const { return xmin + (ix + 0.5) * dx(); }
  double y_center(int iy) const { return ymin + (iy + 0.5) * dy(); }
  std::size_t index(int ix, int iy) const { return std::size_t(iy) * nx + ix; }
  /// Integral of the density over valid cells.
  double mass() const;
};

/// rho(z) = (1/pi) dG/dzbar at w -> 0, via central differences with step
/// h = 1e-4 (1 + |z|); every stencil point is re-solved with warm starts that
/// propagate along grid rows.  |mu| must be < 1 (two-dimensional support).
DensityGrid density_field(const EllipticLaw& law, const GridSpec& grid);
/// Single-task reference implementation; bit-identical to density_field.
DensityGrid density_field_serial(const EllipticLaw& law, const GridSpec& grid);

enum class DeltaPart { First, Second };

/// Quaternionic representation of the planar Dirac delta:
/// first part (1/pi) |w|^2 / (|z|^2 + |w|^2)^2, second part (w/conj(w)) times
/// the first.
Complex delta_representation(Complex z, Complex w, DeltaPart part);

struct LocalizationReport {
  Complex lambda;
  Complex w;
  double min_eig_hl = 0.0;
};

/// Smallest eigenvalue of H_L = (lambda - X)(conj(lambda) - X^dag) + |w|^2;
/// equals |w|^2 exactly when lambda is an eigenvalue of X.
LocalizationReport localization_check(const Eigen::MatrixXcd& x, Complex lambda, Complex w);

}  // namespace qfree
