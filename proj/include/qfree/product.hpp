#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "qfree/contour.hpp"
#include "qfree/ensemble.hpp"
#include "qfree/greens.hpp"

namespace qfree {

/// One point of the product multiplication-law system at hat z = (z, 0).
/// w_a, w_b are the first parts of the factor subordination quaternions;
/// v_a, v_b their second parts in the real nonnegative gauge.  Exterior
/// solutions have v_a = v_b = 0 and a holomorphic g_ab.
struct ProductPointSolution {
  Complex z;
  Complex w_a, w_b;
  double v_a = 0.0, v_b = 0.0;
  Complex g_ab;
  Complex gamma_ab;
  Regime regime = Regime::Exterior;
  double residual = 0.0;
  int iterations = 0;
};

/// Solves the coupled quaternionic system
///   [G_A]^R = G_AB [R_A(G_B)]^L,   [G_B]^L = [R_B(G_A)]^R G_AB,
/// with G_AB = (hat z - [R_A(G_B)]^L [R_B(G_A)]^R)^{-1}, in the gauge where
/// v_a, v_b are real.  Interior solutions (v > 0) are preferred; when none
/// converges the exterior (v = 0) branch is returned.  z must be nonzero
/// (the left/right rotations use Arg z).
ProductPointSolution multiplication_law_solve(
    const ProductLaw& p, Complex z, const std::optional<ProductPointSolution>& seed = std::nullopt);

// --- (s + X1)(t + X2), independent standardized Ginibre factors ------------

/// Real nonnegative pair solving the reduced two-equation polynomial system;
/// (0, 0) when only the trivial solution exists.  Requires s t > 0 (the
/// degenerate product is handled by multiplication_law_solve).
std::pair<double, double> shifted_ginibre_interior(
    double s, double t, Complex z, std::optional<std::pair<double, double>> seed = std::nullopt);

/// Closed-form first part of the product Green's function at (v_a, v_b).
Complex shifted_ginibre_greens(double s, double t, Complex z, double v_a, double v_b);

/// Monic quartic coefficients {c0, c1, c2, c3, 1} of the support-boundary
/// equation in r at angle phi.
std::array<double, 5> shifted_ginibre_contour_coeffs(double s, double t, double phi);

/// Real nonnegative boundary radii at angle phi (companion-matrix roots,
/// ascending; spurious roots at r = 0 discarded).
std::vector<double> shifted_ginibre_contour(double s, double t, double phi);

// --- (1 + E1(mu))(1 + E2(mu)), symmetric ansatz w_A = w_B, v_A = v_B -------

struct ShiftedEllipticPoint {
  Complex w;
  double v = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Interior solve of the two reduced complex equations for (w, v); the
/// trivial branch (v = 0, exterior subordination w) is returned when no
/// interior solution converges.  Requires |mu| < 1.
ShiftedEllipticPoint shifted_elliptic_interior(
    double mu, Complex z, std::optional<ShiftedEllipticPoint> seed = std::nullopt);

/// Closed-form first part of the product Green's function.
Complex shifted_elliptic_greens(double mu, Complex z, const ShiftedEllipticPoint& pt);

/// Boundary radii at angle phi from the v -> 0 boundary system, found by a
/// radial interior/exterior scan polished with Newton.  mu = 0 dispatches to
/// the exactly equivalent shifted-Ginibre quartic at s = t = 1.
std::vector<double> shifted_elliptic_contour(double mu, double phi);
ContourCurve shifted_elliptic_contour_curve(double mu, int phi_samples);

// --- (1 + H)(1 + X), shifted GUE times shifted Ginibre ---------------------

struct GueGinibreRoot {
  Complex w_b;
  Complex w_a;  // w_b (1 + w_b)
  double r = 0.0;
  double residual = 0.0;
};

/// All boundary roots at angle phi, from the real/imaginary split of the
/// closing equation for w_b (a quadratic after elimination) plus the radius
/// equation; solutions with nonnegative real radius only.
std::vector<GueGinibreRoot> gue_ginibre_roots(double phi);
std::vector<double> gue_ginibre_contour(double phi);

/// The full two-lobe boundary; branches split by the sign of Re z (the lobes
/// meet only at the origin).
ContourCurve gue_ginibre_contour_curve(int phi_samples);

// --- dispatch over ProductLaw ----------------------------------------------

ContourCurve shifted_ginibre_contour_curve(double s, double t, int phi_samples);

/// Support boundary for the worked product families; throws
/// std::invalid_argument for products without boundary equations.
ContourCurve product_contour(const ProductLaw& p, int phi_samples);

/// Per-cell multiplication-law density (reduced routes where the law matches
/// a worked family), rho = (1/pi) dG/dzbar by the same warm-started stencil
/// as the elliptic field.  Failed cells are flagged invalid.
DensityGrid product_density_field(const ProductLaw& p, const GridSpec& grid);
DensityGrid product_density_field_serial(const ProductLaw& p, const GridSpec& grid);

}  // namespace qfree
