#include "qfree/product.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "qfree/errors.hpp"
#include "qfree/newton.hpp"

namespace qfree {

namespace {

constexpr double kAccept = 1e-10;
// Interior acceptance floor: at the support edge the nontrivial root merges
// quadratically with the trivial one, so converged v below this level is the
// boundary's numerical smearing (edge displacement ~ v^2) and is snapped to
// the trivial branch.
constexpr double kInteriorV = 1e-3;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Deterministic interior multi-starts: log grid of (v_a, v_b) in [1e-3, 2]^2.
constexpr std::array<std::pair<double, double>, 8> kSeedGrid = {{{0.001, 0.001},
                                                                 {0.035, 0.035},
                                                                 {0.25, 0.25},
                                                                 {2.0, 2.0},
                                                                 {0.035, 0.25},
                                                                 {0.25, 0.035},
                                                                 {0.001, 0.25},
                                                                 {0.25, 0.001}}};

void push(Eigen::VectorXd& v, int& k, const Quaternion& q) {
  v[k++] = q.first.real();
  v[k++] = q.first.imag();
  v[k++] = q.second.real();
  v[k++] = q.second.imag();
}

// The boundary-matching equations are necessary, not sufficient: some root
// sheets are not density edges (the interior branch continues across them).
// A root is physical when the interior indicator flips across it along the
// ray.
std::vector<double> filter_physical_roots(const std::vector<double>& roots, double phi,
                                          const std::function<bool(Complex)>& interior_at) {
  std::vector<double> keep;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double r = roots[i];
    if (r < 1e-9) {
      keep.push_back(r);  // origin touch points anchor the curve
      continue;
    }
    double delta = 0.04 * (1.0 + r);
    if (i > 0) delta = std::min(delta, 0.35 * (r - roots[i - 1]));
    if (i + 1 < roots.size()) delta = std::min(delta, 0.35 * (roots[i + 1] - r));
    delta = std::max(delta, 1e-4);
    const bool in_lo = interior_at(std::polar(std::max(r - delta, 1e-6), phi));
    const bool in_hi = interior_at(std::polar(r + delta, phi));
    if (in_lo != in_hi) keep.push_back(r);
  }
  return keep;
}

// ---------------------------------------------------------------- generic --

struct GenericExterior {
  Complex w_a, w_b, g;
  double residual = 0.0;
  int iterations = 0;
  bool ok = false;
};

// v = 0 branch: w_a = g R_A(w_b), w_b = R_B(w_a) g, g (z - R_A R_B) = 1,
// with R the (linear) first-part maps.  Continuation from large |z|.
GenericExterior solve_generic_exterior(const ProductLaw& p, Complex z) {
  GenericExterior out;
  auto system = [&](Complex zk) {
    return [&, zk](const Eigen::VectorXd& u) -> Eigen::VectorXd {
      const Complex wa(u[0], u[1]), wb(u[2], u[3]), g(u[4], u[5]);
      const Complex ra = p.factor_a.r_first(wb);
      const Complex rb = p.factor_b.r_first(wa);
      const Complex f1 = wa - g * ra;
      const Complex f2 = wb - rb * g;
      const Complex f3 = g * (zk - ra * rb) - 1.0;
      Eigen::VectorXd v(6);
      v << f1.real(), f1.imag(), f2.real(), f2.imag(), f3.real(), f3.imag();
      return v;
    };
  };
  const double far = 8.0 * std::max(1.0, std::abs(z));
  const Complex dir = z / std::abs(z);
  Eigen::VectorXd u(6);
  {
    const Complex zf = far * dir;
    const Complex g0 = 1.0 / zf;
    const Complex wa0 = g0 * p.factor_a.r_first(0.0);
    const Complex wb0 = p.factor_b.r_first(0.0) * g0;
    u << wa0.real(), wa0.imag(), wb0.real(), wb0.imag(), g0.real(), g0.imag();
  }
  const int steps = 16;
  LeastSquaresOptions opts;
  opts.residual_tol = 1e-13;
  opts.max_iterations = 80;
  for (int k = steps; k >= 0; --k) {
    const double radius = std::abs(z) * std::pow(far / std::abs(z), double(k) / steps);
    const LeastSquaresResult res = solve_least_squares(system(radius * dir), u, opts);
    out.iterations += res.iterations;
    out.residual = res.residual;
    if (res.residual > kAccept) return out;
    u = res.x;
  }
  out.w_a = Complex(u[0], u[1]);
  out.w_b = Complex(u[2], u[3]);
  out.g = Complex(u[4], u[5]);
  out.ok = true;
  return out;
}

struct QuatPair {
  Quaternion l, r;  // [R_A(G_B)]^L and [R_B(G_A)]^R
};

QuatPair rotated_transforms(const ProductLaw& p, double phi, const Quaternion& ga,
                            const Quaternion& gb) {
  return {rotate(p.factor_a.r_transform(gb), phi, RotationSide::Left),
          rotate(p.factor_b.r_transform(ga), phi, RotationSide::Right)};
}

Eigen::VectorXd generic_interior_residual(const ProductLaw& p, Complex z, double phi,
                                          const Eigen::VectorXd& u) {
  const Quaternion ga{Complex(u[0], u[1]), Complex(u[2], 0.0)};
  const Quaternion gb{Complex(u[3], u[4]), Complex(u[5], 0.0)};
  const QuatPair t = rotated_transforms(p, phi, ga, gb);
  const Quaternion prod = t.l * t.r;
  const Quaternion denom = Quaternion(z) - prod;
  Eigen::VectorXd v(8);
  if (norm2(denom) < 1e-280) {
    v.setConstant(1e6);
    return v;
  }
  const Quaternion gab = inverse(denom);
  const Quaternion f2 = rotate(ga, phi, RotationSide::Right) - gab * t.l;
  const Quaternion f3 = rotate(gb, phi, RotationSide::Left) - t.r * gab;
  int k = 0;
  push(v, k, f2);
  push(v, k, f3);
  return v;
}

}  // namespace

ProductPointSolution multiplication_law_solve(const ProductLaw& p, Complex z,
                                              const std::optional<ProductPointSolution>& seed) {
  if (std::abs(z) < 1e-12)
    throw std::invalid_argument("multiplication_law_solve: z = 0 (rotations need Arg z)");
  const double phi = std::arg(z);

  auto f = [&](const Eigen::VectorXd& u) { return generic_interior_residual(p, z, phi, u); };
  LeastSquaresOptions opts;
  opts.residual_tol = 1e-13;
  opts.max_iterations = 120;

  int iterations = 0;
  double best = std::numeric_limits<double>::infinity();
  auto try_interior = [&](const Eigen::VectorXd& u0) -> std::optional<ProductPointSolution> {
    const LeastSquaresResult res = solve_least_squares(f, u0, opts);
    iterations += res.iterations;
    best = std::min(best, res.residual);
    if (res.residual > kAccept) return std::nullopt;
    double va = res.x[2], vb = res.x[5];
    if (va < 0.0 && vb < 0.0) {  // simultaneous sign flip is a gauge copy
      va = -va;
      vb = -vb;
    }
    if (!(va > kInteriorV && vb > kInteriorV)) return std::nullopt;
    ProductPointSolution sol;
    sol.z = z;
    sol.w_a = Complex(res.x[0], res.x[1]);
    sol.v_a = va;
    sol.w_b = Complex(res.x[3], res.x[4]);
    sol.v_b = vb;
    const QuatPair t = rotated_transforms(p, phi, {sol.w_a, sol.v_a}, {sol.w_b, sol.v_b});
    const Quaternion gab = inverse(Quaternion(z) - t.l * t.r);
    sol.g_ab = gab.first;
    sol.gamma_ab = gab.second;
    sol.regime = Regime::Interior;
    sol.residual = res.residual;
    sol.iterations = iterations;
    return sol;
  };

  // Warm interior seed first: on grid scans this resolves in a few steps and
  // skips the exterior continuation entirely.
  if (seed && seed->regime == Regime::Interior) {
    Eigen::VectorXd u(6);
    u << seed->w_a.real(), seed->w_a.imag(), seed->v_a, seed->w_b.real(), seed->w_b.imag(),
        seed->v_b;
    if (auto sol = try_interior(u)) return *sol;
  }

  const GenericExterior ext = solve_generic_exterior(p, z);
  iterations += ext.iterations;
  const Complex wa0 = ext.ok ? ext.w_a : Complex(0, 0);
  const Complex wb0 = ext.ok ? ext.w_b : Complex(0, 0);
  for (const auto& [va, vb] : kSeedGrid) {
    Eigen::VectorXd u(6);
    u << wa0.real(), wa0.imag(), va, wb0.real(), wb0.imag(), vb;
    if (auto sol = try_interior(u)) return *sol;
  }

  if (ext.ok) {
    ProductPointSolution sol;
    sol.z = z;
    sol.w_a = ext.w_a;
    sol.w_b = ext.w_b;
    sol.g_ab = ext.g;
    sol.gamma_ab = Complex(0, 0);
    sol.regime = Regime::Exterior;
    sol.residual = ext.residual;
    sol.iterations = iterations;
    return sol;
  }
  throw NoConvergenceError("multiplication_law_solve: no branch converged",
                           std::min(best, ext.residual));
}

// ------------------------------------------------------- (s + X)(t + X) ----

namespace {

Eigen::Vector2d shifted_ginibre_system(double s, double t, double r, double cos_phi,
                                       double va, double vb) {
  const double f1 = va * (-1.0 + va * va + s * s) * (vb * vb + t * t) +
                    (-1.0 + 2.0 * va * va) * vb * r + va * r * r -
                    2.0 * s * t * va * r * cos_phi;
  const double f2 = vb * (-1.0 + vb * vb + t * t) * (va * va + s * s) +
                    (-1.0 + 2.0 * vb * vb) * va * r + vb * r * r -
                    2.0 * s * t * vb * r * cos_phi;
  return {f1, f2};
}

}  // namespace

std::pair<double, double> shifted_ginibre_interior(double s, double t, Complex z,
                                                   std::optional<std::pair<double, double>> seed) {
  if (!(s > 0.0) || !(t > 0.0))
    throw std::invalid_argument(
        "shifted_ginibre_interior: requires s t > 0 (degenerate products go through "
        "multiplication_law_solve)");
  const double r = std::abs(z);
  const double cos_phi = (r > 0.0) ? z.real() / r : 0.0;

  auto f = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    const Eigen::Vector2d g = shifted_ginibre_system(s, t, r, cos_phi, u[0], u[1]);
    return g;
  };
  LeastSquaresOptions opts;
  opts.residual_tol = 1e-13;
  opts.max_iterations = 120;

  std::vector<std::pair<double, double>> starts;
  if (seed && seed->first > kInteriorV && seed->second > kInteriorV) starts.push_back(*seed);
  starts.insert(starts.end(), kSeedGrid.begin(), kSeedGrid.end());

  for (const auto& [va0, vb0] : starts) {
    Eigen::VectorXd u0(2);
    u0 << va0, vb0;
    const LeastSquaresResult res = solve_least_squares(f, u0, opts);
    if (res.residual > kAccept) continue;
    double va = res.x[0], vb = res.x[1];
    if (va < 0.0 && vb < 0.0) {
      va = -va;
      vb = -vb;
    }
    if (va > kInteriorV && vb > kInteriorV) return {va, vb};
  }
  return {0.0, 0.0};
}

Complex shifted_ginibre_greens(double s, double t, Complex z, double v_a, double v_b) {
  // First part of (hat z - R_AB)^{-1} expanded in the real-v gauge.  The
  // v_a v_b term in the numerator carries the e^{-i phi} phase of conj(z)/r;
  // without it the value disagrees with the quaternionic construction (and
  // with sampled spectra) everywhere off the real axis.
  const double r = std::abs(z);
  const double cos_phi = (r > 0.0) ? z.real() / r : 1.0;
  const Complex e_minus = (r > 0.0) ? std::conj(z) / r : Complex(1, 0);
  const Complex num = (r + v_a * v_b) * e_minus - s * t;
  const double den = s * s * t * t + r * r + t * t * v_a * v_a + s * s * v_b * v_b +
                     2.0 * r * v_a * v_b + v_a * v_a * v_b * v_b - 2.0 * s * t * r * cos_phi;
  if (std::abs(den) < 1e-14 * (1.0 + r * r))
    throw SingularInputError("shifted_ginibre_greens: vanishing denominator");
  return num / den;
}

std::array<double, 5> shifted_ginibre_contour_coeffs(double s, double t, double phi) {
  const double c = std::cos(phi);
  const double s2 = s * s, t2 = t * t;
  return {s2 * t2 * (1.0 - s2) * (1.0 - t2),
          2.0 * s * t * c * (s2 + t2 - 2.0 * s2 * t2),
          -1.0 - s2 - t2 + 2.0 * s2 * t2 + 4.0 * s2 * t2 * c * c,
          -4.0 * s * t * c,
          1.0};
}

std::vector<double> shifted_ginibre_contour(double s, double t, double phi) {
  if (s < 0.0 || t < 0.0)
    throw std::invalid_argument("shifted_ginibre_contour: s, t must be nonnegative");
  const std::array<double, 5> c = shifted_ginibre_contour_coeffs(s, t, phi);

  Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
  companion(1, 0) = companion(2, 1) = companion(3, 2) = 1.0;
  for (int i = 0; i < 4; ++i) companion(i, 3) = -c[std::size_t(i)];
  Eigen::EigenSolver<Eigen::Matrix4d> es(companion, /*computeEigenvectors=*/false);

  auto quartic = [&](double r) {
    return (((r + c[3]) * r + c[2]) * r + c[1]) * r + c[0];
  };
  auto dquartic = [&](double r) { return ((4.0 * r + 3.0 * c[3]) * r + 2.0 * c[2]) * r + c[1]; };

  std::vector<double> roots;
  for (int i = 0; i < 4; ++i) {
    const Complex lambda = es.eigenvalues()[i];
    if (std::abs(lambda.imag()) > 1e-8 * (1.0 + std::abs(lambda.real()))) continue;
    double r = lambda.real();
    for (int it = 0; it < 3; ++it) {
      const double d = dquartic(r);
      if (std::abs(d) < 1e-300) break;
      r -= quartic(r) / d;
    }
    if (r > 1e-6) roots.push_back(r);  // drop the spurious split double root at 0
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

// --------------------------------------------------- (1 + E)(1 + E) --------

namespace {

// Reduced pair for the symmetric ansatz; the second equation is the
// v-divided interior form.
void shifted_elliptic_equations(double mu, Complex e_phase, double r, Complex w, double v,
                                Complex& c1, Complex& c2) {
  const Complex wc = std::conj(w);
  const double v2 = v * v;
  c1 = e_phase * (w * r + (1.0 + w + wc * mu) * v2) -
       (1.0 + w * mu) * (1.0 + w + w * w * mu - v2);
  c2 = e_phase * (-1.0 + r + v2 - wc * (1.0 + wc * mu)) -
       (1.0 + w * mu) * (1.0 + w * mu + wc);
}

struct EllipticExteriorW {
  Complex w;
  bool ok = false;
};

// v = 0 subordination from the first reduced equation, continued from 1/z.
EllipticExteriorW shifted_elliptic_exterior_w(double mu, Complex z) {
  EllipticExteriorW out;
  const double r_target = std::abs(z);
  if (r_target < 1e-12) return out;
  const Complex dir = z / r_target;
  const double far = 8.0 * std::max(1.0, r_target);
  Complex w = 1.0 / (far * dir);
  const int steps = 12;
  for (int k = steps; k >= 0; --k) {
    const double radius = r_target * std::pow(far / r_target, double(k) / steps);
    auto f = [&](Complex ww) {
      return dir * (ww * radius) - (1.0 + ww * mu) * (1.0 + ww + ww * ww * mu);
    };
    const ComplexNewtonResult res = newton_complex(f, w, 1e-13, 60);
    if (!res.converged) return out;
    w = res.z;
  }
  out.w = w;
  out.ok = true;
  return out;
}

}  // namespace

ShiftedEllipticPoint shifted_elliptic_interior(double mu, Complex z,
                                               std::optional<ShiftedEllipticPoint> seed) {
  if (!(std::abs(mu) < 1.0))
    throw std::invalid_argument("shifted_elliptic_interior: |mu| < 1 required");
  const double r = std::abs(z);
  const Complex e_phase = (r > 0.0) ? z / r : Complex(1, 0);

  auto f = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    Complex c1, c2;
    shifted_elliptic_equations(mu, e_phase, r, Complex(u[0], u[1]), u[2], c1, c2);
    Eigen::VectorXd v(4);
    v << c1.real(), c1.imag(), c2.real(), c2.imag();
    return v;
  };
  LeastSquaresOptions opts;
  opts.residual_tol = 1e-13;
  opts.max_iterations = 80;

  int iterations = 0;
  auto try_interior = [&](Complex ws, double vs) -> std::optional<ShiftedEllipticPoint> {
    Eigen::VectorXd u0(3);
    u0 << ws.real(), ws.imag(), vs;
    const LeastSquaresResult res = solve_least_squares(f, u0, opts);
    iterations += res.iterations;
    if (res.residual > kAccept) return std::nullopt;
    const double v = std::abs(res.x[2]);  // only v^2 enters; gauge v >= 0
    if (v <= kInteriorV) return std::nullopt;
    return ShiftedEllipticPoint{Complex(res.x[0], res.x[1]), v, res.residual, iterations};
  };

  if (seed && seed->v > kInteriorV)
    if (auto pt = try_interior(seed->w, seed->v)) return *pt;

  const EllipticExteriorW ext = shifted_elliptic_exterior_w(mu, z);
  const Complex w0 = ext.ok ? ext.w : Complex(0, 0);
  for (double v0 : {0.05, 0.3, 0.8, 1.5}) {
    if (auto pt = try_interior(w0, v0)) return *pt;
    if (auto pt = try_interior(Complex(0, 0), v0)) return *pt;
  }
  if (ext.ok) return {ext.w, 0.0, 0.0, iterations};
  throw NoConvergenceError("shifted_elliptic_interior: no branch converged", 1.0);
}

Complex shifted_elliptic_greens(double mu, Complex z, const ShiftedEllipticPoint& pt) {
  const double r = std::abs(z);
  const Complex e_phase = (r > 0.0) ? z / r : Complex(1, 0);
  const Complex w = pt.w, wc = std::conj(pt.w);
  const double v2 = pt.v * pt.v;
  const Complex one_wc = 1.0 + wc * mu;
  const Complex one_w = 1.0 + w * mu;
  const Complex num = e_phase * one_wc * one_wc - r - v2;
  const Complex den = (r - e_phase * one_wc * one_wc) * (one_w * one_w - r * e_phase) -
                      v2 * e_phase *
                          (2.0 * (1.0 + r + mu * (w + wc + mu * std::norm(w))) + v2);
  if (std::abs(den) < 1e-14 * (1.0 + r * r))
    throw SingularInputError("shifted_elliptic_greens: vanishing denominator");
  return num / den;
}

namespace {

// Boundary system (the v -> 0 limit) for (1 + E)(1 + E): unknowns (w, r) at
// fixed phase.
Eigen::VectorXd elliptic_boundary_residual(double mu, Complex e_phase, const Eigen::VectorXd& u) {
  const Complex w(u[0], u[1]);
  const double r = u[2];
  const Complex wc = std::conj(w);
  const Complex b1 = r * e_phase * w - (1.0 + w * mu) * (1.0 + w + w * w * mu);
  const Complex b2 =
      e_phase * (-1.0 + r - wc * (1.0 + wc * mu)) - (1.0 + w * mu) * (1.0 + w * mu + wc);
  Eigen::VectorXd v(4);
  v << b1.real(), b1.imag(), b2.real(), b2.imag();
  return v;
}

struct RayRoot {
  double r = 0.0;
  double residual = 0.0;
};

// Interior/exterior transitions along the ray at angle phi, bisected and
// polished against the boundary system.
std::vector<RayRoot> shifted_elliptic_ray_roots(double mu, double phi, double r_max) {
  const Complex dir = std::polar(1.0, phi);
  const int n_scan = 360;
  std::optional<ShiftedEllipticPoint> warm;
  auto interior_at = [&](double r, std::optional<ShiftedEllipticPoint>& w) {
    const ShiftedEllipticPoint pt = shifted_elliptic_interior(mu, r * dir, w);
    if (pt.v > kInteriorV) w = pt;
    return pt;
  };

  std::vector<RayRoot> roots;
  double prev_r = r_max;
  ShiftedEllipticPoint prev_pt = interior_at(prev_r, warm);
  for (int k = 1; k <= n_scan; ++k) {
    const double r = r_max * (1.0 - double(k) / n_scan) + 1e-6;
    const ShiftedEllipticPoint pt = interior_at(r, warm);
    if ((pt.v > kInteriorV) != (prev_pt.v > kInteriorV)) {
      // Bisect the transition.
      double lo = std::min(r, prev_r), hi = std::max(r, prev_r);
      bool lo_interior = (lo == r) ? (pt.v > kInteriorV) : (prev_pt.v > kInteriorV);
      ShiftedEllipticPoint edge_pt = (pt.v > kInteriorV) ? pt : prev_pt;
      std::optional<ShiftedEllipticPoint> wseed = edge_pt;
      for (int b = 0; b < 48; ++b) {
        const double mid = 0.5 * (lo + hi);
        const ShiftedEllipticPoint mp = shifted_elliptic_interior(mu, mid * dir, wseed);
        if (mp.v > kInteriorV) {
          wseed = mp;
          edge_pt = mp;
          if (lo_interior)
            lo = mid;
          else
            hi = mid;
        } else {
          if (lo_interior)
            hi = mid;
          else
            lo = mid;
        }
      }
      const double r_edge = 0.5 * (lo + hi);
      // Polish (w, r) on the boundary system from the interior-side seed.
      Eigen::VectorXd u0(3);
      u0 << edge_pt.w.real(), edge_pt.w.imag(), r_edge;
      LeastSquaresOptions opts;
      opts.residual_tol = 1e-13;
      opts.max_iterations = 80;
      auto f = [&](const Eigen::VectorXd& u) { return elliptic_boundary_residual(mu, dir, u); };
      const LeastSquaresResult res = solve_least_squares(f, u0, opts);
      if (res.residual <= 1e-9 && std::abs(res.x[2] - r_edge) < 0.05 * (1.0 + r_edge) &&
          res.x[2] > 0.0) {
        roots.push_back({res.x[2], res.residual});
      } else {
        roots.push_back({r_edge, res.residual});
      }
    }
    prev_r = r;
    prev_pt = pt;
  }
  std::sort(roots.begin(), roots.end(), [](const RayRoot& a, const RayRoot& b) { return a.r < b.r; });
  return roots;
}

double shifted_elliptic_r_max(double /*mu*/) { return 9.5; }

}  // namespace

std::vector<double> shifted_elliptic_contour(double mu, double phi) {
  if (!(std::abs(mu) < 1.0))
    throw std::invalid_argument("shifted_elliptic_contour: |mu| < 1 required");
  if (mu == 0.0) return shifted_ginibre_contour(1.0, 1.0, phi);
  std::vector<double> rs;
  for (const RayRoot& root : shifted_elliptic_ray_roots(mu, phi, shifted_elliptic_r_max(mu)))
    rs.push_back(root.r);
  return rs;
}

// ----------------------------------------------------- (1 + H)(1 + X) ------

std::vector<GueGinibreRoot> gue_ginibre_roots(double phi) {
  const double c = std::cos(2.0 * phi);
  const double s2 = std::sin(2.0 * phi);
  std::vector<Complex> candidates;

  // Closing equation -1 + |w|^2 + w e^{2i phi}(1 + w + conj w) = 0 split into
  // real and imaginary parts with w = u + iv:
  //   imag: (1 + 2u)(u s2 + v c) = 0
  //   real: -1 + u^2 + v^2 + (1 + 2u)(u c - v s2) = 0
  // Branch u = -1/2 gives w = e^{+-2 pi i/3} (radius 0); the other branch
  // eliminates v and leaves u^2 (1 + 2c) + u c - c^2 = 0.
  candidates.emplace_back(-0.5, std::sqrt(3.0) / 2.0);
  candidates.emplace_back(-0.5, -std::sqrt(3.0) / 2.0);
  if (std::abs(c) < 1e-12) {
    // u = 0: v^2 - v s2 - 1 = 0.
    const double disc = s2 * s2 + 4.0;
    candidates.emplace_back(0.0, 0.5 * (s2 + std::sqrt(disc)));
    candidates.emplace_back(0.0, 0.5 * (s2 - std::sqrt(disc)));
  } else {
    const double a = 1.0 + 2.0 * c;
    if (std::abs(a) < 1e-12) {
      const double u = c;  // linear fallback of the quadratic
      candidates.emplace_back(u, -u * s2 / c);
    } else {
      const double disc = c * c * (5.0 + 8.0 * c);
      if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        for (const double u : {(-c + root) / (2.0 * a), (-c - root) / (2.0 * a)})
          candidates.emplace_back(u, -u * s2 / c);
      }
    }
  }

  const Complex e_phase = std::polar(1.0, phi);
  const Complex e2 = std::polar(1.0, 2.0 * phi);
  std::vector<GueGinibreRoot> roots;
  for (const Complex& cand : candidates) {
    const Complex w = cand;
    const Complex r_complex = (1.0 + w + w * w) * std::conj(e_phase) / w;
    if (std::abs(r_complex.imag()) > 1e-7 * (1.0 + std::abs(r_complex.real()))) continue;
    if (r_complex.real() < -1e-9) continue;

    // Polish (u, v, r) on { closing equation, r w e^{i phi} = 1 + w + w^2 }.
    Eigen::VectorXd u0(3);
    u0 << w.real(), w.imag(), std::max(r_complex.real(), 0.0);
    auto f = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
      const Complex ww(u[0], u[1]);
      const double r = u[2];
      const Complex closing = -1.0 + std::norm(ww) + ww * e2 * (1.0 + ww + std::conj(ww));
      const Complex radial = r * ww * e_phase - (1.0 + ww + ww * ww);
      Eigen::VectorXd v(4);
      v << closing.real(), closing.imag(), radial.real(), radial.imag();
      return v;
    };
    LeastSquaresOptions opts;
    opts.residual_tol = 1e-14;
    opts.max_iterations = 60;
    const LeastSquaresResult res = solve_least_squares(f, u0, opts);
    if (res.residual > 1e-9) continue;
    GueGinibreRoot root;
    root.w_b = Complex(res.x[0], res.x[1]);
    root.w_a = root.w_b * (1.0 + root.w_b);
    root.r = std::max(res.x[2], 0.0);
    root.residual = res.residual;
    // Drop duplicates (the u = -1/2 branch coincides with the quadratic one
    // at the critical angles).
    bool dup = false;
    for (const auto& other : roots)
      if (std::abs(other.r - root.r) < 1e-9 && std::abs(other.w_b - root.w_b) < 1e-7) dup = true;
    if (!dup) roots.push_back(root);
  }
  std::sort(roots.begin(), roots.end(),
            [](const GueGinibreRoot& a, const GueGinibreRoot& b) { return a.r < b.r; });
  return roots;
}

std::vector<double> gue_ginibre_contour(double phi) {
  std::vector<double> rs;
  for (const auto& root : gue_ginibre_roots(phi))
    if (root.r > 1e-9) rs.push_back(root.r);
  return rs;
}

ContourCurve gue_ginibre_contour_curve(int phi_samples) {
  if (phi_samples < 16) throw std::invalid_argument("gue_ginibre_contour_curve: too few samples");
  const ProductLaw law{EllipticLaw{Complex(1, 0), 1.0, 1.0, 0.0},
                       EllipticLaw{Complex(1, 0), 1.0, 0.0, 0.0}};
  auto interior_at = [&](Complex z) {
    return multiplication_law_solve(law, z).regime == Regime::Interior;
  };
  ContourCurve curve;
  ContourBranch right, left;
  std::vector<ContourSample> right_pts, left_pts;
  const std::size_t n_phi_bins = std::size_t(phi_samples);
  std::vector<std::vector<ContourSample>> per_phi(n_phi_bins);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < phi_samples; ++k) {
    const double phi = kTwoPi * k / phi_samples;
    std::vector<double> radii;
    std::vector<double> residuals;
    for (const auto& root : gue_ginibre_roots(phi)) {
      radii.push_back(root.r);
      residuals.push_back(root.residual);
    }
    const std::vector<double> physical = filter_physical_roots(radii, phi, interior_at);
    for (const double r : physical) {
      double res = 0.0;
      for (std::size_t i = 0; i < radii.size(); ++i)
        if (radii[i] == r) res = residuals[i];
      per_phi[std::size_t(k)].push_back({phi, r, std::polar(r, phi), res});
    }
  }
  for (int k = 0; k < phi_samples; ++k) {
    for (const ContourSample& sample : per_phi[std::size_t(k)]) {
      if (sample.r <= 1e-9) {
        right_pts.push_back(sample);
        left_pts.push_back(sample);
      } else if (sample.z.real() > 0.0) {
        right_pts.push_back(sample);
      } else {
        left_pts.push_back(sample);
      }
    }
  }
  // Order each lobe around its centroid (both lobes are star-shaped about it).
  auto order_lobe = [](std::vector<ContourSample>& pts) {
    if (pts.empty()) return;
    Complex centroid(0, 0);
    for (const auto& s : pts) centroid += s.z;
    centroid /= double(pts.size());
    std::sort(pts.begin(), pts.end(), [&](const ContourSample& a, const ContourSample& b) {
      return std::arg(a.z - centroid) < std::arg(b.z - centroid);
    });
  };
  order_lobe(right_pts);
  order_lobe(left_pts);
  right.samples = std::move(right_pts);
  left.samples = std::move(left_pts);
  if (!right.samples.empty()) right.last_good_phi = kTwoPi;
  if (!left.samples.empty()) left.last_good_phi = kTwoPi;
  curve.branches.push_back(std::move(right));
  curve.branches.push_back(std::move(left));
  return curve;
}

// ------------------------------------------------------------- dispatch ----

namespace {

bool law_matches(const EllipticLaw& law, Complex center, double sigma, double mu) {
  const Complex twist_have = law.sigma * law.sigma * law.mu * std::polar(1.0, 2.0 * law.phi);
  const Complex twist_want = sigma * sigma * mu;
  return std::abs(law.center - center) < 1e-12 &&
         std::abs(law.sigma * law.sigma - sigma * sigma) < 1e-12 &&
         std::abs(twist_have - twist_want) < 1e-12;
}

std::optional<double> shifted_ginibre_shift(const EllipticLaw& law) {
  if (std::abs(law.mu * law.sigma * law.sigma) > 1e-12) return std::nullopt;
  if (std::abs(law.sigma - 1.0) > 1e-12) return std::nullopt;
  if (std::abs(law.center.imag()) > 1e-12 || law.center.real() < 0.0) return std::nullopt;
  return law.center.real();
}

struct ProductRoute {
  enum class Kind { ShiftedGinibre, ShiftedElliptic, GueGinibre, Generic } kind;
  double s = 0.0, t = 0.0;  // ShiftedGinibre
  double mu = 0.0;          // ShiftedElliptic
};

ProductRoute classify(const ProductLaw& p) {
  using Kind = ProductRoute::Kind;
  const auto sa = shifted_ginibre_shift(p.factor_a);
  const auto sb = shifted_ginibre_shift(p.factor_b);
  if (sa && sb && *sa * *sb > 0.0) return {Kind::ShiftedGinibre, *sa, *sb, 0.0};

  const bool a_unit_shift_elliptic = law_matches(p.factor_a, Complex(1, 0), 1.0, p.factor_a.mu);
  const bool b_unit_shift_elliptic = law_matches(p.factor_b, Complex(1, 0), 1.0, p.factor_b.mu);
  if (a_unit_shift_elliptic && b_unit_shift_elliptic) {
    const Complex ta = p.factor_a.mu * std::polar(1.0, 2.0 * p.factor_a.phi);
    const Complex tb = p.factor_b.mu * std::polar(1.0, 2.0 * p.factor_b.phi);
    const bool gue_a = std::abs(ta - 1.0) < 1e-12, gue_b = std::abs(tb - 1.0) < 1e-12;
    const bool gin_a = std::abs(ta) < 1e-12, gin_b = std::abs(tb) < 1e-12;
    if ((gue_a && gin_b) || (gin_a && gue_b)) return {Kind::GueGinibre, 0, 0, 0};
    if (std::abs(ta - tb) < 1e-12 && std::abs(ta.imag()) < 1e-12 && std::abs(p.factor_a.mu) < 1.0) {
      ProductRoute route{Kind::ShiftedElliptic, 0, 0, 0};
      route.mu = ta.real();
      return route;
    }
  }
  return {Kind::Generic, 0, 0, 0};
}

std::vector<ContourBranch> chain_points(std::vector<ContourSample> pts) {
  std::vector<ContourBranch> branches;
  if (pts.empty()) return branches;
  // Greedy nearest-neighbor walk from the outermost point; split at jumps.
  std::vector<bool> used(pts.size(), false);
  std::size_t current = 0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].r > pts[current].r) current = i;
  std::vector<ContourSample> chain;
  chain.push_back(pts[current]);
  used[current] = true;
  for (std::size_t step = 1; step < pts.size(); ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t next = pts.size();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(pts[i].z - chain.back().z);
      if (d < best) {
        best = d;
        next = i;
      }
    }
    if (next == pts.size()) break;
    used[next] = true;
    chain.push_back(pts[next]);
  }
  // Median consecutive spacing.
  std::vector<double> steps;
  for (std::size_t i = 1; i < chain.size(); ++i)
    steps.push_back(std::abs(chain[i].z - chain[i - 1].z));
  double median = 0.0;
  if (!steps.empty()) {
    std::vector<double> sorted = steps;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    median = sorted[sorted.size() / 2];
  }
  const double split_at = std::max(6.0 * median, 1e-6);
  ContourBranch branch;
  branch.samples.push_back(chain[0]);
  for (std::size_t i = 1; i < chain.size(); ++i) {
    if (std::abs(chain[i].z - chain[i - 1].z) > split_at) {
      branches.push_back(std::move(branch));
      branch = ContourBranch{};
    }
    branch.samples.push_back(chain[i]);
  }
  branches.push_back(std::move(branch));
  for (auto& b : branches) b.last_good_phi = b.samples.empty() ? 0.0 : b.samples.back().phi;
  return branches;
}

}  // namespace

ContourCurve shifted_ginibre_contour_curve(double s, double t, int phi_samples) {
  if (phi_samples < 16)
    throw std::invalid_argument("shifted_ginibre_contour_curve: too few samples");
  const bool degenerate = !(s > 0.0 && t > 0.0);
  ProductLaw degenerate_law{EllipticLaw{Complex(s, 0), 1.0, 0.0, 0.0},
                            EllipticLaw{Complex(t, 0), 1.0, 0.0, 0.0}};
  auto interior_at = [&](Complex z) {
    if (degenerate)
      return multiplication_law_solve(degenerate_law, z).regime == Regime::Interior;
    const auto [va, vb] = shifted_ginibre_interior(s, t, z);
    return va > kInteriorV && vb > kInteriorV;
  };
  const std::size_t n_phi_bins = std::size_t(phi_samples);
  std::vector<std::vector<ContourSample>> per_phi(n_phi_bins);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < phi_samples; ++k) {
    const double phi = kTwoPi * k / phi_samples;
    const std::array<double, 5> c = shifted_ginibre_contour_coeffs(s, t, phi);
    double scale = 0.0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    const std::vector<double> physical =
        filter_physical_roots(shifted_ginibre_contour(s, t, phi), phi, interior_at);
    for (const double r : physical) {
      const double res =
          std::abs((((r + c[3]) * r + c[2]) * r + c[1]) * r + c[0]) / std::max(scale, 1.0);
      per_phi[std::size_t(k)].push_back({phi, r, std::polar(r, phi), res});
    }
  }
  std::vector<ContourSample> pts;
  for (const auto& v : per_phi) pts.insert(pts.end(), v.begin(), v.end());
  ContourCurve curve;
  curve.branches = chain_points(std::move(pts));
  return curve;
}

ContourCurve shifted_elliptic_contour_curve(double mu, int phi_samples) {
  if (mu == 0.0) return shifted_ginibre_contour_curve(1.0, 1.0, phi_samples);
  if (phi_samples < 16)
    throw std::invalid_argument("shifted_elliptic_contour_curve: too few samples");
  const std::size_t n_phi = std::size_t(phi_samples);
  std::vector<std::vector<RayRoot>> per_phi(n_phi);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < phi_samples; ++k)
    per_phi[std::size_t(k)] =
        shifted_elliptic_ray_roots(mu, kTwoPi * k / phi_samples, shifted_elliptic_r_max(mu));
  std::vector<ContourSample> pts;
  for (int k = 0; k < phi_samples; ++k) {
    const double phi = kTwoPi * k / phi_samples;
    for (const RayRoot& root : per_phi[std::size_t(k)])
      pts.push_back({phi, root.r, std::polar(root.r, phi), root.residual});
  }
  ContourCurve curve;
  curve.branches = chain_points(std::move(pts));
  return curve;
}

ContourCurve product_contour(const ProductLaw& p, int phi_samples) {
  const ProductRoute route = classify(p);
  switch (route.kind) {
    case ProductRoute::Kind::ShiftedGinibre:
      return shifted_ginibre_contour_curve(route.s, route.t, phi_samples);
    case ProductRoute::Kind::ShiftedElliptic:
      return shifted_elliptic_contour_curve(route.mu, phi_samples);
    case ProductRoute::Kind::GueGinibre:
      return gue_ginibre_contour_curve(phi_samples);
    case ProductRoute::Kind::Generic:
      break;
  }
  // Degenerate shifted-Ginibre products (s t = 0) still have the quartic.
  const auto sa = shifted_ginibre_shift(p.factor_a);
  const auto sb = shifted_ginibre_shift(p.factor_b);
  if (sa && sb) return shifted_ginibre_contour_curve(*sa, *sb, phi_samples);
  throw std::invalid_argument("product_contour: no boundary equations for this product");
}

// -------------------------------------------------------- density field ----

namespace {

struct CellValue {
  Complex g;
  bool interior = false;
};

template <typename PointSolver>
DensityGrid product_field_impl(const GridSpec& grid, const PointSolver& make_row_solver,
                               bool parallel) {
  if (grid.nx < 8 || grid.ny < 8) throw std::invalid_argument("grid resolution below 8x8");
  DensityGrid out = DensityGrid::zeros(grid);
  std::vector<double> imag_by_row(std::size_t(grid.ny), 0.0);

  auto scan_row = [&](int iy) {
    auto solver = make_row_solver();
    double row_imag = 0.0;
    for (int ix = 0; ix < grid.nx; ++ix) {
      const Complex z(out.x_center(ix), out.y_center(iy));
      const std::size_t idx = out.index(ix, iy);
      try {
        const CellValue center = solver(z, true);
        const double h = 1e-4 * (1.0 + std::abs(z));
        const Complex offs[4] = {Complex(h, 0), Complex(-h, 0), Complex(0, h), Complex(0, -h)};
        Complex g[4];
        bool interior = center.interior;
        for (int k = 0; k < 4; ++k) {
          const CellValue p = solver(z + offs[k], false);
          g[k] = p.g;
          interior = interior && p.interior;
        }
        const Complex dzbar = 0.5 * ((g[0] - g[1]) / (2.0 * h) +
                                     Complex(0, 1) * (g[2] - g[3]) / (2.0 * h));
        out.values[idx] = dzbar.real() / std::numbers::pi;
        if (interior) row_imag = std::max(row_imag, std::abs(dzbar.imag()) / std::numbers::pi);
      } catch (const NoConvergenceError&) {
        out.valid[idx] = 0;
      } catch (const SingularInputError&) {
        out.valid[idx] = 0;
      } catch (const std::invalid_argument&) {
        out.valid[idx] = 0;  // cells straddling z = 0 in the generic route
      }
    }
    imag_by_row[std::size_t(iy)] = row_imag;
  };

  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int iy = 0; iy < grid.ny; ++iy) scan_row(iy);
  } else {
    for (int iy = 0; iy < grid.ny; ++iy) scan_row(iy);
  }
  for (double v : imag_by_row) out.max_imag_residual = std::max(out.max_imag_residual, v);
  return out;
}

DensityGrid product_density_impl(const ProductLaw& p, const GridSpec& grid, bool parallel) {
  const ProductRoute route = classify(p);
  switch (route.kind) {
    case ProductRoute::Kind::ShiftedGinibre: {
      const double s = route.s, t = route.t;
      auto make = [s, t]() {
        auto warm = std::make_shared<std::optional<std::pair<double, double>>>();
        return [s, t, warm](Complex z, bool update_warm) {
          const std::pair<double, double> v = shifted_ginibre_interior(s, t, z, *warm);
          const bool interior = v.first > kInteriorV && v.second > kInteriorV;
          if (update_warm) *warm = interior ? std::optional(v) : std::nullopt;
          return CellValue{shifted_ginibre_greens(s, t, z, v.first, v.second), interior};
        };
      };
      return product_field_impl(grid, make, parallel);
    }
    case ProductRoute::Kind::ShiftedElliptic: {
      const double mu = route.mu;
      auto make = [mu]() {
        auto warm = std::make_shared<std::optional<ShiftedEllipticPoint>>();
        return [mu, warm](Complex z, bool update_warm) {
          const ShiftedEllipticPoint pt = shifted_elliptic_interior(mu, z, *warm);
          if (update_warm) *warm = (pt.v > kInteriorV) ? std::optional(pt) : std::nullopt;
          return CellValue{shifted_elliptic_greens(mu, z, pt), pt.v > kInteriorV};
        };
      };
      return product_field_impl(grid, make, parallel);
    }
    case ProductRoute::Kind::GueGinibre:
    case ProductRoute::Kind::Generic:
      break;
  }
  auto make = [p]() {
    auto warm = std::make_shared<std::optional<ProductPointSolution>>();
    return [p, warm](Complex z, bool update_warm) {
      const ProductPointSolution sol = multiplication_law_solve(p, z, *warm);
      if (update_warm)
        *warm = (sol.regime == Regime::Interior) ? std::optional(sol) : std::nullopt;
      return CellValue{sol.g_ab, sol.regime == Regime::Interior};
    };
  };
  return product_field_impl(grid, make, parallel);
}

}  // namespace

DensityGrid product_density_field(const ProductLaw& p, const GridSpec& grid) {
  return product_density_impl(p, grid, true);
}

DensityGrid product_density_field_serial(const ProductLaw& p, const GridSpec& grid) {
  return product_density_impl(p, grid, false);
}

}  // namespace qfree
