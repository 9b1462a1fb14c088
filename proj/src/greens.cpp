#include "qfree/greens.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "qfree/errors.hpp"
#include "qfree/newton.hpp"

namespace qfree {

namespace {

Quaternion fixed_point_residual(const RMap& r, const Quaternion& q, const Quaternion& g) {
  return g * (q - r(g)) - Quaternion::one();
}

Eigen::Vector4d as_vector(const Quaternion& q) {
  return {q.first.real(), q.first.imag(), q.second.real(), q.second.imag()};
}

constexpr double kInteriorGamma = 1e-7;  // regime tie threshold
constexpr double kAcceptTol = 1e-11;

struct Attempt {
  bool ok = false;
  Quaternion g;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

// w = 0, second part gauged real: three unknowns against the four real
// components of the residual quaternion (consistent on solutions).
Attempt solve_gauged(const RMap& r, Complex z, Complex g0, double gamma0) {
  auto f = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    const Quaternion g{Complex(u[0], u[1]), Complex(u[2], 0.0)};
    return as_vector(fixed_point_residual(r, Quaternion(z), g));
  };
  Eigen::VectorXd u0(3);
  u0 << g0.real(), g0.imag(), gamma0;
  LeastSquaresOptions opts;
  opts.residual_tol = 1e-13;
  opts.max_iterations = 120;
  const LeastSquaresResult res = solve_least_squares(f, u0, opts);
  Attempt a;
  a.g = Quaternion{Complex(res.x[0], res.x[1]), Complex(res.x[2], 0.0)};
  a.residual = res.residual;
  a.iterations = res.iterations;
  a.ok = res.residual <= kAcceptTol;
  return a;
}

// Holomorphic exterior branch at w = 0.
Attempt solve_exterior(const RMap& r, Complex z, std::optional<Complex> warm) {
  auto f = [&](Complex g) { return g * (z - r(Quaternion(g)).first) - 1.0; };
  Attempt a;
  if (warm) {
    const ComplexNewtonResult res = newton_complex(f, *warm, 1e-13, 60);
    if (res.converged) {
      a.ok = true;
      a.g = Quaternion(res.z);
      a.residual = res.residual;
      a.iterations = res.iterations;
      return a;
    }
  }
  if (std::abs(z) == 0.0) return a;
  const double far = 8.0 * std::max(1.0, std::abs(z));
  const int steps = 24;
  Complex g = 1.0 / (far * z / std::abs(z));
  int total_it = 0;
  for (int k = steps; k >= 0; --k) {
    const double radius = std::abs(z) * std::pow(far / std::abs(z), double(k) / steps);
    const Complex zk = radius * z / std::abs(z);
    auto fk = [&](Complex gg) { return gg * (zk - r(Quaternion(gg)).first) - 1.0; };
    const ComplexNewtonResult res = newton_complex(fk, g, 1e-13, 60);
    total_it += res.iterations;
    if (!res.converged) {
      a.residual = res.residual;
      a.iterations = total_it;
      return a;
    }
    g = res.z;
  }
  a.ok = true;
  a.g = Quaternion(g);
  a.residual = std::abs(f(g));
  a.iterations = total_it;
  return a;
}

// Full four-unknown polish used for w != 0.
Attempt solve_full(const RMap& r, const Quaternion& q, const Quaternion& g0) {
  auto f = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    const Quaternion g{Complex(u[0], u[1]), Complex(u[2], u[3])};
    return as_vector(fixed_point_residual(r, q, g));
  };
  Eigen::VectorXd u0(4);
  u0 << g0.first.real(), g0.first.imag(), g0.second.real(), g0.second.imag();
  LeastSquaresOptions opts;
  opts.residual_tol = 1e-13;
  opts.max_iterations = 120;
  const LeastSquaresResult res = solve_least_squares(f, u0, opts);
  Attempt a;
  a.g = Quaternion{Complex(res.x[0], res.x[1]), Complex(res.x[2], res.x[3])};
  a.residual = res.residual;
  a.iterations = res.iterations;
  a.ok = res.residual <= kAcceptTol;
  return a;
}

double quat_residual(const RMap& r, const Quaternion& q, const Quaternion& g) {
  return norm(fixed_point_residual(r, q, g));
}

}  // namespace

GreensResult solve_quaternionic_greens(const RMap& r, const Quaternion& q,
                                       std::optional<Quaternion> seed) {
  const Complex z = q.first;
  const Complex w = q.second;

  if (std::abs(w) < 1e-14) {
    // Interior attempt first (Gamma gauged real >= 0), per the edge tie rule.
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::pair<Complex, double>> starts;
    if (seed && std::abs(seed->second) > kInteriorGamma)
      starts.emplace_back(seed->first, std::abs(seed->second));
    for (double gamma0 : {0.5, 0.15, 1.0})
      starts.emplace_back(std::conj(z) / (std::norm(z) + gamma0 * gamma0), gamma0);

    for (const auto& [g0, gamma0] : starts) {
      Attempt a = solve_gauged(r, z, g0, gamma0);
      best = std::min(best, a.residual);
      if (a.ok && std::abs(a.g.second.real()) > kInteriorGamma) {
        if (a.g.second.real() < 0.0) {
          // Phase freedom of the second part: flip to the nonnegative gauge.
          const Quaternion flipped{a.g.first, -a.g.second};
          if (quat_residual(r, q, flipped) <= kAcceptTol) a.g = flipped;
        }
        if (a.g.second.real() > 0.0)
          return {a.g, Regime::Interior, quat_residual(r, q, a.g), a.iterations};
      }
    }

    std::optional<Complex> warm;
    if (seed && std::abs(seed->second) <= kInteriorGamma) warm = seed->first;
    const Attempt ext = solve_exterior(r, z, warm);
    if (ext.ok)
      return {ext.g, Regime::Exterior, quat_residual(r, q, ext.g), ext.iterations};
    throw NoConvergenceError("solve_quaternionic_greens: no convergent branch at w = 0",
                             std::min(best, ext.residual));
  }

  // w != 0: the resolvent is unique; damped fixed-point from q^{-1}, then
  // Newton polish.
  Quaternion g = seed.value_or(inverse(q));
  double res = quat_residual(r, q, g);
  int it = 0;
  for (; it < 400 && res > 1e-13; ++it) {
    Quaternion next;
    try {
      next = inverse(q - r(g));
    } catch (const SingularInputError&) {
      break;
    }
    const Quaternion blended = 0.5 * g + 0.5 * next;
    const double rn = quat_residual(r, q, blended);
    if (!std::isfinite(rn)) break;
    if (rn >= res * (1.0 - 1e-12)) break;  // stalled
    g = blended;
    res = rn;
  }
  if (res > kAcceptTol) {
    const Attempt polished = solve_full(r, q, g);
    if (!polished.ok)
      throw NoConvergenceError("solve_quaternionic_greens: fixed point did not converge",
                               std::min(res, polished.residual));
    g = polished.g;
    res = polished.residual;
    it += polished.iterations;
  }
  const Regime regime = std::abs(g.second) > 10.0 * std::abs(w) ? Regime::Interior : Regime::Exterior;
  return {g, regime, res, it};
}

GreensResult solve_quaternionic_greens(const EllipticLaw& law, const Quaternion& q,
                                       std::optional<Quaternion> seed) {
  RMap r = [&law](const Quaternion& g) { return law.r_transform(g); };
  if (!seed && std::abs(q.second) < 1e-14 && std::abs(law.mu) < 1.0) {
    // Closed-form interior candidate used as seed: G = (conj(z - x) -
    // mu e^{-2i phi}(z - x)) / (sigma^2 (1 - mu^2)), Gamma from |A|^2 +
    // sigma^4 Gamma^2 = sigma^2.
    const Complex dz = q.first - law.center;
    const double s2 = law.sigma * law.sigma;
    const Complex e2 = std::polar(1.0, 2.0 * law.phi);
    const Complex g_int = (std::conj(dz) - law.mu * std::conj(e2) * dz) / (s2 * (1.0 - law.mu * law.mu));
    const Complex a = dz - s2 * law.mu * e2 * g_int;
    const double gamma2 = (s2 - std::norm(a)) / (s2 * s2);
    if (gamma2 > kInteriorGamma * kInteriorGamma)
      seed = Quaternion{g_int, Complex(std::sqrt(gamma2), 0.0)};
  }
  return solve_quaternionic_greens(r, q, seed);
}

DensityGrid DensityGrid::zeros(const GridSpec& g) {
  DensityGrid out;
  out.xmin = g.xmin;
  out.xmax = g.xmax;
  out.ymin = g.ymin;
  out.ymax = g.ymax;
  out.nx = g.nx;
  out.ny = g.ny;
  out.values.assign(std::size_t(g.nx) * g.ny, 0.0);
  out.valid.assign(std::size_t(g.nx) * g.ny, 1);
  return out;
}

double DensityGrid::mass() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (valid[i]) sum += std::max(values[i], 0.0);
  return sum * cell_area();
}

namespace {

void validate_grid(const GridSpec& g) {
  if (!(g.xmax > g.xmin) || !(g.ymax > g.ymin) || !std::isfinite(g.xmin) || !std::isfinite(g.xmax) ||
      !std::isfinite(g.ymin) || !std::isfinite(g.ymax))
    throw std::invalid_argument("grid bounds must be finite and ordered");
  if (g.nx < 8 || g.ny < 8) throw std::invalid_argument("grid resolution must be at least 8x8");
}

struct CellDerivative {
  double rho = 0.0;
  double imag = 0.0;
  bool ok = false;
  bool interior_stencil = false;
  Quaternion warm;
};

template <typename Solver>
CellDerivative cell_density(const Solver& solve, Complex z, std::optional<Quaternion> warm) {
  CellDerivative out;
  try {
    const GreensResult center = solve(Quaternion(z), warm);
    out.warm = center.value;
    const double h = 1e-4 * (1.0 + std::abs(z));
    const Complex offs[4] = {Complex(h, 0), Complex(-h, 0), Complex(0, h), Complex(0, -h)};
    Complex g[4];
    bool interior = center.regime == Regime::Interior;
    for (int k = 0; k < 4; ++k) {
      const GreensResult p = solve(Quaternion(z + offs[k]), center.value);
      g[k] = p.value.first;
      interior = interior && p.regime == Regime::Interior;
    }
    const Complex ddx = (g[0] - g[1]) / (2.0 * h);
    const Complex ddy = (g[2] - g[3]) / (2.0 * h);
    const Complex dzbar = 0.5 * (ddx + Complex(0, 1) * ddy);
    out.rho = dzbar.real() / std::numbers::pi;
    out.imag = std::abs(dzbar.imag()) / std::numbers::pi;
    out.interior_stencil = interior;
    out.ok = true;
  } catch (const NoConvergenceError&) {
    out.ok = false;
  }
  return out;
}

template <typename Solver>
DensityGrid density_field_impl(const Solver& solve, const GridSpec& grid, bool parallel) {
  validate_grid(grid);
  DensityGrid out = DensityGrid::zeros(grid);
  std::vector<double> imag_by_row(std::size_t(grid.ny), 0.0);

  auto scan_row = [&](int iy) {
    std::optional<Quaternion> warm;
    double row_imag = 0.0;
    for (int ix = 0; ix < grid.nx; ++ix) {
      const Complex z(out.x_center(ix), out.y_center(iy));
      const CellDerivative cd = cell_density(solve, z, warm);
      const std::size_t idx = out.index(ix, iy);
      if (!cd.ok) {
        out.valid[idx] = 0;
        warm.reset();
        continue;
      }
      out.values[idx] = cd.rho;
      warm = cd.warm;
      if (cd.interior_stencil) row_imag = std::max(row_imag, cd.imag);
    }
    imag_by_row[std::size_t(iy)] = row_imag;
  };

  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int iy = 0; iy < grid.ny; ++iy) scan_row(iy);
  } else {
    for (int iy = 0; iy < grid.ny; ++iy) scan_row(iy);
  }
  for (double v : imag_by_row) out.max_imag_residual = std::max(out.max_imag_residual, v);
  return out;
}

}  // namespace

DensityGrid density_field(const EllipticLaw& law, const GridSpec& grid) {
  if (std::abs(law.mu) >= 1.0)
    throw std::invalid_argument("density_field: |mu| = 1 has one-dimensional support");
  auto solve = [&](const Quaternion& q, std::optional<Quaternion> seed) {
    return solve_quaternionic_greens(law, q, seed);
  };
  return density_field_impl(solve, grid, true);
}

DensityGrid density_field_serial(const EllipticLaw& law, const GridSpec& grid) {
  if (std::abs(law.mu) >= 1.0)
    throw std::invalid_argument("density_field: |mu| = 1 has one-dimensional support");
  auto solve = [&](const Quaternion& q, std::optional<Quaternion> seed) {
    return solve_quaternionic_greens(law, q, seed);
  };
  return density_field_impl(solve, grid, false);
}

Complex delta_representation(Complex z, Complex w, DeltaPart part) {
  if (std::abs(w) == 0.0) {
    if (std::abs(z) == 0.0)
      throw SingularInputError("delta_representation singular at z = w = 0");
    return {0.0, 0.0};
  }
  const double w2 = std::norm(w);
  const double denom = std::norm(z) + w2;
  const double first = w2 / (std::numbers::pi * denom * denom);
  if (part == DeltaPart::First) return {first, 0.0};
  return (w / std::conj(w)) * first;
}

LocalizationReport localization_check(const Eigen::MatrixXcd& x, Complex lambda, Complex w) {
  if (std::abs(w) == 0.0) throw std::invalid_argument("localization_check: w must be nonzero");
  const Eigen::Index n = x.rows();
  const Eigen::MatrixXcd a = lambda * Eigen::MatrixXcd::Identity(n, n) - x;
  const Eigen::MatrixXcd hl =
      a * a.adjoint() + std::norm(w) * Eigen::MatrixXcd::Identity(n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hl, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("localization_check: eigensolver failed");
  return {lambda, w, es.eigenvalues().minCoeff()};
}

}  // namespace qfree
