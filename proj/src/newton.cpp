#include "qfree/newton.hpp"

#include <cmath>

namespace qfree {

namespace {

Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, int m, double fd_step) {
  const int n = int(x.size());
  Eigen::MatrixXd j(m, n);
  Eigen::VectorXd xp = x, xm = x;
  for (int c = 0; c < n; ++c) {
    const double h = fd_step * (1.0 + std::abs(x[c]));
    xp[c] = x[c] + h;
    xm[c] = x[c] - h;
    j.col(c) = (f(xp) - f(xm)) / (2.0 * h);
    xp[c] = x[c];
    xm[c] = x[c];
  }
  return j;
}

}  // namespace

LeastSquaresResult solve_least_squares(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f, Eigen::VectorXd x0,
    const LeastSquaresOptions& opts) {
  LeastSquaresResult out;
  Eigen::VectorXd x = std::move(x0);
  Eigen::VectorXd fx = f(x);
  const int m = int(fx.size());
  const int n = int(x.size());
  (void)n;
  double lambda = 1e-10;
  int stalled = 0;

  for (int it = 0; it < opts.max_iterations; ++it) {
    out.iterations = it;
    const double res = fx.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(res)) break;
    if (res <= opts.residual_tol) {
      out.converged = true;
      break;
    }
    const Eigen::MatrixXd j = fd_jacobian(f, x, m, opts.fd_step);
    const Eigen::MatrixXd jtj = j.transpose() * j;
    const Eigen::VectorXd jtf = j.transpose() * fx;

    bool accepted = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      Eigen::MatrixXd damped = jtj;
      damped.diagonal().array() += lambda * (1.0 + jtj.diagonal().array().abs());
      const Eigen::VectorXd step = damped.ldlt().solve(jtf);
      const Eigen::VectorXd xn = x - step;
      const Eigen::VectorXd fn = f(xn);
      if (fn.allFinite() && fn.squaredNorm() < fx.squaredNorm()) {
        // Inconsistent systems bottom out at a positive floor; stop once
        // progress stalls instead of draining the budget.
        stalled = (fn.squaredNorm() > 0.98 * fx.squaredNorm()) ? stalled + 1 : 0;
        x = xn;
        fx = fn;
        lambda = std::max(lambda / 4.0, 1e-14);
        accepted = true;
        if (step.lpNorm<Eigen::Infinity>() <= opts.step_tol * (1.0 + x.lpNorm<Eigen::Infinity>()))
          it = opts.max_iterations;
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted || stalled >= 3) break;
  }
  out.x = std::move(x);
  out.residual = fx.lpNorm<Eigen::Infinity>();
  if (out.residual <= opts.residual_tol) out.converged = true;
  return out;
}

ComplexNewtonResult newton_complex(
    const std::function<std::complex<double>(std::complex<double>)>& f, std::complex<double> z0,
    double tol, int max_iterations) {
  using C = std::complex<double>;
  ComplexNewtonResult out;
  C z = z0;
  C fz = f(z);
  for (int it = 0; it < max_iterations; ++it) {
    out.iterations = it;
    if (std::abs(fz) <= tol) {
      out.converged = true;
      break;
    }
    const double h = 1e-7 * (1.0 + std::abs(z));
    const C df = (f(z + h) - f(z - h)) / (2.0 * h);
    if (std::abs(df) < 1e-300) break;
    C step = fz / df;
    bool accepted = false;
    for (int halve = 0; halve < 8; ++halve) {
      const C zn = z - step;
      const C fn = f(zn);
      if (std::isfinite(fn.real()) && std::isfinite(fn.imag()) && std::abs(fn) < std::abs(fz)) {
        z = zn;
        fz = fn;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  out.z = z;
  out.residual = std::abs(fz);
  if (out.residual <= tol) out.converged = true;
  return out;
}

}  // namespace qfree
