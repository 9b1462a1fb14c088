#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

namespace qfree {

struct LeastSquaresOptions {
  int max_iterations = 200;
  double residual_tol = 1e-12;  // infinity norm of the residual vector
  double step_tol = 3e-15;
  double fd_step = 1e-7;
};

struct LeastSquaresResult {
  Eigen::VectorXd x;
  double residual = 0.0;  // infinity norm at x
  int iterations = 0;
  bool converged = false;
};

/// Damped Gauss-Newton (Levenberg-Marquardt) for small dense systems
/// F : R^n -> R^m with m >= n.  The Jacobian is taken by central finite
/// differences.  Systems here have at most a dozen unknowns.
LeastSquaresResult solve_least_squares(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f, Eigen::VectorXd x0,
    const LeastSquaresOptions& opts = {});

struct ComplexNewtonResult {
  std::complex<double> z;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Newton iteration for holomorphic f with finite-difference derivative and
/// step halving on residual increase.
ComplexNewtonResult newton_complex(
    const std::function<std::complex<double>(std::complex<double>)>& f, std::complex<double> z0,
    double tol = 1e-13, int max_iterations = 80);

}  // namespace qfree
