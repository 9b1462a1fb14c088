#include "qfree/series.hpp"

#include <Eigen/Dense>

#include "qfree/errors.hpp"
#include "qfree/newton.hpp"

namespace qfree {

namespace {

// The triangular recursions cancel heavily by order 8, so they run in
// extended precision to keep double round trips well inside 1e-12.
using LongComplex = std::complex<long double>;

std::vector<LongComplex> widen(const std::vector<Complex>& v) {
  std::vector<LongComplex> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = LongComplex(v[i].real(), v[i].imag());
  return out;
}

std::vector<Complex> narrow(const std::vector<LongComplex>& v) {
  std::vector<Complex> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = Complex(double(v[i].real()), double(v[i].imag()));
  return out;
}

// Coefficient of t^j in (sum_{i>=0} m_i t^i)^k, with m_0 = 1 and m given from
// order 1.  Plain repeated convolution; orders stay small (<= 32).
LongComplex power_coefficient(const std::vector<LongComplex>& m, int k, int j) {
  std::vector<LongComplex> acc(size_t(j) + 1, LongComplex(0, 0));
  acc[0] = 1.0L;
  auto m_at = [&](int i) -> LongComplex {
    if (i == 0) return LongComplex(1, 0);
    return (i <= int(m.size())) ? m[size_t(i) - 1] : LongComplex(0, 0);
  };
  for (int p = 0; p < k; ++p) {
    std::vector<LongComplex> next(size_t(j) + 1, LongComplex(0, 0));
    for (int a = 0; a <= j; ++a) {
      if (acc[size_t(a)] == LongComplex(0, 0)) continue;
      for (int b = 0; a + b <= j; ++b) next[size_t(a + b)] += acc[size_t(a)] * m_at(b);
    }
    acc = std::move(next);
  }
  return acc[size_t(j)];
}

}  // namespace

ScalarSeries moments_from_cumulants(const ScalarSeries& kappa) {
  const int n_max = kappa.order();
  const std::vector<LongComplex> k_wide = widen(kappa.coeff);
  std::vector<LongComplex> m;
  m.reserve(size_t(n_max));
  for (int n = 1; n <= n_max; ++n) {
    LongComplex mn(0, 0);
    for (int k = 1; k <= n; ++k) mn += k_wide[size_t(k) - 1] * power_coefficient(m, k, n - k);
    m.push_back(mn);
  }
  return {SeriesKind::Moments, narrow(m)};
}

ScalarSeries cumulants_from_moments(const ScalarSeries& m) {
  const int n_max = m.order();
  const std::vector<LongComplex> m_wide = widen(m.coeff);
  std::vector<LongComplex> kappa;
  kappa.reserve(size_t(n_max));
  for (int n = 1; n <= n_max; ++n) {
    LongComplex kn = m_wide[size_t(n) - 1];
    for (int k = 1; k < n; ++k) kn -= kappa[size_t(k) - 1] * power_coefficient(m_wide, k, n - k);
    kappa.push_back(kn);
  }
  return {SeriesKind::FreeCumulants, narrow(kappa)};
}

HermitianTransform HermitianTransform::from_cumulants(ScalarSeries kappa) {
  HermitianTransform t;
  t.eval_ = [k = std::move(kappa)](Complex z) {
    Complex acc(0, 0);
    for (int n = k.order(); n >= 1; --n) acc = acc * z + k.at(n);
    return acc;
  };
  return t;
}

HermitianTransform HermitianTransform::from_function(std::function<Complex(Complex)> f) {
  HermitianTransform t;
  t.eval_ = std::move(f);
  return t;
}

HermitianTransform HermitianTransform::constant(Complex c) {
  return from_function([c](Complex) { return c; });
}

Complex hermitian_greens(const HermitianTransform& r, Complex z, const GreensOptions& opts) {
  if (std::abs(z) == 0.0) throw SingularInputError("hermitian_greens: z = 0 not supported");
  const double far = 8.0 * std::max(1.0, std::abs(z));
  Complex g = 1.0 / (far * z / std::abs(z));
  double best_res = std::numeric_limits<double>::infinity();
  // Geometric continuation from |z| = far down to the target along the ray.
  for (int step = opts.continuation_steps; step >= 0; --step) {
    const double radius =
        std::abs(z) * std::pow(far / std::abs(z), double(step) / opts.continuation_steps);
    const Complex zk = radius * z / std::abs(z);
    auto f = [&](Complex gg) { return gg * (zk - r(gg)) - 1.0; };
    const ComplexNewtonResult res = newton_complex(f, g, opts.tol, opts.max_iterations);
    best_res = std::min(best_res, res.residual);
    if (!res.converged)
      throw NoConvergenceError("hermitian_greens: Newton failed on continuation path", best_res);
    g = res.z;
  }
  return g;
}

Complex s_r_convert(const HermitianTransform& t, SRDirection direction, Complex z) {
  const Complex at0 = t(Complex(0, 0));
  if (direction == SRDirection::RtoS) {
    if (std::abs(at0) < 1e-14)
      throw SingularInputError("s_r_convert: S transform undefined for kappa_1 = 0");
  } else {
    if (std::abs(at0) < 1e-300) throw SingularInputError("s_r_convert: S(0) = 0 has no R branch");
  }
  // R -> S: solve s R(z s) = 1 from s = 1/kappa_1.
  // S -> R: solve r S(z r) = 1 from r = 1/S(0).
  Complex guess = 1.0 / at0;
  const int steps = 12;
  Complex value = guess;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= steps; ++k) {
    const Complex zk = z * double(k) / double(steps);
    auto f = [&](Complex u) { return u * t(zk * u) - 1.0; };
    const ComplexNewtonResult res = newton_complex(f, value, 1e-13, 80);
    best = std::min(best, res.residual);
    if (!res.converged) throw NoConvergenceError("s_r_convert: continuation failed", best);
    value = res.z;
  }
  return value;
}

Complex multiply_hermitian(const HermitianTransform& ra, const HermitianTransform& rb, Complex z) {
  // Newton on (v, w): v = z R_A(w), w = z R_B(v).  Tolerance 1e-12, at most
  // 200 iterations, step damping 1/2 on residual increase.
  Complex v(0, 0), w(0, 0);
  auto residual = [&](Complex vv, Complex ww) {
    const Complex f1 = vv - z * ra(ww);
    const Complex f2 = ww - z * rb(vv);
    return std::max(std::abs(f1), std::abs(f2));
  };
  double res = residual(v, w);
  int it = 0;
  for (; it < 200 && res > 1e-12; ++it) {
    const double hv = 1e-7 * (1.0 + std::abs(v));
    const double hw = 1e-7 * (1.0 + std::abs(w));
    // Holomorphic 2x2 Jacobian by finite differences.
    const Complex dra = (ra(w + hw) - ra(w - hw)) / (2.0 * hw);
    const Complex drb = (rb(v + hv) - rb(v - hv)) / (2.0 * hv);
    const Complex f1 = v - z * ra(w);
    const Complex f2 = w - z * rb(v);
    // J = [[1, -z ra'], [-z rb', 1]], det = 1 - z^2 ra' rb'.
    const Complex det = 1.0 - z * z * dra * drb;
    if (std::abs(det) < 1e-300) break;
    Complex dv = (f1 + z * dra * f2) / det;
    Complex dw = (f2 + z * drb * f1) / det;
    bool accepted = false;
    for (int halve = 0; halve < 10; ++halve) {
      const Complex vn = v - dv, wn = w - dw;
      const double rn = residual(vn, wn);
      if (std::isfinite(rn) && rn < res) {
        v = vn;
        w = wn;
        res = rn;
        accepted = true;
        break;
      }
      dv *= 0.5;
      dw *= 0.5;
    }
    if (!accepted) break;
  }
  if (res > 1e-12) throw NoConvergenceError("multiply_hermitian: Newton failed", res);
  return ra(w) * rb(v);
}

}  // namespace qfree
