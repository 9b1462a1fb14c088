#pragma once

#include <functional>
#include <vector>

#include "qfree/quaternion.hpp"

namespace qfree {

enum class SeriesKind { Moments, FreeCumulants };

/// Truncated scalar power-series data, coefficient n (1-based) stored at
/// coeff[n-1].  Moments m_n expand G(z) = sum m_n z^{-n-1} (with m_0 = 1);
/// free cumulants kappa_n expand R(z) = sum kappa_n z^{n-1}.
struct ScalarSeries {
  SeriesKind kind = SeriesKind::Moments;
  std::vector<Complex> coeff;

  int order() const { return int(coeff.size()); }
  Complex at(int n) const { return coeff.at(size_t(n - 1)); }
};

/// Inverse pair derived from G = 1/(z - R(G)) by order matching:
///   m_n = sum_{k=1..n} kappa_k * [t^{n-k}] (sum_j m_j t^j)^k,  m_0 = 1.
ScalarSeries moments_from_cumulants(const ScalarSeries& kappa);
ScalarSeries cumulants_from_moments(const ScalarSeries& m);

/// Scalar R or S transform of a hermitian law, evaluable on a disk around 0.
class HermitianTransform {
 public:
  static HermitianTransform from_cumulants(ScalarSeries kappa);
  static HermitianTransform from_function(std::function<Complex(Complex)> f);
  static HermitianTransform constant(Complex c);

  Complex operator()(Complex z) const { return eval_(z); }
  /// kappa_1 = R(0).
  Complex kappa1() const { return eval_(Complex(0, 0)); }

 private:
  std::function<Complex(Complex)> eval_;
};

struct GreensOptions {
  double tol = 1e-12;
  int max_iterations = 200;
  int continuation_steps = 24;
};

/// Solves G = 1/(z - R(G)) on the branch with G ~ 1/z at infinity, reached by
/// continuation along the ray through z from 8 max(1, |z|).  Throws
/// NoConvergenceError when Newton fails along the whole path.
Complex hermitian_greens(const HermitianTransform& r, Complex z, const GreensOptions& opts = {});

enum class SRDirection { RtoS, StoR };

/// S(z) = 1/R(zS(z)) and back, on the branch continuous from S(0) = 1/kappa_1
/// (R(0) = kappa_1).  Requires kappa_1 != 0.
Complex s_r_convert(const HermitianTransform& t, SRDirection direction, Complex z);

/// R transform of a free product at z: solves v = z R_A(w), w = z R_B(v)
/// seeded at v = w = 0 and returns R_A(w) R_B(v).
Complex multiply_hermitian(const HermitianTransform& ra, const HermitianTransform& rb, Complex z);

}  // namespace qfree
