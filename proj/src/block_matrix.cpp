#include "qfree/block_matrix.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace qfree {

BlockQuaternionMatrix::BlockQuaternionMatrix(Eigen::MatrixXcd x, Eigen::MatrixXcd y)
    : dim(x.rows()), x_block(std::move(x)), y_block(std::move(y)) {
  if (x_block.rows() != x_block.cols() || y_block.rows() != y_block.cols() ||
      x_block.rows() != y_block.rows()) {
    throw std::invalid_argument("block matrix requires square blocks of equal size");
  }
}

Eigen::Matrix2cd to_matrix(const Quaternion& q) {
  Eigen::Matrix2cd m;
  m << q.first, q.second, -std::conj(q.second), std::conj(q.first);
  return m;
}

Quaternion from_matrix(const Eigen::Matrix2cd& m) { return {m(0, 0), m(0, 1)}; }

Quaternion block_trace(const BlockQuaternionMatrix& m) {
  return {m.x_block.trace(), m.y_block.trace()};
}

Quaternion block_resolvent(const Eigen::MatrixXcd& x, const Quaternion& q) {
  const Eigen::Index n = x.rows();
  if (n == 0 || x.cols() != n) throw std::invalid_argument("block_resolvent: square matrix required");
  const Complex z = q.first;
  const Complex w = q.second;
  const Eigen::MatrixXcd a = z * Eigen::MatrixXcd::Identity(n, n) - x;

  if (std::abs(w) == 0.0) {
    // Decoupled case: the second part vanishes and the first is the plain
    // resolvent trace of z - X.
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    const Eigen::MatrixXcd inv = lu.solve(Eigen::MatrixXcd::Identity(n, n));
    const Complex tr = inv.trace();
    if (!std::isfinite(tr.real()) || !std::isfinite(tr.imag()))
      throw SingularInputError("block_resolvent: z is an eigenvalue and w = 0");
    return {tr / double(n), Complex(0, 0)};
  }

  const double w2 = std::norm(w);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd hl = a * a.adjoint() + w2 * id;
  const Eigen::MatrixXcd hr = a.adjoint() * a + w2 * id;

  Eigen::LLT<Eigen::MatrixXcd> llt_l(hl);
  Eigen::LLT<Eigen::MatrixXcd> llt_r(hr);
  if (llt_l.info() != Eigen::Success || llt_r.info() != Eigen::Success)
    throw SingularInputError("block_resolvent: H_L/H_R factorization failed");

  // First part: (1/N) Tr[(conj(z)-X^dag) H_L^{-1}]; second: -(w/N) Tr[H_R^{-1}].
  const Complex tr_first = llt_l.solve(a.adjoint()).trace();
  const Complex tr_hr_inv = llt_r.solve(id).trace();
  return {tr_first / double(n), -w * tr_hr_inv / double(n)};
}

}  // namespace qfree
