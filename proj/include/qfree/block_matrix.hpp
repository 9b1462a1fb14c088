#pragma once

#include <Eigen/Dense>

#include "qfree/quaternion.hpp"

namespace qfree {

/// Quaternionic N x N matrix Q = (X, Y) whose 2N x 2N complex form is
/// [[X, Y], [-Y^dag, X^dag]].  Only the upper row of blocks is stored; it
/// determines the rest.
struct BlockQuaternionMatrix {
  Eigen::Index dim = 0;
  Eigen::MatrixXcd x_block;
  Eigen::MatrixXcd y_block;

  BlockQuaternionMatrix(Eigen::MatrixXcd x, Eigen::MatrixXcd y);
};

/// 2x2 matrix representation of a quaternion.
Eigen::Matrix2cd to_matrix(const Quaternion& q);

/// Reads the first row of a 2x2 representation back into a pair.
Quaternion from_matrix(const Eigen::Matrix2cd& m);

/// Block trace: Tr_b (X, Y) = (Tr X, Tr Y), a quaternion.
Quaternion block_trace(const BlockQuaternionMatrix& m);

/// (1/N) Tr_b of [[z-X, w], [-conj(w), conj(z)-X^dag]]^{-1}, evaluated with
/// the closed-form block inversion through H_L = (z-X)(conj(z)-X^dag)+|w|^2
/// and H_R = (conj(z)-X^dag)(z-X)+|w|^2 (two hermitian positive-definite
/// solves instead of one dense 2N x 2N inversion).
Quaternion block_resolvent(const Eigen::MatrixXcd& x, const Quaternion& q);

}  // namespace qfree
