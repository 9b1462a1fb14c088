#include <doctest.h>

#include <random>

#include "qfree/block_matrix.hpp"

using namespace qfree;

namespace {

std::mt19937_64 rng(777);

Eigen::MatrixXcd random_matrix(int n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd x(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x(i, j) = Complex(g(rng), g(rng)) / std::sqrt(2.0 * n);
  return x;
}

}  // namespace

TEST_SUITE("block_matrix") {

TEST_CASE("block trace basics") {
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
  CHECK(block_trace({id, id}) == Quaternion{Complex(2, 0), Complex(2, 0)});

  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  CHECK(block_trace({d, Eigen::MatrixXcd::Zero(2, 2)}) == Quaternion{Complex(3, 0), Complex(0, 0)});
}

TEST_CASE("block trace of scalar embedding q x I_N") {
  const Quaternion q{Complex(0.3, -1.1), Complex(0.7, 0.2)};
  const int n = 5;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const BlockQuaternionMatrix m{q.first * id, q.second * id};
  CHECK(abs_diff(block_trace(m), double(n) * q) < 1e-14);
}

TEST_CASE("block trace rejects mismatched blocks") {
  CHECK_THROWS_AS(BlockQuaternionMatrix(Eigen::MatrixXcd::Zero(2, 2), Eigen::MatrixXcd::Zero(3, 3)),
                  std::invalid_argument);
}

TEST_CASE("block resolvent of the zero matrix is q^{-1}") {
  const Quaternion q{Complex(0.4, 0.3), Complex(0.2, -0.6)};
  const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(6, 6);
  CHECK(abs_diff(block_resolvent(zero, q), inverse(q)) < 1e-12);
}

TEST_CASE("block resolvent of a diagonal matrix matches the direct sum") {
  const int n = 8;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n, n);
  std::vector<Complex> lambda(n);
  for (int i = 0; i < n; ++i) {
    lambda[i] = Complex(u(rng), u(rng));
    d(i, i) = lambda[i];
  }
  const Quaternion q{Complex(0.7, 0.1), Complex(0.25, 0.0)};
  Complex expect_first(0, 0);
  for (int i = 0; i < n; ++i) {
    const Complex dz = q.first - lambda[i];
    expect_first += std::conj(dz) / (std::norm(dz) + std::norm(q.second));
  }
  expect_first /= double(n);
  const Quaternion got = block_resolvent(d, q);
  CHECK(std::abs(got.first - expect_first) < 1e-12);
}

TEST_CASE("block resolvent agrees with dense 2N x 2N inversion") {
  const int n = 12;
  const Eigen::MatrixXcd x = random_matrix(n);
  const Quaternion q{Complex(0.2, -0.4), Complex(0.3, 0.5)};
  Eigen::MatrixXcd big(2 * n, 2 * n);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  big.topLeftCorner(n, n) = q.first * id - x;
  big.topRightCorner(n, n) = q.second * id;
  big.bottomLeftCorner(n, n) = -std::conj(q.second) * id;
  big.bottomRightCorner(n, n) = std::conj(q.first) * id - x.adjoint();
  const Eigen::MatrixXcd inv = big.inverse();
  const Quaternion expect{inv.topLeftCorner(n, n).trace() / double(n),
                          inv.topRightCorner(n, n).trace() / double(n)};
  CHECK(abs_diff(block_resolvent(x, q), expect) < 1e-11);
}

TEST_CASE("hermitian matrix, real z: first part is real by symmetry") {
  const int n = 10;
  Eigen::MatrixXcd x = random_matrix(n);
  x = ((x + x.adjoint()) / 2).eval();
  const Quaternion got = block_resolvent(x, {Complex(0.37, 0.0), Complex(0.05, 0.0)});
  CHECK(std::abs(got.first.imag()) < 1e-12);
}

TEST_CASE("w = 0 at an eigenvalue is singular") {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
  d(0, 0) = 1.0;
  CHECK_THROWS_AS((void)block_resolvent(d, Quaternion{Complex(1.0, 0.0), Complex(0, 0)}),
                  SingularInputError);
}

}  // TEST_SUITE
