#include <doctest.h>

#include <random>

#include "qfree/block_matrix.hpp"
#include "qfree/quaternion.hpp"

using namespace qfree;

namespace {

std::mt19937_64 rng(12345);

Quaternion random_quat() {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return {Complex(u(rng), u(rng)), Complex(u(rng), u(rng))};
}

}  // namespace

TEST_SUITE("quaternion") {

TEST_CASE("hamilton relations are exact") {
  const Quaternion one = Quaternion::one();
  const Quaternion i = Quaternion::unit_i();
  const Quaternion j = Quaternion::unit_j();
  const Quaternion k = Quaternion::unit_k();
  CHECK(i * i == -one);
  CHECK(j * j == -one);
  CHECK(k * k == -one);
  CHECK(i * j * k == -one);
  CHECK(i * j == k);
}

TEST_CASE("addition, conjugate, norm") {
  CHECK(Quaternion{Complex(1, 0), 0.0} + Quaternion{Complex(0, 0), 1.0} ==
        Quaternion{Complex(1, 0), Complex(1, 0)});
  CHECK(conj(Quaternion::unit_i()) == -Quaternion::unit_i());
  CHECK(norm2(Quaternion{Complex(3, 4), 0.0}) == doctest::Approx(25.0));
}

TEST_CASE("multiplication matches the 2x2 matrix representation") {
  for (int rep = 0; rep < 50; ++rep) {
    const Quaternion a = random_quat();
    const Quaternion b = random_quat();
    const Eigen::Matrix2cd mm = to_matrix(a) * to_matrix(b);
    CHECK(abs_diff(a * b, from_matrix(mm)) < 1e-13);
  }
}

TEST_CASE("matrix round trip is exact") {
  for (int rep = 0; rep < 20; ++rep) {
    const Quaternion q = random_quat();
    CHECK(from_matrix(to_matrix(q)) == q);
  }
}

TEST_CASE("sandwich by i kills the first part") {
  // (i,0)(z,w)(i,0) = (-z, w), so the Ginibre combination (q + i q i)/2 = (0, w).
  for (int rep = 0; rep < 20; ++rep) {
    const Quaternion q = random_quat();
    const Quaternion s = Quaternion::unit_i() * q * Quaternion::unit_i();
    CHECK(abs_diff(s, Quaternion{-q.first, q.second}) < 1e-14);
    const Quaternion half = 0.5 * q + 0.5 * s;
    CHECK(std::abs(half.first) < 1e-14);
    CHECK(std::abs(half.second - q.second) < 1e-14);
  }
}

TEST_CASE("j squared and inverses") {
  const Quaternion j = Quaternion::unit_j();
  CHECK(j * j == -Quaternion::one());
  CHECK(abs_diff(inverse(j), -j) < 1e-15);
  const Quaternion q{Complex(1, 0), Complex(1, 0)};
  const Quaternion qi = inverse(q);
  CHECK(std::abs(qi.first - Complex(0.5, 0)) < 1e-15);
  CHECK(std::abs(qi.second - Complex(-0.5, 0)) < 1e-15);
  CHECK(abs_diff(q * qi, Quaternion::one()) < 1e-15);
  // Complex embedding.
  const Quaternion zq{Complex(2, 1), 0.0};
  CHECK(std::abs(inverse(zq).first - 1.0 / Complex(2, 1)) < 1e-15);
  CHECK_THROWS_AS((void)inverse(Quaternion{}), SingularInputError);
}

TEST_CASE("associativity and distributivity on random triples") {
  for (int rep = 0; rep < 10000; ++rep) {
    const Quaternion a = random_quat();
    const Quaternion b = random_quat();
    const Quaternion c = random_quat();
    const double scale = norm(a) * norm(b) * norm(c) + 1.0;
    CHECK(abs_diff((a * b) * c, a * (b * c)) / scale < 1e-14);
    CHECK(abs_diff(a * (b + c), a * b + a * c) / scale < 1e-13);
  }
}

TEST_CASE("inverse is an involution and norm is multiplicative") {
  for (int rep = 0; rep < 10000; ++rep) {
    const Quaternion a = random_quat();
    const Quaternion b = random_quat();
    if (norm2(a) < 1e-6) continue;
    CHECK(abs_diff(inverse(inverse(a)), a) < 1e-13 * (1.0 + norm(a)));
    CHECK(norm2(a * b) == doctest::Approx(norm2(a) * norm2(b)).epsilon(1e-12));
    CHECK(abs_diff(a * inverse(a), Quaternion::one()) < 1e-13);
  }
}

TEST_CASE("rotations act on the second part only") {
  const double phi = 1.234;
  for (int rep = 0; rep < 20; ++rep) {
    const Quaternion q = random_quat();
    const Quaternion l = rotate(q, phi, RotationSide::Left);
    const Quaternion r = rotate(q, phi, RotationSide::Right);
    CHECK(l.first == q.first);
    CHECK(r.first == q.first);
    CHECK(std::abs(l.second - q.second * std::polar(1.0, phi / 2)) < 1e-15);
    CHECK(std::abs(r.second - q.second * std::polar(1.0, -phi / 2)) < 1e-15);
    // Matches conjugation by U = diag(e^{i phi/4}, e^{-i phi/4}).
    Eigen::Matrix2cd u = Eigen::Matrix2cd::Zero();
    u(0, 0) = std::polar(1.0, phi / 4);
    u(1, 1) = std::polar(1.0, -phi / 4);
    CHECK(abs_diff(l, from_matrix(u * to_matrix(q) * u.adjoint())) < 1e-14);
  }
  const Quaternion q = random_quat();
  CHECK(rotate(q, 0.0, RotationSide::Left) == q);
}

}  // TEST_SUITE
