#include <doctest.h>

#include <algorithm>

#include "qfree/sampling.hpp"

using namespace qfree;

TEST_SUITE("sampling") {

TEST_CASE("gue draws are exactly hermitian and standardized") {
  GaussianStream rng(stream_seed(7, 0));
  const int n = 256;
  double second_moment = 0.0;
  for (int rep = 0; rep < 8; ++rep) {
    const Eigen::MatrixXcd h = sample_gue(n, rng);
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    second_moment += (h * h).trace().real() / n;
  }
  CHECK(second_moment / 8 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("elliptic samples: exact hermiticity at mu = 1, anti at mu = -1") {
  GaussianStream rng(stream_seed(7, 1));
  const Eigen::MatrixXcd h = sample_elliptic({Complex(0, 0), 1.0, 1.0, 0.0}, 64, rng);
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXcd a = sample_elliptic({Complex(0, 0), 1.0, -1.0, 0.0}, 64, rng);
  CHECK((a + a.adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("elliptic second moments match the cumulant matrix") {
  const int n = 256, reps = 32;
  // mu = 0: <Tr X X^dag / N> = sigma^2 = 1.
  {
    double acc = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
      GaussianStream rng(stream_seed(100, std::uint64_t(rep)));
      const Eigen::MatrixXcd x = sample_elliptic(EllipticLaw::ginibre(), n, rng);
      acc += (x * x.adjoint()).trace().real() / n;
    }
    CHECK(acc / reps == doctest::Approx(1.0).epsilon(0.05));
  }
  // mu = 0.5: <Tr X X / N> = mu sigma^2 = 0.5.
  {
    Complex acc(0, 0);
    for (int rep = 0; rep < reps; ++rep) {
      GaussianStream rng(stream_seed(101, std::uint64_t(rep)));
      const Eigen::MatrixXcd x = sample_elliptic({Complex(0, 0), 1.0, 0.5, 0.0}, n, rng);
      acc += (x * x).trace() / double(n);
    }
    acc /= double(reps);
    CHECK(acc.real() == doctest::Approx(0.5).epsilon(0.1));
    CHECK(std::abs(acc.imag()) < 0.05);
  }
}

TEST_CASE("eigenvalues: diagonal, companion and trace identities") {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(4, 4);
  d(0, 0) = Complex(1, 2);
  d(1, 1) = Complex(-3, 0.5);
  d(2, 2) = Complex(0, -1);
  d(3, 3) = Complex(2, 2);
  Eigen::VectorXcd lam = eigenvalues(d);
  std::vector<Complex> got(lam.data(), lam.data() + 4);
  for (int i = 0; i < 4; ++i) {
    const Complex want = d(i, i);
    const bool found = std::any_of(got.begin(), got.end(),
                                   [&](Complex v) { return std::abs(v - want) < 1e-12; });
    CHECK(found);
  }

  // Companion matrix of z^3 - 1: cube roots of unity.
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(3, 3);
  c(0, 2) = 1.0;
  c(1, 0) = 1.0;
  c(2, 1) = 1.0;
  lam = eigenvalues(c);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(std::pow(lam[i], 3) - 1.0) < 1e-10);

  // Trace identity on a Ginibre draw.
  GaussianStream rng(stream_seed(55, 0));
  const Eigen::MatrixXcd x = sample_elliptic(EllipticLaw::ginibre(), 100, rng);
  lam = eigenvalues(x);
  CHECK(std::abs(lam.sum() - x.trace()) < 1e-8 * 100 * x.norm());

  // Hermitian input: imaginary parts vanish.
  GaussianStream rng2(stream_seed(55, 1));
  const Eigen::MatrixXcd h = sample_gue(64, rng2);
  const Eigen::VectorXcd hl = eigenvalues(h);
  for (int i = 0; i < 64; ++i) CHECK(std::abs(hl[i].imag()) <= 1e-10 * h.norm());

  CHECK_THROWS_AS((void)eigenvalues(Eigen::MatrixXcd::Zero(1030, 1030)), std::invalid_argument);
}

TEST_CASE("eigenvalues of X and X^dag are conjugate sets") {
  GaussianStream rng(stream_seed(77, 0));
  const Eigen::MatrixXcd x = sample_elliptic({Complex(0.2, 0.1), 1.0, 0.3, 0.4}, 48, rng);
  Eigen::VectorXcd a = eigenvalues(x);
  Eigen::VectorXcd b = eigenvalues(Eigen::MatrixXcd(x.adjoint()));
  std::vector<Complex> av(a.data(), a.data() + a.size());
  std::vector<Complex> bv(b.data(), b.data() + b.size());
  auto key = [](Complex u, Complex v) {
    return u.real() != v.real() ? u.real() < v.real() : u.imag() < v.imag();
  };
  for (auto& v : bv) v = std::conj(v);
  std::sort(av.begin(), av.end(), key);
  std::sort(bv.begin(), bv.end(), key);
  for (std::size_t i = 0; i < av.size(); ++i) CHECK(std::abs(av[i] - bv[i]) < 1e-8);
}

TEST_CASE("spec tree sampling composes draws deterministically") {
  const EnsembleSpec shifted = EnsembleSpec::shift(Complex(2, -1), EnsembleSpec::ginibre());
  GaussianStream rng_a(stream_seed(5, 0));
  const Eigen::MatrixXcd a = sample_spec(shifted, 32, rng_a);
  GaussianStream rng_b(stream_seed(5, 0));
  const Eigen::MatrixXcd bare = sample_spec(EnsembleSpec::ginibre(), 32, rng_b);
  CHECK((a - bare - Complex(2, -1) * Eigen::MatrixXcd::Identity(32, 32)).cwiseAbs().maxCoeff() <
        1e-14);

  const EnsembleSpec scaled = EnsembleSpec::scale(Complex(0, 2), EnsembleSpec::ginibre());
  GaussianStream rng_c(stream_seed(5, 0));
  const Eigen::MatrixXcd c = sample_spec(scaled, 32, rng_c);
  CHECK((c - Complex(0, 2) * bare).cwiseAbs().maxCoeff() == 0.0);

  // Sum draws independent terms: it consumes two leaf streams.
  const EnsembleSpec two = EnsembleSpec::sum({EnsembleSpec::ginibre(), EnsembleSpec::gue()});
  GaussianStream rng_d(stream_seed(5, 0));
  const Eigen::MatrixXcd d = sample_spec(two, 32, rng_d);
  CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() > 0.1);  // not hermitian
  CHECK((d - bare).cwiseAbs().maxCoeff() > 0.1);         // not the single draw
}

TEST_CASE("phase scaling leaves the Ginibre radial distribution invariant") {
  const int n = 256, reps = 4;
  const EnsembleSpec base = EnsembleSpec::ginibre();
  const EnsembleSpec rotated =
      EnsembleSpec::scale(std::polar(1.0, std::numbers::pi / 3), EnsembleSpec::ginibre());
  const SampleBatch a = sample_batch_serial(base, n, reps, 31);
  const SampleBatch b = sample_batch_serial(rotated, n, reps, 31);
  std::vector<double> ra, rb;
  for (const auto& e : a.eigs) ra.push_back(std::abs(e));
  for (const auto& e : b.eigs) rb.push_back(std::abs(e));
  std::sort(ra.begin(), ra.end());
  std::sort(rb.begin(), rb.end());
  // Same seed, phase-rotated draws: KS distance of radial samples.
  double ks = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double f_a = double(i + 1) / double(ra.size());
    const auto pos = std::upper_bound(rb.begin(), rb.end(), ra[i]) - rb.begin();
    ks = std::max(ks, std::abs(f_a - double(pos) / double(rb.size())));
  }
  CHECK(ks <= 0.02);
}

TEST_CASE("batches are reproducible and scheduling independent") {
  const EnsembleSpec spec = EnsembleSpec::product(
      EnsembleSpec::shift(Complex(1, 0), EnsembleSpec::ginibre()),
      EnsembleSpec::shift(Complex(1, 0), EnsembleSpec::ginibre()));
  const SampleBatch a = sample_batch(spec, 24, 6, 909);
  const SampleBatch b = sample_batch_serial(spec, 24, 6, 909);
  REQUIRE(a.eigs.size() == b.eigs.size());
  for (std::size_t i = 0; i < a.eigs.size(); ++i) CHECK(a.eigs[i] == b.eigs[i]);
  const SampleBatch c = sample_batch(spec, 24, 6, 910);
  bool all_equal = true;
  for (std::size_t i = 0; i < a.eigs.size(); ++i) all_equal = all_equal && a.eigs[i] == c.eigs[i];
  CHECK(!all_equal);
}

TEST_CASE("mixed moments") {
  const EnsembleSpec gin = EnsembleSpec::ginibre();
  const Complex m1 = mixed_moment(gin, "X", 256, 8, 1234);
  CHECK(std::abs(m1) < 0.05);
  const Complex m2 = mixed_moment(gin, "XX*", 256, 8, 1234);
  CHECK(m2.real() == doctest::Approx(1.0).epsilon(0.05));
  CHECK(m2.real() >= 0.0);
  // ASCII aliases and the UTF-8 dagger agree.
  CHECK(mixed_moment(gin, "XXd", 128, 4, 7) == mixed_moment(gin, "XX*", 128, 4, 7));
  CHECK(mixed_moment(gin, "XX\xE2\x80\xA0", 128, 4, 7) == mixed_moment(gin, "XX*", 128, 4, 7));
  // mu = 0.5 law: <Tr XX/N> -> mu.
  const EnsembleSpec half = EnsembleSpec::elliptic({Complex(0, 0), 1.0, 0.5, 0.0});
  CHECK(mixed_moment(half, "XX", 256, 16, 88).real() == doctest::Approx(0.5).epsilon(0.1));
  CHECK_THROWS_AS((void)mixed_moment(gin, "", 16, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)mixed_moment(gin, "XYX", 16, 1, 0), std::invalid_argument);
}

}  // TEST_SUITE
