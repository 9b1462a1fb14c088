#include "qfree/sampling.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace qfree {

Eigen::MatrixXcd sample_gue(int n, GaussianStream& rng) {
  if (n < 2) throw std::invalid_argument("sample_gue: n must be at least 2");
  Eigen::MatrixXcd h(n, n);
  const double diag_scale = 1.0 / std::sqrt(double(n));
  const double off_scale = 1.0 / std::sqrt(2.0 * double(n));
  for (int i = 0; i < n; ++i) {
    h(i, i) = rng.normal() * diag_scale;
    for (int j = i + 1; j < n; ++j) {
      const Complex v(rng.normal() * off_scale, rng.normal() * off_scale);
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return h;
}

Eigen::MatrixXcd sample_elliptic(const EllipticLaw& law, int n, GaussianStream& rng) {
  const Eigen::MatrixXcd h1 = sample_gue(n, rng);
  const Eigen::MatrixXcd h2 = sample_gue(n, rng);
  const Complex phase = std::polar(1.0, law.phi);
  Eigen::MatrixXcd x = phase * (law.sigma1() * h1 + Complex(0, 1) * (law.sigma2() * h2));
  if (std::abs(law.center) != 0.0) x += law.center * Eigen::MatrixXcd::Identity(n, n);
  return x;
}

Eigen::MatrixXcd sample_spec(const EnsembleSpec& spec, int n, GaussianStream& rng) {
  using Kind = EnsembleSpec::Kind;
  const auto& node = spec.root();
  if (!node) throw std::invalid_argument("sample_spec: empty spec");
  switch (node->kind) {
    case Kind::Gue:
    case Kind::Ginibre:
    case Kind::Elliptic:
      return sample_elliptic(node->law, n, rng);
    case Kind::Shift:
      return sample_spec(EnsembleSpec(node->children[0]), n, rng) +
             node->param * Eigen::MatrixXcd::Identity(n, n);
    case Kind::Scale:
      return node->param * sample_spec(EnsembleSpec(node->children[0]), n, rng);
    case Kind::Sum: {
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
      for (const auto& c : node->children) acc += sample_spec(EnsembleSpec(c), n, rng);
      return acc;
    }
    case Kind::Product: {
      const Eigen::MatrixXcd a = sample_spec(EnsembleSpec(node->children[0]), n, rng);
      const Eigen::MatrixXcd b = sample_spec(EnsembleSpec(node->children[1]), n, rng);
      return a * b;
    }
  }
  throw std::logic_error("sample_spec: unknown node kind");
}

Eigen::VectorXcd eigenvalues(const Eigen::MatrixXcd& x) {
  const Eigen::Index n = x.rows();
  if (n == 0 || x.cols() != n) throw std::invalid_argument("eigenvalues: square matrix required");
  if (n > 1024) throw std::invalid_argument("eigenvalues: n exceeds the dense-path limit 1024");

  const double herm_defect = (x - x.adjoint()).cwiseAbs().maxCoeff();
  if (herm_defect == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(x, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalues: hermitian solver failed");
    return es.eigenvalues().cast<Complex>();
  }
  const double skew_defect = (x + x.adjoint()).cwiseAbs().maxCoeff();
  if (skew_defect == 0.0) {
    const Eigen::MatrixXcd m = Complex(0, -1) * x;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalues: hermitian solver failed");
    return Complex(0, 1) * es.eigenvalues().cast<Complex>();
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(x, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalues: QR iteration failed");
  return es.eigenvalues();
}

namespace {

SampleBatch sample_batch_impl(const EnsembleSpec& spec, int n, int reps, std::uint64_t seed,
                              bool parallel) {
  if (n < 2 || reps < 1) throw std::invalid_argument("sample_batch: need n >= 2, reps >= 1");
  SampleBatch batch;
  batch.spec = spec;
  batch.n = n;
  batch.reps = reps;
  batch.seed = seed;
  batch.eigs.assign(std::size_t(n) * reps, Complex(0, 0));

  auto run_rep = [&](int rep) {
    GaussianStream rng(stream_seed(seed, std::uint64_t(rep)));
    const Eigen::MatrixXcd x = sample_spec(spec, n, rng);
    const Eigen::VectorXcd lambda = eigenvalues(x);
    for (int i = 0; i < n; ++i) batch.eigs[std::size_t(rep) * n + i] = lambda[i];
  };

  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int rep = 0; rep < reps; ++rep) run_rep(rep);
  } else {
    for (int rep = 0; rep < reps; ++rep) run_rep(rep);
  }
  return batch;
}

}  // namespace

SampleBatch sample_batch(const EnsembleSpec& spec, int n, int reps, std::uint64_t seed) {
  return sample_batch_impl(spec, n, reps, seed, true);
}

SampleBatch sample_batch_serial(const EnsembleSpec& spec, int n, int reps, std::uint64_t seed) {
  return sample_batch_impl(spec, n, reps, seed, false);
}

namespace {

// Word over {X, X†}; accepts the UTF-8 dagger or '*' / 'd' as ASCII aliases.
std::vector<bool> parse_word(const std::string& word) {
  std::vector<bool> dagger;
  for (std::size_t i = 0; i < word.size();) {
    const char c = word[i];
    if (c == 'X' || c == 'x') {
      dagger.push_back(false);
      ++i;
      if (i + 2 < word.size() && (unsigned char)word[i] == 0xE2 &&
          (unsigned char)word[i + 1] == 0x80 && (unsigned char)word[i + 2] == 0xA0) {
        dagger.back() = true;
        i += 3;
      } else if (i < word.size() && (word[i] == '*' || word[i] == 'd')) {
        dagger.back() = true;
        ++i;
      }
    } else {
      throw std::invalid_argument("mixed_moment: bad word character in '" + word + "'");
    }
  }
  if (dagger.empty()) throw std::invalid_argument("mixed_moment: empty word");
  return dagger;
}

}  // namespace

Complex mixed_moment(const EnsembleSpec& spec, const std::string& word, int n, int reps,
                     std::uint64_t seed) {
  const std::vector<bool> dagger = parse_word(word);
  if (reps < 1) throw std::invalid_argument("mixed_moment: reps >= 1 required");
  Complex acc(0, 0);
  for (int rep = 0; rep < reps; ++rep) {
    GaussianStream rng(stream_seed(seed, std::uint64_t(rep)));
    const Eigen::MatrixXcd x = sample_spec(spec, n, rng);
    Eigen::MatrixXcd prod = dagger[0] ? Eigen::MatrixXcd(x.adjoint()) : x;
    for (std::size_t k = 1; k < dagger.size(); ++k)
      prod = Eigen::MatrixXcd(prod * (dagger[k] ? Eigen::MatrixXcd(x.adjoint()) : x));
    acc += prod.trace() / double(n);
  }
  return acc / double(reps);
}

}  // namespace qfree
