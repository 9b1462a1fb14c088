#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "qfree/ensemble.hpp"
#include "qfree/rng.hpp"

namespace qfree {

/// Standardized GUE draw: hermitian, <Tr H^2 / N> = 1 (entry variance 1/N).
Eigen::MatrixXcd sample_gue(int n, GaussianStream& rng);

/// X = x I + e^{i phi}(sigma1 H1 + i sigma2 H2) with independent standardized
/// GUE factors; hermiticity is exact at mu = 1 and anti-hermiticity at
/// mu = -1 because sigma2 (resp. sigma1) vanishes identically.
Eigen::MatrixXcd sample_elliptic(const EllipticLaw& law, int n, GaussianStream& rng);

/// Recursive draw over the expression tree: one independent draw per leaf in
/// a fixed traversal order, so a rep is reproducible from its stream alone.
Eigen::MatrixXcd sample_spec(const EnsembleSpec& spec, int n, GaussianStream& rng);

/// All eigenvalues of a dense complex matrix, n <= 1024.  Exactly hermitian
/// or anti-hermitian inputs take the self-adjoint path.  Backward-stable
/// contract: sum of eigenvalues matches the trace to 1e-8 n ||X||.
Eigen::VectorXcd eigenvalues(const Eigen::MatrixXcd& x);

struct SampleBatch {
  EnsembleSpec spec;
  int n = 0;
  int reps = 0;
  std::uint64_t seed = 0;
  std::vector<Complex> eigs;  // rep-major: eigs[rep * n + i]
};

/// reps independent draws with per-rep streams derived from the master seed;
/// the eigenvalue list is bit-identical for any thread count.
SampleBatch sample_batch(const EnsembleSpec& spec, int n, int reps, std::uint64_t seed);
SampleBatch sample_batch_serial(const EnsembleSpec& spec, int n, int reps, std::uint64_t seed);

/// Average of (1/N) Tr over the word's matrix product for fresh draws of the
/// spec.  The word is a string over {X, X†}; '*' or 'd' may stand for the
/// dagger in plain ASCII (e.g. "XX*" or "XXd").
Complex mixed_moment(const EnsembleSpec& spec, const std::string& word, int n, int reps,
                     std::uint64_t seed);

}  // namespace qfree
