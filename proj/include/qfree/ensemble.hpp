#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "qfree/elliptic.hpp"

namespace qfree {

/// Expression tree describing a random-matrix ensemble.  GUE and Ginibre are
/// the standardized elliptic laws with mu = 1 and mu = 0; they keep their own
/// node kind so specs round-trip through JSON unchanged.
class EnsembleSpec {
 public:
  enum class Kind { Gue, Ginibre, Elliptic, Shift, Scale, Sum, Product };

  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  struct Node {
    Kind kind;
    EllipticLaw law;                // leaf kinds
    Complex param;                  // Shift: x, Scale: alpha
    std::vector<NodePtr> children;  // Shift/Scale: 1, Product: 2, Sum: >= 1
  };

  EnsembleSpec() = default;
  explicit EnsembleSpec(NodePtr root) : root_(std::move(root)) {}

  static EnsembleSpec gue();
  static EnsembleSpec ginibre();
  static EnsembleSpec elliptic(const EllipticLaw& law);
  static EnsembleSpec shift(Complex x, EnsembleSpec of);
  static EnsembleSpec scale(Complex alpha, EnsembleSpec of);
  static EnsembleSpec sum(std::vector<EnsembleSpec> terms);
  static EnsembleSpec product(EnsembleSpec a, EnsembleSpec b);

  const NodePtr& root() const { return root_; }
  bool empty() const { return root_ == nullptr; }

 private:
  NodePtr root_;
};

struct ProductLaw {
  EllipticLaw factor_a;
  EllipticLaw factor_b;
};

/// Folds Shift/Scale/Sum of elliptic leaves into a single law; empty when the
/// tree contains a Product.
std::optional<EllipticLaw> reduce_to_elliptic(const EnsembleSpec& spec);

/// Accepts a top-level Product whose two factors reduce to elliptic laws.
std::optional<ProductLaw> reduce_to_product(const EnsembleSpec& spec);

}  // namespace qfree
