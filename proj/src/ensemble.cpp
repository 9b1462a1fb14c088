#include "qfree/ensemble.hpp"

#include <stdexcept>

namespace qfree {

namespace {

EnsembleSpec::NodePtr make_node(EnsembleSpec::Node n) {
  return std::make_shared<const EnsembleSpec::Node>(std::move(n));
}

}  // namespace

EnsembleSpec EnsembleSpec::gue() {
  return EnsembleSpec(make_node({Kind::Gue, EllipticLaw::gue(), {}, {}}));
}

EnsembleSpec EnsembleSpec::ginibre() {
  return EnsembleSpec(make_node({Kind::Ginibre, EllipticLaw::ginibre(), {}, {}}));
}

EnsembleSpec EnsembleSpec::elliptic(const EllipticLaw& law) {
  return EnsembleSpec(make_node({Kind::Elliptic, law, {}, {}}));
}

EnsembleSpec EnsembleSpec::shift(Complex x, EnsembleSpec of) {
  if (of.empty()) throw std::invalid_argument("shift of empty spec");
  return EnsembleSpec(make_node({Kind::Shift, {}, x, {of.root()}}));
}

EnsembleSpec EnsembleSpec::scale(Complex alpha, EnsembleSpec of) {
  if (of.empty()) throw std::invalid_argument("scale of empty spec");
  return EnsembleSpec(make_node({Kind::Scale, {}, alpha, {of.root()}}));
}

EnsembleSpec EnsembleSpec::sum(std::vector<EnsembleSpec> terms) {
  if (terms.empty()) throw std::invalid_argument("sum needs at least one term");
  std::vector<NodePtr> children;
  children.reserve(terms.size());
  for (auto& t : terms) {
    if (t.empty()) throw std::invalid_argument("sum of empty spec");
    children.push_back(t.root());
  }
  return EnsembleSpec(make_node({Kind::Sum, {}, {}, std::move(children)}));
}

EnsembleSpec EnsembleSpec::product(EnsembleSpec a, EnsembleSpec b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("product of empty spec");
  return EnsembleSpec(make_node({Kind::Product, {}, {}, {a.root(), b.root()}}));
}

namespace {

std::optional<EllipticLaw> reduce_node(const EnsembleSpec::NodePtr& node) {
  using Kind = EnsembleSpec::Kind;
  if (!node) return std::nullopt;
  switch (node->kind) {
    case Kind::Gue:
    case Kind::Ginibre:
    case Kind::Elliptic:
      return node->law;
    case Kind::Shift: {
      const auto child = reduce_node(node->children[0]);
      if (!child) return std::nullopt;
      return scale_shift_law(*child, Complex(1, 0), node->param);
    }
    case Kind::Scale: {
      const auto child = reduce_node(node->children[0]);
      if (!child) return std::nullopt;
      return scale_shift_law(*child, node->param, Complex(0, 0));
    }
    case Kind::Sum: {
      std::optional<EllipticLaw> acc;
      for (const auto& c : node->children) {
        const auto child = reduce_node(c);
        if (!child) return std::nullopt;
        acc = acc ? add_elliptic(*acc, *child) : *child;
      }
      return acc;
    }
    case Kind::Product:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::optional<EllipticLaw> reduce_to_elliptic(const EnsembleSpec& spec) {
  return reduce_node(spec.root());
}

std::optional<ProductLaw> reduce_to_product(const EnsembleSpec& spec) {
  if (spec.empty() || spec.root()->kind != EnsembleSpec::Kind::Product) return std::nullopt;
  const auto a = reduce_node(spec.root()->children[0]);
  const auto b = reduce_node(spec.root()->children[1]);
  if (!a || !b) return std::nullopt;
  return ProductLaw{*a, *b};
}

}  // namespace qfree
