#include "qfree/spec_json.hpp"

#include <json.hpp>
#include <stdexcept>

namespace qfree {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("spec" + path + ": " + what);
}

Complex parse_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(path, "expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

EnsembleSpec parse_node(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  if (!j.contains("type") || !j["type"].is_string()) fail(path, "missing \"type\"");
  const std::string type = j["type"].get<std::string>();

  if (type == "gue") return EnsembleSpec::gue();
  if (type == "ginibre") return EnsembleSpec::ginibre();
  if (type == "elliptic") {
    const double mu = j.value("mu", 0.0);
    const double sigma = j.value("sigma", 1.0);
    const double phi = j.value("phi", 0.0);
    const Complex x = j.contains("x") ? parse_complex(j["x"], path + ".x") : Complex(0, 0);
    if (!(mu >= -1.0 && mu <= 1.0)) fail(path + ".mu", "mu must lie in [-1, 1]");
    if (!(sigma > 0.0)) fail(path + ".sigma", "sigma must be positive");
    return EnsembleSpec::elliptic(EllipticLaw{x, sigma, mu, phi});
  }
  if (type == "shift") {
    if (!j.contains("x")) fail(path, "shift needs \"x\"");
    if (!j.contains("of")) fail(path, "shift needs \"of\"");
    return EnsembleSpec::shift(parse_complex(j["x"], path + ".x"),
                               parse_node(j["of"], path + ".of"));
  }
  if (type == "scale") {
    if (!j.contains("alpha")) fail(path, "scale needs \"alpha\"");
    if (!j.contains("of")) fail(path, "scale needs \"of\"");
    const Complex alpha = parse_complex(j["alpha"], path + ".alpha");
    if (std::abs(alpha) == 0.0) fail(path + ".alpha", "alpha must be nonzero");
    return EnsembleSpec::scale(alpha, parse_node(j["of"], path + ".of"));
  }
  if (type == "sum") {
    if (!j.contains("terms") || !j["terms"].is_array() || j["terms"].empty())
      fail(path, "sum needs a nonempty \"terms\" array");
    std::vector<EnsembleSpec> terms;
    int k = 0;
    for (const auto& t : j["terms"])
      terms.push_back(parse_node(t, path + ".terms[" + std::to_string(k++) + "]"));
    return EnsembleSpec::sum(std::move(terms));
  }
  if (type == "product") {
    if (!j.contains("a") || !j.contains("b")) fail(path, "product needs \"a\" and \"b\"");
    return EnsembleSpec::product(parse_node(j["a"], path + ".a"),
                                 parse_node(j["b"], path + ".b"));
  }
  fail(path + ".type", "unknown type \"" + type + "\"");
}

json node_to_json(const EnsembleSpec::NodePtr& node) {
  using Kind = EnsembleSpec::Kind;
  json j;
  switch (node->kind) {
    case Kind::Gue:
      j["type"] = "gue";
      break;
    case Kind::Ginibre:
      j["type"] = "ginibre";
      break;
    case Kind::Elliptic:
      j["type"] = "elliptic";
      j["mu"] = node->law.mu;
      j["sigma"] = node->law.sigma;
      j["phi"] = node->law.phi;
      j["x"] = {node->law.center.real(), node->law.center.imag()};
      break;
    case Kind::Shift:
      j["type"] = "shift";
      j["x"] = {node->param.real(), node->param.imag()};
      j["of"] = node_to_json(node->children[0]);
      break;
    case Kind::Scale:
      j["type"] = "scale";
      j["alpha"] = {node->param.real(), node->param.imag()};
      j["of"] = node_to_json(node->children[0]);
      break;
    case Kind::Sum: {
      j["type"] = "sum";
      j["terms"] = json::array();
      for (const auto& c : node->children) j["terms"].push_back(node_to_json(c));
      break;
    }
    case Kind::Product:
      j["type"] = "product";
      j["a"] = node_to_json(node->children[0]);
      j["b"] = node_to_json(node->children[1]);
      break;
  }
  return j;
}

}  // namespace

EnsembleSpec parse_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("spec: malformed JSON: ") + e.what());
  }
  return parse_node(j, "");
}

std::string spec_to_json(const EnsembleSpec& spec) {
  if (spec.empty()) throw std::invalid_argument("spec_to_json: empty spec");
  return node_to_json(spec.root()).dump();
}

}  // namespace qfree
