#pragma once

#include <string>

#include "qfree/ensemble.hpp"

namespace qfree {

/// Parses the ensemble-spec JSON schema:
///   {"type":"elliptic","mu":M,"sigma":S,"phi":P,"x":[re,im]}
///   {"type":"gue"} | {"type":"ginibre"}
///   {"type":"shift","x":[re,im],"of":SPEC}
///   {"type":"scale","alpha":[re,im],"of":SPEC}
///   {"type":"sum","terms":[SPEC,...]}
///   {"type":"product","a":SPEC,"b":SPEC}
/// Errors carry the JSON path of the offending node.
EnsembleSpec parse_spec(const std::string& json_text);

std::string spec_to_json(const EnsembleSpec& spec);

}  // namespace qfree
