#pragma once

#include <string>
#include <vector>

#include "loglin/types.hpp"

namespace loglin {

struct ParsedModel {
  StructureModel model;
  std::vector<std::string> warnings;
};

// Model file format (JSON, UTF-8):
//   { "variables": [c_0, ..., c_{n-1}],
//     "features":  [ [[var,val], ...], ... ],
//     "weights":   [w_0, ...] }           // optional
// Assignments may arrive unsorted; they are canonicalized. Duplicate features
// are merged with a warning (first weight kept). At least two variables, all
// cardinalities >= 2.
ParsedModel parse_model(const std::string& text);

ParsedModel load_model_file(const std::string& path);

// Canonical serialization; parse_model(serialize_model(m)).model == m.
// indent < 0 emits compact single-line JSON.
std::string serialize_model(const StructureModel& m, int indent = -1);

}  // namespace loglin
