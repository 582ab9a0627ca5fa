#include "loglin/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace loglin {

using nlohmann::json;

ParsedModel parse_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed model JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("model JSON must be an object");
  if (!doc.contains("variables") || !doc["variables"].is_array())
    throw ValidationError("model JSON needs a \"variables\" array");
  if (!doc.contains("features") || !doc["features"].is_array())
    throw ValidationError("model JSON needs a \"features\" array");

  std::vector<std::uint32_t> cards;
  for (const auto& c : doc["variables"]) {
    if (!c.is_number_unsigned())
      throw ValidationError("cardinalities must be positive integers");
    cards.push_back(c.get<std::uint32_t>());
  }
  if (cards.size() < 2)
    throw ValidationError("a model needs at least 2 variables");
  DomainSpec domain(std::move(cards));  // rejects cardinality < 2

  std::vector<Feature> features;
  std::size_t idx = 0;
  for (const auto& jf : doc["features"]) {
    const std::string label = "feature " + std::to_string(idx);
    if (!jf.is_array()) throw ValidationError(label + ": not an array");
    std::vector<Assignment> as;
    for (const auto& ja : jf) {
      if (!ja.is_array() || ja.size() != 2 || !ja[0].is_number_unsigned() ||
          !ja[1].is_number_unsigned())
        throw ValidationError(label + ": assignments must be [var,val] pairs");
      as.push_back({ja[0].get<std::size_t>(), ja[1].get<std::uint32_t>()});
    }
    try {
      features.emplace_back(std::move(as));
    } catch (const ValidationError& e) {
      throw ValidationError(label + ": " + e.what());
    }
    ++idx;
  }

  std::vector<double> weights;
  if (doc.contains("weights")) {
    if (!doc["weights"].is_array())
      throw ValidationError("\"weights\" must be an array");
    for (const auto& w : doc["weights"]) {
      if (!w.is_number()) throw ValidationError("weights must be numbers");
      weights.push_back(w.get<double>());
    }
  }

  ParsedModel out;
  out.model = make_model(std::move(domain), std::move(features),
                         std::move(weights), &out.warnings);
  return out;
}

ParsedModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::string serialize_model(const StructureModel& m, int indent) {
  json doc;
  doc["variables"] = m.domain.cards;
  json jfeats = json::array();
  for (const Feature& f : m.features) {
    json jf = json::array();
    for (const Assignment& a : f.assignments())
      jf.push_back(json::array({a.var, a.value}));
    jfeats.push_back(std::move(jf));
  }
  doc["features"] = std::move(jfeats);
  if (m.has_weights()) doc["weights"] = m.weights;
  return doc.dump(indent);
}

}  // namespace loglin
