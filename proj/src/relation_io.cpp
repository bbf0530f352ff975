// Copyright (C) 2026 The drc authors
//
// SPDX-License-Identifier: Apache-2.0
//

#include <json.hpp>

#include "drc/errors.hpp"
#include "drc/relation.hpp"

namespace drc {

DyadicRelation parse_relation_document(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedRelation(std::string("relation document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("elements") || !doc["elements"].is_array())
    throw MalformedRelation("relation document needs an 'elements' array");

  std::vector<std::string> elements;
  for (const auto& e : doc["elements"]) {
    if (!e.is_string()) throw MalformedRelation("elements must be strings");
    elements.push_back(e.get<std::string>());
  }
  auto domain = std::make_shared<const Domain>(std::move(elements));
  DyadicRelation rel(domain);

  if (doc.contains("pairs")) {
    if (!doc["pairs"].is_array()) throw MalformedRelation("'pairs' must be an array");
    for (const auto& p : doc["pairs"]) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
        throw MalformedRelation("each pair must be a 2-element array of element names");
      auto from = p[0].get<std::string>();
      auto to = p[1].get<std::string>();
      if (!rel.insert(domain->require_index(from), domain->require_index(to)))
        throw MalformedRelation("duplicate pair (" + from + "," + to + ")");
    }
  }
  return rel;
}

std::string relation_document(const DyadicRelation& rel) {
  nlohmann::ordered_json doc;
  doc["elements"] = rel.domain().elements();
  auto pairs = nlohmann::ordered_json::array();
  for (const auto& p : rel.pairs())
    pairs.push_back({rel.domain().element(p.from), rel.domain().element(p.to)});
  doc["pairs"] = std::move(pairs);
  return doc.dump(2) + "\n";
}

}  // namespace drc
