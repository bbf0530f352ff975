// Copyright (C) 2026 The drc authors
//
// SPDX-License-Identifier: Apache-2.0
//

#include "drc/service.hpp"

#include <httplib.h>
#include <json.hpp>

#include <charconv>

#include "drc/errors.hpp"

namespace drc {

using json = nlohmann::ordered_json;

namespace {

json type_list(ConstraintSet s) {
  auto a = json::array();
  for (auto t : s.members()) a.push_back(std::string(abbreviation(t)));
  return a;
}

json coherence_doc(const CoherenceRecord& r) {
  json j;
  j["x"] = r.x;
  for (auto t : kAllConstraintTypes) j[std::string(abbreviation(t))] = r.flags.contains(t);
  j["Ch"] = r.coherent;
  j["Notes"] = r.notes;
  return j;
}

json redundancy_doc(const RedundancyRecord& r) {
  return json{{"DRCCombination", r.x}, {"Redundancy", r.token()}, {"Notes", r.notes}};
}

json schema_doc(const SchemaState& s) {
  json j;
  j["name"] = s.name;
  j["set"] = s.set_name;
  j["elements"] = s.domain().elements();
  j["view"] = s.is_view();
  auto pairs = json::array();
  const auto inst = s.instance();
  for (const auto& p : inst.pairs()) pairs.push_back({inst.domain().element(p.from), inst.domain().element(p.to)});
  j["pairs"] = std::move(pairs);
  j["checked"] = type_list(s.checked);
  j["redundant"] = type_list(s.redundant);
  j["enforced"] = type_list(s.enforced());
  j["backend"] = s.backend;
  if (s.pending)
    j["pending"] = json{{"type", std::string(abbreviation(s.pending->type))}, {"Notes", s.pending->notes}};
  else
    j["pending"] = nullptr;
  return j;
}

json outcome_doc(const Outcome& o) {
  json j;
  j["status"] = std::string(to_string(o.status));
  j["message"] = o.message;
  j["backend"] = o.backend;
  j["lookups"] = o.lookups;
  auto v = json::array();
  for (const auto& x : o.violations.violations)
    v.push_back({{"type", std::string(abbreviation(x.type))}, {"witness", to_string(x.witness, o.state.domain())}});
  j["violations"] = std::move(v);
  j["state"] = schema_doc(o.state);
  return j;
}

HttpResponse reply(int status, const json& body) { return {status, body.dump(2) + "\n", "application/json"}; }

HttpResponse error(int status, std::string_view kind, std::string_view message) {
  return reply(status, json{{"error", std::string(kind)}, {"message", std::string(message)}});
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    std::size_t j = i;
    while (j < path.size() && path[j] != '/') ++j;
    if (j > i) parts.push_back(httplib::detail::decode_url(std::string(path.substr(i, j - i)), false));
    i = j;
  }
  return parts;
}

ConstraintType parse_type(const std::string& text) {
  auto t = type_from_abbreviation(text);
  if (!t) throw UnknownAbbreviation("unknown constraint abbreviation '" + text + "'");
  return *t;
}

json parse_body(std::string_view body) {
  try {
    return body.empty() ? json::object() : json::parse(body);
  } catch (const json::exception& e) {
    throw MalformedRelation(std::string("request body is not valid JSON: ") + e.what());
  }
}

std::vector<NamedPair> pair_list(const json& j, const char* key) {
  std::vector<NamedPair> out;
  if (!j.contains(key)) return out;
  if (!j[key].is_array()) throw InvalidTransaction(std::string("'") + key + "' must be an array");
  for (const auto& p : j[key]) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
      throw InvalidTransaction("each pair must be a 2-element array of element names");
    out.push_back({p[0].get<std::string>(), p[1].get<std::string>()});
  }
  return out;
}

std::optional<int> parse_x(const std::string& text) {
  int v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || v < 1 || v > kMaxCombination) return std::nullopt;
  return v;
}

}  // namespace

std::string coherence_json(const CoherenceRecord& record) { return coherence_doc(record).dump(2); }
std::string redundancy_json(const RedundancyRecord& record) { return redundancy_doc(record).dump(2); }
std::string schema_state_json(const SchemaState& state) { return schema_doc(state).dump(2); }
std::string outcome_json(const Outcome& outcome) { return outcome_doc(outcome).dump(2); }

std::string report_json(const VerificationReport& report) {
  json j;
  j["sizes"] = report.sizes;
  auto claims = json::array();
  for (const auto& c : report.claims) {
    json cj{{"id", c.id}, {"statement", c.statement}, {"reading", c.reading}, {"variant", c.variant},
            {"holds", c.holds_everywhere()}};
    auto outs = json::array();
    for (const auto& o : c.outcomes) {
      json oj{{"n", o.n}, {"holds", o.holds}, {"violating_relations", o.violating_relations}};
      if (o.counterexample) {
        oj["counterexample"] = *o.counterexample;
        oj["counterexample_mask"] = o.counterexample_mask.to_string();
        oj["reverified"] = o.reverified;
      }
      outs.push_back(std::move(oj));
    }
    cj["outcomes"] = std::move(outs);
    claims.push_back(std::move(cj));
  }
  j["claims"] = std::move(claims);
  j["cross_size_discrepancies"] = report.cross_size_discrepancies;
  j["mask_discrepancies"] = report.mask_discrepancies;
  j["tensions"] = report.tensions;
  j["text"] = report.to_text();
  return j.dump(2);
}

struct ApiSession::Entry {
  std::mutex writer;
  mutable std::mutex snap;
  std::shared_ptr<const SchemaState> state;
  Clock::time_point pending_since{};

  std::shared_ptr<const SchemaState> load() const {
    std::lock_guard lock(snap);
    return state;
  }
  void store(SchemaState s) {
    auto next = std::make_shared<const SchemaState>(std::move(s));
    std::lock_guard lock(snap);
    state = std::move(next);
  }
};

ApiSession::ApiSession(std::shared_ptr<const Catalog> catalog, ServiceOptions options)
    : engine_(std::move(catalog)), options_(std::move(options)) {}

ApiSession::~ApiSession() = default;

std::shared_ptr<ApiSession::Entry> ApiSession::entry(const std::string& name) const {
  std::shared_lock lock(registry_mu_);
  auto it = registry_.find(name);
  if (it == registry_.end()) throw UnknownRelation("no relation named '" + name + "'");
  return it->second;
}

// Caller holds e.writer.
void ApiSession::expire(Entry& e) {
  const auto s = e.load();
  if (s->pending && options_.now() - e.pending_since >= options_.confirmation_timeout)
    e.store(engine_.confirm_universal(*s, false).state);
}

SchemaState ApiSession::relation(const std::string& name) {
  auto e = entry(name);
  auto s = e->load();
  if (s->pending && options_.now() - e->pending_since >= options_.confirmation_timeout) {
    std::lock_guard lock(e->writer);
    expire(*e);
    s = e->load();
  }
  return *s;
}

std::vector<std::string> ApiSession::relation_names() const {
  std::shared_lock lock(registry_mu_);
  std::vector<std::string> out;
  for (const auto& [name, _] : registry_) out.push_back(name);
  return out;
}

SchemaState ApiSession::create_relation(SchemaState state) {
  state.backend = engine_.backend();
  auto e = std::make_shared<Entry>();
  e->store(state);
  std::unique_lock lock(registry_mu_);
  if (!registry_.emplace(state.name, e).second)
    throw AlreadyMember("a relation named '" + state.name + "' already exists");
  return state;
}

HttpResponse ApiSession::mutate(const std::string& name, const std::function<Outcome(const SchemaState&)>& op) {
  auto e = entry(name);
  std::lock_guard lock(e->writer);
  expire(*e);
  const auto before = e->load();
  auto outcome = op(*before);
  if (!(outcome.state == *before)) {
    if (outcome.state.pending && !before->pending) e->pending_since = options_.now();
    e->store(outcome.state);
  }
  return reply(outcome.status == OutcomeStatus::Rejected ? 422 : 200, outcome_doc(outcome));
}

HttpResponse ApiSession::verify_report() {
  std::call_once(report_once_, [&] {
    std::vector<AchievableMaskIndex> built;
    built.reserve(options_.verify_sizes.size());
    for (int n : options_.verify_sizes) built.push_back(build_index(n));
    std::vector<const AchievableMaskIndex*> ptrs;
    for (const auto& ix : built) ptrs.push_back(&ix);
    report_body_ = report_json(verify_claims(ptrs)) + "\n";
  });
  return {200, report_body_, "application/json"};
}

HttpResponse ApiSession::handle(std::string_view method, std::string_view path, std::string_view body) {
  try {
    return route(method, split_path(path), body);
  } catch (const UnknownRelation& e) {
    return error(404, "UnknownRelation", e.what());
  } catch (const PendingConfirmationConflict& e) {
    return error(409, "PendingConfirmationConflict", e.what());
  } catch (const NoPendingConfirmation& e) {
    return error(409, "NoPendingConfirmation", e.what());
  } catch (const AlreadyMember& e) {
    return error(409, "AlreadyMember", e.what());
  } catch (const NotAMember& e) {
    return error(422, "NotAMember", e.what());
  } catch (const UnknownAbbreviation& e) {
    return error(422, "UnknownAbbreviation", e.what());
  } catch (const ViewMutation& e) {
    return error(422, "ViewMutation", e.what());
  } catch (const UnknownElement& e) {
    return error(422, "UnknownElement", e.what());
  } catch (const InvalidTransaction& e) {
    return error(422, "InvalidTransaction", e.what());
  } catch (const MalformedRelation& e) {
    return error(422, "MalformedRelation", e.what());
  } catch (const json::exception& e) {
    return error(422, "MalformedRequest", e.what());
  } catch (const Error& e) {
    return error(500, "Error", e.what());
  }
}

HttpResponse ApiSession::route(std::string_view method, const std::vector<std::string>& parts,
                               std::string_view body) {
  const auto n = parts.size();
  auto is = [&](std::string_view m, std::initializer_list<std::string_view> fixed) {
    if (method != m || n != fixed.size()) return false;
    std::size_t i = 0;
    for (auto f : fixed) {
      if (f != "*" && parts[i] != f) return false;
      ++i;
    }
    return true;
  };

  if (is("GET", {"relations"})) return reply(200, json{{"relations", relation_names()}});
  if (is("POST", {"relations"})) {
    const auto j = parse_body(body);
    if (!j.contains("name") || !j["name"].is_string() || j["name"].get<std::string>().empty())
      throw MalformedRelation("relation needs a non-empty 'name'");
    json rel{{"elements", j.value("elements", json::array())}, {"pairs", j.value("pairs", json::array())}};
    auto instance = parse_relation_document(rel.dump());
    auto s = make_schema(j["name"].get<std::string>(), instance.domain_ptr(), engine_.backend());
    s.set_name = j.value("set", std::string("S"));
    s.relation = std::move(instance);
    return reply(201, schema_doc(create_relation(std::move(s))));
  }
  if (is("GET", {"relations", "*"})) return reply(200, schema_doc(relation(parts[1])));
  if (is("POST", {"relations", "*", "constraints"})) {
    const auto j = parse_body(body);
    const auto c = parse_type(j.at("type").get<std::string>());
    return mutate(parts[1], [&](const SchemaState& s) { return engine_.add_constraint(s, c); });
  }
  if (is("DELETE", {"relations", "*", "constraints", "*"})) {
    const auto c = parse_type(parts[3]);
    return mutate(parts[1], [&](const SchemaState& s) { return engine_.remove_constraint(s, c); });
  }
  if (is("POST", {"relations", "*", "confirm"})) {
    const auto j = parse_body(body);
    const auto answer = j.at("answer").get<std::string>();
    if (answer != "yes" && answer != "no") throw MalformedRelation("answer must be \"yes\" or \"no\"");
    return mutate(parts[1], [&](const SchemaState& s) { return engine_.confirm_universal(s, answer == "yes"); });
  }
  if (is("POST", {"relations", "*", "pairs"})) {
    const auto j = parse_body(body);
    Transaction tx{pair_list(j, "inserts"), pair_list(j, "deletes")};
    return mutate(parts[1], [&](const SchemaState& s) { return engine_.apply_pairs(s, tx); });
  }
  if (is("GET", {"catalog", "coherence", "*"})) {
    const auto x = parse_x(parts[2]);
    if (!x) return error(404, "OutOfRange", "combination code must be 1..2047");
    const auto found = engine_.catalog().peek(*x);
    if (found.missing()) return error(404, "Missing", "combination " + parts[2] + " is not stored");
    return reply(200, coherence_doc(*found.record));
  }
  if (is("GET", {"catalog", "redundancies", "*"})) {
    const auto x = parse_x(parts[2]);
    if (!x) return error(404, "OutOfRange", "combination code must be 1..2047");
    const auto found = engine_.catalog().peek(*x);
    if (found.missing()) return error(404, "Missing", "combination " + parts[2] + " is not stored");
    auto rows = json::array(), extra = json::array();
    for (const auto& r : found.redundancies) rows.push_back(redundancy_doc(r));
    for (const auto& r : found.additional) extra.push_back(redundancy_doc(r));
    return reply(200, json{{"DRCCombination", *x}, {"redundancies", rows}, {"additional_redundancies", extra}});
  }
  if (is("GET", {"verify", "report"})) return verify_report();
  return error(404, "NotFound", "no route for " + std::string(method) + " /" +
                                    [&] {
                                      std::string p;
                                      for (const auto& s : parts) p += (p.empty() ? "" : "/") + s;
                                      return p;
                                    }());
}

void ApiSession::install(httplib::Server& server) {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    auto r = handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server.Get(".*", forward);
  server.Post(".*", forward);
  server.Delete(".*", forward);
}

bool serve(ApiSession& session, const std::string& host, int port) {
  httplib::Server server;
  session.install(server);
  return server.listen(host, port);
}

}  // namespace drc
