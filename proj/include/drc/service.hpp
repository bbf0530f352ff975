// Copyright (C) 2026 The drc authors
//
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DRC_SERVICE_HPP_
#define DRC_SERVICE_HPP_

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "drc/engine.hpp"
#include "drc/oracle.hpp"

namespace httplib {
class Server;
}

namespace drc {

using Clock = std::chrono::steady_clock;

struct ServiceOptions {
  /// Pending universality confirmations older than this are answered "no".
  std::chrono::seconds confirmation_timeout{300};
  /// Sizes for GET /verify/report; the report is built on first request.
  std::vector<int> verify_sizes{4};
  std::function<Clock::time_point()> now = [] { return Clock::now(); };
};

// JSON renderings shared by the REST layer and the CLI.
std::string coherence_json(const CoherenceRecord& record);
std::string redundancy_json(const RedundancyRecord& record);
std::string schema_state_json(const SchemaState& state);
std::string outcome_json(const Outcome& outcome);
std::string report_json(const VerificationReport& report);

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Catalog, schema registry and pending confirmations behind the REST API.
/// Safe for concurrent requests: one writer per relation, readers see whole
/// states.
class ApiSession {
 public:
  ApiSession(std::shared_ptr<const Catalog> catalog, ServiceOptions options = {});
  ~ApiSession();

  const Engine& engine() const { return engine_; }

  /// Routes one request. `path` excludes the query string.
  HttpResponse handle(std::string_view method, std::string_view path, std::string_view body);

  /// Registers every route on `server`.
  void install(httplib::Server& server);

  /// Snapshot of a relation, after expiring a stale confirmation. Throws
  /// UnknownRelation.
  SchemaState relation(const std::string& name);
  std::vector<std::string> relation_names() const;
  /// Throws AlreadyMember when the name is taken.
  SchemaState create_relation(SchemaState state);

 private:
  struct Entry;
  std::shared_ptr<Entry> entry(const std::string& name) const;
  void expire(Entry& e);
  HttpResponse mutate(const std::string& name, const std::function<Outcome(const SchemaState&)>& op);
  HttpResponse route(std::string_view method, const std::vector<std::string>& parts, std::string_view body);
  HttpResponse verify_report();

  Engine engine_;
  ServiceOptions options_;
  mutable std::shared_mutex registry_mu_;
  std::map<std::string, std::shared_ptr<Entry>> registry_;
  std::once_flag report_once_;
  std::string report_body_;
};

/// Blocks serving `session` on host:port. Returns false if binding fails.
bool serve(ApiSession& session, const std::string& host, int port);

}  // namespace drc

#endif  // DRC_SERVICE_HPP_
