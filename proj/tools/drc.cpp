// Copyright (C) 2026 The drc authors
//
// SPDX-License-Identifier: Apache-2.0
//

// drc: command-line front end for the constraint engine.
//
// Exit status: 0 success, 2 the engine rejected the request, 1 any error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "drc/errors.hpp"
#include "drc/oracle.hpp"
#include "drc/rulebase.hpp"
#include "drc/service.hpp"
#include "drc/store.hpp"

namespace {

using namespace drc;

constexpr int kRejected = 2;

std::string catalog_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("DRC_CATALOG_DIR")) return env;
  return {};
}

AchievableMaskIndex read_index(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot read " + path);
  return load_index(in);
}

/// Catalog from a directory, else generated for `backend`.
std::shared_ptr<const Catalog> open_catalog(const std::string& dir, const std::string& backend) {
  if (!dir.empty()) {
    auto bundle = load_bundle(dir);
    const bool oracle = std::any_of(bundle.tables.corollaries.begin(), bundle.tables.corollaries.end(),
                                    [](const auto& c) { return c.id == "ORACLE.IMPLIED"; });
    return std::make_shared<const Catalog>(std::move(bundle.tables), oracle ? "oracle" : "rulebase");
  }
  if (backend == "oracle") return std::make_shared<const Catalog>(generate_oracle_tables(build_index(4)), "oracle");
  if (backend != "rulebase") throw SchemaMismatch("unknown backend '" + backend + "'");
  return std::make_shared<const Catalog>(generate_rulebase_tables(), "rulebase");
}

void write_or_print(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f || !(f << text)) throw IoFailure("cannot write " + out);
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

ConstraintType type_arg(const std::string& text) {
  auto t = type_from_abbreviation(text);
  if (!t) throw UnknownAbbreviation("unknown constraint abbreviation '" + text + "'");
  return *t;
}

int report(const Outcome& o) {
  if (!o.message.empty()) std::cout << o.message << "\n";
  const auto witnesses = o.violations.to_string(o.state.domain());
  if (o.message.find(witnesses) == std::string::npos) std::cout << witnesses << "\n";
  std::cout << "[" << o.backend << ", " << o.lookups << " lookups]\n";
  return o.status == OutcomeStatus::Accepted ? 0 : kRejected;
}

void show(const SchemaState& s) {
  std::cout << "relation " << s.name << " over " << s.set_name << " {";
  for (std::size_t i = 0; i < s.domain().elements().size(); ++i)
    std::cout << (i ? ", " : "") << s.domain().elements()[i];
  std::cout << "}\n";
  std::cout << (s.is_view() ? "view    " : "pairs   ") << s.instance().to_string() << "\n";
  std::cout << "checked   " << s.checked.to_string() << "\n";
  std::cout << "redundant " << s.redundant.to_string() << "\n";
  std::cout << "enforced  " << s.enforced().to_string() << "\n";
  std::cout << "backend   " << s.backend << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dyadic relation constraint sets: oracle, metacatalog and enforcement engine"};
  app.require_subcommand(1);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Exhaustive relation enumeration");
  oracle->require_subcommand(1);
  int size = 4, threads = 0;
  bool allow_six = false;
  std::string out;
  auto* build = oracle->add_subcommand("build", "Enumerate every relation on n elements and save the mask index");
  build->add_option("--size,-n", size, "Domain size")->check(CLI::Range(2, 6));
  build->add_option("--out,-o", out, "Index file")->required();
  build->add_option("--threads", threads, "Worker threads (0 = all cores)");
  build->add_flag("--allow-size-six", allow_six, "Permit n = 6 (hours of CPU)");

  std::string sizes_text = "4";
  std::vector<std::string> index_files;
  bool as_json = false;
  auto* verify = oracle->add_subcommand("verify", "Check every proposition and corollary by enumeration");
  verify->add_option("--sizes", sizes_text, "Comma separated domain sizes");
  verify->add_option("--index", index_files, "Prebuilt index files (instead of --sizes)");
  verify->add_option("--out,-o", out, "Report file (default stdout)");
  verify->add_option("--threads", threads, "Worker threads (0 = all cores)");
  verify->add_flag("--json", as_json, "Emit JSON");

  // tables
  auto* tables = app.add_subcommand("tables", "Metacatalog tables");
  tables->require_subcommand(1);
  std::string backend = "rulebase";
  auto* generate = tables->add_subcommand("generate", "Write the four metacatalog tables");
  generate->add_option("--out,-o", out, "Directory")->required();
  generate->add_option("--backend", backend, "rulebase or oracle")->check(CLI::IsMember({"rulebase", "oracle"}));
  generate->add_option("--size,-n", size, "Domain size for the oracle backend")->check(CLI::Range(2, 5));
  auto* diff = tables->add_subcommand("diff", "Compare rulebase verdicts with the oracle");
  std::string catalog_flag;
  std::vector<int> diff_sizes;
  diff->add_option("--index", index_files, "Index files; two or more are compared with each other");
  diff->add_option("--size,-n", diff_sizes, "Build the index for these sizes instead");
  diff->add_option("--catalog", catalog_flag, "Table directory (default: generated rulebase)");
  diff->add_option("--out,-o", out, "Report file (default stdout)");

  // schema
  auto* schema = app.add_subcommand("schema", "Relation schemas stored as JSON files");
  schema->require_subcommand(1);
  std::string file, name = "R", set_name = "S", elements, type_text, from, to, confirm;
  auto* create = schema->add_subcommand("create", "Create an empty schema file");
  create->add_option("file", file)->required();
  create->add_option("--name", name, "Relation name");
  create->add_option("--set", set_name, "Carrier set name");
  create->add_option("--elements", elements, "Comma separated elements")->required();
  create->add_option("--backend", backend, "rulebase or oracle")->check(CLI::IsMember({"rulebase", "oracle"}));

  auto* add = schema->add_subcommand("add-constraint", "Add a constraint type");
  add->add_option("file", file)->required();
  add->add_option("type", type_text, "Abbreviation, e.g. AS")->required();
  add->add_option("--confirm", confirm, "Answer to a universality question")->check(CLI::IsMember({"yes", "no"}));
  add->add_option("--catalog", catalog_flag, "Table directory");
  auto* remove = schema->add_subcommand("remove-constraint", "Remove a constraint type");
  remove->add_option("file", file)->required();
  remove->add_option("type", type_text, "Abbreviation, e.g. T")->required();
  remove->add_option("--catalog", catalog_flag, "Table directory");
  auto* insert = schema->add_subcommand("insert", "Insert the pair (from, to)");
  auto* del = schema->add_subcommand("delete", "Delete the pair (from, to)");
  for (auto* cmd : {insert, del}) {
    cmd->add_option("file", file)->required();
    cmd->add_option("from", from)->required();
    cmd->add_option("to", to)->required();
    cmd->add_option("--catalog", catalog_flag, "Table directory");
  }
  auto* show_cmd = schema->add_subcommand("show", "Print a schema");
  show_cmd->add_option("file", file)->required();

  // serve
  int port = 8080;
  std::string host = "127.0.0.1";
  auto* serve_cmd = app.add_subcommand("serve", "Serve the REST API");
  serve_cmd->add_option("--port,-p", port, "Port");
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--catalog", catalog_flag, "Table directory (default: $DRC_CATALOG_DIR, else generated)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }

  try {
    const IndexOptions opts{threads, allow_six};
    if (*build) {
      const auto start = std::chrono::steady_clock::now();
      const auto ix = build_index(size, opts);
      const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
      std::ofstream f(out);
      if (!f) throw IoFailure("cannot write " + out);
      save_index(ix, f);
      std::cout << "n=" << size << ": " << ix.relation_count() << " relations, " << ix.masks().size()
                << " strong masks, " << ix.masks(InEuclideanReading::Weak).size() << " weak masks, " << took.count()
                << " s\n";
      return 0;
    }
    if (*verify) {
      std::vector<AchievableMaskIndex> built;
      if (!index_files.empty()) {
        for (const auto& f : index_files) built.push_back(read_index(f));
      } else {
        for (const auto& s : split_commas(sizes_text)) built.push_back(build_index(std::stoi(s), opts));
      }
      std::vector<const AchievableMaskIndex*> ptrs;
      for (const auto& ix : built) ptrs.push_back(&ix);
      const auto rep = verify_claims(ptrs, opts);
      write_or_print(as_json ? report_json(rep) + "\n" : rep.to_text(), out);
      return 0;
    }
    if (*generate) {
      CatalogBundle b;
      b.tables = backend == "oracle" ? generate_oracle_tables(build_index(size)) : generate_rulebase_tables();
      save_bundle(b, out);
      std::cout << "wrote " << kCorollariesFile << ", " << kCoherenciesFile << ", " << kRedundanciesFile << ", "
                << kAdditionalFile << " to " << out << " (" << b.tables.coherencies.size() << " combinations, "
                << b.tables.redundancies.size() << " redundancy rows)\n";
      return 0;
    }
    if (*diff) {
      const auto dir = catalog_dir(catalog_flag);
      const CatalogTables t = dir.empty() ? generate_rulebase_tables() : load_bundle(dir).tables;
      std::vector<AchievableMaskIndex> built;
      for (const auto& f : index_files) built.push_back(read_index(f));
      for (int n : diff_sizes) built.push_back(build_index(n));
      if (built.empty()) built.push_back(build_index(4));
      std::string text;
      std::vector<DiffReport> reports;
      for (const auto& ix : built) {
        reports.push_back(diff_against_oracle(t, ix));
        text += reports.back().to_text();
      }
      for (std::size_t i = 1; i < reports.size(); ++i) {
        const auto rows = compare_diff_reports(reports[0], reports[i]);
        text += "\nn=" + std::to_string(reports[0].n) + " vs n=" + std::to_string(reports[i].n) + ": " +
                (rows.empty() ? std::string("identical") : std::to_string(rows.size()) + " differing rows") + "\n";
        for (const auto& r : rows) text += "  " + r + "\n";
      }
      write_or_print(text, out);
      return 0;
    }
    if (*create) {
      std::vector<std::string> names = split_commas(elements);
      auto s = make_schema(name, std::make_shared<const Domain>(names), backend);
      s.set_name = set_name;
      save_schema(s, file);
      show(s);
      return 0;
    }
    if (*show_cmd) {
      show(load_schema(file));
      return 0;
    }
    if (*add || *remove || *insert || *del) {
      auto s = load_schema(file);
      const Engine engine(open_catalog(catalog_dir(catalog_flag), s.backend));
      Outcome o = *add      ? engine.add_constraint(s, type_arg(type_text))
                  : *remove ? engine.remove_constraint(s, type_arg(type_text))
                            : engine.apply_pairs(s, *insert ? Transaction{{{from, to}}, {}}
                                                            : Transaction{{}, {{from, to}}});
      if (o.status == OutcomeStatus::NeedsConfirmation) {
        std::cout << o.message << "\n";
        if (confirm.empty()) {
          std::cout << "not changed; rerun with --confirm yes or --confirm no\n";
          return kRejected;
        }
        o = engine.confirm_universal(o.state, confirm == "yes");
      }
      const int code = report(o);
      if (o.status == OutcomeStatus::Accepted) save_schema(o.state, file);
      return code;
    }
    if (*serve_cmd) {
      ApiSession session(open_catalog(catalog_dir(catalog_flag), "rulebase"));
      std::cout << "serving on http://" << host << ":" << port << " (" << session.engine().backend()
                << " catalog)\n"
                << std::flush;
      if (!serve(session, host, port)) throw IoFailure("cannot listen on " + host + ":" + std::to_string(port));
      return 0;
    }
  } catch (const drc::Error& e) {
    std::cerr << "drc: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "drc: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
