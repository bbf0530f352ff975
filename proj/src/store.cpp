// Copyright (C) 2026 The drc authors
//
// SPDX-License-Identifier: Apache-2.0
//

#include "drc/store.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "drc/errors.hpp"

namespace drc {

namespace {

std::string quote(std::string_view field) {
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string minimal(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  return quote(field);
}

std::vector<std::string> split_record(std::string_view line, std::string_view file, int line_no) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false, was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty() && !was_quoted) {
      quoted = was_quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur += c;
    }
  }
  if (quoted) throw SchemaMismatch(std::string(file) + ":" + std::to_string(line_no) + ": unterminated quote");
  out.push_back(std::move(cur));
  return out;
}

/// Records after the header; throws SchemaMismatch if the header differs.
std::vector<std::vector<std::string>> read_table(const std::map<std::string, std::string>& files,
                                                 const std::string& name, std::string_view header,
                                                 std::size_t columns) {
  auto it = files.find(name);
  if (it == files.end()) throw SchemaMismatch("missing table file '" + name + "'");
  std::istringstream in(it->second);
  std::string line;
  if (!std::getline(in, line) || line != header)
    throw SchemaMismatch(name + ": expected header '" + std::string(header) + "', found '" + line + "'");
  std::vector<std::vector<std::string>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto rec = split_record(line, name, line_no);
    if (rec.size() != columns)
      throw SchemaMismatch(name + ":" + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                           " fields, found " + std::to_string(rec.size()));
    rows.push_back(std::move(rec));
  }
  return rows;
}

int to_int(const std::string& text, const std::string& where) {
  int v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size())
    throw SchemaMismatch(where + ": '" + text + "' is not an integer");
  return v;
}

bool to_flag(const std::string& text, const std::string& where) {
  if (text == "0") return false;
  if (text == "1") return true;
  throw SchemaMismatch(where + ": flag '" + text + "' is not 0 or 1");
}

std::optional<ConstraintType> redundancy_token(const std::string& text, const std::string& where) {
  if (text == "Universal") return std::nullopt;
  for (auto t : kAllConstraintTypes)
    if (abbreviation(t) == text) return t;
  throw SchemaMismatch(where + ": unknown redundancy '" + text + "'");
}

std::string render_redundancies(std::vector<RedundancyRecord> rows) {
  std::stable_sort(rows.begin(), rows.end(), redundancy_less);
  std::string out = std::string(kRedundanciesHeader) + "\n";
  for (const auto& r : rows) out += std::to_string(r.x) + "," + r.token() + "," + minimal(r.notes) + "\n";
  return out;
}

std::vector<RedundancyRecord> parse_redundancies(const std::map<std::string, std::string>& files,
                                                 const std::string& name) {
  std::vector<RedundancyRecord> out;
  for (const auto& rec : read_table(files, name, kRedundanciesHeader, 3))
    out.push_back({to_int(rec[0], name), redundancy_token(rec[1], name), rec[2]});
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot write " + tmp);
    out << content;
    if (!out.flush()) throw IoFailure("cannot write " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoFailure("cannot replace " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void check_integrity(const CatalogTables& tables) {
  std::set<std::string, std::less<>> ids;
  for (const auto& c : tables.corollaries)
    if (!ids.insert(c.id).second) throw IntegrityViolation("corollary id '" + c.id + "' repeated");
  auto resolve = [&](const std::string& notes, const std::string& where) {
    if (!notes.empty() && !ids.count(notes))
      throw IntegrityViolation(where + ": Notes '" + notes + "' names no corollary");
  };
  std::set<int> xs;
  for (const auto& r : tables.coherencies) {
    const std::string where = "coherence row " + std::to_string(r.x);
    if (r.x < 1 || r.x > kMaxCombination) throw IntegrityViolation(where + ": combination out of range");
    if (!xs.insert(r.x).second) throw IntegrityViolation(where + " repeated");
    if (r.flags != decode(r.x)) throw IntegrityViolation(where + ": flags disagree with the combination code");
    resolve(r.notes, where);
  }
  for (const auto* table : {&tables.redundancies, &tables.additional}) {
    std::set<std::tuple<int, std::string, std::string>> keys;
    for (const auto& r : *table) {
      const std::string where = "redundancy row " + std::to_string(r.x) + "," + r.token();
      if (!xs.count(r.x)) throw IntegrityViolation(where + ": DRCCombination has no coherence row");
      if (r.notes.empty()) throw IntegrityViolation(where + ": empty Notes");
      resolve(r.notes, where);
      if (!keys.emplace(r.x, r.token(), table == &tables.redundancies ? "" : r.notes).second)
        throw IntegrityViolation(where + " repeated");
    }
  }
}

std::map<std::string, std::string> render_bundle(const CatalogBundle& bundle) {
  if (bundle.format_version != kCatalogFormatVersion)
    throw SchemaMismatch("unsupported catalog format_version " + std::to_string(bundle.format_version));
  const auto& t = bundle.tables;
  check_integrity(t);
  std::map<std::string, std::string> files;

  auto cors = t.corollaries;
  std::stable_sort(cors.begin(), cors.end(), [](const auto& a, const auto& b) { return corollary_id_less(a.id, b.id); });
  std::string out = std::string(kCorollariesHeader) + "\n";
  for (const auto& c : cors)
    out += minimal(c.id) + "," + std::string(to_string(c.kind)) + "," + quote(c.description) + "," +
           std::to_string(c.volume) + "," + minimal(c.section) + "\n";
  files[kCorollariesFile] = std::move(out);

  auto rows = t.coherencies;
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
  out = std::string(kCoherenciesHeader) + "\n";
  for (const auto& r : rows) {
    out += std::to_string(r.x);
    for (auto ty : kAllConstraintTypes) out += r.flags.contains(ty) ? ",1" : ",0";
    out += r.coherent ? ",1," : ",0,";
    out += minimal(r.notes) + "\n";
  }
  files[kCoherenciesFile] = std::move(out);

  files[kRedundanciesFile] = render_redundancies(t.redundancies);
  files[kAdditionalFile] = render_redundancies(t.additional);
  return files;
}

CatalogBundle parse_bundle(const std::map<std::string, std::string>& files) {
  CatalogBundle b;
  for (const auto& rec : read_table(files, kCorollariesFile, kCorollariesHeader, 5))
    b.tables.corollaries.push_back(
        {rec[0], corollary_kind_from_string(rec[1]), rec[2], to_int(rec[3], kCorollariesFile), rec[4]});

  for (const auto& rec : read_table(files, kCoherenciesFile, kCoherenciesHeader, 14)) {
    const std::string where = std::string(kCoherenciesFile) + " row " + rec[0];
    CoherenceRecord r;
    r.x = to_int(rec[0], where);
    for (int i = 0; i < kConstraintTypeCount; ++i)
      if (to_flag(rec[1 + i], where)) r.flags = r.flags.with(kAllConstraintTypes[i]);
    r.coherent = to_flag(rec[12], where);
    r.notes = rec[13];
    b.tables.coherencies.push_back(std::move(r));
  }
  b.tables.redundancies = parse_redundancies(files, kRedundanciesFile);
  b.tables.additional = parse_redundancies(files, kAdditionalFile);
  check_integrity(b.tables);
  return b;
}

void save_bundle(const CatalogBundle& bundle, const std::filesystem::path& directory) {
  const auto files = render_bundle(bundle);
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoFailure("cannot create " + directory.string() + ": " + ec.message());
  for (const auto& [name, content] : files) write_file(directory / name, content);
}

CatalogBundle load_bundle(const std::filesystem::path& directory) {
  std::map<std::string, std::string> files;
  for (const char* name : {kCorollariesFile, kCoherenciesFile, kRedundanciesFile, kAdditionalFile})
    files[name] = read_file(directory / name);
  return parse_bundle(files);
}

// ---------------------------------------------------------------------------

std::string schema_document(const SchemaState& state) {
  nlohmann::ordered_json doc;
  doc["format_version"] = kSchemaFormatVersion;
  doc["name"] = state.name;
  doc["set"] = state.set_name;
  doc["elements"] = state.domain().elements();
  doc["view"] = state.is_view();
  auto pairs = nlohmann::ordered_json::array();
  if (!state.is_view()) {
    const auto& rel = std::get<DyadicRelation>(state.relation);
    for (const auto& p : rel.pairs()) pairs.push_back({rel.domain().element(p.from), rel.domain().element(p.to)});
  }
  doc["pairs"] = std::move(pairs);
  auto names = [](ConstraintSet s) {
    auto a = nlohmann::ordered_json::array();
    for (auto t : s.members()) a.push_back(std::string(abbreviation(t)));
    return a;
  };
  doc["checked"] = names(state.checked);
  doc["redundant"] = names(state.redundant);
  doc["backend"] = state.backend;
  return doc.dump(2) + "\n";
}

SchemaState parse_schema_document(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaMismatch(std::string("schema document is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw SchemaMismatch("schema document must be an object");
    if (doc.value("format_version", 0) != kSchemaFormatVersion)
      throw SchemaMismatch("unsupported schema format_version");
    nlohmann::json rel;
    rel["elements"] = doc.at("elements");
    rel["pairs"] = doc.value("pairs", nlohmann::json::array());
    auto relation = parse_relation_document(rel.dump());
    auto set_of = [&](const char* key) {
      ConstraintSet s;
      for (const auto& a : doc.value(key, nlohmann::json::array())) {
        const auto name = a.get<std::string>();
        auto t = type_from_abbreviation(name);
        if (!t) throw UnknownAbbreviation("unknown constraint abbreviation '" + name + "'");
        s = s.with(*t);
      }
      return s;
    };
    SchemaState s = make_schema(doc.at("name").get<std::string>(), relation.domain_ptr(),
                                doc.value("backend", std::string("rulebase")));
    s.set_name = doc.value("set", std::string("S"));
    if (doc.value("view", false)) {
      if (!relation.empty()) throw SchemaMismatch("a view stores no pairs");
      s.relation = ViewMarker{relation.domain_ptr()};
    } else {
      s.relation = std::move(relation);
    }
    s.checked = set_of("checked");
    s.redundant = set_of("redundant");
    if (!s.checked.contains_all(s.redundant)) throw SchemaMismatch("redundant types must be checked");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaMismatch(std::string("schema document has a bad field: ") + e.what());
  }
}

void save_schema(const SchemaState& state, const std::filesystem::path& file) {
  write_file(file, schema_document(state));
}

SchemaState load_schema(const std::filesystem::path& file) { return parse_schema_document(read_file(file)); }

}  // namespace drc
