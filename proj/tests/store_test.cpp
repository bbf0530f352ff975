// Copyright (C) 2026 The drc authors
//
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "drc/errors.hpp"
#include "drc/store.hpp"

namespace drc {
namespace {

using CT = ConstraintType;
namespace fs = std::filesystem;

const CatalogBundle& generated() {
  static const CatalogBundle b{kCatalogFormatVersion, generate_rulebase_tables()};
  return b;
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("drc_store_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  return dir;
}

bool has_line(const std::string& text, const std::string& line) {
  std::istringstream in(text);
  std::string l;
  while (std::getline(in, l))
    if (l == line) return true;
  return false;
}

TEST(Bundle, GoldenRows) {
  const auto files = render_bundle(generated());
  ASSERT_EQ(files.size(), 4u);
  EXPECT_TRUE(has_line(files.at(kCoherenciesFile), "41,1,0,0,1,0,1,0,0,0,0,0,0,A.5.2.2 (i)"));
  EXPECT_TRUE(has_line(files.at(kRedundanciesFile), "65,S,A.5.2.3 (ii) 1"));
  EXPECT_TRUE(has_line(files.at(kCorollariesFile),
                       "A.5.2.1 (i),Incoherence,\"reflexive ^ irreflexive\",2,A.5.2"));
  EXPECT_EQ(files.at(kCoherenciesFile).substr(0, files.at(kCoherenciesFile).find('\n')), kCoherenciesHeader);
}

TEST(Bundle, EmptyAdditionalTableIsHeaderOnly) {
  auto b = generated();
  b.tables.additional.clear();
  EXPECT_EQ(render_bundle(b).at(kAdditionalFile), std::string(kRedundanciesHeader) + "\n");
}

TEST(Bundle, DiskRoundTripAndByteStability) {
  const auto dir = scratch("roundtrip");
  save_bundle(generated(), dir);
  EXPECT_EQ(load_bundle(dir), generated());
  const auto first = render_bundle(generated());
  save_bundle(load_bundle(dir), dir);
  for (const auto& [name, content] : first) {
    std::ifstream in(dir / name, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), content) << name;
  }
  fs::remove_all(dir);
}

// Random valid sub-bundles: a subset of coherence rows, the redundancy rows
// that still resolve, and descriptions with quotes and commas.
TEST(Bundle, RoundTripProperty) {
  std::mt19937 rng(20261016);
  for (int trial = 0; trial < 40; ++trial) {
    CatalogBundle b;
    b.tables.corollaries = generated().tables.corollaries;
    b.tables.corollaries.push_back({"X.1 (ii)", CorollaryKind::Redundancy, "odd, \"quoted\" text", 3, "X,1"});
    std::set<int> kept;
    for (const auto& r : generated().tables.coherencies) {
      if (rng() % 3 == 0) continue;
      auto copy = r;
      if (rng() % 7 == 0) copy.notes = "X.1 (ii)";
      b.tables.coherencies.push_back(copy);
      kept.insert(r.x);
    }
    for (const auto& r : generated().tables.redundancies)
      if (kept.count(r.x) && rng() % 2) b.tables.redundancies.push_back(r);
    for (const auto& r : generated().tables.additional)
      if (kept.count(r.x) && rng() % 2) b.tables.additional.push_back(r);
    std::stable_sort(b.tables.corollaries.begin(), b.tables.corollaries.end(),
                     [](const auto& x, const auto& y) { return corollary_id_less(x.id, y.id); });
    const auto files = render_bundle(b);
    EXPECT_EQ(parse_bundle(files), b);
    EXPECT_EQ(render_bundle(parse_bundle(files)), files);
  }
}

TEST(Bundle, DanglingNotesIsIntegrityViolation) {
  auto files = render_bundle(generated());
  files[kRedundanciesFile] += "65,Q,A.9.9.9\n";
  EXPECT_THROW(parse_bundle(files), IntegrityViolation);

  auto b = generated();
  b.tables.coherencies[0].notes = "A.9.9.9";
  EXPECT_THROW(render_bundle(b), IntegrityViolation);
}

TEST(Bundle, DanglingCombinationIsIntegrityViolation) {
  auto files = render_bundle(generated());
  files[kRedundanciesFile] += "3,S,A.5.2.9\n";
  EXPECT_THROW(parse_bundle(files), IntegrityViolation);
}

TEST(Bundle, FlagsMustMatchCombination) {
  auto files = render_bundle(generated());
  auto& text = files[kCoherenciesFile];
  const auto at = text.find("\n41,1,0,0,1");
  text.replace(at, 11, "\n41,1,0,0,0");
  EXPECT_THROW(parse_bundle(files), IntegrityViolation);
}

TEST(Bundle, HeaderAndShapeErrorsAreSchemaMismatch) {
  auto files = render_bundle(generated());
  auto missing_ch = files;
  auto& text = missing_ch[kCoherenciesFile];
  text.replace(0, text.find('\n'), "x,R,IR,S,AS,T,IT,E,IE,Q,A,C,Notes");
  EXPECT_THROW(parse_bundle(missing_ch), SchemaMismatch);

  auto short_row = files;
  short_row[kRedundanciesFile] += "65,S\n";
  EXPECT_THROW(parse_bundle(short_row), SchemaMismatch);

  auto bad_kind = files;
  bad_kind[kCorollariesFile] += "Z.1,Lemma,\"x\",2,Z\n";
  EXPECT_THROW(parse_bundle(bad_kind), SchemaMismatch);

  auto bad_token = files;
  bad_token[kRedundanciesFile] += "65,ZZ,A.5.2.9\n";
  EXPECT_THROW(parse_bundle(bad_token), SchemaMismatch);

  auto no_file = files;
  no_file.erase(kAdditionalFile);
  EXPECT_THROW(parse_bundle(no_file), SchemaMismatch);

  auto b = generated();
  b.format_version = 2;
  EXPECT_THROW(render_bundle(b), SchemaMismatch);
}

TEST(Bundle, MissingDirectoryIsIoFailure) {
  EXPECT_THROW(load_bundle(scratch("absent")), IoFailure);
}

TEST(SchemaFile, RoundTrip) {
  auto domain = std::make_shared<const Domain>(std::vector<std::string>{"ann", "bob", "cy"});
  auto s = make_schema("Knows", domain);
  s.set_name = "People";
  std::vector<Pair> pairs{{0, 1}, {1, 2}};
  s.relation = DyadicRelation::from_pairs(domain, pairs);
  s.checked = {CT::Asymmetric, CT::Irreflexive};
  s.redundant = {CT::Irreflexive};
  const auto text = schema_document(s);
  EXPECT_EQ(parse_schema_document(text), s);
  EXPECT_EQ(schema_document(parse_schema_document(text)), text);

  auto v = s;
  v.relation = ViewMarker{domain};
  EXPECT_EQ(parse_schema_document(schema_document(v)), v);

  const auto file = scratch("schema.json");
  save_schema(s, file);
  EXPECT_EQ(load_schema(file), s);
  fs::remove(file);
}

TEST(SchemaFile, Errors) {
  EXPECT_THROW(parse_schema_document("[1,2]"), SchemaMismatch);
  EXPECT_THROW(parse_schema_document("{"), SchemaMismatch);
  EXPECT_THROW(parse_schema_document(R"({"format_version":9,"name":"R","elements":["a"]})"), SchemaMismatch);
  EXPECT_THROW(parse_schema_document(R"({"format_version":1,"name":"R","elements":["a"],"checked":["XX"]})"),
               UnknownAbbreviation);
  EXPECT_THROW(
      parse_schema_document(R"({"format_version":1,"name":"R","elements":["a"],"checked":[],"redundant":["IR"]})"),
      SchemaMismatch);
  EXPECT_THROW(parse_schema_document(R"({"format_version":1,"name":"R","elements":["a"],"pairs":[["a","z"]]})"),
               UnknownElement);
}

}  // namespace
}  // namespace drc
