// Copyright (C) 2026 The drc authors
//
// SPDX-License-Identifier: Apache-2.0
//

#ifndef DRC_STORE_HPP_
#define DRC_STORE_HPP_

#include <filesystem>
#include <map>
#include <string>

#include "drc/engine.hpp"
#include "drc/rulebase.hpp"

namespace drc {

/// The only layout this build reads and writes. It is identified by the
/// four header lines below; a file with any other header is rejected.
inline constexpr int kCatalogFormatVersion = 1;

inline constexpr const char* kCorollariesFile = "corollaries";
inline constexpr const char* kCoherenciesFile = "drc_coherencies";
inline constexpr const char* kRedundanciesFile = "drc_redundancies";
inline constexpr const char* kAdditionalFile = "drc_additional_redund";

inline constexpr const char* kCorollariesHeader = "CorId,CorType,CorDescription,Volume,CorSection";
inline constexpr const char* kCoherenciesHeader = "x,R,IR,S,AS,T,IT,E,IE,Q,A,C,Ch,Notes";
inline constexpr const char* kRedundanciesHeader = "DRCCombination,Redundancy,Notes";

struct CatalogBundle {
  int format_version = kCatalogFormatVersion;
  CatalogTables tables;
  friend bool operator==(const CatalogBundle&, const CatalogBundle&) = default;
};

/// Throws IntegrityViolation on a Notes value naming no corollary, a
/// redundancy row whose combination has no coherence row, a flag column
/// that disagrees with decode(x), or a repeated key.
void check_integrity(const CatalogTables& tables);

/// File name to file contents. Rows are written sorted by key. Throws
/// SchemaMismatch for an unsupported format_version and IntegrityViolation
/// for an invalid bundle.
std::map<std::string, std::string> render_bundle(const CatalogBundle& bundle);
/// Inverse of render_bundle. Throws SchemaMismatch and IntegrityViolation.
CatalogBundle parse_bundle(const std::map<std::string, std::string>& files);

/// Whole-file replace of the four table files. Throws IoFailure as well.
void save_bundle(const CatalogBundle& bundle, const std::filesystem::path& directory);
CatalogBundle load_bundle(const std::filesystem::path& directory);

// --- relation schemas ---------------------------------------------------------

inline constexpr int kSchemaFormatVersion = 1;

/// JSON document holding name, carrier set name, elements, pairs (or the view
/// flag), checked, redundant and backend. A pending confirmation is not
/// persisted.
std::string schema_document(const SchemaState& state);
/// Throws SchemaMismatch, MalformedRelation, UnknownElement,
/// UnknownAbbreviation.
SchemaState parse_schema_document(std::string_view text);

void save_schema(const SchemaState& state, const std::filesystem::path& file);
SchemaState load_schema(const std::filesystem::path& file);

}  // namespace drc

#endif  // DRC_STORE_HPP_
