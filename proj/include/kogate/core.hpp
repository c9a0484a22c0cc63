#pragma once

// Core value types for the knowledge store.
//
// DESIGN INVARIANTS
//   1. A KnowledgeObject's id is the SHA-256 of the canonical serialization of
//      (concept_id, content, provenance.source_id, provenance.timestamp) —
//      content-addressed, so the same claim from the same source at the same
//      time always hashes to the same id, on every platform.
//   2. Canonical serialization is exact: field-name-sorted "key=value" lines,
//      UTF-8, LF line endings, values escaped ('\\'->"\\\\", LF->"\\n",
//      CR->"\\r"), integer timestamps in plain decimal. Documented in
//      docs/FORMATS.md; changing it breaks every stored id.
//   3. Objects are immutable value types. Store operations replace whole
//      objects rather than mutating shared state.
//   4. Deleted objects are tombstones: id and status survive, everything else
//      (content, embedding, provenance, salience, links) is purged.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kogate {

// ─── Errors ────────────────────────────────────────────────────────────────

/// Input fails structural validation (bad embedding, empty fields, ...).
class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Referenced object or concept does not exist.
class NotFoundError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operation conflicts with current state (duplicate id, deleted target, ...).
class ConflictError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Configuration is structurally invalid.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Durable storage failed (unwritable log, closed sink, ...).
class StorageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Persisted data is inconsistent (sequence gap, truncated snapshot, ...).
class IntegrityError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ─── Enums ─────────────────────────────────────────────────────────────────

enum class VerificationLevel { Unverified, Institutional, Verified };
enum class ObjectStatus { Active, Archived, Deleted };

std::string to_string(VerificationLevel level);
std::string to_string(ObjectStatus status);
VerificationLevel verification_level_from_string(std::string_view s);
ObjectStatus object_status_from_string(std::string_view s);

// ─── Value types ───────────────────────────────────────────────────────────

struct Provenance {
  std::string source_id;
  std::int64_t timestamp = 0;  // logical time; monotone per source
  double reputation = 0.0;     // [0,1]
  VerificationLevel verification = VerificationLevel::Unverified;
  bool consent = true;  // objects written without consent are never stored

  bool operator==(const Provenance&) const = default;
};

/// Signal values recorded at gate time, all in [0,1].
struct SalienceScore {
  double rep = 0.0;        // provenance reputation signal
  double nov = 0.0;        // novelty vs. the active tier
  double src = 0.0;        // source verification-level signal
  double composite = 0.0;  // weighted sum under the config in force

  bool operator==(const SalienceScore&) const = default;
};

struct KnowledgeObject {
  std::string id;  // content hash; see canonical_id
  std::string concept_id;
  std::string content;
  std::vector<double> embedding;  // unit-norm, dimension fixed per store
  Provenance provenance;
  std::optional<SalienceScore> salience;  // recorded by the gate
  ObjectStatus status = ObjectStatus::Active;
  std::optional<std::string> supersedes;     // older version's id
  std::optional<std::string> superseded_by;  // newer version's id

  bool operator==(const KnowledgeObject&) const = default;
};

// ─── Canonical serialization & content addressing ─────────────────────────

/// Exact canonical text whose SHA-256 is the object id. Throws
/// ValidationError if any string input is empty or timestamp < 0.
std::string canonical_text(std::string_view concept_id, std::string_view content,
                           std::string_view source_id, std::int64_t timestamp);

/// Lowercase-hex SHA-256 of canonical_text(...).
std::string canonical_id(std::string_view concept_id, std::string_view content,
                         std::string_view source_id, std::int64_t timestamp);

/// Convenience: id derived from an object's own fields.
std::string canonical_id(const KnowledgeObject& ko);

/// Lowercase-hex SHA-256 of arbitrary bytes.
std::string sha256_hex(std::string_view bytes);

/// Raw 16-byte MD5 digest (used by the pharmacology corpus derivation).
std::vector<std::uint8_t> md5_digest(std::string_view bytes);

// ─── Validation ────────────────────────────────────────────────────────────

/// Structural checks on a single object; returns human-readable violations
/// (empty == valid). expected_dim is the store's embedding dimension.
/// Cross-object checks (link targets, chain shape) live in versioning.
std::vector<std::string> validate(const KnowledgeObject& ko,
                                  std::size_t expected_dim);

/// Reduce an object to its tombstone form (id + Deleted status only).
KnowledgeObject make_tombstone(std::string id);

/// Cosine similarity of two equal-dimension vectors; raw value in [-1,1].
double cosine(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace kogate
