#pragma once

// Supersession version chains and temporal queries.
//
// A chain records the admitted versions of one concept, oldest → newest.
// Invariants checked by check_integrity:
//   - chains are acyclic and ids are unique within a chain;
//   - at most one Active object per concept, and only at the head position;
//   - non-head members are Archived or Deleted (tombstones stay in place);
//   - supersedes / superseded_by links agree with chain adjacency, except
//     that links *into* a tombstone are allowed to dangle (the tombstone's
//     own fields are purged) — that state is detectable, not an error.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kogate/core.hpp"

namespace kogate::versioning {

struct VersionChain {
  std::string concept_id;
  std::vector<std::string> ids;  // oldest -> newest; newest is the head slot

  bool operator==(const VersionChain&) const = default;
};

struct TemporalSelector {
  enum class Kind { Current, Prior, Original, AtIndex };
  Kind kind = Kind::Current;
  int index = 0;  // 1-based, used by AtIndex only

  static TemporalSelector current() { return {Kind::Current, 0}; }
  static TemporalSelector prior() { return {Kind::Prior, 0}; }
  static TemporalSelector original() { return {Kind::Original, 0}; }
  static TemporalSelector at_index(int n) { return {Kind::AtIndex, n}; }
};

/// Resolve a selector to a version id. nullopt when the selector points
/// outside the chain (prior of a single-version chain, index out of range).
std::optional<std::string> select_version(const VersionChain& chain,
                                          const TemporalSelector& selector);

using ObjectLookup =
    std::function<std::optional<KnowledgeObject>(const std::string&)>;

/// Full structural audit of all chains; returns human-readable violations
/// (empty == consistent).
std::vector<std::string> check_integrity(
    const ObjectLookup& lookup,
    const std::map<std::string, std::vector<std::string>>& chains);

}  // namespace kogate::versioning
