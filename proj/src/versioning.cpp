#include "kogate/versioning.hpp"

#include <set>

namespace kogate::versioning {

std::optional<std::string> select_version(const VersionChain& chain,
                                          const TemporalSelector& selector) {
  if (chain.ids.empty()) return std::nullopt;
  const auto n = static_cast<int>(chain.ids.size());
  switch (selector.kind) {
    case TemporalSelector::Kind::Current:
      return chain.ids.back();
    case TemporalSelector::Kind::Prior:
      if (n < 2) return std::nullopt;
      return chain.ids[static_cast<std::size_t>(n - 2)];
    case TemporalSelector::Kind::Original:
      return chain.ids.front();
    case TemporalSelector::Kind::AtIndex:
      if (selector.index < 1 || selector.index > n) return std::nullopt;
      return chain.ids[static_cast<std::size_t>(selector.index - 1)];
  }
  return std::nullopt;
}

std::vector<std::string> check_integrity(
    const ObjectLookup& lookup,
    const std::map<std::string, std::vector<std::string>>& chains) {
  std::vector<std::string> violations;
  std::set<std::string> seen_ids;

  for (const auto& [concept_name, ids] : chains) {
    if (ids.empty()) {
      violations.push_back("chain for '" + concept_name + "' is empty");
      continue;
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const auto& id = ids[i];
      if (!seen_ids.insert(id).second) {
        violations.push_back("id '" + id + "' appears in more than one chain position");
      }
      const auto ko = lookup(id);
      if (!ko.has_value()) {
        violations.push_back("chain for '" + concept_name + "' references unknown id '" + id + "'");
        continue;
      }
      const bool is_head = (i + 1 == ids.size());
      const bool is_tombstone = ko->status == ObjectStatus::Deleted;

      if (!is_tombstone && ko->concept_id != concept_name) {
        violations.push_back("id '" + id + "' in chain for '" + concept_name +
                             "' has concept_id '" + ko->concept_id + "'");
      }
      if (ko->status == ObjectStatus::Active && !is_head) {
        violations.push_back("active object '" + id + "' is not the chain head for '" +
                             concept_name + "'");
      }
      if (!is_head && ko->status == ObjectStatus::Active) {
        continue;  // already reported
      }

      if (is_tombstone) continue;  // purged links; neighbors checked below

      // Link agreement with chain adjacency. A neighbor that is a tombstone
      // legitimately cannot point back — dangling-to-tombstone is allowed.
      if (i == 0) {
        if (ko->supersedes.has_value()) {
          violations.push_back("original version '" + id + "' has a supersedes link");
        }
      } else {
        const auto& prev_id = ids[i - 1];
        if (!ko->supersedes.has_value() || *ko->supersedes != prev_id) {
          violations.push_back("id '" + id + "' does not link back to '" + prev_id + "'");
        }
      }
      if (is_head) {
        if (ko->superseded_by.has_value()) {
          violations.push_back("head '" + id + "' has a superseded_by link");
        }
      } else {
        const auto& next_id = ids[i + 1];
        const auto next = lookup(next_id);
        const bool next_is_tombstone =
            next.has_value() && next->status == ObjectStatus::Deleted;
        if (!next_is_tombstone &&
            (!ko->superseded_by.has_value() || *ko->superseded_by != next_id)) {
          violations.push_back("id '" + id + "' does not link forward to '" + next_id + "'");
        }
      }
    }
  }
  return violations;
}

}  // namespace kogate::versioning
