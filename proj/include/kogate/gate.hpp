#pragma once

// Write-time admission gate.
//
// Every consented write is scored against the *current* active tier and
// either admitted (Active) or archived (Archive) — never dropped. Writes
// without consent are rejected outright and stored nowhere. The admission
// boundary is inclusive: composite == tau admits. Admitting a new version
// of a concept that already has an active head archives the old head and
// links the two (supersession); rejection archives cold, from where an
// object can later be promoted by force or by re-running the gate.

#include <optional>
#include <string>

#include "kogate/core.hpp"
#include "kogate/salience.hpp"

namespace kogate {
class KnowledgeStore;
}

namespace kogate::gate {

enum class GateOutcome { Admit, Archive, RejectConsent };

std::string to_string(GateOutcome outcome);
GateOutcome gate_outcome_from_string(std::string_view s);

struct GateDecision {
  std::string ko_id;
  GateOutcome outcome = GateOutcome::Archive;
  std::optional<SalienceScore> score;  // absent for consent rejections / forced writes
  std::optional<std::string> superseded_id;  // prior active head, when archived
  bool forced = false;  // bypassed scoring (forced admission / promotion)

  bool operator==(const GateDecision&) const = default;
};

enum class PromoteMode { Force, Regate };

/// Score-and-place a write. Validates the object, fills its id from the
/// canonical content hash when empty, and applies the outcome to the store.
GateDecision gate_write(KnowledgeStore& store, KnowledgeObject ko,
                        const salience::GateConfig& config);

/// Admission without scoring (baseline conditions, explicit operator action).
/// Consent is still honored; the decision is flagged forced.
GateDecision force_admit(KnowledgeStore& store, KnowledgeObject ko);

/// Promote an archived object: Force activates unconditionally (original
/// salience record kept for audit); Regate re-scores against the current
/// active tier and only activates if the composite clears tau.
GateDecision promote(KnowledgeStore& store, const std::string& ko_id,
                     PromoteMode mode, const salience::GateConfig& config);

}  // namespace kogate::gate
