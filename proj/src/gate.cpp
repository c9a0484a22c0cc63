#include "kogate/gate.hpp"

#include "kogate/store.hpp"

namespace kogate::gate {

std::string to_string(GateOutcome outcome) {
  switch (outcome) {
    case GateOutcome::Admit: return "admit";
    case GateOutcome::Archive: return "archive";
    case GateOutcome::RejectConsent: return "reject_consent";
  }
  throw ValidationError("unknown gate outcome");
}

GateOutcome gate_outcome_from_string(std::string_view s) {
  if (s == "admit") return GateOutcome::Admit;
  if (s == "archive") return GateOutcome::Archive;
  if (s == "reject_consent") return GateOutcome::RejectConsent;
  throw ValidationError("unknown gate outcome: " + std::string(s));
}

GateDecision gate_write(KnowledgeStore& store, KnowledgeObject ko,
                        const salience::GateConfig& config) {
  return store.gate_write(std::move(ko), config);
}

GateDecision force_admit(KnowledgeStore& store, KnowledgeObject ko) {
  return store.force_admit(std::move(ko));
}

GateDecision promote(KnowledgeStore& store, const std::string& ko_id,
                     PromoteMode mode, const salience::GateConfig& config) {
  return store.promote(ko_id, mode, config);
}

}  // namespace kogate::gate
