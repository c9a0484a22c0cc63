#include "kogate/events.hpp"

namespace kogate::events {

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Write: return "write";
    case EventKind::GateDecision: return "gate_decision";
    case EventKind::Supersede: return "supersede";
    case EventKind::Promote: return "promote";
    case EventKind::Delete: return "delete";
  }
  throw ValidationError("unknown event kind");
}

EventKind event_kind_from_string(std::string_view s) {
  if (s == "write") return EventKind::Write;
  if (s == "gate_decision") return EventKind::GateDecision;
  if (s == "supersede") return EventKind::Supersede;
  if (s == "promote") return EventKind::Promote;
  if (s == "delete") return EventKind::Delete;
  throw ValidationError("unknown event kind: " + std::string(s));
}

}  // namespace kogate::events
