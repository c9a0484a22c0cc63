#pragma once

// Event records: the store's write-ahead journal vocabulary.
//
// Every state mutation is described by a primitive event; the store applies
// events to itself the same way a replay does, so a journal replayed from
// empty reproduces the live state by construction. Sequence numbers are
// assigned by the sink, start at 1, and increase strictly with no gaps.
// Timestamps are logical (the store's write clock), keeping journals
// byte-deterministic.

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "kogate/core.hpp"
#include "kogate/gate.hpp"

namespace kogate::events {

enum class EventKind { Write, GateDecision, Supersede, Promote, Delete };

std::string to_string(EventKind kind);
EventKind event_kind_from_string(std::string_view s);

struct WritePayload {
  KnowledgeObject ko;  // scored, status assigned, links empty at write time
  bool operator==(const WritePayload&) const = default;
};

struct GateDecisionPayload {
  gate::GateDecision decision;
  bool operator==(const GateDecisionPayload&) const = default;
};

struct SupersedePayload {
  std::string old_id;
  std::string new_id;
  bool operator==(const SupersedePayload&) const = default;
};

struct PromotePayload {
  std::string ko_id;
  gate::PromoteMode mode = gate::PromoteMode::Force;
  gate::GateDecision decision;
  bool operator==(const PromotePayload&) const = default;
};

struct DeletePayload {
  std::string ko_id;
  bool operator==(const DeletePayload&) const = default;
};

/// Stand-in for a Write payload whose content was purged by deletion. The
/// journal keeps the record, its sequence number, and just enough structure
/// (concept, tier at write time) for replay to rebuild chains and counters —
/// content, embedding, and provenance are gone for good.
struct RedactedPayload {
  std::string ko_id;
  std::string concept_id;
  bool was_active = false;
  bool operator==(const RedactedPayload&) const = default;
};

using Payload = std::variant<WritePayload, GateDecisionPayload, SupersedePayload,
                             PromotePayload, DeletePayload, RedactedPayload>;

struct EventRecord {
  std::uint64_t seq = 0;       // assigned by the sink; 1-based, gap-free
  EventKind kind = EventKind::Write;
  std::int64_t timestamp = 0;  // logical store clock at emission
  Payload payload;

  bool operator==(const EventRecord&) const = default;
};

/// Append-only event consumer. append() must make the record durable (for
/// durable sinks) before returning; the store applies the mutation only
/// after append() succeeds.
class EventSink {
 public:
  virtual ~EventSink() = default;

  /// Assigns the next sequence number, stores the record, returns it.
  virtual const EventRecord& append(EventRecord record) = 0;

  /// Redact prior Write payloads for ko_id (deletion compaction). The
  /// triggering Delete event is the audit trail of the redaction.
  virtual void redact(const std::string& ko_id) = 0;
};

/// In-memory sink for tests and transient stores.
class MemoryEventSink : public EventSink {
 public:
  const EventRecord& append(EventRecord record) override {
    record.seq = next_seq_++;
    records_.push_back(std::move(record));
    return records_.back();
  }

  void redact(const std::string& ko_id) override {
    for (auto& rec : records_) {
      if (rec.kind == EventKind::Write) {
        const auto* write = std::get_if<WritePayload>(&rec.payload);
        if (write != nullptr && write->ko.id == ko_id) {
          rec.payload = RedactedPayload{
              ko_id, write->ko.concept_id,
              write->ko.status == ObjectStatus::Active};
        }
      }
    }
  }

  const std::vector<EventRecord>& records() const { return records_; }

 private:
  std::vector<EventRecord> records_;
  std::uint64_t next_seq_ = 1;
};

}  // namespace kogate::events
