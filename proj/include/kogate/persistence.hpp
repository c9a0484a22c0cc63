#pragma once

// Durable formats: JSON value mapping, the event journal, and snapshots.
//
// All serialization is byte-deterministic: object keys are emitted in sorted
// order and floating-point values use shortest round-trip formatting, so the
// same state always produces the same bytes. docs/FORMATS.md specifies every
// format in full.
//
// Journal file ("kogate-events/1"): one JSON document per line. The first
// line is a header carrying the store dimension; every following line is one
// event record with a gap-free 1-based sequence number. Appends flush before
// the store applies the event (journal-first). Deleting an object rewrites
// the file once, replacing the deleted object's Write payload with a
// structural stub — sequence numbers, chain shape, and counters survive;
// content, embedding, and provenance do not.
//
// Snapshot file ("kogate-snapshot/1"): a single JSON document holding the
// full store state with objects and chains sorted by key.

#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kogate/corpus.hpp"
#include "kogate/events.hpp"
#include "kogate/store.hpp"

namespace kogate::persistence {

// ── JSON value mapping ─────────────────────────────────────────────────────

nlohmann::json to_json(const KnowledgeObject& ko);
nlohmann::json to_json(const gate::GateDecision& decision);
nlohmann::json to_json(const events::EventRecord& record);
nlohmann::json to_json(const StoreState& state, std::size_t dim);

KnowledgeObject ko_from_json(const nlohmann::json& j);
gate::GateDecision decision_from_json(const nlohmann::json& j);
events::EventRecord event_from_json(const nlohmann::json& j);

// ── Event journal ──────────────────────────────────────────────────────────

/// Durable sink backed by a JSONL journal. Creating one on a fresh path
/// writes the header; on an existing journal it validates the header and
/// resumes after the last sequence number.
class FileEventSink final : public events::EventSink {
 public:
  FileEventSink(std::filesystem::path path, std::size_t dim);

  const events::EventRecord& append(events::EventRecord record) override;
  void redact(const std::string& ko_id) override;

  const std::filesystem::path& path() const { return path_; }
  std::size_t dim() const { return dim_; }

 private:
  void open_for_append();

  std::filesystem::path path_;
  std::size_t dim_;
  std::ofstream out_;
  std::uint64_t next_seq_ = 1;
  events::EventRecord last_;  // backing storage for append()'s return value
};

/// Parse a journal into records, enforcing header validity and gap-free
/// sequence numbers; errors name the offending line.
struct JournalContents {
  std::size_t dim = 0;
  std::vector<events::EventRecord> records;
};
JournalContents read_journal(const std::filesystem::path& path);

/// Rebuild a store by replaying a journal from empty.
std::unique_ptr<KnowledgeStore> replay_log(
    const std::filesystem::path& path,
    std::shared_ptr<const Embedder> embedder = nullptr);

// ── Snapshots ──────────────────────────────────────────────────────────────

void write_snapshot(const KnowledgeStore& store, const std::filesystem::path& path);

std::unique_ptr<KnowledgeStore> load_snapshot(
    const std::filesystem::path& path,
    std::shared_ptr<events::EventSink> sink = nullptr,
    std::shared_ptr<const Embedder> embedder = nullptr);

// ── Corpus interchange ─────────────────────────────────────────────────────

/// Labeled corpus (JSONL: {"ko": …, "label": "correct"|"distractor"} per
/// line) — the input format for offline threshold calibration.
void write_labeled_corpus(const corpus::GeneratedCorpus& corpus,
                          const std::filesystem::path& path);
std::vector<std::pair<KnowledgeObject, corpus::FactLabel>> read_labeled_corpus(
    const std::filesystem::path& path);

/// Plain object stream (JSONL: one object per line; id and embedding may be
/// omitted and are then derived at write time) — the ingest input format.
std::vector<KnowledgeObject> read_objects_jsonl(const std::filesystem::path& path);

}  // namespace kogate::persistence
