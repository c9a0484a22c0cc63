#pragma once

// The knowledge store: tiered objects, exact retrieval, version chains.
//
// DESIGN INVARIANTS
//   1. Tier exclusivity: every object is exactly one of Active / Archived /
//      Deleted. Retrieval sees the Active tier only.
//   2. Archive, don't delete: gate rejections and superseded versions go to
//      the archive and stay promotable; only an explicit delete purges data,
//      and then nothing but the tombstone (id + status) remains.
//   3. Exactly-one-active: per concept at most one Active object, always at
//      its chain head.
//   4. Journal-first: mutations are expressed as events, appended to the
//      sink *before* being applied; live application and journal replay run
//      the same code, so replay-from-empty reproduces the state exactly.
//   5. Retrieval is exact brute-force cosine over the active tier: results
//      ordered by similarity descending, ties broken by ascending id.
//
// Concurrency: a single writer is serialized by an internal mutex while
// readers proceed concurrently (shared lock). Value types cross the API by
// copy, never by reference into guarded state.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "kogate/core.hpp"
#include "kogate/events.hpp"
#include "kogate/gate.hpp"
#include "kogate/salience.hpp"
#include "kogate/versioning.hpp"

namespace kogate {

/// Text → unit-norm embedding. Implementations must be deterministic.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::size_t dim() const = 0;
  virtual std::vector<double> embed(const std::string& text) const = 0;
};

struct RetrievalMatch {
  std::string ko_id;
  double similarity = 0.0;  // raw cosine in [-1,1]

  bool operator==(const RetrievalMatch&) const = default;
};

struct RetrievalResult {
  std::vector<RetrievalMatch> matches;  // at most k, ordered per invariant 5

  bool operator==(const RetrievalResult&) const = default;
};

struct StoreStats {
  std::size_t active_count = 0;
  std::size_t archived_count = 0;
  std::size_t deleted_count = 0;
  std::size_t consented_writes = 0;  // stored writes (admitted + archived)
  double compression = 0.0;  // 1 - active/consented_writes; 0 when no writes

  bool operator==(const StoreStats&) const = default;
};

/// Bulk state for snapshot/restore; maps keep deterministic order.
struct StoreState {
  std::map<std::string, KnowledgeObject> objects;
  std::map<std::string, std::vector<std::string>> chains;
  std::size_t consented_writes = 0;
  std::int64_t clock = 0;

  bool operator==(const StoreState&) const = default;
};

class KnowledgeStore {
 public:
  explicit KnowledgeStore(std::size_t dim,
                          std::shared_ptr<events::EventSink> sink = nullptr,
                          std::shared_ptr<const Embedder> embedder = nullptr);

  std::size_t dim() const { return dim_; }
  const Embedder* embedder() const { return embedder_.get(); }

  // ── Writes (serialized) ──────────────────────────────────────────────
  gate::GateDecision gate_write(KnowledgeObject ko, const salience::GateConfig& config);
  gate::GateDecision force_admit(KnowledgeObject ko);
  gate::GateDecision promote(const std::string& ko_id, gate::PromoteMode mode,
                             const salience::GateConfig& config);
  /// Purge an object to a tombstone; idempotent for already-deleted ids.
  void delete_object(const std::string& ko_id);

  // ── Reads (concurrent) ───────────────────────────────────────────────
  RetrievalResult retrieve(const std::vector<double>& query, std::size_t k) const;
  RetrievalResult retrieve_text(const std::string& text, std::size_t k) const;
  std::optional<KnowledgeObject> get(const std::string& ko_id) const;
  StoreStats stats() const;
  std::optional<versioning::VersionChain> chain(const std::string& concept_id) const;
  std::optional<KnowledgeObject> temporal(const std::string& concept_id,
                                          const versioning::TemporalSelector& selector) const;
  std::vector<std::string> check_integrity() const;
  std::vector<std::string> active_ids() const;  // ascending id order
  std::int64_t clock() const;

  // ── Snapshot / restore ───────────────────────────────────────────────
  StoreState export_state() const;
  /// Pointer return: the store holds a mutex and is neither movable nor
  /// copyable.
  static std::unique_ptr<KnowledgeStore> from_state(
      StoreState state, std::size_t dim,
      std::shared_ptr<events::EventSink> sink = nullptr,
      std::shared_ptr<const Embedder> embedder = nullptr);

  /// Apply one journal event (replay path; also used internally after the
  /// sink acknowledges an append). Throws IntegrityError on impossible
  /// transitions.
  void apply(const events::EventRecord& record);

 private:
  void emit_and_apply(events::EventRecord record);
  void apply_locked(const events::EventRecord& record);
  SalienceScore score_locked(const KnowledgeObject& ko,
                                       const salience::GateConfig& config) const;
  std::optional<std::string> active_head_locked(const std::string& concept_id) const;
  void prepare_write(KnowledgeObject& ko) const;
  /// Re-derive supersedes/superseded_by pointers from chain adjacency after
  /// a chain mutation (new tail, or a promotion moving a version to the
  /// head). Tombstones keep their links purged.
  void relink_chain_locked(const std::string& concept_id);

  std::size_t dim_;
  std::shared_ptr<events::EventSink> sink_;
  std::shared_ptr<const Embedder> embedder_;

  mutable std::shared_mutex mutex_;
  std::map<std::string, KnowledgeObject> objects_;
  std::map<std::string, std::vector<std::string>> chains_;
  std::vector<std::string> active_ids_;  // insertion order; novelty + retrieval scan
  std::size_t consented_writes_ = 0;
  std::int64_t clock_ = 0;
  std::uint64_t transient_seq_ = 0;  // sequence source when no sink is attached
};

}  // namespace kogate
