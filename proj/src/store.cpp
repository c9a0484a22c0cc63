#include "kogate/store.hpp"

#include <mutex>
#include <algorithm>

namespace kogate {
namespace {

std::string join_violations(const std::vector<std::string>& violations) {
  std::string msg = "invalid knowledge object:";
  for (const auto& v : violations) msg += " [" + v + "]";
  return msg;
}

}  // namespace

KnowledgeStore::KnowledgeStore(std::size_t dim,
                               std::shared_ptr<events::EventSink> sink,
                               std::shared_ptr<const Embedder> embedder)
    : dim_(dim), sink_(std::move(sink)), embedder_(std::move(embedder)) {
  if (dim_ == 0) throw ConfigError("store dimension must be positive");
}

void KnowledgeStore::prepare_write(KnowledgeObject& ko) const {
  if (ko.embedding.empty() && embedder_ != nullptr && !ko.content.empty()) {
    ko.embedding = embedder_->embed(ko.content);
  }
  if (ko.id.empty()) {
    ko.id = canonical_id(ko);  // throws ValidationError on empty fields
  }
  ko.supersedes.reset();
  ko.superseded_by.reset();
}

SalienceScore KnowledgeStore::score_locked(
    const KnowledgeObject& ko, const salience::GateConfig& config) const {
  return salience::score(
      ko,
      [&](const std::function<void(const std::vector<double>&)>& visit) {
        for (const auto& id : active_ids_) visit(objects_.at(id).embedding);
      },
      config);
}

std::optional<std::string> KnowledgeStore::active_head_locked(
    const std::string& concept_id) const {
  const auto it = chains_.find(concept_id);
  if (it == chains_.end() || it->second.empty()) return std::nullopt;
  const auto& head_id = it->second.back();
  const auto obj = objects_.find(head_id);
  if (obj == objects_.end() || obj->second.status != ObjectStatus::Active) {
    return std::nullopt;
  }
  return head_id;
}

gate::GateDecision KnowledgeStore::gate_write(KnowledgeObject ko,
                                              const salience::GateConfig& config) {
  config.validate();
  std::unique_lock lock(mutex_);

  if (!ko.provenance.consent) {
    gate::GateDecision decision;
    try {
      decision.ko_id = ko.id.empty() ? canonical_id(ko) : ko.id;
    } catch (const ValidationError&) {
      decision.ko_id = ko.id;
    }
    decision.outcome = gate::GateOutcome::RejectConsent;
    emit_and_apply({0, events::EventKind::GateDecision, 0,
                    events::GateDecisionPayload{decision}});
    return decision;
  }

  prepare_write(ko);
  if (const auto violations = validate(ko, dim_); !violations.empty()) {
    throw ValidationError(join_violations(violations));
  }
  if (objects_.contains(ko.id)) {
    throw ConflictError("duplicate object id: " + ko.id);
  }

  const auto score = score_locked(ko, config);
  ko.salience = score;

  gate::GateDecision decision;
  decision.ko_id = ko.id;
  decision.score = score;
  if (score.composite >= config.tau) {  // boundary inclusive
    decision.outcome = gate::GateOutcome::Admit;
    decision.superseded_id = active_head_locked(ko.concept_id);
    ko.status = ObjectStatus::Active;
  } else {
    decision.outcome = gate::GateOutcome::Archive;
    ko.status = ObjectStatus::Archived;
  }

  emit_and_apply({0, events::EventKind::Write, 0, events::WritePayload{ko}});
  emit_and_apply({0, events::EventKind::GateDecision, 0,
                  events::GateDecisionPayload{decision}});
  if (decision.superseded_id.has_value()) {
    emit_and_apply({0, events::EventKind::Supersede, 0,
                    events::SupersedePayload{*decision.superseded_id, ko.id}});
  }
  return decision;
}

gate::GateDecision KnowledgeStore::force_admit(KnowledgeObject ko) {
  std::unique_lock lock(mutex_);

  if (!ko.provenance.consent) {
    gate::GateDecision decision;
    try {
      decision.ko_id = ko.id.empty() ? canonical_id(ko) : ko.id;
    } catch (const ValidationError&) {
      decision.ko_id = ko.id;
    }
    decision.outcome = gate::GateOutcome::RejectConsent;
    decision.forced = true;
    emit_and_apply({0, events::EventKind::GateDecision, 0,
                    events::GateDecisionPayload{decision}});
    return decision;
  }

  prepare_write(ko);
  if (const auto violations = validate(ko, dim_); !violations.empty()) {
    throw ValidationError(join_violations(violations));
  }
  if (objects_.contains(ko.id)) {
    throw ConflictError("duplicate object id: " + ko.id);
  }

  gate::GateDecision decision;
  decision.ko_id = ko.id;
  decision.outcome = gate::GateOutcome::Admit;
  decision.forced = true;
  decision.superseded_id = active_head_locked(ko.concept_id);
  ko.status = ObjectStatus::Active;
  ko.salience.reset();  // no scoring happened; nothing to record

  emit_and_apply({0, events::EventKind::Write, 0, events::WritePayload{ko}});
  emit_and_apply({0, events::EventKind::GateDecision, 0,
                  events::GateDecisionPayload{decision}});
  if (decision.superseded_id.has_value()) {
    emit_and_apply({0, events::EventKind::Supersede, 0,
                    events::SupersedePayload{*decision.superseded_id, ko.id}});
  }
  return decision;
}

gate::GateDecision KnowledgeStore::promote(const std::string& ko_id,
                                           gate::PromoteMode mode,
                                           const salience::GateConfig& config) {
  config.validate();
  std::unique_lock lock(mutex_);

  const auto it = objects_.find(ko_id);
  if (it == objects_.end()) {
    throw NotFoundError("promote: unknown object id: " + ko_id);
  }
  if (it->second.status == ObjectStatus::Deleted) {
    throw ConflictError("promote: object is deleted: " + ko_id);
  }
  if (it->second.status == ObjectStatus::Active) {
    throw ConflictError("promote: object is already active: " + ko_id);
  }

  gate::GateDecision decision;
  decision.ko_id = ko_id;
  if (mode == gate::PromoteMode::Force) {
    decision.outcome = gate::GateOutcome::Admit;
    decision.forced = true;  // original salience record stays for audit
  } else {
    const auto score = score_locked(it->second, config);
    decision.score = score;
    decision.outcome = score.composite >= config.tau ? gate::GateOutcome::Admit
                                                     : gate::GateOutcome::Archive;
  }
  if (decision.outcome == gate::GateOutcome::Admit) {
    decision.superseded_id = active_head_locked(it->second.concept_id);
  }

  emit_and_apply({0, events::EventKind::Promote, 0,
                  events::PromotePayload{ko_id, mode, decision}});
  if (decision.superseded_id.has_value()) {
    emit_and_apply({0, events::EventKind::Supersede, 0,
                    events::SupersedePayload{*decision.superseded_id, ko_id}});
  }
  return decision;
}

void KnowledgeStore::delete_object(const std::string& ko_id) {
  std::unique_lock lock(mutex_);
  const auto it = objects_.find(ko_id);
  if (it == objects_.end()) {
    throw NotFoundError("delete: unknown object id: " + ko_id);
  }
  if (it->second.status == ObjectStatus::Deleted) {
    return;  // idempotent: already a tombstone
  }
  emit_and_apply({0, events::EventKind::Delete, 0, events::DeletePayload{ko_id}});
  if (sink_ != nullptr) sink_->redact(ko_id);
}

void KnowledgeStore::emit_and_apply(events::EventRecord record) {
  record.timestamp = clock_;
  if (sink_ != nullptr) {
    // Journal-first: the sink makes the record durable (and assigns its
    // sequence number) before the mutation is applied.
    apply_locked(sink_->append(std::move(record)));
  } else {
    record.seq = ++transient_seq_;
    apply_locked(record);
  }
  ++clock_;
}

void KnowledgeStore::apply(const events::EventRecord& record) {
  std::unique_lock lock(mutex_);
  apply_locked(record);
  clock_ = std::max(clock_, record.timestamp + 1);
}

void KnowledgeStore::apply_locked(const events::EventRecord& record) {
  switch (record.kind) {
    case events::EventKind::Write: {
      if (const auto* write = std::get_if<events::WritePayload>(&record.payload)) {
        const auto& ko = write->ko;
        objects_[ko.id] = ko;
        ++consented_writes_;
        if (ko.status == ObjectStatus::Active) {
          active_ids_.push_back(ko.id);
          chains_[ko.concept_id].push_back(ko.id);
          relink_chain_locked(ko.concept_id);
        }
        return;
      }
      if (const auto* redacted =
              std::get_if<events::RedactedPayload>(&record.payload)) {
        // Structural placeholder for a purged write; the journal's later
        // Delete event will turn it into the final tombstone.
        KnowledgeObject placeholder;
        placeholder.id = redacted->ko_id;
        placeholder.concept_id = redacted->concept_id;
        placeholder.status = redacted->was_active ? ObjectStatus::Active
                                                  : ObjectStatus::Archived;
        objects_[placeholder.id] = placeholder;
        ++consented_writes_;
        if (redacted->was_active) {
          active_ids_.push_back(redacted->ko_id);
          chains_[redacted->concept_id].push_back(redacted->ko_id);
          relink_chain_locked(redacted->concept_id);
        }
        return;
      }
      throw IntegrityError("write event with mismatched payload");
    }
    case events::EventKind::GateDecision:
      return;  // audit record; no state transition
    case events::EventKind::Supersede: {
      const auto* payload = std::get_if<events::SupersedePayload>(&record.payload);
      if (payload == nullptr) throw IntegrityError("supersede event with mismatched payload");
      const auto old_it = objects_.find(payload->old_id);
      const auto new_it = objects_.find(payload->new_id);
      if (old_it == objects_.end() || new_it == objects_.end()) {
        throw IntegrityError("supersede event references unknown object");
      }
      if (old_it->second.status == ObjectStatus::Active) {
        old_it->second.status = ObjectStatus::Archived;
        std::erase(active_ids_, payload->old_id);
      }
      if (old_it->second.status != ObjectStatus::Deleted) {
        old_it->second.superseded_by = payload->new_id;
      }
      new_it->second.supersedes = payload->old_id;
      return;
    }
    case events::EventKind::Promote: {
      const auto* payload = std::get_if<events::PromotePayload>(&record.payload);
      if (payload == nullptr) throw IntegrityError("promote event with mismatched payload");
      const auto it = objects_.find(payload->ko_id);
      if (it == objects_.end()) {
        throw IntegrityError("promote event references unknown object");
      }
      if (payload->decision.score.has_value()) {
        it->second.salience = payload->decision.score;  // regate audit trail
      }
      if (payload->decision.outcome == gate::GateOutcome::Admit &&
          it->second.status == ObjectStatus::Archived) {
        it->second.status = ObjectStatus::Active;
        active_ids_.push_back(payload->ko_id);
        // A promoted version becomes the concept's newest belief: move it to
        // the chain head (re-promotion) or append it (first admission).
        auto& chain = chains_[it->second.concept_id];
        std::erase(chain, payload->ko_id);
        chain.push_back(payload->ko_id);
        relink_chain_locked(it->second.concept_id);
      }
      return;
    }
    case events::EventKind::Delete: {
      const auto* payload = std::get_if<events::DeletePayload>(&record.payload);
      if (payload == nullptr) throw IntegrityError("delete event with mismatched payload");
      const auto it = objects_.find(payload->ko_id);
      if (it == objects_.end()) {
        throw IntegrityError("delete event references unknown object");
      }
      if (it->second.status == ObjectStatus::Deleted) return;
      if (it->second.status == ObjectStatus::Active) {
        std::erase(active_ids_, payload->ko_id);
      }
      it->second = make_tombstone(payload->ko_id);
      return;
    }
  }
  throw IntegrityError("unknown event kind");
}

void KnowledgeStore::relink_chain_locked(const std::string& concept_id) {
  const auto it = chains_.find(concept_id);
  if (it == chains_.end()) return;
  const auto& ids = it->second;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto ko_it = objects_.find(ids[i]);
    if (ko_it == objects_.end()) continue;
    auto& ko = ko_it->second;
    if (ko.status == ObjectStatus::Deleted) continue;  // links stay purged
    if (i == 0) {
      ko.supersedes.reset();
    } else {
      ko.supersedes = ids[i - 1];
    }
    if (i + 1 == ids.size()) {
      ko.superseded_by.reset();
    } else {
      ko.superseded_by = ids[i + 1];
    }
  }
}

RetrievalResult KnowledgeStore::retrieve(const std::vector<double>& query,
                                         std::size_t k) const {
  if (query.size() != dim_) {
    throw ValidationError("retrieve: query dimension " +
                          std::to_string(query.size()) + ", expected " +
                          std::to_string(dim_));
  }
  std::shared_lock lock(mutex_);
  std::vector<RetrievalMatch> matches;
  matches.reserve(active_ids_.size());
  for (const auto& id : active_ids_) {
    matches.push_back({id, cosine(query, objects_.at(id).embedding)});
  }
  std::sort(matches.begin(), matches.end(),
            [](const RetrievalMatch& a, const RetrievalMatch& b) {
              if (a.similarity != b.similarity) return a.similarity > b.similarity;
              return a.ko_id < b.ko_id;
            });
  if (matches.size() > k) matches.resize(k);
  return {std::move(matches)};
}

RetrievalResult KnowledgeStore::retrieve_text(const std::string& text,
                                              std::size_t k) const {
  if (embedder_ == nullptr) {
    throw ConfigError("retrieve_text: store has no embedder configured");
  }
  return retrieve(embedder_->embed(text), k);
}

std::optional<KnowledgeObject> KnowledgeStore::get(const std::string& ko_id) const {
  std::shared_lock lock(mutex_);
  const auto it = objects_.find(ko_id);
  if (it == objects_.end()) return std::nullopt;
  return it->second;
}

StoreStats KnowledgeStore::stats() const {
  std::shared_lock lock(mutex_);
  StoreStats s;
  for (const auto& [id, ko] : objects_) {
    switch (ko.status) {
      case ObjectStatus::Active: ++s.active_count; break;
      case ObjectStatus::Archived: ++s.archived_count; break;
      case ObjectStatus::Deleted: ++s.deleted_count; break;
    }
  }
  s.consented_writes = consented_writes_;
  s.compression = consented_writes_ == 0
                      ? 0.0
                      : 1.0 - static_cast<double>(s.active_count) /
                                  static_cast<double>(consented_writes_);
  return s;
}

std::optional<versioning::VersionChain> KnowledgeStore::chain(
    const std::string& concept_id) const {
  std::shared_lock lock(mutex_);
  const auto it = chains_.find(concept_id);
  if (it == chains_.end()) return std::nullopt;
  return versioning::VersionChain{concept_id, it->second};
}

std::optional<KnowledgeObject> KnowledgeStore::temporal(
    const std::string& concept_id,
    const versioning::TemporalSelector& selector) const {
  std::shared_lock lock(mutex_);
  const auto it = chains_.find(concept_id);
  if (it == chains_.end()) return std::nullopt;
  const auto id =
      versioning::select_version({concept_id, it->second}, selector);
  if (!id.has_value()) return std::nullopt;
  const auto obj = objects_.find(*id);
  if (obj == objects_.end()) return std::nullopt;
  return obj->second;
}

std::vector<std::string> KnowledgeStore::check_integrity() const {
  std::shared_lock lock(mutex_);
  auto violations = versioning::check_integrity(
      [this](const std::string& id) -> std::optional<KnowledgeObject> {
        const auto it = objects_.find(id);
        if (it == objects_.end()) return std::nullopt;
        return it->second;
      },
      chains_);
  // Store-level: every Active object must sit at its concept's chain head.
  for (const auto& [id, ko] : objects_) {
    if (ko.status != ObjectStatus::Active) continue;
    const auto it = chains_.find(ko.concept_id);
    if (it == chains_.end() || it->second.empty() || it->second.back() != id) {
      violations.push_back("active object '" + id + "' is not a chain head");
    }
  }
  return violations;
}

std::vector<std::string> KnowledgeStore::active_ids() const {
  std::shared_lock lock(mutex_);
  auto ids = active_ids_;
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::int64_t KnowledgeStore::clock() const {
  std::shared_lock lock(mutex_);
  return clock_;
}

StoreState KnowledgeStore::export_state() const {
  std::shared_lock lock(mutex_);
  StoreState state;
  state.objects = objects_;
  state.chains = chains_;
  state.consented_writes = consented_writes_;
  state.clock = clock_;
  return state;
}

std::unique_ptr<KnowledgeStore> KnowledgeStore::from_state(
    StoreState state, std::size_t dim, std::shared_ptr<events::EventSink> sink,
    std::shared_ptr<const Embedder> embedder) {
  auto store = std::make_unique<KnowledgeStore>(dim, std::move(sink),
                                                std::move(embedder));
  store->objects_ = std::move(state.objects);
  store->chains_ = std::move(state.chains);
  store->consented_writes_ = state.consented_writes;
  store->clock_ = state.clock;
  for (const auto& [id, ko] : store->objects_) {
    if (ko.status == ObjectStatus::Active) store->active_ids_.push_back(id);
  }
  return store;
}

}  // namespace kogate
