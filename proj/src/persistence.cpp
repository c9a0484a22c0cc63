#include "kogate/persistence.hpp"

#include <cstdio>
#include <sstream>

namespace kogate::persistence {
namespace {

using nlohmann::json;

constexpr std::string_view kJournalFormat = "kogate-events/1";
constexpr std::string_view kSnapshotFormat = "kogate-snapshot/1";

json opt_string(const std::optional<std::string>& value) {
  return value ? json(*value) : json(nullptr);
}

std::optional<std::string> opt_string_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

json salience_to_json(const SalienceScore& s) {
  return json{{"composite", s.composite},
              {"nov", s.nov},
              {"rep", s.rep},
              {"src", s.src}};
}

SalienceScore salience_from_json(const json& j) {
  SalienceScore s;
  s.rep = j.at("rep").get<double>();
  s.nov = j.at("nov").get<double>();
  s.src = j.at("src").get<double>();
  s.composite = j.at("composite").get<double>();
  return s;
}

json provenance_to_json(const Provenance& p) {
  return json{{"consent", p.consent},
              {"reputation", p.reputation},
              {"source_id", p.source_id},
              {"timestamp", p.timestamp},
              {"verification", to_string(p.verification)}};
}

Provenance provenance_from_json(const json& j) {
  Provenance p;
  p.source_id = j.value("source_id", std::string{});
  p.timestamp = j.value("timestamp", std::int64_t{0});
  p.reputation = j.value("reputation", 0.0);
  if (j.contains("verification"))
    p.verification =
        verification_level_from_string(j.at("verification").get<std::string>());
  p.consent = j.value("consent", true);
  return p;
}

json payload_to_json(const events::Payload& payload) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, events::WritePayload>) {
          return json{{"ko", to_json(p.ko)}};
        } else if constexpr (std::is_same_v<T, events::GateDecisionPayload>) {
          return json{{"decision", to_json(p.decision)}};
        } else if constexpr (std::is_same_v<T, events::SupersedePayload>) {
          return json{{"new_id", p.new_id}, {"old_id", p.old_id}};
        } else if constexpr (std::is_same_v<T, events::PromotePayload>) {
          return json{{"decision", to_json(p.decision)},
                      {"ko_id", p.ko_id},
                      {"mode",
                       p.mode == gate::PromoteMode::Force ? "force" : "regate"}};
        } else if constexpr (std::is_same_v<T, events::DeletePayload>) {
          return json{{"ko_id", p.ko_id}};
        } else {
          static_assert(std::is_same_v<T, events::RedactedPayload>);
          return json{{"redacted",
                       json{{"concept_id", p.concept_id},
                            {"ko_id", p.ko_id},
                            {"was_active", p.was_active}}}};
        }
      },
      payload);
}

events::Payload payload_from_json(events::EventKind kind, const json& j) {
  using events::EventKind;
  switch (kind) {
    case EventKind::Write:
      if (j.contains("redacted")) {
        const json& r = j.at("redacted");
        return events::RedactedPayload{r.at("ko_id").get<std::string>(),
                                       r.at("concept_id").get<std::string>(),
                                       r.at("was_active").get<bool>()};
      }
      return events::WritePayload{ko_from_json(j.at("ko"))};
    case EventKind::GateDecision:
      return events::GateDecisionPayload{decision_from_json(j.at("decision"))};
    case EventKind::Supersede:
      return events::SupersedePayload{j.at("old_id").get<std::string>(),
                                      j.at("new_id").get<std::string>()};
    case EventKind::Promote: {
      events::PromotePayload p;
      p.ko_id = j.at("ko_id").get<std::string>();
      p.mode = j.at("mode").get<std::string>() == "force"
                   ? gate::PromoteMode::Force
                   : gate::PromoteMode::Regate;
      p.decision = decision_from_json(j.at("decision"));
      return p;
    }
    case EventKind::Delete:
      return events::DeletePayload{j.at("ko_id").get<std::string>()};
  }
  throw IntegrityError("journal: unknown event kind");
}

json journal_header(std::size_t dim) {
  return json{{"dim", dim}, {"format", std::string(kJournalFormat)}};
}

json parse_line(const std::string& line, const std::filesystem::path& path,
                std::size_t line_no) {
  json j = json::parse(line, /*cb=*/nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded())
    throw IntegrityError("journal " + path.string() + ": line " +
                         std::to_string(line_no) + " is not valid JSON");
  return j;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StorageError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

json to_json(const KnowledgeObject& ko) {
  return json{{"concept_id", ko.concept_id},
              {"content", ko.content},
              {"embedding", ko.embedding},
              {"id", ko.id},
              {"provenance", provenance_to_json(ko.provenance)},
              {"salience",
               ko.salience ? salience_to_json(*ko.salience) : json(nullptr)},
              {"status", to_string(ko.status)},
              {"supersedes", opt_string(ko.supersedes)},
              {"superseded_by", opt_string(ko.superseded_by)}};
}

KnowledgeObject ko_from_json(const json& j) {
  KnowledgeObject ko;
  ko.id = j.value("id", std::string{});
  ko.concept_id = j.value("concept_id", std::string{});
  ko.content = j.value("content", std::string{});
  if (j.contains("embedding"))
    ko.embedding = j.at("embedding").get<std::vector<double>>();
  if (j.contains("provenance"))
    ko.provenance = provenance_from_json(j.at("provenance"));
  if (j.contains("salience") && !j.at("salience").is_null())
    ko.salience = salience_from_json(j.at("salience"));
  if (j.contains("status"))
    ko.status = object_status_from_string(j.at("status").get<std::string>());
  ko.supersedes = opt_string_from(j, "supersedes");
  ko.superseded_by = opt_string_from(j, "superseded_by");
  return ko;
}

json to_json(const gate::GateDecision& decision) {
  return json{{"forced", decision.forced},
              {"ko_id", decision.ko_id},
              {"outcome", gate::to_string(decision.outcome)},
              {"score", decision.score ? salience_to_json(*decision.score)
                                       : json(nullptr)},
              {"superseded_id", opt_string(decision.superseded_id)}};
}

gate::GateDecision decision_from_json(const json& j) {
  gate::GateDecision d;
  d.ko_id = j.at("ko_id").get<std::string>();
  d.outcome = gate::gate_outcome_from_string(j.at("outcome").get<std::string>());
  if (j.contains("score") && !j.at("score").is_null())
    d.score = salience_from_json(j.at("score"));
  d.superseded_id = opt_string_from(j, "superseded_id");
  d.forced = j.value("forced", false);
  return d;
}

json to_json(const events::EventRecord& record) {
  return json{{"kind", events::to_string(record.kind)},
              {"payload", payload_to_json(record.payload)},
              {"seq", record.seq},
              {"timestamp", record.timestamp}};
}

events::EventRecord event_from_json(const json& j) {
  events::EventRecord record;
  record.seq = j.at("seq").get<std::uint64_t>();
  record.kind = events::event_kind_from_string(j.at("kind").get<std::string>());
  record.timestamp = j.at("timestamp").get<std::int64_t>();
  record.payload = payload_from_json(record.kind, j.at("payload"));
  return record;
}

json to_json(const StoreState& state, std::size_t dim) {
  json objects = json::array();
  for (const auto& [id, ko] : state.objects) objects.push_back(to_json(ko));
  json chains = json::array();
  for (const auto& [concept_id, ids] : state.chains)
    chains.push_back(json{{"concept_id", concept_id}, {"ids", ids}});
  return json{{"chains", chains},
              {"clock", state.clock},
              {"consented_writes", state.consented_writes},
              {"dim", dim},
              {"format", std::string(kSnapshotFormat)},
              {"objects", objects}};
}

// ── FileEventSink ──────────────────────────────────────────────────────────

FileEventSink::FileEventSink(std::filesystem::path path, std::size_t dim)
    : path_(std::move(path)), dim_(dim) {
  std::error_code ec;
  const bool exists = std::filesystem::exists(path_, ec) &&
                      std::filesystem::file_size(path_, ec) > 0;
  if (exists) {
    const JournalContents contents = read_journal(path_);
    if (contents.dim != dim_)
      throw IntegrityError("journal " + path_.string() + ": dimension " +
                           std::to_string(contents.dim) +
                           " does not match store dimension " +
                           std::to_string(dim_));
    next_seq_ = contents.records.empty() ? 1 : contents.records.back().seq + 1;
    open_for_append();
  } else {
    out_.open(path_, std::ios::out | std::ios::trunc);
    if (!out_) throw StorageError("cannot create journal " + path_.string());
    out_ << journal_header(dim_).dump() << '\n';
    out_.flush();
    if (!out_) throw StorageError("cannot write journal header to " + path_.string());
  }
}

void FileEventSink::open_for_append() {
  out_.open(path_, std::ios::out | std::ios::app);
  if (!out_) throw StorageError("cannot open journal " + path_.string());
}

const events::EventRecord& FileEventSink::append(events::EventRecord record) {
  record.seq = next_seq_;
  out_ << to_json(record).dump() << '\n';
  out_.flush();
  if (!out_) throw StorageError("journal append failed on " + path_.string());
  ++next_seq_;
  last_ = std::move(record);
  return last_;
}

void FileEventSink::redact(const std::string& ko_id) {
  out_.close();
  const std::vector<std::string> lines = read_lines(path_);
  const std::filesystem::path tmp = path_.string() + ".rewrite";
  {
    std::ofstream rewritten(tmp, std::ios::out | std::ios::trunc);
    if (!rewritten) throw StorageError("cannot create " + tmp.string());
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (i == 0) {  // header passes through untouched
        rewritten << lines[i] << '\n';
        continue;
      }
      json j = parse_line(lines[i], path_, i + 1);
      if (j.value("kind", std::string{}) == "write" &&
          j.at("payload").contains("ko") &&
          j.at("payload").at("ko").value("id", std::string{}) == ko_id) {
        const json& ko = j.at("payload").at("ko");
        j["payload"] = json{
            {"redacted",
             json{{"concept_id", ko.value("concept_id", std::string{})},
                  {"ko_id", ko_id},
                  {"was_active", ko.value("status", std::string{}) == "active"}}}};
      }
      rewritten << j.dump() << '\n';
    }
    rewritten.flush();
    if (!rewritten) throw StorageError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path_);
  open_for_append();
}

JournalContents read_journal(const std::filesystem::path& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty())
    throw IntegrityError("journal " + path.string() + ": missing header");
  const json header = parse_line(lines[0], path, 1);
  if (header.value("format", std::string{}) != kJournalFormat)
    throw IntegrityError("journal " + path.string() +
                         ": unrecognized format header");
  JournalContents contents;
  contents.dim = header.at("dim").get<std::size_t>();
  contents.records.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    events::EventRecord record;
    try {
      record = event_from_json(parse_line(lines[i], path, i + 1));
    } catch (const json::exception& e) {
      throw IntegrityError("journal " + path.string() + ": line " +
                           std::to_string(i + 1) + ": " + e.what());
    }
    const std::uint64_t expected = contents.records.size() + 1;
    if (record.seq != expected)
      throw IntegrityError("journal " + path.string() + ": line " +
                           std::to_string(i + 1) + ": expected seq " +
                           std::to_string(expected) + ", found " +
                           std::to_string(record.seq));
    contents.records.push_back(std::move(record));
  }
  return contents;
}

std::unique_ptr<KnowledgeStore> replay_log(
    const std::filesystem::path& path,
    std::shared_ptr<const Embedder> embedder) {
  const JournalContents contents = read_journal(path);
  auto store = std::make_unique<KnowledgeStore>(contents.dim, nullptr,
                                                std::move(embedder));
  for (const auto& record : contents.records) store->apply(record);
  return store;
}

// ── Snapshots ──────────────────────────────────────────────────────────────

void write_snapshot(const KnowledgeStore& store,
                    const std::filesystem::path& path) {
  const json doc = to_json(store.export_state(), store.dim());
  std::ofstream out(path, std::ios::out | std::ios::trunc);
  if (!out) throw StorageError("cannot create snapshot " + path.string());
  out << doc.dump(2) << '\n';
  out.flush();
  if (!out) throw StorageError("cannot write snapshot " + path.string());
}

std::unique_ptr<KnowledgeStore> load_snapshot(
    const std::filesystem::path& path, std::shared_ptr<events::EventSink> sink,
    std::shared_ptr<const Embedder> embedder) {
  std::ifstream in(path);
  if (!in) throw StorageError("cannot open snapshot " + path.string());
  json doc = json::parse(in, /*cb=*/nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded())
    throw IntegrityError("snapshot " + path.string() + " is not valid JSON");
  if (doc.value("format", std::string{}) != kSnapshotFormat)
    throw IntegrityError("snapshot " + path.string() +
                         ": unrecognized format header");
  StoreState state;
  state.clock = doc.at("clock").get<std::int64_t>();
  state.consented_writes = doc.at("consented_writes").get<std::size_t>();
  for (const json& jko : doc.at("objects")) {
    KnowledgeObject ko = ko_from_json(jko);
    if (ko.id.empty())
      throw IntegrityError("snapshot " + path.string() +
                           ": object without id");
    state.objects.emplace(ko.id, std::move(ko));
  }
  for (const json& jchain : doc.at("chains")) {
    state.chains.emplace(jchain.at("concept_id").get<std::string>(),
                         jchain.at("ids").get<std::vector<std::string>>());
  }
  return KnowledgeStore::from_state(std::move(state),
                                    doc.at("dim").get<std::size_t>(),
                                    std::move(sink), std::move(embedder));
}

// ── Corpus interchange ─────────────────────────────────────────────────────

void write_labeled_corpus(const corpus::GeneratedCorpus& corpus,
                          const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::out | std::ios::trunc);
  if (!out) throw StorageError("cannot create " + path.string());
  for (const auto& ko : corpus.objects) {
    const auto it = corpus.key.labels.find(ko.id);
    const bool correct = it != corpus.key.labels.end() &&
                         it->second == corpus::FactLabel::Correct;
    out << json{{"ko", to_json(ko)},
                {"label", correct ? "correct" : "distractor"}}
               .dump()
        << '\n';
  }
  out.flush();
  if (!out) throw StorageError("cannot write " + path.string());
}

std::vector<std::pair<KnowledgeObject, corpus::FactLabel>> read_labeled_corpus(
    const std::filesystem::path& path) {
  std::vector<std::pair<KnowledgeObject, corpus::FactLabel>> out;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const json j = parse_line(lines[i], path, i + 1);
    const std::string label = j.at("label").get<std::string>();
    if (label != "correct" && label != "distractor")
      throw ValidationError("labeled corpus " + path.string() + ": line " +
                            std::to_string(i + 1) + ": unknown label '" +
                            label + "'");
    out.emplace_back(ko_from_json(j.at("ko")),
                     label == "correct" ? corpus::FactLabel::Correct
                                        : corpus::FactLabel::Distractor);
  }
  return out;
}

std::vector<KnowledgeObject> read_objects_jsonl(
    const std::filesystem::path& path) {
  std::vector<KnowledgeObject> out;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const json j = parse_line(lines[i], path, i + 1);
    out.push_back(ko_from_json(j.contains("ko") ? j.at("ko") : j));
  }
  return out;
}

}  // namespace kogate::persistence
