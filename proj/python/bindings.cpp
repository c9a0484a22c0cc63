// Python bindings for the salience-gated knowledge store.
//
// The module mirrors the C++ surface that the CLI exposes: stores open an
// event journal the same way (an existing journal's embedding dimension is
// authoritative), text embedding uses the same deterministic embedder as the
// `kogate` tool, and `verify` composes the built-in chain-consistency path
// with caller-supplied fixed-confidence paths exactly like `kogate verify
// --path name=confidence`.

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kogate/core.hpp"
#include "kogate/corpus.hpp"
#include "kogate/gate.hpp"
#include "kogate/harness.hpp"
#include "kogate/persistence.hpp"
#include "kogate/rng.hpp"
#include "kogate/salience.hpp"
#include "kogate/store.hpp"
#include "kogate/verification.hpp"
#include "kogate/versioning.hpp"

namespace py = pybind11;

using namespace kogate;

namespace {

/// Same deterministic text embedder the command-line tool uses, so objects
/// ingested here and via `kogate ingest` land on identical embeddings.
std::shared_ptr<const Embedder> default_embedder(std::size_t dim) {
  return std::make_shared<corpus::ProceduralEmbedder>(dim, fnv1a64("kogate-cli"));
}

/// Open semantics shared with the CLI: an existing journal's dimension wins
/// over the requested one; a fresh journal is created with the request.
std::unique_ptr<KnowledgeStore> make_store(std::size_t dim,
                                           const std::optional<std::string>& journal) {
  if (!journal) {
    return std::make_unique<KnowledgeStore>(dim, nullptr, default_embedder(dim));
  }
  std::optional<persistence::JournalContents> existing;
  if (std::filesystem::exists(*journal)) {
    existing = persistence::read_journal(*journal);
  }
  const std::size_t effective_dim = existing ? existing->dim : dim;
  auto sink = std::make_shared<persistence::FileEventSink>(*journal, effective_dim);
  auto store = std::make_unique<KnowledgeStore>(effective_dim, std::move(sink),
                                                default_embedder(effective_dim));
  if (existing) {
    for (const auto& record : existing->records) store->apply(record);
  }
  return store;
}

corpus::FactLabel label_from_string(const std::string& s) {
  if (s == "correct") return corpus::FactLabel::Correct;
  if (s == "distractor") return corpus::FactLabel::Distractor;
  throw ValidationError("unknown fact label '" + s + "' (want correct|distractor)");
}

std::string label_to_string(corpus::FactLabel label) {
  return label == corpus::FactLabel::Correct ? "correct" : "distractor";
}

std::vector<verification::PathEvaluator> build_evaluators(
    const std::vector<std::pair<std::string, double>>& extra_paths) {
  std::vector<verification::PathEvaluator> evaluators;
  evaluators.push_back(verification::version_chain_evaluator());
  for (const auto& [name, confidence] : extra_paths) {
    evaluators.push_back(verification::fixed_evaluator(name, confidence));
  }
  return evaluators;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Salience-gated knowledge-object store: write-time admission gating, "
      "archive-not-delete tiers, supersession chains with temporal queries, "
      "multi-path verification, corpus generators, and experiment presets.";

  // ── Errors ───────────────────────────────────────────────────────────
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NotFoundError>(m, "NotFoundError", PyExc_LookupError);
  py::register_exception<ConflictError>(m, "ConflictError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<StorageError>(m, "StorageError", PyExc_OSError);
  py::register_exception<IntegrityError>(m, "IntegrityError", PyExc_RuntimeError);

  // ── Enums ────────────────────────────────────────────────────────────
  py::enum_<VerificationLevel>(m, "VerificationLevel")
      .value("UNVERIFIED", VerificationLevel::Unverified)
      .value("INSTITUTIONAL", VerificationLevel::Institutional)
      .value("VERIFIED", VerificationLevel::Verified);

  py::enum_<ObjectStatus>(m, "ObjectStatus")
      .value("ACTIVE", ObjectStatus::Active)
      .value("ARCHIVED", ObjectStatus::Archived)
      .value("DELETED", ObjectStatus::Deleted);

  py::enum_<gate::GateOutcome>(m, "GateOutcome")
      .value("ADMIT", gate::GateOutcome::Admit)
      .value("ARCHIVE", gate::GateOutcome::Archive)
      .value("REJECT_CONSENT", gate::GateOutcome::RejectConsent);

  py::enum_<gate::PromoteMode>(m, "PromoteMode")
      .value("FORCE", gate::PromoteMode::Force)
      .value("REGATE", gate::PromoteMode::Regate);

  // ── Value types ──────────────────────────────────────────────────────
  py::class_<Provenance>(m, "Provenance")
      .def(py::init([](std::string source_id, std::int64_t timestamp, double reputation,
                       VerificationLevel verification, bool consent) {
             Provenance p;
             p.source_id = std::move(source_id);
             p.timestamp = timestamp;
             p.reputation = reputation;
             p.verification = verification;
             p.consent = consent;
             return p;
           }),
           py::arg("source_id") = "", py::arg("timestamp") = std::int64_t{0},
           py::arg("reputation") = 0.0,
           py::arg("verification") = VerificationLevel::Unverified,
           py::arg("consent") = true)
      .def_readwrite("source_id", &Provenance::source_id)
      .def_readwrite("timestamp", &Provenance::timestamp)
      .def_readwrite("reputation", &Provenance::reputation)
      .def_readwrite("verification", &Provenance::verification)
      .def_readwrite("consent", &Provenance::consent)
      .def(py::self == py::self)
      .def("__repr__", [](const Provenance& p) {
        std::ostringstream os;
        os << "Provenance(source_id='" << p.source_id << "', timestamp=" << p.timestamp
           << ", reputation=" << p.reputation << ", verification="
           << to_string(p.verification) << ", consent=" << (p.consent ? "True" : "False")
           << ")";
        return os.str();
      });

  py::class_<SalienceScore>(m, "SalienceScore")
      .def_readonly("rep", &SalienceScore::rep)
      .def_readonly("nov", &SalienceScore::nov)
      .def_readonly("src", &SalienceScore::src)
      .def_readonly("composite", &SalienceScore::composite)
      .def(py::self == py::self)
      .def("__repr__", [](const SalienceScore& s) {
        std::ostringstream os;
        os << "SalienceScore(rep=" << s.rep << ", nov=" << s.nov << ", src=" << s.src
           << ", composite=" << s.composite << ")";
        return os.str();
      });

  py::class_<KnowledgeObject>(m, "KnowledgeObject")
      .def(py::init([](std::string concept_id, std::string content, Provenance provenance,
                       std::string id, std::vector<double> embedding, ObjectStatus status) {
             KnowledgeObject ko;
             ko.concept_id = std::move(concept_id);
             ko.content = std::move(content);
             ko.provenance = std::move(provenance);
             ko.id = std::move(id);
             ko.embedding = std::move(embedding);
             ko.status = status;
             return ko;
           }),
           py::arg("concept_id") = "", py::arg("content") = "",
           py::arg("provenance") = Provenance{}, py::arg("id") = "",
           py::arg("embedding") = std::vector<double>{},
           py::arg("status") = ObjectStatus::Active,
           "id may be left empty: the store fills it with the canonical content "
           "hash at write time. Likewise an empty embedding is computed from the "
           "content by the store's embedder.")
      .def_readwrite("id", &KnowledgeObject::id)
      .def_readwrite("concept_id", &KnowledgeObject::concept_id)
      .def_readwrite("content", &KnowledgeObject::content)
      .def_readwrite("embedding", &KnowledgeObject::embedding)
      .def_readwrite("provenance", &KnowledgeObject::provenance)
      .def_readonly("salience", &KnowledgeObject::salience)
      .def_readonly("status", &KnowledgeObject::status)
      .def_readonly("supersedes", &KnowledgeObject::supersedes)
      .def_readonly("superseded_by", &KnowledgeObject::superseded_by)
      .def(py::self == py::self)
      .def("__repr__", [](const KnowledgeObject& ko) {
        std::ostringstream os;
        os << "KnowledgeObject(id='" << (ko.id.size() > 12 ? ko.id.substr(0, 12) + "…" : ko.id)
           << "', concept_id='" << ko.concept_id << "', status=" << to_string(ko.status)
           << ")";
        return os.str();
      });

  py::class_<salience::SourceReliabilityMap>(m, "SourceReliabilityMap")
      .def(py::init([](double unverified, double institutional, double verified) {
             return salience::SourceReliabilityMap{unverified, institutional, verified};
           }),
           py::arg("unverified") = 0.2, py::arg("institutional") = 0.8,
           py::arg("verified") = 1.0)
      .def_readwrite("unverified", &salience::SourceReliabilityMap::unverified)
      .def_readwrite("institutional", &salience::SourceReliabilityMap::institutional)
      .def_readwrite("verified", &salience::SourceReliabilityMap::verified)
      .def("value_for", &salience::SourceReliabilityMap::value_for, py::arg("level"))
      .def(py::self == py::self);

  py::class_<salience::GateConfig>(m, "GateConfig")
      .def(py::init([](double w_rep, double w_nov, double w_src, double tau, bool enable_rep,
                       bool enable_nov, bool enable_src, salience::SourceReliabilityMap map) {
             salience::GateConfig config;
             config.w_rep = w_rep;
             config.w_nov = w_nov;
             config.w_src = w_src;
             config.tau = tau;
             config.enable_rep = enable_rep;
             config.enable_nov = enable_nov;
             config.enable_src = enable_src;
             config.src_map = map;
             return config;
           }),
           py::arg("w_rep") = 0.6, py::arg("w_nov") = 0.2, py::arg("w_src") = 0.2,
           py::arg("tau") = 0.6, py::arg("enable_rep") = true, py::arg("enable_nov") = true,
           py::arg("enable_src") = true,
           py::arg("src_map") = salience::SourceReliabilityMap{})
      .def_readwrite("w_rep", &salience::GateConfig::w_rep)
      .def_readwrite("w_nov", &salience::GateConfig::w_nov)
      .def_readwrite("w_src", &salience::GateConfig::w_src)
      .def_readwrite("tau", &salience::GateConfig::tau)
      .def_readwrite("enable_rep", &salience::GateConfig::enable_rep)
      .def_readwrite("enable_nov", &salience::GateConfig::enable_nov)
      .def_readwrite("enable_src", &salience::GateConfig::enable_src)
      .def_readwrite("src_map", &salience::GateConfig::src_map)
      .def("validate", &salience::GateConfig::validate)
      .def(py::self == py::self)
      .def("__repr__", [](const salience::GateConfig& c) {
        std::ostringstream os;
        os << "GateConfig(w_rep=" << c.w_rep << ", w_nov=" << c.w_nov << ", w_src=" << c.w_src
           << ", tau=" << c.tau << ")";
        return os.str();
      });

  py::class_<gate::GateDecision>(m, "GateDecision")
      .def_readonly("ko_id", &gate::GateDecision::ko_id)
      .def_readonly("outcome", &gate::GateDecision::outcome)
      .def_readonly("score", &gate::GateDecision::score)
      .def_readonly("superseded_id", &gate::GateDecision::superseded_id)
      .def_readonly("forced", &gate::GateDecision::forced)
      .def(py::self == py::self)
      .def("__repr__", [](const gate::GateDecision& d) {
        std::ostringstream os;
        os << "GateDecision(outcome=" << gate::to_string(d.outcome) << ", ko_id='"
           << (d.ko_id.size() > 12 ? d.ko_id.substr(0, 12) + "…" : d.ko_id) << "'";
        if (d.score) os << ", composite=" << d.score->composite;
        if (d.forced) os << ", forced=True";
        os << ")";
        return os.str();
      });

  py::class_<StoreStats>(m, "StoreStats")
      .def_readonly("active_count", &StoreStats::active_count)
      .def_readonly("archived_count", &StoreStats::archived_count)
      .def_readonly("deleted_count", &StoreStats::deleted_count)
      .def_readonly("consented_writes", &StoreStats::consented_writes)
      .def_readonly("compression", &StoreStats::compression)
      .def(py::self == py::self)
      .def("__repr__", [](const StoreStats& s) {
        std::ostringstream os;
        os << "StoreStats(active=" << s.active_count << ", archived=" << s.archived_count
           << ", deleted=" << s.deleted_count << ", consented_writes=" << s.consented_writes
           << ", compression=" << s.compression << ")";
        return os.str();
      });

  py::class_<RetrievalMatch>(m, "RetrievalMatch")
      .def_readonly("ko_id", &RetrievalMatch::ko_id)
      .def_readonly("similarity", &RetrievalMatch::similarity)
      .def(py::self == py::self)
      .def("__repr__", [](const RetrievalMatch& match) {
        std::ostringstream os;
        os << "RetrievalMatch(ko_id='"
           << (match.ko_id.size() > 12 ? match.ko_id.substr(0, 12) + "…" : match.ko_id)
           << "', similarity=" << match.similarity << ")";
        return os.str();
      });

  py::class_<versioning::VersionChain>(m, "VersionChain")
      .def_readonly("concept_id", &versioning::VersionChain::concept_id)
      .def_readonly("ids", &versioning::VersionChain::ids,
                    "Version ids oldest → newest; the newest slot is the head.")
      .def(py::self == py::self)
      .def("__len__",
           [](const versioning::VersionChain& chain) { return chain.ids.size(); })
      .def("__repr__", [](const versioning::VersionChain& chain) {
        std::ostringstream os;
        os << "VersionChain(concept_id='" << chain.concept_id << "', versions="
           << chain.ids.size() << ")";
        return os.str();
      });

  py::class_<versioning::TemporalSelector>(m, "TemporalSelector")
      .def_static("current", &versioning::TemporalSelector::current,
                  "The chain head (newest version).")
      .def_static("prior", &versioning::TemporalSelector::prior,
                  "One position before the head.")
      .def_static("original", &versioning::TemporalSelector::original,
                  "The oldest version of the concept.")
      .def_static("at_index", &versioning::TemporalSelector::at_index, py::arg("n"),
                  "The n-th version, 1-based from the oldest.");

  py::class_<verification::VerificationPath>(m, "VerificationPath")
      .def_readonly("name", &verification::VerificationPath::name)
      .def_readonly("confidence", &verification::VerificationPath::confidence)
      .def(py::self == py::self)
      .def("__repr__", [](const verification::VerificationPath& path) {
        std::ostringstream os;
        os << "VerificationPath(name='" << path.name << "', confidence=" << path.confidence
           << ")";
        return os.str();
      });

  py::class_<verification::VerificationResult>(m, "VerificationResult")
      .def_readonly("ko_id", &verification::VerificationResult::ko_id)
      .def_readonly("paths", &verification::VerificationResult::paths)
      .def_readonly("aggregate", &verification::VerificationResult::aggregate)
      .def_readonly("threshold", &verification::VerificationResult::threshold)
      .def_readonly("passed", &verification::VerificationResult::passed)
      .def(py::self == py::self)
      .def("__repr__", [](const verification::VerificationResult& r) {
        std::ostringstream os;
        os << "VerificationResult(aggregate=" << r.aggregate << ", threshold=" << r.threshold
           << ", passed=" << (r.passed ? "True" : "False") << ", paths=" << r.paths.size()
           << ")";
        return os.str();
      });

  py::class_<verification::UniformRange>(m, "UniformRange")
      .def(py::init([](double lo, double hi) {
             return verification::UniformRange{lo, hi};
           }),
           py::arg("lo") = 0.0, py::arg("hi") = 1.0)
      .def_readwrite("lo", &verification::UniformRange::lo)
      .def_readwrite("hi", &verification::UniformRange::hi);

  py::class_<verification::CoverageSpec>(m, "CoverageSpec")
      .def(py::init([](std::size_t n_facts, std::size_t n_paths, double threshold,
                       verification::UniformRange correct_path,
                       verification::UniformRange incorrect_path, std::uint64_t seed) {
             return verification::CoverageSpec{n_facts, n_paths, threshold, correct_path,
                                               incorrect_path, seed};
           }),
           py::arg("n_facts") = std::size_t{2000}, py::arg("n_paths") = std::size_t{3},
           py::arg("threshold") = 0.95,
           py::arg("correct_path") = verification::UniformRange{0.85, 0.95},
           py::arg("incorrect_path") = verification::UniformRange{0.04, 0.24},
           py::arg("seed") = std::uint64_t{1})
      .def_readwrite("n_facts", &verification::CoverageSpec::n_facts)
      .def_readwrite("n_paths", &verification::CoverageSpec::n_paths)
      .def_readwrite("threshold", &verification::CoverageSpec::threshold)
      .def_readwrite("correct_path", &verification::CoverageSpec::correct_path)
      .def_readwrite("incorrect_path", &verification::CoverageSpec::incorrect_path)
      .def_readwrite("seed", &verification::CoverageSpec::seed);

  py::class_<verification::CoverageReport>(m, "CoverageReport")
      .def_readonly("correct_mean_aggregate",
                    &verification::CoverageReport::correct_mean_aggregate)
      .def_readonly("incorrect_mean_aggregate",
                    &verification::CoverageReport::incorrect_mean_aggregate)
      .def_readonly("single_path_coverage",
                    &verification::CoverageReport::single_path_coverage)
      .def_readonly("multi_path_coverage",
                    &verification::CoverageReport::multi_path_coverage)
      .def(py::self == py::self)
      .def("__repr__", [](const verification::CoverageReport& r) {
        std::ostringstream os;
        os << "CoverageReport(correct_mean=" << r.correct_mean_aggregate
           << ", incorrect_mean=" << r.incorrect_mean_aggregate
           << ", single_path=" << r.single_path_coverage
           << ", multi_path=" << r.multi_path_coverage << ")";
        return os.str();
      });

  py::class_<harness::CalibrationRow>(m, "CalibrationRow")
      .def_readonly("tau", &harness::CalibrationRow::tau)
      .def_readonly("correct_admitted", &harness::CalibrationRow::correct_admitted)
      .def_readonly("distractor_admitted", &harness::CalibrationRow::distractor_admitted);

  py::class_<harness::CalibrationResult>(m, "CalibrationResult")
      .def_readonly("recommended_tau", &harness::CalibrationResult::recommended_tau)
      .def_readonly("n_correct", &harness::CalibrationResult::n_correct)
      .def_readonly("n_distractor", &harness::CalibrationResult::n_distractor)
      .def_readonly("rows", &harness::CalibrationResult::rows)
      .def("__repr__", [](const harness::CalibrationResult& r) {
        std::ostringstream os;
        os << "CalibrationResult(recommended_tau=" << r.recommended_tau
           << ", n_correct=" << r.n_correct << ", n_distractor=" << r.n_distractor << ")";
        return os.str();
      });

  // ── The store ────────────────────────────────────────────────────────
  py::class_<KnowledgeStore>(m, "KnowledgeStore")
      .def(py::init(&make_store), py::arg("dim") = std::size_t{64},
           py::arg("journal") = py::none(),
           "Open an in-memory store, or a journal-backed one when `journal` "
           "names a file. An existing journal is replayed and its embedding "
           "dimension overrides `dim`; a fresh journal is created with `dim`.")
      .def_property_readonly("dim", &KnowledgeStore::dim)
      .def_property_readonly("clock", &KnowledgeStore::clock,
                             "Logical clock: count of applied events.")
      .def("gate_write", &KnowledgeStore::gate_write, py::arg("ko"),
           py::arg("config") = salience::GateConfig{},
           "Score a consented write against the active tier and admit or "
           "archive it; admission at a concept with an active head supersedes "
           "that head. Writes without consent are rejected and stored nowhere.")
      .def("force_admit", &KnowledgeStore::force_admit, py::arg("ko"),
           "Admit without scoring (consent is still honored).")
      .def(
          "promote",
          [](KnowledgeStore& store, const std::string& ko_id, bool regate,
             const salience::GateConfig& config) {
            return store.promote(
                ko_id, regate ? gate::PromoteMode::Regate : gate::PromoteMode::Force, config);
          },
          py::arg("ko_id"), py::arg("regate") = false,
          py::arg("config") = salience::GateConfig{},
          "Activate an archived object: unconditionally by default, or "
          "re-scored against the current active tier when regate=True.")
      .def("delete_object", &KnowledgeStore::delete_object, py::arg("ko_id"),
           "Purge an object to a tombstone (id + status only); the journal is "
           "rewritten so the content is gone from disk too. Idempotent.")
      .def(
          "retrieve",
          [](const KnowledgeStore& store, const std::vector<double>& query, std::size_t k) {
            return store.retrieve(query, k).matches;
          },
          py::arg("query"), py::arg("k") = std::size_t{8},
          "Exact cosine top-k over the active tier; ties break by ascending id.")
      .def(
          "retrieve_text",
          [](const KnowledgeStore& store, const std::string& text, std::size_t k) {
            return store.retrieve_text(text, k).matches;
          },
          py::arg("text"), py::arg("k") = std::size_t{8})
      .def("get", &KnowledgeStore::get, py::arg("ko_id"),
           "The object by id, or None. Deleted objects come back as tombstones.")
      .def("stats", &KnowledgeStore::stats)
      .def("chain", &KnowledgeStore::chain, py::arg("concept_id"),
           "The concept's version chain (admitted versions oldest → newest), "
           "or None if nothing was ever admitted for it.")
      .def("temporal", &KnowledgeStore::temporal, py::arg("concept_id"), py::arg("selector"),
           "Resolve a temporal selector against the concept's chain; None when "
           "the selector points outside it.")
      .def("check_integrity", &KnowledgeStore::check_integrity,
           "Structural audit of every chain; empty list means consistent.")
      .def("active_ids", &KnowledgeStore::active_ids)
      .def(
          "verify",
          [](const KnowledgeStore& store, const std::string& ko_id, double threshold,
             const std::vector<std::pair<std::string, double>>& extra_paths) {
            return verification::verify(store, ko_id, threshold, build_evaluators(extra_paths));
          },
          py::arg("ko_id"), py::arg("threshold") = 0.95,
          py::arg("extra_paths") = std::vector<std::pair<std::string, double>>{},
          "Noisy-or verification: the built-in chain-consistency path plus any "
          "(name, confidence) pairs supplied as extra paths.")
      .def(
          "snapshot",
          [](const KnowledgeStore& store, const std::string& path) {
            persistence::write_snapshot(store, path);
          },
          py::arg("path"), "Write the full store state as a deterministic snapshot file.")
      .def_static(
          "load_snapshot",
          [](const std::string& path) {
            auto probe = persistence::load_snapshot(path);
            return persistence::load_snapshot(path, nullptr, default_embedder(probe->dim()));
          },
          py::arg("path"),
          "Rebuild a store from a snapshot file (in-memory; no journal attached).")
      .def_static(
          "replay",
          [](const std::string& path) {
            const auto contents = persistence::read_journal(path);
            return persistence::replay_log(path, default_embedder(contents.dim));
          },
          py::arg("path"),
          "Rebuild a store by replaying a journal from empty (read-only: no "
          "sink is attached, so further writes are not journaled).");

  // ── Free functions ───────────────────────────────────────────────────
  m.def("canonical_id",
        py::overload_cast<std::string_view, std::string_view, std::string_view, std::int64_t>(
            &canonical_id),
        py::arg("concept_id"), py::arg("content"), py::arg("source_id"), py::arg("timestamp"),
        "Content-addressed object id: SHA-256 of the canonical serialization.");
  m.def("canonical_id", py::overload_cast<const KnowledgeObject&>(&canonical_id),
        py::arg("ko"), "Id derived from an object's own fields.");
  m.def("cosine", &cosine, py::arg("a"), py::arg("b"),
        "Cosine similarity of two equal-dimension vectors, raw in [-1, 1].");

  m.def(
      "aggregate_confidence",
      [](const std::vector<double>& confidences) {
        return verification::aggregate_confidence(confidences);
      },
      py::arg("confidences"),
      "Noisy-or fold 1 − Π(1 − c) over path confidences; empty input → 0.0.");

  m.def(
      "novelty",
      [](const std::vector<double>& embedding, const std::vector<std::vector<double>>& active) {
        return salience::novelty(embedding, active);
      },
      py::arg("embedding"), py::arg("active"),
      "1 − max(clamp(cos, 0, 1)) against the given embeddings; 1.0 when empty.");

  m.def(
      "salience_score",
      [](const KnowledgeObject& ko, const std::vector<std::vector<double>>& active,
         const salience::GateConfig& config) {
        const salience::ActiveEmbeddings view =
            [&active](const std::function<void(const std::vector<double>&)>& visit) {
              for (const auto& embedding : active) visit(embedding);
            };
        return salience::score(ko, view, config);
      },
      py::arg("ko"), py::arg("active"), py::arg("config") = salience::GateConfig{},
      "Score an object's signals against a materialized active tier.");

  m.def("composite", &salience::composite, py::arg("rep"), py::arg("nov"), py::arg("src"),
        py::arg("config") = salience::GateConfig{},
        "Weighted fold of already-computed signals under the config's enabled mask.");

  m.def("coverage_simulation", &verification::coverage_simulation, py::arg("spec"),
        py::call_guard<py::gil_scoped_release>(),
        "Monte-Carlo coverage of single-path vs noisy-or verification over a "
        "synthetic fact population.");

  m.def(
      "calibrate_tau",
      [](const std::vector<std::pair<KnowledgeObject, std::string>>& labeled,
         const salience::GateConfig& base, std::size_t dim) {
        std::vector<std::pair<KnowledgeObject, corpus::FactLabel>> converted;
        converted.reserve(labeled.size());
        for (const auto& [ko, label] : labeled) {
          converted.emplace_back(ko, label_from_string(label));
        }
        py::gil_scoped_release release;
        return harness::calibrate_tau(converted, base, dim);
      },
      py::arg("labeled"), py::arg("config") = salience::GateConfig{},
      py::arg("dim") = std::size_t{64},
      "Sweep admission thresholds over (object, 'correct'|'distractor') pairs "
      "and recommend the largest tau that admits every correct fact.");

  m.def(
      "generate_corpus",
      [](const std::string& domain, std::size_t n_correct, std::size_t distractor_ratio,
         std::uint64_t seed, double corruption_rate, std::size_t dim) {
        corpus::CorpusSpec spec;
        if (domain == "pharma") {
          spec.domain = corpus::Domain::Pharma;
          spec.sigma_correct = 0.16;
          spec.sigma_distractor = 0.14;
        } else if (domain == "synthetic") {
          spec.domain = corpus::Domain::Synthetic;
        } else {
          throw ValidationError("unknown corpus domain '" + domain +
                                "' (want synthetic|pharma)");
        }
        spec.n_correct = n_correct;
        spec.distractor_ratio = distractor_ratio;
        spec.seed = seed;
        spec.corruption_rate = corruption_rate;
        spec.dim = dim;
        corpus::GeneratedCorpus generated;
        {
          py::gil_scoped_release release;
          generated = corpus::generate(spec);
        }
        py::dict labels;
        for (const auto& [ko_id, label] : generated.key.labels) {
          labels[py::str(ko_id)] = label_to_string(label);
        }
        py::dict correct_for;
        for (const auto& [query_id, ko_id] : generated.key.correct_for) {
          correct_for[py::str(query_id)] = ko_id;
        }
        py::list queries;
        for (const auto& query : generated.queries) {
          py::dict q;
          q["query_id"] = query.query_id;
          q["concept_id"] = query.concept_id;
          q["text"] = query.text;
          q["embedding"] = query.embedding;
          queries.append(q);
        }
        py::dict result;
        result["objects"] = generated.objects;
        result["queries"] = queries;
        result["labels"] = labels;
        result["correct_for"] = correct_for;
        return result;
      },
      py::arg("domain") = "synthetic", py::arg("n_correct") = std::size_t{10},
      py::arg("distractor_ratio") = std::size_t{4}, py::arg("seed") = std::uint64_t{1},
      py::arg("corruption_rate") = 0.0, py::arg("dim") = std::size_t{64},
      "Deterministic labeled corpus: objects in seeded write order, one query "
      "per concept, ground-truth labels, and the correct object per query. "
      "Same defaults as `kogate corpus`.");

  m.def("pharma_affinity_nm", &corpus::pharma_affinity_nm, py::arg("drug"), py::arg("target"),
        "Binding affinity in nM derived from the pair name alone (stable "
        "across platforms and runs).");

  m.def("preset_names", &harness::preset_names,
        "Names accepted by run_preset (and by `kogate bench`).");
  m.def(
      "run_preset",
      [](const std::string& name, const std::vector<std::uint64_t>& seeds) {
        harness::PresetReport report;
        {
          py::gil_scoped_release release;
          report = harness::run_preset(name, seeds);
        }
        return py::make_tuple(report.document.dump(), report.text);
      },
      py::arg("name"), py::arg("seeds") = std::vector<std::uint64_t>{},
      "Run an experiment preset; returns (report_json, report_text). A "
      "non-empty seeds list replaces the preset's own seed list.");
}
