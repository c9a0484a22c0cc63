#include "kogate/cli.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kogate/core.hpp"
#include "kogate/corpus.hpp"
#include "kogate/harness.hpp"
#include "kogate/persistence.hpp"
#include "kogate/rng.hpp"
#include "kogate/salience.hpp"
#include "kogate/store.hpp"
#include "kogate/verification.hpp"

namespace kogate::cli {
namespace {

using nlohmann::json;

constexpr const char* kVersion = "kogate 0.1.0";

/// Deterministic text embedder shared by every CLI invocation, so the same
/// text always maps to the same vector across runs and machines.
std::shared_ptr<const Embedder> cli_embedder(std::size_t dim) {
  return std::make_shared<corpus::ProceduralEmbedder>(dim,
                                                      fnv1a64("kogate-cli"));
}

struct GlobalOptions {
  std::string log_path;
  std::string config_path;
  std::size_t dim = 64;
  salience::GateConfig gate;
};

void apply_config_file(GlobalOptions& options) {
  if (options.config_path.empty()) return;
  std::ifstream in(options.config_path);
  if (!in) throw ConfigError("cannot open config " + options.config_path);
  json doc = json::parse(in, /*cb=*/nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded())
    throw ConfigError("config " + options.config_path + " is not valid JSON");
  options.dim = doc.value("dim", options.dim);
  if (doc.contains("gate")) {
    const json& g = doc.at("gate");
    auto& cfg = options.gate;
    cfg.w_rep = g.value("w_rep", cfg.w_rep);
    cfg.w_nov = g.value("w_nov", cfg.w_nov);
    cfg.w_src = g.value("w_src", cfg.w_src);
    cfg.tau = g.value("tau", cfg.tau);
    cfg.enable_rep = g.value("enable_rep", cfg.enable_rep);
    cfg.enable_nov = g.value("enable_nov", cfg.enable_nov);
    cfg.enable_src = g.value("enable_src", cfg.enable_src);
    if (g.contains("src_map")) {
      const json& m = g.at("src_map");
      cfg.src_map.unverified = m.value("unverified", cfg.src_map.unverified);
      cfg.src_map.institutional =
          m.value("institutional", cfg.src_map.institutional);
      cfg.src_map.verified = m.value("verified", cfg.src_map.verified);
    }
  }
}

struct OpenedStore {
  std::shared_ptr<persistence::FileEventSink> sink;
  std::unique_ptr<KnowledgeStore> store;
};

/// Open (or create) the journal-backed store: replay the journal through a
/// store that keeps the same sink attached, so new writes continue the
/// sequence. An existing journal's dimension is authoritative; --dim only
/// sets the dimension of journals created here.
OpenedStore open_store(const GlobalOptions& options) {
  if (options.log_path.empty())
    throw ConfigError("this subcommand needs --log <journal-path>");
  std::optional<persistence::JournalContents> existing;
  if (std::filesystem::exists(options.log_path)) {
    existing = persistence::read_journal(options.log_path);
  }
  const std::size_t dim = existing ? existing->dim : options.dim;
  auto sink =
      std::make_shared<persistence::FileEventSink>(options.log_path, dim);
  auto store = std::make_unique<KnowledgeStore>(dim, sink, cli_embedder(dim));
  if (existing) {
    for (const auto& record : existing->records) store->apply(record);
  }
  return {std::move(sink), std::move(store)};
}

std::vector<double> parse_embedding(const std::string& csv) {
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ValidationError("embedding: '" + item + "' is not a number");
    }
  }
  return values;
}

std::vector<std::uint64_t> parse_seeds(const std::string& csv) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      seeds.push_back(static_cast<std::uint64_t>(std::stoull(item)));
    } catch (const std::exception&) {
      throw ValidationError("seeds: '" + item + "' is not an integer");
    }
  }
  return seeds;
}

std::string describe(const gate::GateDecision& decision) {
  std::string line = gate::to_string(decision.outcome) + " " + decision.ko_id;
  if (decision.score) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " composite=%.4f", decision.score->composite);
    line += buf;
  }
  if (decision.forced) line += " (forced)";
  if (decision.superseded_id) line += " supersedes " + *decision.superseded_id;
  return line;
}

int run_checked(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"Salience-gated knowledge store", "kogate"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  GlobalOptions options;
  app.add_option("--log", options.log_path,
                 "Event journal backing the store (stateful subcommands)");
  app.add_option("--config", options.config_path,
                 "JSON config file (dim, gate weights)");
  app.add_option("--dim", options.dim, "Embedding dimension for new journals");
  double flag_tau = -1.0;
  app.add_option("--tau", flag_tau, "Admission threshold override");

  // ── ingest ──────────────────────────────────────────────────────────
  auto* ingest = app.add_subcommand("ingest", "Gate objects from a JSONL file");
  std::string ingest_file;
  bool ingest_force = false;
  ingest->add_option("--file", ingest_file, "Objects, one JSON per line")
      ->required();
  ingest->add_flag("--force", ingest_force, "Admit without scoring");

  // ── query ───────────────────────────────────────────────────────────
  auto* query = app.add_subcommand("query", "Retrieve the top-k active objects");
  std::string query_text, query_embedding;
  std::size_t query_k = 8;
  query->add_option("--text", query_text, "Query text (embedded automatically)");
  query->add_option("--embedding", query_embedding,
                    "Comma-separated query vector");
  query->add_option("--k", query_k, "Result count");

  // ── history ─────────────────────────────────────────────────────────
  auto* history = app.add_subcommand("history", "Show a concept's version chain");
  std::string history_concept;
  history->add_option("concept", history_concept, "Concept id")->required();

  // ── promote ─────────────────────────────────────────────────────────
  auto* promote = app.add_subcommand("promote", "Activate an archived object");
  std::string promote_id;
  bool promote_regate = false;
  promote->add_option("id", promote_id, "Object id")->required();
  promote->add_flag("--regate", promote_regate,
                    "Re-score against the current active tier instead of forcing");

  // ── delete ──────────────────────────────────────────────────────────
  auto* del = app.add_subcommand("delete", "Purge an object to a tombstone");
  std::string delete_id;
  del->add_option("id", delete_id, "Object id")->required();

  // ── verify ──────────────────────────────────────────────────────────
  auto* verify = app.add_subcommand("verify", "Multi-path verification of an object");
  std::string verify_id;
  double verify_threshold = 0.95;
  std::vector<std::string> verify_paths;
  verify->add_option("id", verify_id, "Object id")->required();
  verify->add_option("--threshold", verify_threshold, "Aggregate pass threshold");
  verify->add_option("--path", verify_paths,
                     "Extra evaluation path as name=confidence (repeatable)");

  // ── bench ───────────────────────────────────────────────────────────
  auto* bench = app.add_subcommand("bench", "Run an experiment preset");
  std::string bench_preset, bench_out, bench_seeds;
  bool bench_json = false;
  bench->add_option("--preset", bench_preset, "One of the named presets")
      ->required();
  bench->add_option("--seeds", bench_seeds, "Comma-separated seed override");
  bench->add_option("--out", bench_out, "Write the JSON report here");
  bench->add_flag("--json", bench_json, "Print JSON instead of text");

  // ── calibrate ───────────────────────────────────────────────────────
  auto* calibrate = app.add_subcommand(
      "calibrate", "Recommend an admission threshold from a labeled corpus");
  std::string calibrate_corpus, calibrate_out;
  calibrate->add_option("--corpus", calibrate_corpus, "Labeled JSONL corpus")
      ->required();
  calibrate->add_option("--out", calibrate_out, "Write the JSON result here");

  // ── corpus ──────────────────────────────────────────────────────────
  auto* corpus_cmd =
      app.add_subcommand("corpus", "Generate a labeled benchmark corpus");
  std::string corpus_domain = "synthetic", corpus_out;
  std::size_t corpus_n = 10, corpus_ratio = 4;
  std::uint64_t corpus_seed = 1;
  double corpus_corruption = 0.0;
  corpus_cmd->add_option("--domain", corpus_domain, "synthetic or pharma")
      ->check(CLI::IsMember({"synthetic", "pharma"}));
  corpus_cmd->add_option("--n", corpus_n, "Correct facts");
  corpus_cmd->add_option("--ratio", corpus_ratio, "Distractors per fact");
  corpus_cmd->add_option("--seed", corpus_seed, "Corpus seed");
  corpus_cmd->add_option("--corruption", corpus_corruption,
                         "Fraction of correct slots flipped");
  corpus_cmd->add_option("--out", corpus_out, "Output JSONL path")->required();

  // ── snapshot ────────────────────────────────────────────────────────
  auto* snapshot = app.add_subcommand("snapshot", "Write or inspect a snapshot");
  std::string snapshot_out, snapshot_inspect;
  snapshot->add_option("--out", snapshot_out,
                       "Write the journal-backed store to this snapshot file");
  snapshot->add_option("--inspect", snapshot_inspect,
                       "Load a snapshot and report stats and integrity");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("kogate");
  for (const auto& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream message;
    const int code = app.exit(e, message, message);
    (code == 0 ? out : err) << message.str();
    return code == 0 ? 0 : 2;
  }

  apply_config_file(options);
  if (flag_tau >= 0.0) options.gate.tau = flag_tau;
  options.gate.validate();

  if (ingest->parsed()) {
    auto opened = open_store(options);
    const auto objects = persistence::read_objects_jsonl(ingest_file);
    std::size_t admitted = 0, archived = 0, rejected = 0;
    for (const auto& ko : objects) {
      const auto decision = ingest_force
                                ? opened.store->force_admit(ko)
                                : opened.store->gate_write(ko, options.gate);
      switch (decision.outcome) {
        case gate::GateOutcome::Admit: ++admitted; break;
        case gate::GateOutcome::Archive: ++archived; break;
        case gate::GateOutcome::RejectConsent: ++rejected; break;
      }
      out << describe(decision) << '\n';
    }
    out << "ingested " << objects.size() << ": " << admitted << " admitted, "
        << archived << " archived, " << rejected << " rejected\n";
    return 0;
  }

  if (query->parsed()) {
    auto opened = open_store(options);
    if (query_text.empty() == query_embedding.empty())
      throw ValidationError("query: pass exactly one of --text / --embedding");
    RetrievalResult result;
    if (!query_text.empty()) {
      result = opened.store->retrieve_text(query_text, query_k);
    } else {
      result = opened.store->retrieve(parse_embedding(query_embedding), query_k);
    }
    std::size_t rank = 1;
    for (const auto& match : result.matches) {
      const auto ko = opened.store->get(match.ko_id);
      char sim[32];
      std::snprintf(sim, sizeof sim, "%.6f", match.similarity);
      out << rank++ << ". " << sim << " " << match.ko_id;
      if (ko) out << " [" << ko->concept_id << "] " << ko->content;
      out << '\n';
    }
    if (result.matches.empty()) out << "(no active objects)\n";
    return 0;
  }

  if (history->parsed()) {
    auto opened = open_store(options);
    const auto chain = opened.store->chain(history_concept);
    if (!chain) throw NotFoundError("no chain for concept " + history_concept);
    for (std::size_t i = 0; i < chain->ids.size(); ++i) {
      const auto ko = opened.store->get(chain->ids[i]);
      out << "v" << (i + 1) << " " << chain->ids[i];
      if (ko) {
        out << " " << to_string(ko->status) << " ts="
            << ko->provenance.timestamp;
        if (ko->status != ObjectStatus::Deleted) out << " " << ko->content;
      }
      out << '\n';
    }
    return 0;
  }

  if (promote->parsed()) {
    auto opened = open_store(options);
    const auto decision = opened.store->promote(
        promote_id,
        promote_regate ? gate::PromoteMode::Regate : gate::PromoteMode::Force,
        options.gate);
    out << describe(decision) << '\n';
    return 0;
  }

  if (del->parsed()) {
    auto opened = open_store(options);
    opened.store->delete_object(delete_id);
    out << "deleted " << delete_id << '\n';
    return 0;
  }

  if (verify->parsed()) {
    auto opened = open_store(options);
    std::vector<verification::PathEvaluator> evaluators;
    evaluators.push_back(verification::version_chain_evaluator());
    for (const auto& spec : verify_paths) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos)
        throw ValidationError("--path expects name=confidence, got '" + spec + "'");
      double confidence = 0.0;
      try {
        confidence = std::stod(spec.substr(eq + 1));
      } catch (const std::exception&) {
        throw ValidationError("--path confidence in '" + spec + "' is not a number");
      }
      evaluators.push_back(
          verification::fixed_evaluator(spec.substr(0, eq), confidence));
    }
    const auto result = verification::verify(*opened.store, verify_id,
                                             verify_threshold, evaluators);
    for (const auto& path : result.paths) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4f", path.confidence);
      out << "path " << path.name << " confidence=" << buf << '\n';
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", result.aggregate);
    out << "aggregate " << buf << " threshold " << verify_threshold << " -> "
        << (result.passed ? "PASS" : "FAIL") << '\n';
    return 0;
  }

  if (bench->parsed()) {
    const auto seeds = bench_seeds.empty() ? std::vector<std::uint64_t>{}
                                           : parse_seeds(bench_seeds);
    const auto report = harness::run_preset(bench_preset, seeds);
    if (!bench_out.empty()) {
      std::ofstream file(bench_out, std::ios::out | std::ios::trunc);
      if (!file) throw StorageError("cannot create " + bench_out);
      file << report.document.dump(2) << '\n';
      if (!file.flush()) throw StorageError("cannot write " + bench_out);
    }
    if (bench_json)
      out << report.document.dump(2) << '\n';
    else
      out << report.text;
    return 0;
  }

  if (calibrate->parsed()) {
    const auto labeled = persistence::read_labeled_corpus(calibrate_corpus);
    const auto result =
        harness::calibrate_tau(labeled, options.gate, options.dim);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", result.recommended_tau);
    out << "recommended tau " << buf << " (" << result.n_correct
        << " correct, " << result.n_distractor << " distractors)\n";
    for (const auto& row : result.rows) {
      char tau[32];
      std::snprintf(tau, sizeof tau, "%.6f", row.tau);
      out << "tau " << tau << ": " << row.correct_admitted << " correct, "
          << row.distractor_admitted << " distractors admitted\n";
    }
    if (!calibrate_out.empty()) {
      json rows = json::array();
      for (const auto& row : result.rows)
        rows.push_back(json{{"correct_admitted", row.correct_admitted},
                            {"distractor_admitted", row.distractor_admitted},
                            {"tau", row.tau}});
      const json doc{{"format", "kogate-calibration/1"},
                     {"n_correct", result.n_correct},
                     {"n_distractor", result.n_distractor},
                     {"recommended_tau", result.recommended_tau},
                     {"rows", rows}};
      std::ofstream file(calibrate_out, std::ios::out | std::ios::trunc);
      if (!file) throw StorageError("cannot create " + calibrate_out);
      file << doc.dump(2) << '\n';
      if (!file.flush()) throw StorageError("cannot write " + calibrate_out);
    }
    return 0;
  }

  if (corpus_cmd->parsed()) {
    corpus::CorpusSpec spec;
    spec.domain = corpus_domain == "pharma" ? corpus::Domain::Pharma
                                            : corpus::Domain::Synthetic;
    if (spec.domain == corpus::Domain::Pharma) {
      spec.sigma_correct = 0.16;
      spec.sigma_distractor = 0.14;
    }
    spec.n_correct = corpus_n;
    spec.distractor_ratio = corpus_ratio;
    spec.seed = corpus_seed;
    spec.corruption_rate = corpus_corruption;
    const auto generated = corpus::generate(spec);
    persistence::write_labeled_corpus(generated, corpus_out);
    out << "wrote " << generated.objects.size() << " labeled objects to "
        << corpus_out << '\n';
    return 0;
  }

  if (snapshot->parsed()) {
    if (snapshot_out.empty() == snapshot_inspect.empty())
      throw ValidationError("snapshot: pass exactly one of --out / --inspect");
    if (!snapshot_out.empty()) {
      auto opened = open_store(options);
      persistence::write_snapshot(*opened.store, snapshot_out);
      const auto stats = opened.store->stats();
      out << "snapshot " << snapshot_out << ": " << stats.active_count
          << " active, " << stats.archived_count << " archived, "
          << stats.deleted_count << " deleted\n";
    } else {
      const auto store = persistence::load_snapshot(snapshot_inspect);
      const auto stats = store->stats();
      const auto violations = store->check_integrity();
      out << "snapshot " << snapshot_inspect << ": " << stats.active_count
          << " active, " << stats.archived_count << " archived, "
          << stats.deleted_count << " deleted, " << violations.size()
          << " integrity violations\n";
      for (const auto& violation : violations) out << "  " << violation << '\n';
    }
    return 0;
  }

  err << "error: no subcommand\n";
  return 2;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  try {
    return run_checked(args, out, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NotFoundError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ConflictError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const StorageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const IntegrityError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace kogate::cli
