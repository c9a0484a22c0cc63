#include "kogate/harness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <future>
#include <numeric>
#include <set>
#include <sstream>

#include "kogate/rng.hpp"

namespace kogate::harness {
namespace {

using corpus::FactLabel;
using corpus::GeneratedCorpus;
using nlohmann::json;

constexpr std::string_view kReportFormat = "kogate-report/1";

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

double pop_std_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mu = mean_of(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - mu) * (x - mu);
  return std::sqrt(acc / static_cast<double>(xs.size()));
}

std::string fmt(double value, int decimals = 1) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string fmt_pm(double mean, double std_dev, int decimals = 1) {
  return fmt(mean, decimals) + " +/- " + fmt(std_dev, decimals);
}

/// Fixed-width text table; first column left-aligned, the rest right-aligned.
std::string render_table(const std::vector<std::string>& headers,
                         const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) widths[c] = headers[c].size();
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size() && c < widths.size(); ++c)
      widths[c] = std::max(widths[c], row[c].size());
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < widths.size(); ++c) {
      const std::string& cell = c < row.size() ? row[c] : std::string{};
      const std::string pad(widths[c] - cell.size(), ' ');
      if (c > 0) out << "  ";
      out << (c == 0 ? cell + pad : pad + cell);
    }
    out << '\n';
  };
  emit(headers);
  std::vector<std::string> rule;
  for (std::size_t w : widths) rule.emplace_back(w, '-');
  emit(rule);
  for (const auto& row : rows) emit(row);
  return out.str();
}

bool uses_critic(Condition condition) {
  return condition == Condition::ReadFiltered || condition == Condition::Both;
}

std::unique_ptr<KnowledgeStore> populate(Condition condition,
                                         const GeneratedCorpus& corpus,
                                         const salience::GateConfig& gate_cfg) {
  auto store = std::make_unique<KnowledgeStore>(corpus.spec.dim);
  switch (condition) {
    case Condition::Ungated:
    case Condition::ReadFiltered:
      for (const auto& ko : corpus.objects) store->force_admit(ko);
      break;
    case Condition::WriteGated:
    case Condition::Both:
      for (const auto& ko : corpus.objects) store->gate_write(ko, gate_cfg);
      break;
    case Condition::HardDelete: {
      // Deletion-semantics twin: the gate runs normally against a shadow
      // store (whose active tier is identical step-by-step), and only the
      // admitted writes reach the store under test — a rejected write
      // leaves no object, no archive entry, nothing to promote.
      KnowledgeStore shadow(corpus.spec.dim);
      for (const auto& ko : corpus.objects) {
        const auto decision = shadow.gate_write(ko, gate_cfg);
        if (decision.outcome == gate::GateOutcome::Admit) store->force_admit(ko);
      }
      break;
    }
  }
  return store;
}

SeedRun evaluate(const GeneratedCorpus& corpus, const KnowledgeStore& store,
                 Condition condition, const JudgeParams& judge,
                 const CriticParams& critic) {
  SeedRun run;
  run.seed = corpus.spec.seed;
  run.queries = corpus.queries.size();
  std::size_t correct_verdicts = 0;
  double calls_total = 0.0;
  for (const auto& query : corpus.queries) {
    const RetrievalResult result = store.retrieve(query.embedding, judge.k);
    std::vector<std::string> ids;
    ids.reserve(result.matches.size());
    for (const auto& match : result.matches) ids.push_back(match.ko_id);
    double calls = 1.0;  // the answer call
    if (uses_critic(condition)) {
      calls += static_cast<double>(ids.size());
      std::vector<std::string> survivors;
      survivors.reserve(ids.size());
      for (const auto& id : ids) {
        const auto it = corpus.key.labels.find(id);
        const FactLabel label =
            it == corpus.key.labels.end() ? FactLabel::Correct : it->second;
        if (critic_keeps(critic, id, label)) survivors.push_back(id);
      }
      ids = std::move(survivors);
    }
    if (judge_query(query, ids, corpus.key, judge)) ++correct_verdicts;
    calls_total += calls;
  }
  run.accuracy_pct = run.queries == 0
                         ? 0.0
                         : 100.0 * static_cast<double>(correct_verdicts) /
                               static_cast<double>(run.queries);
  run.calls_per_query =
      run.queries == 0 ? 0.0 : calls_total / static_cast<double>(run.queries);

  const StoreStats stats = store.stats();
  run.active_count = stats.active_count;
  run.compression_pct = 100.0 * stats.compression;
  std::size_t labeled = 0, labeled_correct = 0, labeled_distractor = 0;
  for (const auto& id : store.active_ids()) {
    const auto it = corpus.key.labels.find(id);
    if (it == corpus.key.labels.end()) continue;
    ++labeled;
    if (it->second == FactLabel::Correct)
      ++labeled_correct;
    else
      ++labeled_distractor;
  }
  run.distractors_active = labeled_distractor;
  run.precision_pct = labeled == 0 ? 100.0
                                   : 100.0 * static_cast<double>(labeled_correct) /
                                         static_cast<double>(labeled);
  return run;
}

ConditionSummary summarize(Condition condition, std::vector<SeedRun> runs) {
  ConditionSummary summary;
  summary.condition = condition;
  std::vector<double> acc, active, distractors, precision, calls;
  for (const auto& run : runs) {
    acc.push_back(run.accuracy_pct);
    active.push_back(static_cast<double>(run.active_count));
    distractors.push_back(static_cast<double>(run.distractors_active));
    precision.push_back(run.precision_pct);
    calls.push_back(run.calls_per_query);
  }
  summary.runs = std::move(runs);
  summary.accuracy_mean = mean_of(acc);
  summary.accuracy_std = pop_std_of(acc);
  summary.active_mean = mean_of(active);
  summary.distractors_active_mean = mean_of(distractors);
  summary.precision_mean = mean_of(precision);
  summary.calls_per_query = mean_of(calls);
  return summary;
}

std::vector<GeneratedCorpus> corpora_for_seeds(
    corpus::CorpusSpec base, const std::vector<std::uint64_t>& seeds) {
  std::vector<GeneratedCorpus> corpora;
  corpora.reserve(seeds.size());
  for (const std::uint64_t seed : seeds) {
    corpus::CorpusSpec spec = base;
    spec.seed = seed;
    corpora.push_back(corpus::generate(spec));
  }
  return corpora;
}

/// Run one condition across the per-seed corpora in parallel.
ConditionSummary run_condition(Condition condition,
                               const std::vector<GeneratedCorpus>& corpora,
                               const salience::GateConfig& gate_cfg,
                               const JudgeParams& judge,
                               const CriticParams& critic) {
  std::vector<std::future<SeedRun>> futures;
  futures.reserve(corpora.size());
  for (const auto& corpus_ref : corpora) {
    futures.push_back(std::async(std::launch::async, [&]() {
      const auto store = populate(condition, corpus_ref, gate_cfg);
      return evaluate(corpus_ref, *store, condition, judge, critic);
    }));
  }
  std::vector<SeedRun> runs;
  runs.reserve(futures.size());
  for (auto& future : futures) runs.push_back(future.get());
  return summarize(condition, std::move(runs));
}

}  // namespace

std::string to_string(Condition condition) {
  switch (condition) {
    case Condition::Ungated: return "ungated";
    case Condition::WriteGated: return "write_gated";
    case Condition::ReadFiltered: return "read_filtered";
    case Condition::Both: return "both";
    case Condition::HardDelete: return "hard_delete";
  }
  throw ValidationError("unknown condition");
}

Condition condition_from_string(std::string_view s) {
  if (s == "ungated") return Condition::Ungated;
  if (s == "write_gated") return Condition::WriteGated;
  if (s == "read_filtered") return Condition::ReadFiltered;
  if (s == "both") return Condition::Both;
  if (s == "hard_delete") return Condition::HardDelete;
  throw ValidationError("unknown condition: " + std::string(s));
}

bool critic_keeps(const CriticParams& params, const std::string& ko_id,
                  FactLabel label) {
  // One coin per (critic seed, object): stable across conditions and runs.
  const double u = to_unit(mix64(params.seed, fnv1a64(ko_id)));
  if (label == FactLabel::Correct) return u < params.tpr;  // keep correct
  return u >= params.tnr;                                  // drop distractor
}

bool judge_query(const corpus::Query& query,
                 const std::vector<std::string>& survivors,
                 const corpus::AnswerKey& key, const JudgeParams& params) {
  const auto correct_it = key.correct_for.find(query.query_id);
  if (correct_it == key.correct_for.end()) return false;  // no right answer exists
  if (std::find(survivors.begin(), survivors.end(), correct_it->second) ==
      survivors.end())
    return false;  // the right answer never reached the context
  const auto distractors_it = key.distractors_for.find(query.query_id);
  std::size_t same_concept = 0;
  if (distractors_it != key.distractors_for.end()) {
    for (const auto& id : survivors) {
      if (std::find(distractors_it->second.begin(), distractors_it->second.end(),
                    id) != distractors_it->second.end())
        ++same_concept;
    }
  }
  // Denominator is the retrieval depth, not the survivor count: the judge
  // models context crowding relative to the fixed context budget k.
  return static_cast<double>(same_concept) / static_cast<double>(params.k) <
         params.theta;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.gate.validate();
  if (spec.seeds.empty()) throw ConfigError("experiment: no seeds");
  if (spec.conditions.empty()) throw ConfigError("experiment: no conditions");
  if (spec.judge.k == 0) throw ConfigError("experiment: judge k must be > 0");
  ExperimentResult result;
  result.spec = spec;
  const auto corpora = corpora_for_seeds(spec.corpus, spec.seeds);
  for (const Condition condition : spec.conditions) {
    result.conditions.push_back(
        run_condition(condition, corpora, spec.gate, spec.judge, spec.critic));
  }
  return result;
}

AblationResult run_ablation(const AblationSpec& spec) {
  if (spec.seeds.empty()) throw ConfigError("ablation: no seeds");
  AblationResult result;
  result.spec = spec;
  const auto corpora = corpora_for_seeds(spec.corpus, spec.seeds);
  struct Mask {
    const char* name;
    bool rep, nov, src;
  };
  constexpr std::array<Mask, 7> kMasks = {{{"rep+nov+src", true, true, true},
                                           {"rep", true, false, false},
                                           {"nov", false, true, false},
                                           {"src", false, false, true},
                                           {"rep+nov", true, true, false},
                                           {"rep+src", true, false, true},
                                           {"nov+src", false, true, true}}};
  for (const Mask& mask : kMasks) {
    salience::GateConfig cfg = spec.gate;
    cfg.enable_rep = mask.rep;
    cfg.enable_nov = mask.nov;
    cfg.enable_src = mask.src;
    AblationRow row;
    row.mask = mask.name;
    row.enable_rep = mask.rep;
    row.enable_nov = mask.nov;
    row.enable_src = mask.src;
    row.gated = run_condition(Condition::WriteGated, corpora, cfg, spec.judge,
                              CriticParams{});
    result.rows.push_back(std::move(row));
  }
  return result;
}

CorruptionResult run_corruption(const CorruptionSpec& spec) {
  CorruptionResult result;
  result.spec = spec;
  for (const double rate : spec.rates) {
    ExperimentSpec exp;
    exp.corpus = spec.corpus;
    exp.corpus.corruption_rate = rate;
    exp.conditions = {Condition::Ungated, Condition::WriteGated};
    exp.seeds = spec.seeds;
    exp.gate = spec.gate;
    exp.judge = spec.judge;
    const ExperimentResult r = run_experiment(exp);
    CorruptionRow row;
    row.rate = rate;
    row.ungated = r.conditions[0];
    row.gated = r.conditions[1];
    result.rows.push_back(std::move(row));
  }
  return result;
}

AccumulationResult run_accumulation(const AccumulationRunSpec& spec) {
  spec.accumulation.validate();
  if (spec.seeds.empty()) throw ConfigError("accumulation: no seeds");
  AccumulationResult result;
  result.spec = spec;

  const std::size_t steps = spec.accumulation.steps;
  using SeedTrack = std::vector<AccumulationSeedStep>;  // one entry per step
  auto run_seed = [&](std::uint64_t seed) {
    corpus::AccumulationSpec acc = spec.accumulation;
    acc.corpus.seed = seed;
    const auto batches = corpus::gen_accumulation(acc);
    KnowledgeStore gated(acc.corpus.dim);
    KnowledgeStore ungated(acc.corpus.dim);
    std::vector<corpus::Query> queries;
    corpus::AnswerKey merged;
    std::size_t written = 0;
    SeedTrack track;
    track.reserve(steps);
    for (std::size_t t = 0; t < steps; ++t) {
      for (const auto& ko : batches[t].objects) {
        gated.gate_write(ko, spec.gate);
        ungated.force_admit(ko);
      }
      written += batches[t].objects.size();
      queries.insert(queries.end(), batches[t].queries.begin(),
                     batches[t].queries.end());
      merged.labels.insert(batches[t].key.labels.begin(),
                           batches[t].key.labels.end());
      merged.correct_for.insert(batches[t].key.correct_for.begin(),
                                batches[t].key.correct_for.end());
      merged.distractors_for.insert(batches[t].key.distractors_for.begin(),
                                    batches[t].key.distractors_for.end());

      AccumulationSeedStep step;
      step.seed = seed;
      step.written_total = written;
      auto grade = [&](const KnowledgeStore& store) {
        std::size_t correct = 0;
        for (const auto& query : queries) {
          const auto res = store.retrieve(query.embedding, spec.judge.k);
          std::vector<std::string> ids;
          ids.reserve(res.matches.size());
          for (const auto& m : res.matches) ids.push_back(m.ko_id);
          if (judge_query(query, ids, merged, spec.judge)) ++correct;
        }
        return 100.0 * static_cast<double>(correct) /
               static_cast<double>(queries.size());
      };
      step.gated_accuracy_pct = grade(gated);
      step.ungated_accuracy_pct = grade(ungated);
      step.gap_pp = step.gated_accuracy_pct - step.ungated_accuracy_pct;
      step.gated_active = gated.stats().active_count;
      step.ungated_active = ungated.stats().active_count;
      std::size_t labeled = 0, labeled_correct = 0;
      for (const auto& id : gated.active_ids()) {
        const auto it = merged.labels.find(id);
        if (it == merged.labels.end()) continue;
        ++labeled;
        if (it->second == FactLabel::Correct) ++labeled_correct;
      }
      step.gated_precision_pct =
          labeled == 0 ? 100.0
                       : 100.0 * static_cast<double>(labeled_correct) /
                             static_cast<double>(labeled);
      track.push_back(step);
    }
    return track;
  };

  std::vector<std::future<SeedTrack>> futures;
  futures.reserve(spec.seeds.size());
  for (const std::uint64_t seed : spec.seeds)
    futures.push_back(std::async(std::launch::async, run_seed, seed));
  std::vector<SeedTrack> tracks;
  tracks.reserve(futures.size());
  for (auto& future : futures) tracks.push_back(future.get());

  for (std::size_t t = 0; t < steps; ++t) {
    AccumulationStepRow row;
    row.step = t + 1;
    std::vector<double> gated_active, ungated_active, precision, gated_acc,
        ungated_acc, gap, active_pct;
    for (const auto& track : tracks) {
      const AccumulationSeedStep& s = track[t];
      row.seeds.push_back(s);
      gated_active.push_back(static_cast<double>(s.gated_active));
      ungated_active.push_back(static_cast<double>(s.ungated_active));
      precision.push_back(s.gated_precision_pct);
      gated_acc.push_back(s.gated_accuracy_pct);
      ungated_acc.push_back(s.ungated_accuracy_pct);
      gap.push_back(s.gap_pp);
      active_pct.push_back(100.0 * static_cast<double>(s.gated_active) /
                           static_cast<double>(s.written_total));
    }
    row.gated_active_mean = mean_of(gated_active);
    row.ungated_active_mean = mean_of(ungated_active);
    row.gated_active_pct_of_written = mean_of(active_pct);
    row.gated_precision_mean = mean_of(precision);
    row.gated_accuracy_mean = mean_of(gated_acc);
    row.ungated_accuracy_mean = mean_of(ungated_acc);
    row.gap_mean_pp = mean_of(gap);
    result.steps.push_back(std::move(row));
  }
  return result;
}

TemporalResult run_temporal(const TemporalSpec& spec) {
  if (spec.n_concepts == 0 || spec.versions == 0)
    throw ConfigError("temporal: concepts and versions must be > 0");
  TemporalResult result;
  result.spec = spec;
  std::vector<double> lineage_hist, overwrite_hist;

  for (const std::uint64_t seed : spec.seeds) {
    Rng rng(mix64(seed, fnv1a64("temporal")));
    KnowledgeStore lineage(spec.dim);
    std::map<std::string, KnowledgeObject> overwrite;  // update-in-place twin

    // ids[c][v] records each written version for probing.
    std::vector<std::vector<std::string>> ids(
        spec.n_concepts, std::vector<std::string>(spec.versions));
    std::vector<std::string> names(spec.n_concepts);
    std::vector<std::vector<double>> anchors(spec.n_concepts);
    for (std::size_t c = 0; c < spec.n_concepts; ++c) {
      char buf[24];
      std::snprintf(buf, sizeof buf, "policy-%03zu", c);
      names[c] = buf;
      anchors[c] = rng.unit_vector(spec.dim);
    }

    // Versions arrive in waves (every concept's v1, then v2, ...), with the
    // concept order reshuffled per wave — the shape of real update traffic.
    std::int64_t clock = 0;
    for (std::size_t v = 0; v < spec.versions; ++v) {
      std::vector<std::size_t> order(spec.n_concepts);
      std::iota(order.begin(), order.end(), std::size_t{0});
      rng.shuffle(order);
      for (const std::size_t c : order) {
        KnowledgeObject ko;
        ko.concept_id = names[c];
        ko.content = "Policy " + names[c] + " revision " +
                     std::to_string(v + 1) + " sets the limit to " +
                     std::to_string(rng.uniform_int(0, 999)) + ".";
        ko.embedding = cone_point(anchors[c], 0.1, rng);
        ko.provenance.source_id = "policy-desk";
        ko.provenance.timestamp = clock++;
        ko.provenance.reputation = rng.uniform(0.8, 1.0);
        ko.provenance.verification = VerificationLevel::Verified;
        const auto decision = lineage.gate_write(ko, spec.gate);
        ids[c][v] = decision.ko_id;
        KnowledgeObject flat = ko;
        flat.id = decision.ko_id;
        overwrite[names[c]] = flat;  // latest write wins, history destroyed
      }
    }

    TemporalSeedRun run;
    run.seed = seed;
    std::size_t current_hits = 0, current_probes = 0;
    std::size_t history_hits = 0, history_probes = 0;
    std::size_t ow_current_hits = 0, ow_history_hits = 0;
    for (std::size_t c = 0; c < spec.n_concepts; ++c) {
      const std::string& latest = ids[c][spec.versions - 1];
      // Latest-version probe.
      ++current_probes;
      const auto cur = lineage.temporal(names[c], versioning::TemporalSelector::current());
      if (cur && cur->id == latest) ++current_hits;
      const auto ow = overwrite.find(names[c]);
      if (ow != overwrite.end() && ow->second.id == latest) ++ow_current_hits;
      // Historical probes: prior, original, and an explicit version index.
      struct Probe {
        versioning::TemporalSelector selector;
        const std::string* expected;
      };
      std::vector<Probe> probes;
      if (spec.versions >= 2) {
        probes.push_back({versioning::TemporalSelector::prior(),
                          &ids[c][spec.versions - 2]});
        probes.push_back({versioning::TemporalSelector::at_index(2), &ids[c][1]});
      }
      probes.push_back({versioning::TemporalSelector::original(), &ids[c][0]});
      for (const Probe& probe : probes) {
        ++history_probes;
        const auto got = lineage.temporal(names[c], probe.selector);
        if (got && got->id == *probe.expected) ++history_hits;
        // The overwrite twin has only the latest object: a historical probe
        // can only hit when the expected version happens to be the latest.
        if (ow != overwrite.end() && ow->second.id == *probe.expected)
          ++ow_history_hits;
      }
      run.mean_chain_length += static_cast<double>(
          lineage.chain(names[c]) ? lineage.chain(names[c])->ids.size() : 0);
    }
    run.mean_chain_length /= static_cast<double>(spec.n_concepts);
    run.lineage_current_pct =
        100.0 * static_cast<double>(current_hits) / static_cast<double>(current_probes);
    run.lineage_history_pct =
        100.0 * static_cast<double>(history_hits) / static_cast<double>(history_probes);
    run.overwrite_current_pct = 100.0 * static_cast<double>(ow_current_hits) /
                                static_cast<double>(current_probes);
    run.overwrite_history_pct = 100.0 * static_cast<double>(ow_history_hits) /
                                static_cast<double>(history_probes);
    run.integrity_violations = lineage.check_integrity().size();
    lineage_hist.push_back(run.lineage_history_pct);
    overwrite_hist.push_back(run.overwrite_history_pct);
    result.runs.push_back(std::move(run));
  }
  result.lineage_history_mean = mean_of(lineage_hist);
  result.overwrite_history_mean = mean_of(overwrite_hist);
  return result;
}

CalibrationResult calibrate_tau(
    const std::vector<std::pair<KnowledgeObject, FactLabel>>& labeled,
    const salience::GateConfig& base, std::size_t dim) {
  base.validate();
  if (labeled.empty()) throw ValidationError("calibrate: empty corpus");

  std::vector<std::pair<KnowledgeObject, FactLabel>> ordered = labeled;
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    if (a.first.provenance.timestamp != b.first.provenance.timestamp)
      return a.first.provenance.timestamp < b.first.provenance.timestamp;
    return a.first.id < b.first.id;
  });

  CalibrationResult result;
  for (const auto& [ko, label] : ordered) {
    (void)ko;
    if (label == FactLabel::Correct)
      ++result.n_correct;
    else
      ++result.n_distractor;
  }

  auto replay = [&](double tau) {
    salience::GateConfig cfg = base;
    cfg.tau = tau;
    KnowledgeStore store(dim);
    CalibrationRow row;
    row.tau = tau;
    std::vector<double> composites;
    for (const auto& [ko, label] : ordered) {
      const auto decision = store.gate_write(ko, cfg);
      if (decision.score) composites.push_back(decision.score->composite);
      if (decision.outcome == gate::GateOutcome::Admit) {
        if (label == FactLabel::Correct)
          ++row.correct_admitted;
        else
          ++row.distractor_admitted;
      }
    }
    return std::make_pair(row, composites);
  };

  // Candidates: a coarse grid, every composite observed under an
  // admit-everything replay, and the configured threshold itself.
  std::set<double> candidates;
  for (int i = 0; i <= 20; ++i) candidates.insert(static_cast<double>(i) * 0.05);
  candidates.insert(base.tau);
  const auto admit_all = replay(0.0);
  for (const double c : admit_all.second) candidates.insert(c);

  for (const double tau : candidates) {
    if (tau < 0.0 || tau > 1.0) continue;
    result.rows.push_back(replay(tau).first);
  }
  for (const auto& row : result.rows) {
    if (row.correct_admitted == result.n_correct &&
        row.tau >= result.recommended_tau)
      result.recommended_tau = row.tau;
  }
  return result;
}

// ── Presets & reports ──────────────────────────────────────────────────────

namespace {

json seed_run_json(const SeedRun& run) {
  return json{{"accuracy_pct", run.accuracy_pct},
              {"active_count", run.active_count},
              {"calls_per_query", run.calls_per_query},
              {"compression_pct", run.compression_pct},
              {"distractors_active", run.distractors_active},
              {"precision_pct", run.precision_pct},
              {"queries", run.queries},
              {"seed", run.seed}};
}

json summary_json(const ConditionSummary& summary) {
  json seeds = json::array();
  for (const auto& run : summary.runs) seeds.push_back(seed_run_json(run));
  return json{{"accuracy_mean", summary.accuracy_mean},
              {"accuracy_std", summary.accuracy_std},
              {"active_mean", summary.active_mean},
              {"calls_per_query", summary.calls_per_query},
              {"condition", to_string(summary.condition)},
              {"distractors_active_mean", summary.distractors_active_mean},
              {"precision_mean", summary.precision_mean},
              {"seeds", seeds}};
}

json corpus_spec_json(const corpus::CorpusSpec& spec) {
  return json{
      {"corruption_rate", spec.corruption_rate},
      {"dim", spec.dim},
      {"distractor_ratio", spec.distractor_ratio},
      {"domain", spec.domain == corpus::Domain::Pharma ? "pharma" : "synthetic"},
      {"marginal_high", spec.marginal_high},
      {"marginal_low", spec.marginal_low},
      {"n_correct", spec.n_correct},
      {"sigma_correct", spec.sigma_correct},
      {"sigma_distractor", spec.sigma_distractor}};
}

json gate_config_json(const salience::GateConfig& cfg) {
  return json{{"enable_nov", cfg.enable_nov},
              {"enable_rep", cfg.enable_rep},
              {"enable_src", cfg.enable_src},
              {"src_map",
               json{{"institutional", cfg.src_map.institutional},
                    {"unverified", cfg.src_map.unverified},
                    {"verified", cfg.src_map.verified}}},
              {"tau", cfg.tau},
              {"w_nov", cfg.w_nov},
              {"w_rep", cfg.w_rep},
              {"w_src", cfg.w_src}};
}

json judge_json(const JudgeParams& judge) {
  return json{{"k", judge.k}, {"theta", judge.theta}};
}

json critic_json(const CriticParams& critic) {
  return json{{"seed", critic.seed}, {"tnr", critic.tnr}, {"tpr", critic.tpr}};
}

json report_skeleton(const std::string& preset) {
  return json{{"format", std::string(kReportFormat)},
              {"preset", preset},
              {"sections", json::array()},
              {"spec", json::object()}};
}

std::vector<std::vector<std::string>> condition_rows_text(
    const std::vector<ConditionSummary>& summaries,
    const std::string& prefix = {}) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& s : summaries) {
    std::vector<std::string> row;
    row.push_back(prefix.empty() ? to_string(s.condition)
                                 : prefix + to_string(s.condition));
    row.push_back(fmt_pm(s.accuracy_mean, s.accuracy_std));
    row.push_back(fmt(s.active_mean));
    row.push_back(fmt(s.distractors_active_mean));
    row.push_back(fmt(s.precision_mean));
    row.push_back(fmt(s.calls_per_query));
    rows.push_back(std::move(row));
  }
  return rows;
}

const std::vector<std::string> kConditionHeaders = {
    "condition", "accuracy %", "store size", "distractors", "precision %",
    "calls/query"};

struct PresetDef {
  const char* name;
  const char* blurb;
  PresetReport (*run)(std::vector<std::uint64_t> seeds);
};

corpus::CorpusSpec synthetic_spec() { return corpus::CorpusSpec{}; }

corpus::CorpusSpec pharma_spec(std::size_t n_correct, std::size_t ratio) {
  corpus::CorpusSpec spec;
  spec.domain = corpus::Domain::Pharma;
  spec.n_correct = n_correct;
  spec.distractor_ratio = ratio;
  spec.sigma_correct = 0.16;
  spec.sigma_distractor = 0.14;
  return spec;
}

PresetReport preset_headline(std::vector<std::uint64_t> seeds) {
  ExperimentSpec spec;
  spec.corpus = synthetic_spec();
  spec.conditions = {Condition::Ungated, Condition::WriteGated,
                     Condition::ReadFiltered, Condition::Both,
                     Condition::HardDelete};
  if (!seeds.empty()) spec.seeds = std::move(seeds);
  const ExperimentResult result = run_experiment(spec);

  PresetReport report;
  report.name = "headline";
  report.document = report_skeleton(report.name);
  report.document["spec"] = json{{"corpus", corpus_spec_json(spec.corpus)},
                                 {"critic", critic_json(spec.critic)},
                                 {"gate", gate_config_json(spec.gate)},
                                 {"judge", judge_json(spec.judge)},
                                 {"seeds", spec.seeds}};
  json rows = json::array();
  for (const auto& summary : result.conditions) rows.push_back(summary_json(summary));
  report.document["sections"].push_back(json{{"kind", "conditions"}, {"rows", rows}});
  report.text = "Gate comparison - synthetic corpus, " +
                std::to_string(spec.corpus.n_correct) + " facts at " +
                std::to_string(spec.corpus.distractor_ratio) +
                ":1 distractors\n\n" +
                render_table(kConditionHeaders,
                             condition_rows_text(result.conditions));
  return report;
}

PresetReport preset_ratios(std::vector<std::uint64_t> seeds) {
  const std::vector<std::size_t> ratios = {2, 4, 6, 8};
  PresetReport report;
  report.name = "ratios";
  report.document = report_skeleton(report.name);
  json rows = json::array();
  std::vector<std::vector<std::string>> text_rows;
  ExperimentSpec base;
  base.corpus = synthetic_spec();
  base.conditions = {Condition::Ungated, Condition::ReadFiltered,
                     Condition::WriteGated};
  if (!seeds.empty()) base.seeds = std::move(seeds);
  for (const std::size_t ratio : ratios) {
    ExperimentSpec spec = base;
    spec.corpus.distractor_ratio = ratio;
    const ExperimentResult result = run_experiment(spec);
    for (const auto& summary : result.conditions) {
      json row = summary_json(summary);
      row["ratio"] = ratio;
      rows.push_back(row);
      std::vector<std::string> text_row;
      text_row.push_back(std::to_string(ratio) + ":1 " +
                         to_string(summary.condition));
      text_row.push_back(fmt_pm(summary.accuracy_mean, summary.accuracy_std));
      text_row.push_back(fmt(summary.active_mean));
      text_row.push_back(fmt(summary.distractors_active_mean));
      text_row.push_back(fmt(summary.precision_mean));
      text_row.push_back(fmt(summary.calls_per_query));
      text_rows.push_back(std::move(text_row));
    }
  }
  report.document["spec"] = json{{"corpus", corpus_spec_json(base.corpus)},
                                 {"critic", critic_json(base.critic)},
                                 {"gate", gate_config_json(base.gate)},
                                 {"judge", judge_json(base.judge)},
                                 {"ratios", ratios},
                                 {"seeds", base.seeds}};
  report.document["sections"].push_back(json{{"kind", "ratio_sweep"}, {"rows", rows}});
  report.text = "Distractor-ratio sweep - synthetic corpus\n\n" +
                render_table({"ratio condition", "accuracy %", "store size",
                              "distractors", "precision %", "calls/query"},
                             text_rows);
  return report;
}

PresetReport preset_ablation(std::vector<std::uint64_t> seeds) {
  AblationSpec spec;
  spec.corpus = synthetic_spec();
  if (!seeds.empty()) spec.seeds = std::move(seeds);
  const AblationResult result = run_ablation(spec);
  PresetReport report;
  report.name = "ablation";
  report.document = report_skeleton(report.name);
  report.document["spec"] = json{{"corpus", corpus_spec_json(spec.corpus)},
                                 {"gate", gate_config_json(spec.gate)},
                                 {"judge", judge_json(spec.judge)},
                                 {"seeds", spec.seeds}};
  json rows = json::array();
  std::vector<std::vector<std::string>> text_rows;
  for (const auto& row : result.rows) {
    json jrow = summary_json(row.gated);
    jrow["mask"] = row.mask;
    rows.push_back(jrow);
    text_rows.push_back({row.mask,
                         fmt_pm(row.gated.accuracy_mean, row.gated.accuracy_std),
                         fmt(row.gated.active_mean),
                         fmt(row.gated.distractors_active_mean),
                         fmt(row.gated.precision_mean)});
  }
  report.document["sections"].push_back(json{{"kind", "ablation"}, {"rows", rows}});
  report.text =
      "Signal ablation - write gate under each signal mask\n\n" +
      render_table({"mask", "accuracy %", "store size", "distractors",
                    "precision %"},
                   text_rows);
  return report;
}

PresetReport preset_pharma(std::vector<std::uint64_t> seeds) {
  const std::vector<std::size_t> ratios = {2, 4, 8};
  PresetReport report;
  report.name = "pharma";
  report.document = report_skeleton(report.name);
  json rows = json::array();
  std::vector<std::vector<std::string>> text_rows;
  ExperimentSpec base;
  base.corpus = pharma_spec(100, 4);
  base.conditions = {Condition::Ungated, Condition::ReadFiltered,
                     Condition::WriteGated};
  base.seeds = {1, 2, 3, 4, 5};
  if (!seeds.empty()) base.seeds = std::move(seeds);
  for (const std::size_t ratio : ratios) {
    ExperimentSpec spec = base;
    spec.corpus.distractor_ratio = ratio;
    const ExperimentResult result = run_experiment(spec);
    for (const auto& summary : result.conditions) {
      json row = summary_json(summary);
      row["ratio"] = ratio;
      rows.push_back(row);
      text_rows.push_back({std::to_string(ratio) + ":1 " +
                               to_string(summary.condition),
                           fmt_pm(summary.accuracy_mean, summary.accuracy_std),
                           fmt(summary.active_mean),
                           fmt(summary.distractors_active_mean),
                           fmt(summary.precision_mean),
                           fmt(summary.calls_per_query)});
    }
  }
  report.document["spec"] = json{{"corpus", corpus_spec_json(base.corpus)},
                                 {"critic", critic_json(base.critic)},
                                 {"gate", gate_config_json(base.gate)},
                                 {"judge", judge_json(base.judge)},
                                 {"ratios", ratios},
                                 {"seeds", base.seeds}};
  report.document["sections"].push_back(json{{"kind", "ratio_sweep"}, {"rows", rows}});
  report.text = "Domain corpus - drug-target binding facts\n\n" +
                render_table({"ratio condition", "accuracy %", "store size",
                              "distractors", "precision %", "calls/query"},
                             text_rows);
  return report;
}

PresetReport preset_accumulation(std::vector<std::uint64_t> seeds) {
  AccumulationRunSpec spec;
  if (!seeds.empty()) spec.seeds = std::move(seeds);
  const AccumulationResult result = run_accumulation(spec);
  PresetReport report;
  report.name = "accumulation";
  report.document = report_skeleton(report.name);
  report.document["spec"] =
      json{{"corpus", corpus_spec_json(spec.accumulation.corpus)},
           {"facts_per_step", spec.accumulation.facts_per_step},
           {"gate", gate_config_json(spec.gate)},
           {"judge", judge_json(spec.judge)},
           {"seeds", spec.seeds},
           {"steps", spec.accumulation.steps}};
  json rows = json::array();
  std::vector<std::vector<std::string>> text_rows;
  for (const auto& step : result.steps) {
    json jstep = json{{"gap_mean_pp", step.gap_mean_pp},
                      {"gated_accuracy_mean", step.gated_accuracy_mean},
                      {"gated_active_mean", step.gated_active_mean},
                      {"gated_active_pct_of_written", step.gated_active_pct_of_written},
                      {"gated_precision_mean", step.gated_precision_mean},
                      {"step", step.step},
                      {"ungated_accuracy_mean", step.ungated_accuracy_mean},
                      {"ungated_active_mean", step.ungated_active_mean}};
    json jseeds = json::array();
    for (const auto& s : step.seeds) {
      jseeds.push_back(json{{"gap_pp", s.gap_pp},
                            {"gated_accuracy_pct", s.gated_accuracy_pct},
                            {"gated_active", s.gated_active},
                            {"gated_precision_pct", s.gated_precision_pct},
                            {"seed", s.seed},
                            {"ungated_accuracy_pct", s.ungated_accuracy_pct},
                            {"ungated_active", s.ungated_active},
                            {"written_total", s.written_total}});
    }
    jstep["seeds"] = jseeds;
    rows.push_back(jstep);
    text_rows.push_back({std::to_string(step.step),
                         fmt(step.gated_active_mean),
                         fmt(step.gated_active_pct_of_written),
                         fmt(step.gated_precision_mean),
                         fmt(step.gated_accuracy_mean),
                         fmt(step.ungated_accuracy_mean),
                         fmt(step.gap_mean_pp)});
  }
  report.document["sections"].push_back(
      json{{"kind", "accumulation"}, {"rows", rows}});
  report.text =
      "Accumulation - streaming batches into persistent stores\n\n" +
      render_table({"step", "gated size", "size % of writes", "precision %",
                    "gated acc %", "ungated acc %", "gap pp"},
                   text_rows);
  return report;
}

PresetReport preset_corruption(std::vector<std::uint64_t> seeds) {
  CorruptionSpec spec;
  spec.corpus = synthetic_spec();
  if (!seeds.empty()) spec.seeds = std::move(seeds);
  const CorruptionResult result = run_corruption(spec);
  PresetReport report;
  report.name = "corruption";
  report.document = report_skeleton(report.name);
  report.document["spec"] = json{{"corpus", corpus_spec_json(spec.corpus)},
                                 {"gate", gate_config_json(spec.gate)},
                                 {"judge", judge_json(spec.judge)},
                                 {"rates", spec.rates},
                                 {"seeds", spec.seeds}};
  json rows = json::array();
  std::vector<std::vector<std::string>> text_rows;
  for (const auto& row : result.rows) {
    for (const ConditionSummary* summary : {&row.ungated, &row.gated}) {
      json jrow = summary_json(*summary);
      jrow["rate"] = row.rate;
      rows.push_back(jrow);
    }
    text_rows.push_back({fmt(100.0 * row.rate, 0) + "%",
                         fmt_pm(row.gated.accuracy_mean, row.gated.accuracy_std),
                         fmt_pm(row.ungated.accuracy_mean,
                                row.ungated.accuracy_std)});
  }
  report.document["sections"].push_back(
      json{{"kind", "corruption"}, {"rows", rows}});
  report.text =
      "Provenance corruption - trusted sources asserting wrong values\n\n" +
      render_table({"corrupted", "gated acc %", "ungated acc %"}, text_rows);
  return report;
}

PresetReport preset_temporal(std::vector<std::uint64_t> seeds) {
  TemporalSpec spec;
  if (!seeds.empty()) spec.seeds = std::move(seeds);
  const TemporalResult result = run_temporal(spec);
  PresetReport report;
  report.name = "temporal";
  report.document = report_skeleton(report.name);
  report.document["spec"] = json{{"dim", spec.dim},
                                 {"gate", gate_config_json(spec.gate)},
                                 {"n_concepts", spec.n_concepts},
                                 {"seeds", spec.seeds},
                                 {"versions", spec.versions}};
  json rows = json::array();
  std::vector<std::vector<std::string>> text_rows;
  for (const auto& run : result.runs) {
    rows.push_back(json{{"integrity_violations", run.integrity_violations},
                        {"lineage_current_pct", run.lineage_current_pct},
                        {"lineage_history_pct", run.lineage_history_pct},
                        {"mean_chain_length", run.mean_chain_length},
                        {"overwrite_current_pct", run.overwrite_current_pct},
                        {"overwrite_history_pct", run.overwrite_history_pct},
                        {"seed", run.seed}});
    text_rows.push_back({std::to_string(run.seed),
                         fmt(run.lineage_current_pct),
                         fmt(run.lineage_history_pct),
                         fmt(run.overwrite_current_pct),
                         fmt(run.overwrite_history_pct),
                         fmt(run.mean_chain_length),
                         std::to_string(run.integrity_violations)});
  }
  report.document["sections"].push_back(json{
      {"kind", "temporal"},
      {"lineage_history_mean", result.lineage_history_mean},
      {"overwrite_history_mean", result.overwrite_history_mean},
      {"rows", rows}});
  report.text =
      "Version history - chained supersession vs update-in-place\n\n" +
      render_table({"seed", "lineage current %", "lineage history %",
                    "overwrite current %", "overwrite history %",
                    "chain length", "violations"},
                   text_rows);
  return report;
}

PresetReport preset_verification(std::vector<std::uint64_t> seeds) {
  verification::CoverageSpec spec;
  if (!seeds.empty()) spec.seed = seeds.front();
  const verification::CoverageReport cov = verification::coverage_simulation(spec);
  PresetReport report;
  report.name = "verification";
  report.document = report_skeleton(report.name);
  report.document["spec"] = json{
      {"correct_path", json{{"hi", spec.correct_path.hi}, {"lo", spec.correct_path.lo}}},
      {"incorrect_path",
       json{{"hi", spec.incorrect_path.hi}, {"lo", spec.incorrect_path.lo}}},
      {"n_facts", spec.n_facts},
      {"n_paths", spec.n_paths},
      {"seed", spec.seed},
      {"threshold", spec.threshold}};
  report.document["sections"].push_back(json{
      {"kind", "verification"},
      {"rows", json::array(
                   {json{{"correct_mean_aggregate", cov.correct_mean_aggregate},
                         {"incorrect_mean_aggregate", cov.incorrect_mean_aggregate},
                         {"multi_path_coverage_pct", 100.0 * cov.multi_path_coverage},
                         {"single_path_coverage_pct",
                          100.0 * cov.single_path_coverage}}})}});
  report.text =
      "Verification coverage - independent paths vs a lone check\n\n" +
      render_table({"metric", "value"},
                   {{"correct mean aggregate", fmt(cov.correct_mean_aggregate, 5)},
                    {"incorrect mean aggregate", fmt(cov.incorrect_mean_aggregate, 5)},
                    {"single-path coverage %", fmt(100.0 * cov.single_path_coverage)},
                    {"multi-path coverage %", fmt(100.0 * cov.multi_path_coverage)}});
  return report;
}

constexpr std::array<PresetDef, 8> kPresets = {{
    {"headline", "gate conditions on the synthetic corpus", preset_headline},
    {"ratios", "distractor-ratio sweep", preset_ratios},
    {"ablation", "gate signal masks", preset_ablation},
    {"pharma", "drug-target corpus sweep", preset_pharma},
    {"accumulation", "streaming growth", preset_accumulation},
    {"corruption", "poisoned provenance sweep", preset_corruption},
    {"temporal", "supersession vs overwrite", preset_temporal},
    {"verification", "multi-path verification coverage", preset_verification},
}};

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  names.reserve(kPresets.size());
  for (const auto& preset : kPresets) names.emplace_back(preset.name);
  return names;
}

PresetReport run_preset(const std::string& name,
                        const std::vector<std::uint64_t>& seeds_override) {
  for (const auto& preset : kPresets) {
    if (name == preset.name) return preset.run(seeds_override);
  }
  std::string known;
  for (const auto& preset : kPresets) {
    if (!known.empty()) known += ", ";
    known += preset.name;
  }
  throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
}

}  // namespace kogate::harness
