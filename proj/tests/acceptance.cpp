// Acceptance gate: twelve end-to-end criteria, one PASS/FAIL line each.
// Every tolerance is pinned in this file; the binary exits nonzero if any
// criterion fails. Target runtime is well under five minutes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kogate/corpus.hpp"
#include "kogate/harness.hpp"
#include "kogate/persistence.hpp"
#include "kogate/rng.hpp"
#include "kogate/salience.hpp"
#include "kogate/store.hpp"
#include "kogate/verification.hpp"

using namespace kogate;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  int index = 0;
  std::string name;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& detail) {
    if (!ok) failures.push_back(detail);
  }
  template <typename T>
  void expect_eq(const T& got, const T& want, const std::string& what) {
    if (!(got == want)) {
      std::ostringstream ss;
      ss << what << ": got " << got << ", want " << want;
      failures.push_back(ss.str());
    }
  }
  void expect_near(double got, double want, double tol,
                   const std::string& what) {
    if (!(std::fabs(got - want) <= tol)) {
      std::ostringstream ss;
      ss << what << ": got " << got << ", want " << want << " +/- " << tol;
      failures.push_back(ss.str());
    }
  }
};

struct Gate {
  std::vector<Criterion> results;
  Criterion* current = nullptr;

  Criterion& begin(int index, const std::string& name) {
    results.push_back({index, name, {}});
    current = &results.back();
    return *current;
  }

  int report() const {
    int failed = 0;
    for (const auto& c : results) {
      const bool ok = c.failures.empty();
      if (!ok) ++failed;
      std::printf("%s  criterion %02d  %s\n", ok ? "PASS" : "FAIL", c.index,
                  c.name.c_str());
      for (const auto& f : c.failures) std::printf("      - %s\n", f.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed,
                results.size());
    return failed;
  }
};

const harness::ConditionSummary& summary_for(
    const harness::ExperimentResult& result, harness::Condition condition) {
  for (const auto& s : result.conditions) {
    if (s.condition == condition) return s;
  }
  throw std::logic_error("condition missing from experiment result");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("kogate-acceptance-" +
            std::to_string(Rng(std::random_device{}()).next_word()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

KnowledgeObject weak_claim(std::size_t dim) {
  KnowledgeObject ko;
  ko.concept_id = "fringe-topic";
  ko.content = "an unsourced claim with nothing going for it";
  ko.provenance = {"anonymous-drop", 1, 0.05, VerificationLevel::Unverified,
                   true};
  ko.embedding = Rng(424242).unit_vector(dim);
  ko.id = canonical_id(ko);
  return ko;
}

/// Scripted mixed workload used for the persistence equivalence criterion.
void drive_operations(KnowledgeStore& store, std::uint64_t seed,
                      std::size_t ops) {
  Rng rng(seed);
  salience::GateConfig cfg;
  std::vector<std::string> known_ids;
  for (std::size_t i = 0; i < ops; ++i) {
    const auto roll = rng.uniform_int(0, 9);
    if (roll <= 5 || known_ids.empty()) {
      KnowledgeObject ko;
      ko.concept_id = "concept-" + std::to_string(rng.uniform_int(0, 11));
      ko.content = "claim " + std::to_string(i) + " body " +
                   std::to_string(rng.next_word());
      ko.provenance.source_id = "src-" + std::to_string(rng.uniform_int(0, 3));
      ko.provenance.timestamp = static_cast<std::int64_t>(i);
      ko.provenance.reputation = rng.unit();
      ko.provenance.verification =
          static_cast<VerificationLevel>(rng.uniform_int(0, 2));
      ko.embedding = rng.unit_vector(store.dim());
      if (roll == 5) {
        known_ids.push_back(store.force_admit(ko).ko_id);
      } else {
        known_ids.push_back(store.gate_write(ko, cfg).ko_id);
      }
    } else if (roll <= 7) {
      const auto& id = known_ids[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(known_ids.size()) - 1))];
      const auto ko = store.get(id);
      if (ko.has_value() && ko->status == ObjectStatus::Archived) {
        store.promote(id,
                      rng.unit() < 0.5 ? gate::PromoteMode::Force
                                       : gate::PromoteMode::Regate,
                      cfg);
      }
    } else {
      const auto& id = known_ids[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(known_ids.size()) - 1))];
      const auto ko = store.get(id);
      if (ko.has_value() && ko->status != ObjectStatus::Deleted &&
          rng.unit() < 0.5) {
        store.delete_object(id);
      }
    }
  }
}

}  // namespace

int main() {
  Gate gate;

  // The flagship experiment feeds criteria 1, 3, 5, and 10: all five
  // conditions on the synthetic corpus at ratio 4:1, seeds {1,2,3}.
  harness::ExperimentSpec flagship;
  flagship.conditions = {
      harness::Condition::Ungated, harness::Condition::WriteGated,
      harness::Condition::ReadFiltered, harness::Condition::Both,
      harness::Condition::HardDelete};
  const auto flag = harness::run_experiment(flagship);
  const auto& ungated = summary_for(flag, harness::Condition::Ungated);
  const auto& write_gated = summary_for(flag, harness::Condition::WriteGated);
  const auto& read_filtered =
      summary_for(flag, harness::Condition::ReadFiltered);
  const auto& both = summary_for(flag, harness::Condition::Both);
  const auto& hard_delete = summary_for(flag, harness::Condition::HardDelete);

  {
    auto& c = gate.begin(1, "write gating wins the crowded-store contrast");
    c.expect_near(write_gated.accuracy_mean, 100.0, 0.0,
                  "write-gated accuracy mean");
    c.expect_near(write_gated.accuracy_std, 0.0, 0.0,
                  "write-gated accuracy std");
    for (const auto& run : write_gated.runs) {
      c.expect(run.accuracy_pct == 100.0,
               "write-gated seed " + std::to_string(run.seed) +
                   " accuracy not 100");
      c.expect(run.active_count >= 12 && run.active_count <= 14,
               "write-gated store size " + std::to_string(run.active_count) +
                   " outside [12,14] (seed " + std::to_string(run.seed) + ")");
    }
    c.expect(ungated.accuracy_mean <= 20.0,
             "ungated accuracy mean above 20: " +
                 std::to_string(ungated.accuracy_mean));
    for (const auto& run : ungated.runs) {
      c.expect_eq(run.active_count, std::size_t{50}, "ungated store size");
    }
    c.expect(write_gated.distractors_active_mean <= 5.0,
             "write-gated stores keep too many distractors");
  }

  {
    auto& c = gate.begin(2, "distractor-ratio sweep reproduces the collapse");
    std::vector<double> ungated_means, gated_means, filtered_means;
    for (const std::size_t ratio : {2, 4, 6, 8}) {
      harness::ExperimentSpec spec;
      spec.corpus.distractor_ratio = ratio;
      spec.conditions = {harness::Condition::Ungated,
                         harness::Condition::WriteGated,
                         harness::Condition::ReadFiltered};
      const auto result = harness::run_experiment(spec);
      const auto& u = summary_for(result, harness::Condition::Ungated);
      const auto& g = summary_for(result, harness::Condition::WriteGated);
      const auto& f = summary_for(result, harness::Condition::ReadFiltered);
      ungated_means.push_back(u.accuracy_mean);
      gated_means.push_back(g.accuracy_mean);
      filtered_means.push_back(f.accuracy_mean);
      c.expect(g.accuracy_mean == 100.0 && g.accuracy_std == 0.0,
               "write-gated accuracy not a flat 100 at ratio " +
                   std::to_string(ratio));
    }
    c.expect_near(ungated_means[0], 100.0, 0.0, "ungated accuracy at 2:1");
    c.expect(ungated_means[1] <= 20.0, "ungated accuracy at 4:1 above 20");
    c.expect_near(ungated_means[3], 0.0, 0.0, "ungated accuracy at 8:1");
    c.expect(std::is_sorted(ungated_means.rbegin(), ungated_means.rend()),
             "ungated accuracy is not non-increasing in the ratio");
    c.expect(filtered_means[1] >= 95.0,
             "read filtering below 95 at 4:1: " +
                 std::to_string(filtered_means[1]));
    c.expect(filtered_means[3] <= 20.0,
             "read filtering above 20 at 8:1: " +
                 std::to_string(filtered_means[3]));
  }

  {
    auto& c = gate.begin(3, "condition ordering at 4:1 is strict");
    c.expect(write_gated.accuracy_mean > read_filtered.accuracy_mean,
             "write gating does not beat read filtering");
    c.expect(read_filtered.accuracy_mean > ungated.accuracy_mean,
             "read filtering does not beat no gating");
    c.expect(both.accuracy_mean <= write_gated.accuracy_mean,
             "adding a lossy critic should not beat the gate alone");
    // The critic's true-positive rate is below 1, so stacking it on the
    // gate must cost at least one correct answer across the pinned seeds.
    c.expect(both.accuracy_mean < write_gated.accuracy_mean,
             "imperfect critic lost nothing across seeds (expected a drop)");
  }

  {
    auto& c = gate.begin(4, "version chains answer temporal queries");
    const auto result = harness::run_temporal(harness::TemporalSpec{});
    c.expect_near(result.lineage_history_mean, 100.0, 0.0,
                  "lineage history accuracy");
    c.expect_near(result.overwrite_history_mean, 0.0, 0.0,
                  "overwrite baseline history accuracy");
    for (const auto& run : result.runs) {
      const auto seed = std::to_string(run.seed);
      c.expect(run.lineage_current_pct == 100.0,
               "lineage current-version accuracy not 100 (seed " + seed + ")");
      c.expect(run.lineage_history_pct == 100.0,
               "lineage history accuracy not 100 (seed " + seed + ")");
      c.expect(run.overwrite_current_pct == 100.0,
               "overwrite current-version accuracy not 100 (seed " + seed + ")");
      c.expect(run.overwrite_history_pct == 0.0,
               "overwrite baseline answered history (seed " + seed + ")");
      c.expect_eq(run.integrity_violations, std::size_t{0},
                  "chain integrity violations (seed " + seed + ")");
      c.expect_near(run.mean_chain_length, 3.0, 0.0,
                    "mean chain length (seed " + seed + ")");
    }
  }

  {
    auto& c = gate.begin(5, "archival matches hard deletion except recovery");
    for (std::size_t i = 0; i < write_gated.runs.size(); ++i) {
      const auto& wg = write_gated.runs[i];
      const auto& hd = hard_delete.runs[i];
      c.expect(wg.accuracy_pct == hd.accuracy_pct,
               "accuracy differs between archive and hard delete (seed " +
                   std::to_string(wg.seed) + ")");
      c.expect_eq(hd.active_count, wg.active_count,
                  "active store size differs (seed " + std::to_string(wg.seed) +
                      ")");
    }

    const std::size_t dim = 8;
    const auto ko = weak_claim(dim);
    salience::GateConfig cfg;

    KnowledgeStore archival(dim);
    const auto decision = archival.gate_write(ko, cfg);
    c.expect(decision.outcome == gate::GateOutcome::Archive,
             "the weak claim should be archived by the default gate");
    const auto stored = archival.get(ko.id);
    c.expect(stored.has_value() && stored->content == ko.content,
             "archived claim is not readable");
    const auto promoted = archival.promote(ko.id, gate::PromoteMode::Force, cfg);
    c.expect(promoted.outcome == gate::GateOutcome::Admit &&
                 archival.get(ko.id)->status == ObjectStatus::Active,
             "archived claim could not be promoted back to active");

    KnowledgeStore dropping(dim);
    KnowledgeStore shadow(dim);
    if (shadow.gate_write(ko, cfg).outcome == gate::GateOutcome::Admit) {
      dropping.force_admit(ko);
    }
    c.expect(!dropping.get(ko.id).has_value(),
             "hard-deleting twin still holds the rejected claim");
    bool recovery_refused = false;
    try {
      dropping.promote(ko.id, gate::PromoteMode::Force, cfg);
    } catch (const NotFoundError&) {
      recovery_refused = true;
    }
    c.expect(recovery_refused,
             "hard-deleting twin recovered a discarded claim");
  }

  {
    auto& c = gate.begin(6, "multi-path verification lifts marginal paths");
    const std::vector<double> three_paths{0.9, 0.9, 0.9};
    const double agg = verification::aggregate_confidence(three_paths);
    c.expect_near(agg, 0.999, 1e-9, "three 0.9 paths under noisy-or");

    const auto report =
        verification::coverage_simulation(verification::CoverageSpec{});
    c.expect_near(report.single_path_coverage, 0.0, 0.0,
                  "single-path coverage at 0.95 threshold");
    c.expect_near(report.multi_path_coverage, 1.0, 0.0,
                  "three-path coverage at 0.95 threshold");
    c.expect_near(report.correct_mean_aggregate, 0.998, 0.01,
                  "mean aggregate over correct facts");
    c.expect(report.incorrect_mean_aggregate < 0.5,
             "incorrect facts aggregate too close to the threshold");
  }

  {
    auto& c = gate.begin(7, "signal ablation isolates each gate input");
    const auto result = harness::run_ablation(harness::AblationSpec{});
    const auto row = [&](const std::string& mask) -> const harness::AblationRow& {
      for (const auto& r : result.rows) {
        if (r.mask == mask) return r;
      }
      throw std::logic_error("missing ablation mask " + mask);
    };
    const auto& full = row("rep+nov+src");
    const auto& rep = row("rep");
    const auto& nov = row("nov");
    const auto& src = row("src");

    c.expect(src.gated.accuracy_mean == 100.0 && src.gated.accuracy_std == 0.0,
             "source-trust alone should be surgical on this corpus");
    for (const auto& r : result.rows) {
      if (r.mask == "nov") continue;
      c.expect(nov.gated.accuracy_mean < r.gated.accuracy_mean,
               "novelty alone should be strictly worst (vs " + r.mask + ")");
    }
    for (const auto* single : {&rep, &nov, &src}) {
      c.expect(full.gated.accuracy_mean >= single->gated.accuracy_mean,
               "full gate fell below the " + single->mask + " mask");
    }
  }

  {
    auto& c = gate.begin(8, "poisoned provenance degrades the gate gracefully");
    const auto result = harness::run_corruption(harness::CorruptionSpec{});
    const std::vector<double> pinned = {100.0, 90.0, 90.0, 80.0, 70.0};
    c.expect_eq(result.rows.size(), pinned.size(), "corruption row count");
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
      const auto& row = result.rows[i];
      c.expect_near(row.gated.accuracy_mean, pinned[i], 1e-9,
                    "gated accuracy at rate " + std::to_string(row.rate));
      c.expect(row.ungated.accuracy_mean <= 15.0,
               "ungated accuracy above 15 at rate " + std::to_string(row.rate));
      if (i > 0) {
        c.expect(row.gated.accuracy_mean <=
                     result.rows[i - 1].gated.accuracy_mean,
                 "gated accuracy increased as corruption rose");
      }
    }
  }

  {
    auto& c = gate.begin(9, "the gated store stays useful as writes accumulate");
    const auto result =
        harness::run_accumulation(harness::AccumulationRunSpec{});
    c.expect_eq(result.steps.size(), std::size_t{10}, "accumulation steps");
    for (const auto& step : result.steps) {
      const auto label = "step " + std::to_string(step.step);
      c.expect(step.gated_active_pct_of_written >= 10.0 &&
                   step.gated_active_pct_of_written <= 30.0,
               label + ": store size " +
                   std::to_string(step.gated_active_pct_of_written) +
                   "% of writes outside [10,30]");
      c.expect(step.gated_precision_mean >= 95.0,
               label + ": precision below 95: " +
                   std::to_string(step.gated_precision_mean));
    }
    const double first_gap = result.steps.front().gap_mean_pp;
    const double last_gap = result.steps.back().gap_mean_pp;
    c.expect(std::fabs(last_gap - first_gap) <= 10.0,
             "accuracy gap drifted more than 10pp between first and last step");
  }

  {
    auto& c = gate.begin(10, "call accounting: k+1 with a critic, 1 without");
    c.expect_near(ungated.calls_per_query, 1.0, 0.0, "ungated calls/query");
    c.expect_near(write_gated.calls_per_query, 1.0, 0.0,
                  "write-gated calls/query");
    c.expect_near(hard_delete.calls_per_query, 1.0, 0.0,
                  "hard-delete calls/query");
    c.expect_near(read_filtered.calls_per_query, 9.0, 0.0,
                  "read-filtered calls/query (k=8)");
    c.expect_near(both.calls_per_query, 9.0, 0.0, "both calls/query (k=8)");
  }

  {
    auto& c = gate.begin(11, "reports, journals, and corpora are reproducible");
    const auto report_a = harness::run_preset("headline");
    const auto report_b = harness::run_preset("headline");
    c.expect(report_a.document.dump(2) == report_b.document.dump(2),
             "headline report JSON differs between runs");
    c.expect(report_a.text == report_b.text,
             "headline report text differs between runs");

    TempDir tmp;
    const auto journal_a = tmp.path / "a.jsonl";
    const auto journal_b = tmp.path / "b.jsonl";
    const std::size_t dim = 8;
    {
      auto sink = std::make_shared<persistence::FileEventSink>(journal_a, dim);
      KnowledgeStore live(dim, sink);
      drive_operations(live, 97531, 500);

      const auto replayed = persistence::replay_log(journal_a);
      c.expect(replayed->export_state() == live.export_state(),
               "journal replay state differs from the live store");
      c.expect(replayed->stats() == live.stats(),
               "journal replay stats differ from the live store");

      const auto snap = tmp.path / "state.snapshot.json";
      persistence::write_snapshot(live, snap);
      const auto restored = persistence::load_snapshot(snap);
      c.expect(restored->export_state() == live.export_state(),
               "snapshot round trip loses state");
    }
    {
      auto sink = std::make_shared<persistence::FileEventSink>(journal_b, dim);
      KnowledgeStore live(dim, sink);
      drive_operations(live, 97531, 500);
    }
    c.expect(slurp(journal_a) == slurp(journal_b),
             "identical operation sequences produced different journal bytes");

    corpus::CorpusSpec pharma;
    pharma.domain = corpus::Domain::Pharma;
    pharma.sigma_correct = 0.16;
    pharma.sigma_distractor = 0.14;
    const auto once = corpus::generate(pharma);
    const auto twice = corpus::generate(pharma);
    c.expect(once.objects == twice.objects && once.queries == twice.queries,
             "drug-target corpus generation is not deterministic");
    c.expect_eq(corpus::pharma_affinity_nm("imatinib", "ABL1"),
                std::uint32_t{9165}, "affinity golden imatinib/ABL1");
    c.expect_eq(corpus::pharma_affinity_nm("gefitinib", "EGFR"),
                std::uint32_t{7031}, "affinity golden gefitinib/EGFR");
    c.expect_eq(corpus::pharma_affinity_nm("sorafenib", "VEGFR2"),
                std::uint32_t{3349}, "affinity golden sorafenib/VEGFR2");
  }

  {
    auto& c = gate.begin(12, "retrieval matches a brute-force oracle exactly");
    const std::size_t dim = 32;
    KnowledgeStore store(dim);
    Rng rng(20260816);
    std::vector<KnowledgeObject> actives;

    const auto admit = [&](KnowledgeObject ko) {
      ko.id = canonical_id(ko);
      store.force_admit(ko);
      actives.push_back(std::move(ko));
    };

    for (std::size_t i = 0; i < 1000; ++i) {
      KnowledgeObject ko;
      ko.concept_id = "topic-" + std::to_string(i);  // unique: all stay active
      ko.content = "fact body " + std::to_string(i);
      ko.provenance = {"source-" + std::to_string(i % 13),
                       static_cast<std::int64_t>(i), 0.9,
                       VerificationLevel::Verified, true};
      ko.embedding = rng.unit_vector(dim);
      admit(std::move(ko));
    }
    // A deliberate five-way tie: identical embeddings, distinct ids.
    const auto shared = rng.unit_vector(dim);
    for (std::size_t i = 0; i < 5; ++i) {
      KnowledgeObject ko;
      ko.concept_id = "tie-" + std::to_string(i);
      ko.content = "tied fact " + std::to_string(i);
      ko.provenance = {"tie-source", static_cast<std::int64_t>(2000 + i), 0.9,
                       VerificationLevel::Verified, true};
      ko.embedding = shared;
      admit(std::move(ko));
    }
    std::vector<const KnowledgeObject*> pool;
    for (const auto& ko : actives) {
      const auto live = store.get(ko.id);
      if (live && live->status == ObjectStatus::Active) pool.push_back(&ko);
    }

    std::size_t mismatches = 0;
    for (std::size_t q = 0; q < 100 && mismatches == 0; ++q) {
      const auto query =
          (q == 0) ? shared : rng.unit_vector(dim);  // q0 exercises the tie
      struct Scored {
        double sim;
        const std::string* id;
      };
      std::vector<Scored> oracle;
      oracle.reserve(pool.size());
      for (const auto* ko : pool) {
        oracle.push_back({cosine(query, ko->embedding), &ko->id});
      }
      std::sort(oracle.begin(), oracle.end(), [](const Scored& a, const Scored& b) {
        if (a.sim != b.sim) return a.sim > b.sim;
        return *a.id < *b.id;
      });
      for (const std::size_t k : {1, 8, 17}) {
        const auto result = store.retrieve(query, k);
        const std::size_t want = std::min(k, oracle.size());
        if (result.matches.size() != want) {
          ++mismatches;
          c.expect(false, "result size mismatch at k=" + std::to_string(k));
          break;
        }
        for (std::size_t i = 0; i < want; ++i) {
          if (result.matches[i].ko_id != *oracle[i].id ||
              result.matches[i].similarity != oracle[i].sim) {
            ++mismatches;
            c.expect(false, "rank " + std::to_string(i + 1) +
                                " differs from the oracle at k=" +
                                std::to_string(k) + " (query " +
                                std::to_string(q) + ")");
            break;
          }
        }
        if (mismatches) break;
      }
    }
    // The tie pack itself: ascending id among exactly-equal similarities.
    const auto tied = store.retrieve(shared, 5);
    // Gather ids the oracle says are tied at the top for this query.
    std::vector<std::string> tie_ids;
    for (const auto* ko : pool) {
      if (ko->embedding == shared) tie_ids.push_back(ko->id);
    }
    std::sort(tie_ids.begin(), tie_ids.end());
    c.expect_eq(tied.matches.size(), std::size_t{5}, "tie-pack result size");
    for (std::size_t i = 0; i < tied.matches.size() && i < tie_ids.size(); ++i) {
      c.expect(tied.matches[i].ko_id == tie_ids[i],
               "exact ties are not broken by ascending id at rank " +
                   std::to_string(i + 1));
    }
  }

  return gate.report() == 0 ? 0 : 1;
}
