#pragma once

// Deterministic benchmark corpora.
//
// Every generator is a pure function of its spec: same spec, same bytes.
// A corpus is a write-ordered object stream, one query per target concept,
// and a sealed answer key. The key is consumed only by the evaluation
// harness (judge/critic); gate and store never see it — by module boundary,
// not by convention (their APIs have no parameter that could carry it).
//
// Geometry: each concept gets a seeded unit query vector q. Objects are
// placed on fixed-angle cones around q (seeded direction, deterministic
// radius — see cone_point), giving cos(q, object) = 1/sqrt(1 + sigma²·dim)
// exactly. sigma_distractor < sigma_correct puts every distractor slightly
// *closer* to the query than the correct object (cosine gap well under 0.1),
// so similarity alone cannot separate them and the distractor-ratio phase
// change in top-k composition is sharp rather than sampled.
//
// Provenance: correct facts draw reputation ~ U[0.8,1.0] from verified
// sources; distractors draw ~ U[0.0,0.4] from unverified sources, except a
// seeded handful (marginal_low..marginal_high, one per distinct concept)
// whose reputation lands just above the admission boundary (U[0.84,0.88],
// still unverified) — the near-boundary tail that makes the gate's
// decision non-trivial. Corruption flips a fraction of correct slots to
// wrong content while keeping verified high-reputation provenance; the
// answer key labels them distractors and drops the query's correct id.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kogate/core.hpp"
#include "kogate/store.hpp"

namespace kogate::corpus {

enum class Domain { Synthetic, Pharma };

enum class FactLabel { Correct, Distractor };

struct CorpusSpec {
  Domain domain = Domain::Synthetic;
  std::size_t n_correct = 10;      // concepts (pharma: drug-target pairs)
  std::size_t distractor_ratio = 4;  // distractors per concept
  std::uint64_t seed = 1;
  double corruption_rate = 0.0;  // fraction of correct slots flipped
  std::size_t dim = 64;
  double sigma_correct = 0.19;
  double sigma_distractor = 0.17;
  std::size_t marginal_low = 2;   // near-boundary distractor count, inclusive
  std::size_t marginal_high = 4;
  std::int64_t timestamp_base = 0;  // first write's logical timestamp

  void validate() const;  // throws ValidationError
  bool operator==(const CorpusSpec&) const = default;
};

struct Query {
  std::string query_id;
  std::string concept_id;  // the concept this query asks about
  std::string text;
  std::vector<double> embedding;

  bool operator==(const Query&) const = default;
};

/// Harness-only ground truth. correct_for omits queries whose correct slot
/// was corrupted away (no stored object answers them).
struct AnswerKey {
  std::map<std::string, FactLabel> labels;               // ko_id -> label
  std::map<std::string, std::string> correct_for;        // query_id -> ko_id
  std::map<std::string, std::vector<std::string>> distractors_for;  // query_id -> ko_ids

  bool operator==(const AnswerKey&) const = default;
};

struct GeneratedCorpus {
  CorpusSpec spec;
  std::vector<KnowledgeObject> objects;  // seeded write order; timestamps assigned
  std::vector<Query> queries;            // concept order
  AnswerKey key;

  bool operator==(const GeneratedCorpus&) const = default;
};

/// Templated facts about abstract indicators; values seeded per concept.
GeneratedCorpus gen_synthetic(const CorpusSpec& spec);

/// Drug-target binding facts over a fixed 44x30 vocabulary; affinity values
/// derived from the pair name via MD5 (see pharma_affinity_nm), so they are
/// identical on every platform and every run.
GeneratedCorpus gen_pharma(const CorpusSpec& spec);

/// Dispatch on spec.domain.
GeneratedCorpus generate(const CorpusSpec& spec);

struct AccumulationSpec {
  std::size_t steps = 10;
  std::size_t facts_per_step = 50;
  CorpusSpec corpus{.domain = Domain::Pharma,
                    .n_correct = 50,
                    .distractor_ratio = 4,
                    .sigma_correct = 0.16,
                    .sigma_distractor = 0.14,
                    .marginal_low = 1,
                    .marginal_high = 2};

  void validate() const;
  bool operator==(const AccumulationSpec&) const = default;
};

/// Sequential batches over disjoint concept sets. steps=1 reproduces
/// gen_pharma for the same spec. Throws ValidationError when the fixed
/// vocabulary (44x30 pairs) cannot supply steps*facts_per_step concepts.
std::vector<GeneratedCorpus> gen_accumulation(const AccumulationSpec& spec);

// ── Pharma vocabulary ──────────────────────────────────────────────────────

const std::vector<std::string>& pharma_drugs();    // 44 entries
const std::vector<std::string>& pharma_targets();  // 30 entries

/// 1 + (first 8 bytes of MD5("drug:target"), big-endian) mod 10000.
std::uint32_t pharma_affinity_nm(const std::string& drug, const std::string& target);

// ── Embedder ───────────────────────────────────────────────────────────────

/// Deterministic text → unit vector: the text hash seeds a gaussian draw.
class ProceduralEmbedder : public Embedder {
 public:
  ProceduralEmbedder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {}
  std::size_t dim() const override { return dim_; }
  std::vector<double> embed(const std::string& text) const override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

}  // namespace kogate::corpus
