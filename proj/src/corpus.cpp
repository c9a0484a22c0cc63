#include "kogate/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "kogate/rng.hpp"

namespace kogate::corpus {
namespace {

// Stream labels: each generation concern draws from its own engine so a
// change in one (say, provenance sampling) never perturbs another (say,
// geometry). All are keyed off the corpus seed.
constexpr std::string_view kGeometry = "geometry";
constexpr std::string_view kProvenance = "provenance";
constexpr std::string_view kMarginal = "marginal";
constexpr std::string_view kCorruption = "corruption";
constexpr std::string_view kOrder = "order";
constexpr std::string_view kValues = "values";
constexpr std::string_view kPairs = "pharma-pairs";
constexpr std::string_view kStep = "step";

const std::vector<std::string> kVerifiedSources = {
    "registry-alpha", "registry-beta", "clinical-archive", "standards-board"};
const std::vector<std::string> kUnverifiedSources = {
    "forum-relay", "content-mill", "scrape-feed", "aggregator-x"};

std::uint64_t stream_seed(const CorpusSpec& spec, std::string_view label) {
  return mix64(spec.seed, fnv1a64(label));
}

/// Everything domain-specific about one concept; the shared builder below
/// turns a list of these into objects, queries, and the answer key.
struct ConceptDef {
  std::string concept_id;
  std::string query_text;
  std::string correct_content;
  std::string corrupted_content;  // used only if this concept is corrupted
  std::vector<std::string> distractor_contents;  // size == distractor_ratio
};

/// Shared assembly: geometry, provenance, the near-boundary reputation
/// cluster, corruption, seeded write order, ids, and the answer key.
GeneratedCorpus build_corpus(const CorpusSpec& spec,
                             const std::vector<ConceptDef>& defs) {
  const std::size_t n = defs.size();
  const std::size_t ratio = spec.distractor_ratio;

  Rng geometry(stream_seed(spec, kGeometry));
  Rng provenance(stream_seed(spec, kProvenance));
  Rng marginal(stream_seed(spec, kMarginal));
  Rng corruption(stream_seed(spec, kCorruption));
  Rng order(stream_seed(spec, kOrder));

  // Geometry: one query anchor per concept, then placements around it, in
  // concept order so the draw sequence is independent of later choices.
  std::vector<std::vector<double>> query_vecs(n);
  std::vector<std::vector<double>> correct_vecs(n);
  std::vector<std::vector<std::vector<double>>> distractor_vecs(n);
  for (std::size_t i = 0; i < n; ++i) {
    query_vecs[i] = geometry.unit_vector(spec.dim);
    correct_vecs[i] = cone_point(query_vecs[i], spec.sigma_correct, geometry);
    distractor_vecs[i].reserve(ratio);
    for (std::size_t j = 0; j < ratio; ++j) {
      distractor_vecs[i].push_back(
          cone_point(query_vecs[i], spec.sigma_distractor, geometry));
    }
  }

  // Provenance: correct slots draw from verified sources with high
  // reputation; distractor slots from unverified sources with low
  // reputation. Drawn in concept order, one correct then `ratio`
  // distractors, so the sequence is stable.
  std::vector<double> correct_rep(n);
  std::vector<std::string> correct_src(n);
  std::vector<std::vector<double>> distractor_rep(n);
  std::vector<std::vector<std::string>> distractor_src(n);
  for (std::size_t i = 0; i < n; ++i) {
    correct_rep[i] = provenance.uniform(0.8, 1.0);
    correct_src[i] = kVerifiedSources[static_cast<std::size_t>(
        provenance.uniform_int(0, static_cast<std::int64_t>(kVerifiedSources.size()) - 1))];
    distractor_rep[i].resize(ratio);
    distractor_src[i].resize(ratio);
    for (std::size_t j = 0; j < ratio; ++j) {
      distractor_rep[i][j] = provenance.uniform(0.0, 0.4);
      distractor_src[i][j] = kUnverifiedSources[static_cast<std::size_t>(
          provenance.uniform_int(0, static_cast<std::int64_t>(kUnverifiedSources.size()) - 1))];
    }
  }

  // Near-boundary cluster: a seeded handful of distractors get reputation
  // just above what the default gate weights can admit, each on a distinct
  // concept so no single query faces two admitted distractors.
  if (ratio > 0 && spec.marginal_high > 0) {
    const std::size_t lo = std::min(spec.marginal_low, n);
    const std::size_t hi = std::min(spec.marginal_high, n);
    const std::size_t count = static_cast<std::size_t>(marginal.uniform_int(
        static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
    std::vector<std::size_t> concepts(n);
    std::iota(concepts.begin(), concepts.end(), std::size_t{0});
    marginal.shuffle(concepts);
    for (std::size_t m = 0; m < count; ++m) {
      const std::size_t i = concepts[m];
      const std::size_t j = static_cast<std::size_t>(
          marginal.uniform_int(0, static_cast<std::int64_t>(ratio) - 1));
      distractor_rep[i][j] = marginal.uniform(0.84, 0.88);
    }
  }

  // Corruption: round(rate * n) distinct concepts have their correct slot's
  // content replaced by the (wrong) corrupted_content. Provenance and
  // geometry are untouched — the whole point is that the record still looks
  // trustworthy.
  std::vector<bool> corrupted(n, false);
  {
    const auto n_corr = static_cast<std::size_t>(
        std::llround(spec.corruption_rate * static_cast<double>(n)));
    std::vector<std::size_t> concepts(n);
    std::iota(concepts.begin(), concepts.end(), std::size_t{0});
    corruption.shuffle(concepts);
    for (std::size_t m = 0; m < std::min(n_corr, n); ++m)
      corrupted[concepts[m]] = true;
  }

  // Write order: every slot shuffled together; logical timestamps follow
  // the shuffled order so ids (which hash the timestamp) are order-bound.
  struct Slot {
    std::size_t concept_idx;
    std::ptrdiff_t distractor;  // -1 == correct slot
  };
  std::vector<Slot> slots;
  slots.reserve(n * (1 + ratio));
  for (std::size_t i = 0; i < n; ++i) {
    slots.push_back({i, -1});
    for (std::size_t j = 0; j < ratio; ++j)
      slots.push_back({i, static_cast<std::ptrdiff_t>(j)});
  }
  order.shuffle(slots);

  GeneratedCorpus out;
  out.spec = spec;
  out.objects.reserve(slots.size());
  std::vector<std::string> correct_id(n);
  std::vector<std::vector<std::string>> distractor_id(n);
  for (auto& v : distractor_id) (void)v;
  distractor_id.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) distractor_id[i].resize(ratio);

  for (std::size_t pos = 0; pos < slots.size(); ++pos) {
    const Slot& slot = slots[pos];
    const ConceptDef& def = defs[slot.concept_idx];
    KnowledgeObject ko;
    ko.provenance.timestamp =
        spec.timestamp_base + static_cast<std::int64_t>(pos);
    ko.provenance.consent = true;
    if (slot.distractor < 0) {
      ko.concept_id = def.concept_id;
      ko.content = corrupted[slot.concept_idx] ? def.corrupted_content
                                           : def.correct_content;
      ko.embedding = correct_vecs[slot.concept_idx];
      ko.provenance.source_id = correct_src[slot.concept_idx];
      ko.provenance.reputation = correct_rep[slot.concept_idx];
      ko.provenance.verification = VerificationLevel::Verified;
    } else {
      const auto j = static_cast<std::size_t>(slot.distractor);
      // Distractors carry their own concept ids: they are competing claims
      // about the same question, not newer versions of the correct fact, so
      // they must never enter the correct fact's version chain.
      ko.concept_id = def.concept_id + ".alt" + std::to_string(j);
      ko.content = def.distractor_contents[j];
      ko.embedding = distractor_vecs[slot.concept_idx][j];
      ko.provenance.source_id = distractor_src[slot.concept_idx][j];
      ko.provenance.reputation = distractor_rep[slot.concept_idx][j];
      ko.provenance.verification = VerificationLevel::Unverified;
    }
    ko.id = canonical_id(ko);
    if (slot.distractor < 0)
      correct_id[slot.concept_idx] = ko.id;
    else
      distractor_id[slot.concept_idx][static_cast<std::size_t>(slot.distractor)] =
          ko.id;
    out.objects.push_back(std::move(ko));
  }

  out.queries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Query q;
    q.query_id = "q:" + defs[i].concept_id;
    q.concept_id = defs[i].concept_id;
    q.text = defs[i].query_text;
    q.embedding = query_vecs[i];
    out.queries.push_back(std::move(q));
  }

  for (std::size_t i = 0; i < n; ++i) {
    auto& against = out.key.distractors_for[out.queries[i].query_id];
    if (corrupted[i]) {
      // The corrupted record asserts a wrong value about this concept: the
      // key treats it as a distractor and the query has no correct answer
      // in the corpus.
      out.key.labels[correct_id[i]] = FactLabel::Distractor;
      against.push_back(correct_id[i]);
    } else {
      out.key.labels[correct_id[i]] = FactLabel::Correct;
      out.key.correct_for[out.queries[i].query_id] = correct_id[i];
    }
    for (std::size_t j = 0; j < spec.distractor_ratio; ++j) {
      out.key.labels[distractor_id[i][j]] = FactLabel::Distractor;
      against.push_back(distractor_id[i][j]);
    }
  }
  return out;
}

std::string format_reading(std::int64_t centivalue) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld.%02lld",
                static_cast<long long>(centivalue / 100),
                static_cast<long long>(centivalue % 100));
  return buf;
}

std::string indicator_name(std::size_t i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "ind-%03zu", i);
  return buf;
}

}  // namespace

void CorpusSpec::validate() const {
  if (n_correct == 0) throw ValidationError("corpus: n_correct must be > 0");
  if (dim < 8) throw ValidationError("corpus: dim must be >= 8");
  if (sigma_correct <= 0.0 || sigma_distractor <= 0.0)
    throw ValidationError("corpus: sigma values must be > 0");
  if (corruption_rate < 0.0 || corruption_rate > 1.0)
    throw ValidationError("corpus: corruption_rate must be in [0,1]");
  if (marginal_low > marginal_high)
    throw ValidationError("corpus: marginal_low must be <= marginal_high");
  if (timestamp_base < 0)
    throw ValidationError("corpus: timestamp_base must be >= 0");
}

GeneratedCorpus gen_synthetic(const CorpusSpec& spec) {
  spec.validate();
  Rng values(stream_seed(spec, kValues));
  std::vector<ConceptDef> defs;
  defs.reserve(spec.n_correct);
  for (std::size_t i = 0; i < spec.n_correct; ++i) {
    ConceptDef def;
    def.concept_id = indicator_name(i);
    def.query_text = "What is the reading for indicator " + def.concept_id + "?";
    const std::int64_t correct_value = values.uniform_int(0, 99999);
    def.correct_content = "Reading for indicator " + def.concept_id + ": " +
                          format_reading(correct_value) + ".";
    auto wrong_value = [&]() {
      std::int64_t v = values.uniform_int(0, 99999);
      while (v == correct_value) v = values.uniform_int(0, 99999);
      return v;
    };
    def.corrupted_content = "Reading for indicator " + def.concept_id + ": " +
                            format_reading(wrong_value()) + ".";
    def.distractor_contents.reserve(spec.distractor_ratio);
    for (std::size_t j = 0; j < spec.distractor_ratio; ++j) {
      def.distractor_contents.push_back("Reading for indicator " +
                                        def.concept_id + ": " +
                                        format_reading(wrong_value()) + ".");
    }
    defs.push_back(std::move(def));
  }
  return build_corpus(spec, defs);
}

const std::vector<std::string>& pharma_drugs() {
  static const std::vector<std::string> drugs = {
      "imatinib",      "gefitinib",    "erlotinib",    "sorafenib",
      "sunitinib",     "dasatinib",    "lapatinib",    "nilotinib",
      "pazopanib",     "crizotinib",   "vemurafenib",  "ruxolitinib",
      "vandetanib",    "axitinib",     "bosutinib",    "regorafenib",
      "tofacitinib",   "cabozantinib", "ponatinib",    "trametinib",
      "dabrafenib",    "afatinib",     "ibrutinib",    "ceritinib",
      "idelalisib",    "nintedanib",   "palbociclib",  "lenvatinib",
      "cobimetinib",   "osimertinib",  "alectinib",    "ribociclib",
      "brigatinib",    "midostaurin",  "neratinib",    "copanlisib",
      "abemaciclib",   "acalabrutinib", "binimetinib", "encorafenib",
      "fostamatinib",  "larotrectinib", "lorlatinib",  "gilteritinib"};
  return drugs;
}

const std::vector<std::string>& pharma_targets() {
  static const std::vector<std::string> targets = {
      "ABL1",  "EGFR",  "HER2",  "VEGFR2", "PDGFRA", "KIT",  "SRC",  "JAK1",
      "JAK2",  "JAK3",  "ALK",   "ROS1",   "MET",    "BRAF", "MEK1", "MEK2",
      "BTK",   "PI3KD", "CDK4",  "CDK6",   "FLT3",   "RET",  "FGFR1",
      "FGFR2", "TRKA",  "SYK",   "AXL",    "EPHA2",  "LCK",  "AURKA"};
  return targets;
}

std::uint32_t pharma_affinity_nm(const std::string& drug,
                                 const std::string& target) {
  const auto digest = md5_digest(drug + ":" + target);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < 8; ++i)
    word = (word << 8) | digest[i];  // big-endian
  return static_cast<std::uint32_t>(1 + word % 10000);
}

namespace {

struct PharmaPair {
  std::size_t drug;
  std::size_t target;
};

/// Master seeded shuffle of all drug-target pairs; accumulation batches take
/// consecutive slices so step sets are disjoint and step 0 equals the
/// standalone pharma corpus.
std::vector<PharmaPair> shuffled_pairs(std::uint64_t seed) {
  const std::size_t nd = pharma_drugs().size();
  const std::size_t nt = pharma_targets().size();
  std::vector<PharmaPair> pairs;
  pairs.reserve(nd * nt);
  for (std::size_t d = 0; d < nd; ++d)
    for (std::size_t t = 0; t < nt; ++t) pairs.push_back({d, t});
  Rng rng(mix64(seed, fnv1a64(kPairs)));
  rng.shuffle(pairs);
  return pairs;
}

GeneratedCorpus gen_pharma_slice(const CorpusSpec& spec,
                                 const std::vector<PharmaPair>& pairs,
                                 std::size_t offset) {
  spec.validate();
  if (offset + spec.n_correct > pairs.size())
    throw ValidationError(
        "pharma corpus: requested more concepts than the 44x30 vocabulary "
        "holds");
  Rng values(stream_seed(spec, kValues));
  const auto& drugs = pharma_drugs();
  const auto& targets = pharma_targets();
  std::vector<ConceptDef> defs;
  defs.reserve(spec.n_correct);
  for (std::size_t i = 0; i < spec.n_correct; ++i) {
    const PharmaPair& pair = pairs[offset + i];
    const std::string& drug = drugs[pair.drug];
    const std::string& target = targets[pair.target];
    const std::uint32_t affinity = pharma_affinity_nm(drug, target);
    ConceptDef def;
    def.concept_id = drug + ":" + target;
    def.query_text =
        "What is the binding affinity of " + drug + " for " + target + "?";
    def.correct_content = drug + " binds " + target + " with affinity " +
                          std::to_string(affinity) + " nM.";
    // Wrong values are other pairs' affinities, re-rolled on collision with
    // the correct value.
    auto wrong_value = [&]() {
      for (;;) {
        const auto pick = static_cast<std::size_t>(values.uniform_int(
            0, static_cast<std::int64_t>(pairs.size()) - 1));
        const std::uint32_t v =
            pharma_affinity_nm(drugs[pairs[pick].drug], targets[pairs[pick].target]);
        if (v != affinity) return v;
      }
    };
    def.corrupted_content = drug + " binds " + target + " with affinity " +
                            std::to_string(wrong_value()) + " nM.";
    def.distractor_contents.reserve(spec.distractor_ratio);
    for (std::size_t j = 0; j < spec.distractor_ratio; ++j) {
      def.distractor_contents.push_back(drug + " binds " + target +
                                        " with affinity " +
                                        std::to_string(wrong_value()) + " nM.");
    }
    defs.push_back(std::move(def));
  }
  return build_corpus(spec, defs);
}

}  // namespace

GeneratedCorpus gen_pharma(const CorpusSpec& spec) {
  return gen_pharma_slice(spec, shuffled_pairs(spec.seed), 0);
}

GeneratedCorpus generate(const CorpusSpec& spec) {
  return spec.domain == Domain::Pharma ? gen_pharma(spec) : gen_synthetic(spec);
}

void AccumulationSpec::validate() const {
  corpus.validate();
  if (steps == 0) throw ValidationError("accumulation: steps must be > 0");
  if (facts_per_step == 0)
    throw ValidationError("accumulation: facts_per_step must be > 0");
  const std::size_t vocabulary =
      pharma_drugs().size() * pharma_targets().size();
  if (steps * facts_per_step > vocabulary)
    throw ValidationError(
        "accumulation: steps*facts_per_step exceeds the 44x30 vocabulary");
  if (corpus.domain != Domain::Pharma)
    throw ValidationError("accumulation: only the pharma domain accumulates");
}

std::vector<GeneratedCorpus> gen_accumulation(const AccumulationSpec& spec) {
  spec.validate();
  const auto pairs = shuffled_pairs(spec.corpus.seed);
  std::vector<GeneratedCorpus> batches;
  batches.reserve(spec.steps);
  const std::size_t objects_per_step =
      spec.facts_per_step * (1 + spec.corpus.distractor_ratio);
  for (std::size_t t = 0; t < spec.steps; ++t) {
    CorpusSpec batch_spec = spec.corpus;
    batch_spec.n_correct = spec.facts_per_step;
    batch_spec.timestamp_base =
        spec.corpus.timestamp_base +
        static_cast<std::int64_t>(t * objects_per_step);
    // Each step draws from its own streams; step 0 keeps the base seed so a
    // one-step accumulation is byte-identical to the standalone corpus.
    if (t > 0) batch_spec.seed = mix64(spec.corpus.seed, mix64(fnv1a64(kStep), t));
    batches.push_back(
        gen_pharma_slice(batch_spec, pairs, t * spec.facts_per_step));
  }
  return batches;
}

std::vector<double> ProceduralEmbedder::embed(const std::string& text) const {
  Rng rng(mix64(seed_, fnv1a64(text)));
  return rng.unit_vector(dim_);
}

}  // namespace kogate::corpus
