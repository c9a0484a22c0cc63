#include "kogate/verification.hpp"

#include <map>

#include "kogate/rng.hpp"
#include "kogate/store.hpp"
#include "kogate/versioning.hpp"

namespace kogate::verification {

double aggregate_confidence(std::span<const double> confidences) {
  double miss = 1.0;
  for (double c : confidences) {
    if (c < 0.0 || c > 1.0) {
      throw ValidationError("path confidence outside [0,1]");
    }
    miss *= 1.0 - c;
  }
  return confidences.empty() ? 0.0 : 1.0 - miss;
}

VerificationResult verify(const KnowledgeStore& store, const std::string& ko_id,
                          double threshold,
                          const std::vector<PathEvaluator>& evaluators) {
  if (threshold < 0.0 || threshold > 1.0) {
    throw ValidationError("verification threshold outside [0,1]");
  }
  const auto ko = store.get(ko_id);
  if (!ko.has_value()) {
    throw NotFoundError("verify: unknown object id: " + ko_id);
  }
  if (ko->status == ObjectStatus::Deleted) {
    throw ConflictError("verify: object is deleted: " + ko_id);
  }

  VerificationResult result;
  result.ko_id = ko_id;
  result.threshold = threshold;
  std::vector<double> confidences;
  for (const auto& evaluate : evaluators) {
    auto path = evaluate(*ko, store);
    if (!path.has_value()) continue;
    confidences.push_back(path->confidence);
    result.paths.push_back(std::move(*path));
  }
  result.aggregate = aggregate_confidence(confidences);
  result.passed = result.aggregate >= threshold;
  return result;
}

PathEvaluator version_chain_evaluator() {
  return [](const KnowledgeObject& ko,
            const KnowledgeStore& store) -> std::optional<VerificationPath> {
    constexpr double kConsistent = 0.9;
    constexpr double kInconsistent = 0.1;

    const auto chain = store.chain(ko.concept_id);
    if (!chain.has_value()) {
      // No admitted history: a lone object is trivially consistent.
      return VerificationPath{"version_chain", kConsistent};
    }
    const auto violations = versioning::check_integrity(
        [&store](const std::string& id) { return store.get(id); },
        {{chain->concept_id, chain->ids}});
    if (!violations.empty()) {
      return VerificationPath{"version_chain", kInconsistent};
    }
    std::int64_t prev = -1;
    for (const auto& id : chain->ids) {
      const auto member = store.get(id);
      if (!member.has_value()) return VerificationPath{"version_chain", kInconsistent};
      if (member->status == ObjectStatus::Deleted) continue;  // purged timestamp
      if (member->provenance.timestamp < prev) {
        return VerificationPath{"version_chain", kInconsistent};
      }
      prev = member->provenance.timestamp;
    }
    return VerificationPath{"version_chain", kConsistent};
  };
}

PathEvaluator fixed_evaluator(std::string name, double confidence) {
  if (confidence < 0.0 || confidence > 1.0) {
    throw ValidationError("fixed evaluator confidence outside [0,1]");
  }
  return [name = std::move(name), confidence](
             const KnowledgeObject&,
             const KnowledgeStore&) -> std::optional<VerificationPath> {
    return VerificationPath{name, confidence};
  };
}

CoverageReport coverage_simulation(const CoverageSpec& spec) {
  if (spec.n_facts == 0 || spec.n_paths == 0) {
    throw ValidationError("coverage simulation needs at least one fact and one path");
  }
  if (spec.threshold < 0.0 || spec.threshold > 1.0) {
    throw ValidationError("coverage threshold outside [0,1]");
  }
  for (const auto& range : {spec.correct_path, spec.incorrect_path}) {
    if (range.lo < 0.0 || range.hi > 1.0 || range.lo >= range.hi) {
      throw ValidationError("coverage sampler range invalid");
    }
  }

  Rng rng(mix64(spec.seed, fnv1a64("coverage")));
  CoverageReport report;
  std::size_t single_hits = 0;
  std::size_t multi_hits = 0;
  double correct_sum = 0.0;
  double incorrect_sum = 0.0;

  std::vector<double> paths(spec.n_paths);
  for (std::size_t i = 0; i < spec.n_facts; ++i) {
    for (auto& c : paths) c = rng.uniform(spec.correct_path.lo, spec.correct_path.hi);
    const double agg = aggregate_confidence(paths);
    correct_sum += agg;
    if (paths.front() >= spec.threshold) ++single_hits;
    if (agg >= spec.threshold) ++multi_hits;
  }
  for (std::size_t i = 0; i < spec.n_facts; ++i) {
    for (auto& c : paths) c = rng.uniform(spec.incorrect_path.lo, spec.incorrect_path.hi);
    incorrect_sum += aggregate_confidence(paths);
  }

  const auto n = static_cast<double>(spec.n_facts);
  report.correct_mean_aggregate = correct_sum / n;
  report.incorrect_mean_aggregate = incorrect_sum / n;
  report.single_path_coverage = static_cast<double>(single_hits) / n;
  report.multi_path_coverage = static_cast<double>(multi_hits) / n;
  return report;
}

}  // namespace kogate::verification
