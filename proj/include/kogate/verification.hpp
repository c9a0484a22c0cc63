#pragma once

// Multi-path verification with noisy-or aggregation.
//
// Independent verification paths each yield a confidence in [0,1]; the
// aggregate is 1 − Π(1 − c_p). Consequences worth remembering:
//   - the aggregate never falls below the best single path;
//   - adding a path never lowers the aggregate;
//   - no single path needs to clear a high threshold for the aggregate to —
//     three mediocre 0.9 paths reach 0.999.
// coverage_simulation quantifies that last point over synthetic populations.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kogate/core.hpp"

namespace kogate {
class KnowledgeStore;
}

namespace kogate::verification {

struct VerificationPath {
  std::string name;
  double confidence = 0.0;  // [0,1]

  bool operator==(const VerificationPath&) const = default;
};

struct VerificationResult {
  std::string ko_id;
  std::vector<VerificationPath> paths;
  double aggregate = 0.0;
  double threshold = 0.0;
  bool passed = false;

  bool operator==(const VerificationResult&) const = default;
};

/// 1 − Π(1 − c). Empty input → 0.0. Throws ValidationError when any
/// confidence falls outside [0,1].
double aggregate_confidence(std::span<const double> confidences);

/// A path evaluator inspects an object in its store context; nullopt means
/// the path does not apply to this object.
using PathEvaluator = std::function<std::optional<VerificationPath>(
    const KnowledgeObject&, const KnowledgeStore&)>;

/// Run the evaluators against one object and aggregate. Unknown id →
/// NotFoundError; tombstone → ConflictError; threshold outside [0,1] →
/// ValidationError.
VerificationResult verify(const KnowledgeStore& store, const std::string& ko_id,
                          double threshold,
                          const std::vector<PathEvaluator>& evaluators);

/// Built-in structural path: 0.9 when the object's version chain passes the
/// integrity audit and provenance timestamps are non-decreasing along it,
/// 0.1 otherwise. Objects outside any chain count as trivially consistent.
PathEvaluator version_chain_evaluator();

/// Fixed-confidence path, for composing externally supplied evidence.
PathEvaluator fixed_evaluator(std::string name, double confidence);

// ── Coverage simulation ───────────────────────────────────────────────────

struct UniformRange {
  double lo = 0.0;
  double hi = 1.0;  // samples land in [lo, hi)
};

struct CoverageSpec {
  std::size_t n_facts = 2000;
  std::size_t n_paths = 3;
  double threshold = 0.95;
  UniformRange correct_path{0.85, 0.95};  // per-path confidence, correct facts
  UniformRange incorrect_path{0.04, 0.24};  // tuned so 3-path mean lands near 0.35
  std::uint64_t seed = 1;
};

struct CoverageReport {
  double correct_mean_aggregate = 0.0;
  double incorrect_mean_aggregate = 0.0;
  double single_path_coverage = 0.0;  // correct facts whose lone path clears threshold
  double multi_path_coverage = 0.0;   // correct facts whose aggregate clears threshold

  bool operator==(const CoverageReport&) const = default;
};

CoverageReport coverage_simulation(const CoverageSpec& spec);

}  // namespace kogate::verification
