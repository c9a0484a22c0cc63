#pragma once

// Write-time salience signals and their weighted composite.
//
// Three oracle-free signals, each in [0,1]:
//   rep — source reputation carried on provenance, taken as-is;
//   nov — novelty: 1 − max cosine similarity against the *active* tier
//         (cosine clamped to [0,1] first; empty active tier → 1.0);
//   src — source verification level mapped through a configured table.
// The composite is the weighted sum over *enabled* signals with weights
// renormalized over the enabled mask, so disabling a signal redistributes
// its weight instead of silently shrinking every score.

#include <functional>
#include <span>
#include <vector>

#include "kogate/core.hpp"

namespace kogate::salience {

struct SourceReliabilityMap {
  double unverified = 0.2;
  double institutional = 0.8;
  double verified = 1.0;

  double value_for(VerificationLevel level) const;
  bool operator==(const SourceReliabilityMap&) const = default;
};

struct GateConfig {
  double w_rep = 0.6;
  double w_nov = 0.2;
  double w_src = 0.2;
  double tau = 0.6;  // admission threshold; composite >= tau admits
  bool enable_rep = true;
  bool enable_nov = true;
  bool enable_src = true;
  SourceReliabilityMap src_map;

  /// Throws ConfigError unless weights are non-negative, at least one signal
  /// is enabled with positive total weight, tau is in [0,1], and map values
  /// are in [0,1].
  void validate() const;

  /// Weights renormalized over the enabled mask (disabled -> 0); sums to 1.
  struct Effective {
    double rep = 0.0, nov = 0.0, src = 0.0;
  };
  Effective effective_weights() const;

  bool operator==(const GateConfig&) const = default;
};

/// View of the active tier's embeddings used by the novelty signal.
using ActiveEmbeddings = std::function<void(
    const std::function<void(const std::vector<double>&)>& visit)>;

/// Map a verification level through the configured table.
double source_reliability(VerificationLevel level, const SourceReliabilityMap& map);

/// 1 − max(clamp(cos,0,1)) over the active tier; 1.0 when the tier is empty.
double novelty(const std::vector<double>& embedding,
               const ActiveEmbeddings& active);

/// Convenience overload over a materialized list.
double novelty(const std::vector<double>& embedding,
               const std::vector<std::vector<double>>& active);

/// Score an object's three signals against the given active tier and fold
/// them into the composite under config (config is validated).
SalienceScore score(const KnowledgeObject& ko, const ActiveEmbeddings& active,
                    const GateConfig& config);

/// Weighted fold of already-computed signals (enabled mask + renormalized
/// weights applied); components are clamped to [0,1] defensively.
double composite(double rep, double nov, double src, const GateConfig& config);

}  // namespace kogate::salience
