#include "kogate/salience.hpp"

#include <algorithm>

namespace kogate::salience {
namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

double SourceReliabilityMap::value_for(VerificationLevel level) const {
  switch (level) {
    case VerificationLevel::Unverified: return unverified;
    case VerificationLevel::Institutional: return institutional;
    case VerificationLevel::Verified: return verified;
  }
  throw ValidationError("unknown verification level");
}

void GateConfig::validate() const {
  if (w_rep < 0.0 || w_nov < 0.0 || w_src < 0.0) {
    throw ConfigError("gate config: negative weight");
  }
  if (tau < 0.0 || tau > 1.0) {
    throw ConfigError("gate config: tau outside [0,1]");
  }
  if (!enable_rep && !enable_nov && !enable_src) {
    throw ConfigError("gate config: all signals disabled");
  }
  const double total = (enable_rep ? w_rep : 0.0) + (enable_nov ? w_nov : 0.0) +
                       (enable_src ? w_src : 0.0);
  if (total <= 0.0) {
    throw ConfigError("gate config: enabled weights sum to zero");
  }
  for (double v : {src_map.unverified, src_map.institutional, src_map.verified}) {
    if (v < 0.0 || v > 1.0) {
      throw ConfigError("gate config: source reliability value outside [0,1]");
    }
  }
}

GateConfig::Effective GateConfig::effective_weights() const {
  validate();
  const double total = (enable_rep ? w_rep : 0.0) + (enable_nov ? w_nov : 0.0) +
                       (enable_src ? w_src : 0.0);
  Effective e;
  if (enable_rep) e.rep = w_rep / total;
  if (enable_nov) e.nov = w_nov / total;
  if (enable_src) e.src = w_src / total;
  return e;
}

double source_reliability(VerificationLevel level,
                          const SourceReliabilityMap& map) {
  return map.value_for(level);
}

double novelty(const std::vector<double>& embedding,
               const ActiveEmbeddings& active) {
  double max_sim = 0.0;  // empty active tier leaves this at 0 -> novelty 1
  bool any = false;
  active([&](const std::vector<double>& other) {
    any = true;
    max_sim = std::max(max_sim, clamp01(cosine(embedding, other)));
  });
  if (!any) return 1.0;
  return 1.0 - max_sim;
}

double novelty(const std::vector<double>& embedding,
               const std::vector<std::vector<double>>& active) {
  return novelty(embedding, [&](const auto& visit) {
    for (const auto& e : active) visit(e);
  });
}

SalienceScore score(const KnowledgeObject& ko, const ActiveEmbeddings& active,
                    const GateConfig& config) {
  config.validate();
  SalienceScore s;
  s.rep = clamp01(ko.provenance.reputation);
  s.nov = novelty(ko.embedding, active);
  s.src = source_reliability(ko.provenance.verification, config.src_map);
  s.composite = composite(s.rep, s.nov, s.src, config);
  return s;
}

double composite(double rep, double nov, double src, const GateConfig& config) {
  const auto w = config.effective_weights();
  return w.rep * clamp01(rep) + w.nov * clamp01(nov) + w.src * clamp01(src);
}

}  // namespace kogate::salience
