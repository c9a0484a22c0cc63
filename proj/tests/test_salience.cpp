// Salience signals and the weighted composite, including the renormalization
// rule for disabled signals and the monotonicity property of the composite.

#include <doctest.h>

#include "kogate/rng.hpp"
#include "kogate/salience.hpp"

using namespace kogate;
using salience::GateConfig;

namespace {

KnowledgeObject object_with(double reputation, VerificationLevel level,
                            std::vector<double> embedding) {
  KnowledgeObject ko;
  ko.concept_id = "c";
  ko.content = "x";
  ko.provenance.source_id = "s";
  ko.provenance.reputation = reputation;
  ko.provenance.verification = level;
  ko.embedding = std::move(embedding);
  return ko;
}

/// Materialized list as the enumerator view score() expects.
salience::ActiveEmbeddings tier(std::vector<std::vector<double>> vecs) {
  return [vecs = std::move(vecs)](
             const std::function<void(const std::vector<double>&)>& visit) {
    for (const auto& v : vecs) visit(v);
  };
}

}  // namespace

TEST_CASE("source reliability uses the configured table") {
  salience::SourceReliabilityMap map;
  CHECK(salience::source_reliability(VerificationLevel::Unverified, map) == 0.2);
  CHECK(salience::source_reliability(VerificationLevel::Institutional, map) == 0.8);
  CHECK(salience::source_reliability(VerificationLevel::Verified, map) == 1.0);
  map.institutional = 0.55;
  CHECK(salience::source_reliability(VerificationLevel::Institutional, map) == 0.55);
}

TEST_CASE("novelty against the active tier") {
  const std::vector<double> e1 = {1.0, 0.0};
  const std::vector<double> e2 = {0.0, 1.0};
  const std::vector<double> opposite = {-1.0, 0.0};

  SUBCASE("empty tier is maximally novel") {
    CHECK(salience::novelty(e1, std::vector<std::vector<double>>{}) == 1.0);
  }
  SUBCASE("exact duplicate has zero novelty") {
    CHECK(salience::novelty(e1, {e1, e2}) == doctest::Approx(0.0));
  }
  SUBCASE("orthogonal neighbour leaves full novelty") {
    CHECK(salience::novelty(e1, {e2}) == doctest::Approx(1.0));
  }
  SUBCASE("negative similarity clamps to zero before the complement") {
    CHECK(salience::novelty(e1, {opposite}) == doctest::Approx(1.0));
  }
  SUBCASE("novelty tracks the most similar member only") {
    const std::vector<double> diag = {0.8, 0.6};
    CHECK(salience::novelty(e1, {e2, diag}) == doctest::Approx(1.0 - 0.8));
  }
}

TEST_CASE("effective weights renormalize over the enabled mask") {
  GateConfig cfg;  // defaults 0.6 / 0.2 / 0.2
  auto w = cfg.effective_weights();
  CHECK(w.rep == doctest::Approx(0.6));
  CHECK(w.nov == doctest::Approx(0.2));
  CHECK(w.src == doctest::Approx(0.2));

  cfg.enable_nov = false;
  w = cfg.effective_weights();
  CHECK(w.rep == doctest::Approx(0.75));
  CHECK(w.nov == 0.0);
  CHECK(w.src == doctest::Approx(0.25));

  cfg.enable_rep = false;  // src alone
  w = cfg.effective_weights();
  CHECK(w.src == doctest::Approx(1.0));

  // Every non-empty mask sums to one.
  for (int mask = 1; mask < 8; ++mask) {
    GateConfig c;
    c.enable_rep = mask & 1;
    c.enable_nov = mask & 2;
    c.enable_src = mask & 4;
    const auto ew = c.effective_weights();
    CHECK(ew.rep + ew.nov + ew.src == doctest::Approx(1.0));
  }
}

TEST_CASE("composite folds enabled signals with renormalized weights") {
  GateConfig cfg;
  CHECK(salience::composite(1.0, 1.0, 1.0, cfg) == doctest::Approx(1.0));
  CHECK(salience::composite(0.5, 0.0, 0.0, cfg) == doctest::Approx(0.30));
  CHECK(salience::composite(0.9, 0.7, 1.0, cfg) ==
        doctest::Approx(0.6 * 0.9 + 0.2 * 0.7 + 0.2 * 1.0));

  cfg.enable_nov = false;
  CHECK(salience::composite(1.0, 0.0, 0.2, cfg) ==
        doctest::Approx(0.75 * 1.0 + 0.25 * 0.2));

  SUBCASE("out-of-range components are clamped defensively") {
    GateConfig c;
    CHECK(salience::composite(7.0, 1.0, 1.0, c) == doctest::Approx(1.0));
    CHECK(salience::composite(-3.0, 0.0, 0.0, c) == doctest::Approx(0.0));
  }
}

TEST_CASE("composite is monotone non-decreasing in every signal") {
  Rng rng(20240816);
  for (int trial = 0; trial < 200; ++trial) {
    GateConfig cfg;
    cfg.w_rep = rng.uniform(0.0, 1.0);
    cfg.w_nov = rng.uniform(0.0, 1.0);
    cfg.w_src = rng.uniform(0.0, 1.0);
    cfg.enable_rep = rng.unit() < 0.8;
    cfg.enable_nov = rng.unit() < 0.8;
    cfg.enable_src = rng.unit() < 0.8;
    const double total = (cfg.enable_rep ? cfg.w_rep : 0.0) +
                         (cfg.enable_nov ? cfg.w_nov : 0.0) +
                         (cfg.enable_src ? cfg.w_src : 0.0);
    if (total <= 0.0) continue;  // composite() would reject this config

    const double rep = rng.unit(), nov = rng.unit(), src = rng.unit();
    const double base = salience::composite(rep, nov, src, cfg);
    const double bump = rng.uniform(0.0, 0.5);
    CHECK(salience::composite(std::min(rep + bump, 1.0), nov, src, cfg) >=
          base - 1e-12);
    CHECK(salience::composite(rep, std::min(nov + bump, 1.0), src, cfg) >=
          base - 1e-12);
    CHECK(salience::composite(rep, nov, std::min(src + bump, 1.0), cfg) >=
          base - 1e-12);
  }
}

TEST_CASE("config validation rejects structural nonsense") {
  GateConfig cfg;
  CHECK_NOTHROW(cfg.validate());

  cfg = GateConfig{};
  cfg.w_rep = -0.1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = GateConfig{};
  cfg.enable_rep = cfg.enable_nov = cfg.enable_src = false;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = GateConfig{};
  cfg.w_rep = 0.0;
  cfg.enable_nov = false;
  cfg.enable_src = false;  // enabled mask has zero total weight
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = GateConfig{};
  cfg.tau = 1.2;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = GateConfig{};
  cfg.src_map.verified = 1.4;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("score combines the three signals against the active tier") {
  GateConfig cfg;
  const auto ko =
      object_with(0.9, VerificationLevel::Institutional, {1.0, 0.0});

  SUBCASE("empty tier") {
    const auto s = salience::score(ko, tier({}), cfg);
    CHECK(s.rep == doctest::Approx(0.9));
    CHECK(s.nov == doctest::Approx(1.0));
    CHECK(s.src == doctest::Approx(0.8));
    CHECK(s.composite == doctest::Approx(0.6 * 0.9 + 0.2 * 1.0 + 0.2 * 0.8));
  }
  SUBCASE("crowded tier reduces only the novelty signal") {
    const auto s = salience::score(ko, tier({{1.0, 0.0}}), cfg);
    CHECK(s.rep == doctest::Approx(0.9));
    CHECK(s.nov == doctest::Approx(0.0));
    CHECK(s.src == doctest::Approx(0.8));
    CHECK(s.composite == doctest::Approx(0.6 * 0.9 + 0.2 * 0.8));
  }
}
