// Version chains: selector semantics, chain growth through the store,
// temporal queries, and the structural integrity audit.

#include <doctest.h>

#include "kogate/store.hpp"

using namespace kogate;
using versioning::TemporalSelector;
using versioning::VersionChain;

namespace {

KnowledgeObject version(const std::string& concept_name, const std::string& content,
                        std::vector<double> embedding, std::int64_t ts) {
  KnowledgeObject ko;
  ko.concept_id = concept_name;
  ko.content = content;
  ko.provenance = {"editor", ts, 0.9, VerificationLevel::Verified, true};
  ko.embedding = std::move(embedding);
  return ko;
}

}  // namespace

TEST_CASE("selector semantics over a bare chain") {
  const VersionChain chain{"c", {"v1", "v2", "v3"}};
  CHECK(select_version(chain, TemporalSelector::current()) == "v3");
  CHECK(select_version(chain, TemporalSelector::prior()) == "v2");
  CHECK(select_version(chain, TemporalSelector::original()) == "v1");
  CHECK(select_version(chain, TemporalSelector::at_index(1)) == "v1");
  CHECK(select_version(chain, TemporalSelector::at_index(3)) == "v3");
  CHECK_FALSE(select_version(chain, TemporalSelector::at_index(0)).has_value());
  CHECK_FALSE(select_version(chain, TemporalSelector::at_index(4)).has_value());

  const VersionChain single{"c", {"only"}};
  CHECK(select_version(single, TemporalSelector::current()) == "only");
  CHECK_FALSE(select_version(single, TemporalSelector::prior()).has_value());
  CHECK(select_version(single, TemporalSelector::original()) == "only");

  const VersionChain empty{"c", {}};
  CHECK_FALSE(select_version(empty, TemporalSelector::current()).has_value());
}

TEST_CASE("three admitted versions form one chain, oldest to newest") {
  KnowledgeStore store(2);
  salience::GateConfig cfg;
  const auto v1 = store.gate_write(version("law", "limit 10", {1.0, 0.0}, 1), cfg);
  const auto v2 = store.gate_write(version("law", "limit 20", {0.0, 1.0}, 2), cfg);
  const auto v3 = store.gate_write(
      version("law", "limit 30", {0.7071067811865476, 0.7071067811865476}, 3),
      cfg);
  REQUIRE(v1.outcome == gate::GateOutcome::Admit);
  REQUIRE(v2.outcome == gate::GateOutcome::Admit);
  REQUIRE(v3.outcome == gate::GateOutcome::Admit);

  const auto chain = store.chain("law");
  REQUIRE(chain.has_value());
  CHECK(chain->ids ==
        std::vector<std::string>{v1.ko_id, v2.ko_id, v3.ko_id});

  SUBCASE("temporal queries address every version") {
    CHECK(store.temporal("law", TemporalSelector::current())->content ==
          "limit 30");
    CHECK(store.temporal("law", TemporalSelector::prior())->content ==
          "limit 20");
    CHECK(store.temporal("law", TemporalSelector::original())->content ==
          "limit 10");
    CHECK(store.temporal("law", TemporalSelector::at_index(2))->content ==
          "limit 20");
    CHECK_FALSE(store.temporal("law", TemporalSelector::at_index(7)).has_value());
    CHECK_FALSE(store.temporal("no-such-concept", TemporalSelector::current())
                    .has_value());
  }

  SUBCASE("old versions stay readable in the archive") {
    CHECK(store.get(v1.ko_id)->status == ObjectStatus::Archived);
    CHECK(store.get(v1.ko_id)->content == "limit 10");
    CHECK(store.get(v2.ko_id)->status == ObjectStatus::Archived);
    CHECK(store.get(v3.ko_id)->status == ObjectStatus::Active);
  }

  SUBCASE("links agree with chain adjacency and the audit passes") {
    CHECK(store.get(v1.ko_id)->superseded_by == v2.ko_id);
    CHECK(store.get(v2.ko_id)->supersedes == v1.ko_id);
    CHECK(store.get(v2.ko_id)->superseded_by == v3.ko_id);
    CHECK(store.get(v3.ko_id)->supersedes == v2.ko_id);
    CHECK_FALSE(store.get(v1.ko_id)->supersedes.has_value());
    CHECK_FALSE(store.get(v3.ko_id)->superseded_by.has_value());
    CHECK(store.check_integrity().empty());
  }

  SUBCASE("deleting a mid-chain version leaves a tombstone in place") {
    store.delete_object(v2.ko_id);
    const auto after = store.chain("law");
    CHECK(after->ids ==
          std::vector<std::string>{v1.ko_id, v2.ko_id, v3.ko_id});
    CHECK(store.get(v2.ko_id)->status == ObjectStatus::Deleted);
    CHECK(store.check_integrity().empty());  // dangling into tombstone allowed
    CHECK(store.temporal("law", TemporalSelector::prior())->status ==
          ObjectStatus::Deleted);
  }
}

TEST_CASE("integrity audit flags hand-built corruption") {
  const auto lookup_from =
      [](const std::map<std::string, KnowledgeObject>& objects) {
        return [&objects](const std::string& id) -> std::optional<KnowledgeObject> {
          const auto it = objects.find(id);
          if (it == objects.end()) return std::nullopt;
          return it->second;
        };
      };

  KnowledgeObject a = version("c", "a", {1.0, 0.0}, 1);
  a.id = "id-a";
  KnowledgeObject b = version("c", "b", {0.0, 1.0}, 2);
  b.id = "id-b";

  SUBCASE("clean two-version chain passes") {
    a.status = ObjectStatus::Archived;
    a.superseded_by = "id-b";
    b.supersedes = "id-a";
    std::map<std::string, KnowledgeObject> objects{{"id-a", a}, {"id-b", b}};
    CHECK(versioning::check_integrity(lookup_from(objects),
                                      {{"c", {"id-a", "id-b"}}})
              .empty());
  }

  SUBCASE("unknown id in a chain") {
    std::map<std::string, KnowledgeObject> objects{{"id-a", a}};
    const auto v = versioning::check_integrity(lookup_from(objects),
                                               {{"c", {"id-a", "ghost"}}});
    CHECK_FALSE(v.empty());
  }

  SUBCASE("active object below the head") {
    // Both active: the non-head one must be flagged.
    b.supersedes = "id-a";
    std::map<std::string, KnowledgeObject> objects{{"id-a", a}, {"id-b", b}};
    const auto v = versioning::check_integrity(lookup_from(objects),
                                               {{"c", {"id-a", "id-b"}}});
    CHECK_FALSE(v.empty());
  }

  SUBCASE("duplicate id within a chain") {
    std::map<std::string, KnowledgeObject> objects{{"id-a", a}};
    const auto v = versioning::check_integrity(lookup_from(objects),
                                               {{"c", {"id-a", "id-a"}}});
    CHECK_FALSE(v.empty());
  }

  SUBCASE("link disagreeing with adjacency") {
    a.status = ObjectStatus::Archived;
    a.superseded_by = "id-b";
    b.supersedes = "somewhere-else";
    std::map<std::string, KnowledgeObject> objects{{"id-a", a}, {"id-b", b}};
    const auto v = versioning::check_integrity(lookup_from(objects),
                                               {{"c", {"id-a", "id-b"}}});
    CHECK_FALSE(v.empty());
  }

  SUBCASE("original version claiming to supersede something") {
    a.status = ObjectStatus::Archived;
    a.superseded_by = "id-b";
    a.supersedes = "phantom";
    b.supersedes = "id-a";
    std::map<std::string, KnowledgeObject> objects{{"id-a", a}, {"id-b", b}};
    const auto v = versioning::check_integrity(lookup_from(objects),
                                               {{"c", {"id-a", "id-b"}}});
    CHECK_FALSE(v.empty());
  }

  SUBCASE("head carrying a stale forward link") {
    a.status = ObjectStatus::Archived;
    a.superseded_by = "id-b";
    b.supersedes = "id-a";
    b.superseded_by = "future";
    std::map<std::string, KnowledgeObject> objects{{"id-a", a}, {"id-b", b}};
    const auto v = versioning::check_integrity(lookup_from(objects),
                                               {{"c", {"id-a", "id-b"}}});
    CHECK_FALSE(v.empty());
  }
}

TEST_CASE("separate concepts never share a chain") {
  KnowledgeStore store(2);
  salience::GateConfig cfg;
  store.gate_write(version("alpha", "alpha v1", {1.0, 0.0}, 1), cfg);
  store.gate_write(version("beta", "beta v1", {0.0, 1.0}, 2), cfg);

  CHECK(store.chain("alpha")->ids.size() == 1);
  CHECK(store.chain("beta")->ids.size() == 1);
  CHECK_FALSE(store.chain("gamma").has_value());
  CHECK(store.check_integrity().empty());
}
