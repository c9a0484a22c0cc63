"""End-to-end smoke tests for the Python bindings.

The heavy behavioral coverage lives in the C++ suites; these tests check that
the Python surface exposes the same semantics: gating outcomes, retrieval
order, supersession chains and temporal queries, journal replay and snapshot
round trips, delete redaction, noisy-or verification, corpus determinism,
and the experiment presets.
"""

import hashlib
import math

import pytest

import kogate


def verified(source, timestamp, reputation=0.9):
    return kogate.Provenance(
        source_id=source,
        timestamp=timestamp,
        reputation=reputation,
        verification=kogate.VerificationLevel.VERIFIED,
    )


def fact(concept_id, content, provenance, embedding=()):
    return kogate.KnowledgeObject(
        concept_id=concept_id,
        content=content,
        provenance=provenance,
        embedding=list(embedding),
    )


# ── Gating ──────────────────────────────────────────────────────────────────


def test_gate_admits_strong_write_and_archives_weak_one():
    store = kogate.KnowledgeStore(dim=64)

    strong = store.gate_write(fact("ceo", "X leads the firm.", verified("registry", 1)))
    assert strong.outcome == kogate.GateOutcome.ADMIT
    assert strong.score is not None
    # Empty active tier -> full novelty; composite = .6*.9 + .2*1 + .2*1.
    assert strong.score.nov == pytest.approx(1.0)
    assert strong.score.composite == pytest.approx(0.94)
    assert store.get(strong.ko_id).status == kogate.ObjectStatus.ACTIVE

    weak = store.gate_write(
        fact(
            "rumor",
            "Y allegedly resigned.",
            kogate.Provenance(source_id="forum", timestamp=2, reputation=0.05),
        )
    )
    assert weak.outcome == kogate.GateOutcome.ARCHIVE
    assert store.get(weak.ko_id).status == kogate.ObjectStatus.ARCHIVED

    stats = store.stats()
    assert stats.active_count == 1
    assert stats.archived_count == 1
    assert stats.consented_writes == 2


def test_gate_rejects_nonconsented_write_outright():
    store = kogate.KnowledgeStore(dim=64)
    provenance = kogate.Provenance(source_id="s", timestamp=1, reputation=0.9, consent=False)
    decision = store.gate_write(fact("c", "never stored", provenance))
    assert decision.outcome == kogate.GateOutcome.REJECT_CONSENT
    assert store.get(decision.ko_id) is None
    assert store.stats().consented_writes == 0


def test_promote_regate_respects_threshold_and_force_overrides_it():
    store = kogate.KnowledgeStore(dim=64)
    weak = store.gate_write(
        fact("c", "weak claim", kogate.Provenance(source_id="s", timestamp=1, reputation=0.05))
    )
    assert weak.outcome == kogate.GateOutcome.ARCHIVE

    regated = store.promote(weak.ko_id, regate=True)
    assert regated.outcome == kogate.GateOutcome.ARCHIVE  # still under tau

    forced = store.promote(weak.ko_id)
    assert forced.outcome == kogate.GateOutcome.ADMIT
    assert forced.forced
    assert store.get(weak.ko_id).status == kogate.ObjectStatus.ACTIVE


def test_tau_zero_admits_what_default_config_archives():
    lenient = kogate.GateConfig(tau=0.0)
    store = kogate.KnowledgeStore(dim=64)
    decision = store.gate_write(
        fact("c", "weak claim", kogate.Provenance(source_id="s", timestamp=1, reputation=0.0)),
        config=lenient,
    )
    assert decision.outcome == kogate.GateOutcome.ADMIT


# ── Retrieval ───────────────────────────────────────────────────────────────


def test_retrieval_orders_by_similarity_then_ascending_id():
    store = kogate.KnowledgeStore(dim=4)
    embeddings = {
        "exact": [1.0, 0.0, 0.0, 0.0],
        "close": [0.8, 0.6, 0.0, 0.0],
        "orthogonal": [0.0, 1.0, 0.0, 0.0],
    }
    ids = {}
    for i, (name, emb) in enumerate(embeddings.items(), start=1):
        decision = store.force_admit(fact(name, f"fact {name}", verified("s", i), emb))
        ids[name] = decision.ko_id

    matches = store.retrieve([1.0, 0.0, 0.0, 0.0], k=3)
    assert [m.ko_id for m in matches] == [ids["exact"], ids["close"], ids["orthogonal"]]
    assert [m.similarity for m in matches] == pytest.approx([1.0, 0.8, 0.0])

    # Two objects sharing an embedding tie; ties break by ascending id.
    shared = [0.0, 0.0, 1.0, 0.0]
    tie_ids = sorted(
        store.force_admit(fact(f"tie-{i}", f"tied fact {i}", verified("s", 10 + i), shared)).ko_id
        for i in range(2)
    )
    tied = store.retrieve(shared, k=2)
    assert [m.ko_id for m in tied] == tie_ids


def test_retrieve_text_uses_the_same_embedder_as_ingest():
    store = kogate.KnowledgeStore(dim=64)
    decision = store.gate_write(fact("ceo", "X leads the firm.", verified("registry", 1)))
    [match] = store.retrieve_text("X leads the firm.", k=1)
    assert match.ko_id == decision.ko_id
    assert match.similarity == pytest.approx(1.0)  # identical text embeds identically


# ── Versioning and temporal queries ────────────────────────────────────────


def test_supersession_chain_and_temporal_selectors():
    store = kogate.KnowledgeStore(dim=64)
    v1 = store.gate_write(fact("ceo", "X leads the firm.", verified("registry", 1)))
    v2 = store.gate_write(fact("ceo", "Y leads the firm.", verified("registry", 2)))
    assert v2.superseded_id == v1.ko_id

    chain = store.chain("ceo")
    assert chain.ids == [v1.ko_id, v2.ko_id]
    assert len(chain) == 2

    old = store.get(v1.ko_id)
    assert old.status == kogate.ObjectStatus.ARCHIVED
    assert old.superseded_by == v2.ko_id
    assert store.get(v2.ko_id).supersedes == v1.ko_id

    sel = kogate.TemporalSelector
    assert store.temporal("ceo", sel.current()).id == v2.ko_id
    assert store.temporal("ceo", sel.prior()).id == v1.ko_id
    assert store.temporal("ceo", sel.original()).id == v1.ko_id
    assert store.temporal("ceo", sel.at_index(1)).id == v1.ko_id
    assert store.temporal("ceo", sel.at_index(3)) is None
    assert store.check_integrity() == []


def test_delete_leaves_only_a_tombstone():
    store = kogate.KnowledgeStore(dim=64)
    decision = store.gate_write(fact("ceo", "X leads the firm.", verified("registry", 1)))
    store.delete_object(decision.ko_id)
    store.delete_object(decision.ko_id)  # idempotent

    tombstone = store.get(decision.ko_id)
    assert tombstone.status == kogate.ObjectStatus.DELETED
    assert tombstone.content == ""
    assert tombstone.embedding == []
    assert store.stats().deleted_count == 1
    assert store.retrieve_text("X leads the firm.", k=1) == []


def test_promote_missing_id_raises_not_found():
    store = kogate.KnowledgeStore(dim=64)
    with pytest.raises(kogate.NotFoundError):
        store.promote("no-such-id")
    assert issubclass(kogate.NotFoundError, LookupError)
    assert issubclass(kogate.ValidationError, ValueError)


# ── Persistence ─────────────────────────────────────────────────────────────


def test_journal_replay_reproduces_the_store(tmp_path):
    journal = str(tmp_path / "events.jsonl")
    store = kogate.KnowledgeStore(dim=64, journal=journal)
    store.gate_write(fact("ceo", "X leads the firm.", verified("registry", 1)))
    store.gate_write(fact("ceo", "Y leads the firm.", verified("registry", 2)))
    weak = store.gate_write(
        fact("rumor", "thin claim", kogate.Provenance(source_id="forum", timestamp=3, reputation=0.1))
    )
    store.promote(weak.ko_id)

    replayed = kogate.KnowledgeStore.replay(journal)
    assert replayed.dim == store.dim
    assert replayed.clock == store.clock
    assert replayed.active_ids() == store.active_ids()
    assert replayed.stats() == store.stats()
    assert replayed.check_integrity() == []
    query = "who leads the firm?"
    assert [m.ko_id for m in replayed.retrieve_text(query, k=3)] == [
        m.ko_id for m in store.retrieve_text(query, k=3)
    ]


def test_reopening_a_journal_adopts_its_dimension(tmp_path):
    journal = str(tmp_path / "events.jsonl")
    first = kogate.KnowledgeStore(dim=16, journal=journal)
    first.gate_write(fact("c", "a fact", verified("s", 1)))
    del first

    reopened = kogate.KnowledgeStore(dim=64, journal=journal)
    assert reopened.dim == 16
    assert reopened.stats().active_count == 1


def test_delete_redacts_content_from_the_journal_file(tmp_path):
    journal = tmp_path / "events.jsonl"
    store = kogate.KnowledgeStore(dim=64, journal=str(journal))
    marker = "EXTREMELY-IDENTIFIABLE-SMOKE-PAYLOAD"
    decision = store.gate_write(fact("pii", f"{marker} lives here.", verified("registry", 1)))
    assert marker in journal.read_text()

    store.delete_object(decision.ko_id)
    assert marker not in journal.read_text()

    replayed = kogate.KnowledgeStore.replay(str(journal))
    assert replayed.get(decision.ko_id).status == kogate.ObjectStatus.DELETED
    assert replayed.stats() == store.stats()


def test_snapshot_round_trip(tmp_path):
    snapshot = str(tmp_path / "state.snapshot.json")
    store = kogate.KnowledgeStore(dim=64)
    store.gate_write(fact("ceo", "X leads the firm.", verified("registry", 1)))
    store.gate_write(fact("cfo", "Z keeps the books.", verified("registry", 2)))
    store.snapshot(snapshot)

    loaded = kogate.KnowledgeStore.load_snapshot(snapshot)
    assert loaded.dim == store.dim
    assert loaded.active_ids() == store.active_ids()
    assert loaded.stats() == store.stats()
    assert loaded.check_integrity() == []


# ── Content addressing ──────────────────────────────────────────────────────


def test_canonical_id_is_stable_and_field_sensitive():
    base = kogate.canonical_id("ceo", "X leads the firm.", "registry", 1)
    assert base == kogate.canonical_id("ceo", "X leads the firm.", "registry", 1)
    assert len(base) == 64 and set(base) <= set("0123456789abcdef")
    assert base != kogate.canonical_id("ceo", "X leads the firm.", "registry", 2)

    ko = fact("ceo", "X leads the firm.", verified("registry", 1))
    assert kogate.canonical_id(ko) == base

    store = kogate.KnowledgeStore(dim=64)
    assert store.gate_write(ko).ko_id == base  # store fills the id from content


def test_pharma_affinity_matches_an_independent_md5_derivation():
    def oracle(drug, target):
        digest = hashlib.md5(f"{drug}:{target}".encode()).digest()
        return 1 + int.from_bytes(digest[:8], "big") % 10000

    for drug, target in [("imatinib", "ABL1"), ("gefitinib", "EGFR"), ("sorafenib", "VEGFR2")]:
        assert kogate.pharma_affinity_nm(drug, target) == oracle(drug, target)
    assert kogate.pharma_affinity_nm("imatinib", "ABL1") == 9165


# ── Salience and verification primitives ───────────────────────────────────


def test_salience_score_matches_hand_computed_composite():
    config = kogate.GateConfig()
    ko = fact("c", "claim", verified("s", 1, reputation=0.5), embedding=[1.0, 0.0])
    score = kogate.salience_score(ko, [], config)  # empty tier -> novelty 1.0
    assert score.nov == pytest.approx(1.0)
    assert score.composite == pytest.approx(0.6 * 0.5 + 0.2 * 1.0 + 0.2 * 1.0)

    half = [math.sqrt(0.5), math.sqrt(0.5)]
    assert kogate.novelty([1.0, 0.0], [half]) == pytest.approx(1 - math.sqrt(0.5))
    assert kogate.composite(1.0, 1.0, 1.0, config) == pytest.approx(1.0)


def test_noisy_or_aggregation():
    assert kogate.aggregate_confidence([]) == 0.0
    assert kogate.aggregate_confidence([0.9, 0.9, 0.9]) == pytest.approx(0.999)
    with pytest.raises(kogate.ValidationError):
        kogate.aggregate_confidence([1.5])


def test_verify_composes_extra_paths_with_the_chain_path():
    store = kogate.KnowledgeStore(dim=64)
    store.gate_write(fact("ceo", "X leads the firm.", verified("registry", 1)))
    head = store.gate_write(fact("ceo", "Y leads the firm.", verified("registry", 2)))

    alone = store.verify(head.ko_id)
    assert [p.name for p in alone.paths] == ["version_chain"]
    assert alone.aggregate == pytest.approx(0.9)
    assert not alone.passed  # 0.9 < default threshold 0.95

    combined = store.verify(head.ko_id, extra_paths=[("replica", 0.9)])
    assert combined.aggregate == pytest.approx(1 - 0.1 * 0.1)
    assert combined.passed


def test_coverage_simulation_multi_path_dominates_single_path():
    spec = kogate.CoverageSpec(n_facts=400, seed=7)
    report = kogate.coverage_simulation(spec)
    assert 0.0 <= report.single_path_coverage <= report.multi_path_coverage <= 1.0
    assert report.correct_mean_aggregate > report.incorrect_mean_aggregate


# ── Corpus generation and calibration ───────────────────────────────────────


def test_generate_corpus_is_deterministic_and_fully_labeled():
    first = kogate.generate_corpus("pharma", n_correct=5, distractor_ratio=3, seed=11)
    second = kogate.generate_corpus("pharma", n_correct=5, distractor_ratio=3, seed=11)
    assert [ko.id for ko in first["objects"]] == [ko.id for ko in second["objects"]]

    labels = first["labels"]
    assert len(first["objects"]) == 5 * (1 + 3)
    assert sum(1 for v in labels.values() if v == "correct") == 5
    assert sum(1 for v in labels.values() if v == "distractor") == 15
    assert len(first["queries"]) == 5
    for query in first["queries"]:
        correct_id = first["correct_for"][query["query_id"]]
        assert labels[correct_id] == "correct"
        assert len(query["embedding"]) == 64

    shifted = kogate.generate_corpus("pharma", n_correct=5, distractor_ratio=3, seed=12)
    assert [ko.id for ko in shifted["objects"]] != [ko.id for ko in first["objects"]]


def test_calibrate_tau_recommendation_admits_every_correct_fact():
    generated = kogate.generate_corpus("pharma", n_correct=5, distractor_ratio=3, seed=2)
    labeled = [(ko, generated["labels"][ko.id]) for ko in generated["objects"]]
    result = kogate.calibrate_tau(labeled, kogate.GateConfig(), dim=64)
    assert 0.0 <= result.recommended_tau <= 1.0
    assert result.n_correct == 5 and result.n_distractor == 15
    at_recommendation = [
        row for row in result.rows if row.tau == pytest.approx(result.recommended_tau)
    ]
    assert at_recommendation and all(r.correct_admitted == 5 for r in at_recommendation)


# ── Experiment presets ──────────────────────────────────────────────────────


def test_preset_report_is_deterministic_and_tagged():
    names = kogate.preset_names()
    assert "headline" in names and "verification" in names

    doc, text = kogate.run_preset("verification")
    doc2, text2 = kogate.run_preset("verification")
    assert doc == doc2 and text == text2
    assert doc["format"] == "kogate-report/1"
    assert doc["preset"] == "verification"
    assert doc["sections"]
    assert "Verification coverage" in text

    with pytest.raises(kogate.ConfigError):
        kogate.run_preset("no-such-preset")
