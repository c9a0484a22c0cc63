"""Salience-gated knowledge-object store.

Consented writes are scored at write time by three oracle-free signals
(source reputation, novelty against the active tier, source verification
level) and either admitted to the active tier or archived — never silently
dropped. Superseded versions stay queryable through per-concept chains,
deletes leave only tombstones, and every mutation is journaled so a store
replays byte-identically.

Quick start::

    import kogate

    store = kogate.KnowledgeStore(dim=64)      # or journal="events.jsonl"
    decision = store.gate_write(kogate.KnowledgeObject(
        concept_id="ceo",
        content="X leads the firm.",
        provenance=kogate.Provenance(source_id="registry", timestamp=1,
                                     reputation=0.9,
                                     verification=kogate.VerificationLevel.VERIFIED),
    ))
    assert decision.outcome == kogate.GateOutcome.ADMIT
    [match] = store.retrieve_text("who leads the firm?", k=1)
"""

import json as _json

from ._core import (
    CalibrationResult,
    CalibrationRow,
    ConfigError,
    ConflictError,
    CoverageReport,
    CoverageSpec,
    GateConfig,
    GateDecision,
    GateOutcome,
    IntegrityError,
    KnowledgeObject,
    KnowledgeStore,
    NotFoundError,
    ObjectStatus,
    Provenance,
    RetrievalMatch,
    SalienceScore,
    SourceReliabilityMap,
    StorageError,
    StoreStats,
    TemporalSelector,
    UniformRange,
    ValidationError,
    VerificationLevel,
    VerificationPath,
    VerificationResult,
    VersionChain,
    aggregate_confidence,
    calibrate_tau,
    canonical_id,
    composite,
    cosine,
    coverage_simulation,
    generate_corpus,
    novelty,
    pharma_affinity_nm,
    preset_names,
    salience_score,
)
from ._core import run_preset as _run_preset

__version__ = "0.1.0"


def run_preset(name, seeds=()):
    """Run a named experiment preset at its pinned desk-scale settings.

    Returns ``(document, text)``: the machine-readable report parsed into a
    dict (schema ``kogate-report/1``) and the aligned text tables. A
    non-empty ``seeds`` sequence replaces the preset's own seed list. See
    :func:`preset_names` for the available presets.
    """
    document, text = _run_preset(name, list(seeds))
    return _json.loads(document), text


__all__ = [
    "CalibrationResult",
    "CalibrationRow",
    "ConfigError",
    "ConflictError",
    "CoverageReport",
    "CoverageSpec",
    "GateConfig",
    "GateDecision",
    "GateOutcome",
    "IntegrityError",
    "KnowledgeObject",
    "KnowledgeStore",
    "NotFoundError",
    "ObjectStatus",
    "Provenance",
    "RetrievalMatch",
    "SalienceScore",
    "SourceReliabilityMap",
    "StorageError",
    "StoreStats",
    "TemporalSelector",
    "UniformRange",
    "ValidationError",
    "VerificationLevel",
    "VerificationPath",
    "VerificationResult",
    "VersionChain",
    "__version__",
    "aggregate_confidence",
    "calibrate_tau",
    "canonical_id",
    "composite",
    "cosine",
    "coverage_simulation",
    "generate_corpus",
    "novelty",
    "pharma_affinity_nm",
    "preset_names",
    "run_preset",
    "salience_score",
]
