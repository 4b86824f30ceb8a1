"""Per-query CHSH experiment over document pairs.

For each query a subset is formed from all of its relevant documents plus
seeded filler, every document is scored per modality, and every pair of
relevant documents is tested against the CHSH bound.  Results aggregate into
an ``ExperimentReport`` that serializes deterministically.
"""

from __future__ import annotations

import hashlib
import io
import itertools
import json
import zlib
from dataclasses import asdict, dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .chsh import (
    CLASSICAL_BOUND,
    DEFAULT_VIOLATION_TOLERANCE,
    ChshResult,
    chsh_from_document_pair,
    chsh_s_values,
)
from .errors import DomainError, InvariantError
from .formats import Qrels
from .retrieval import (
    IMAGE_AGGREGATIONS,
    MultimodalDocument,
    MultimodalQuery,
    ScoredDocument,
    TfidfIndex,
    build_tfidf_index,
    score_corpus,
)

DEFAULT_SEED = 2019
DEFAULT_TARGET_SIZE = 300
PAIR_SCOPES = ("relevant_only", "all")


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = DEFAULT_SEED
    target_subset_size: int = DEFAULT_TARGET_SIZE
    violation_tolerance: float = DEFAULT_VIOLATION_TOLERANCE
    image_aggregation: str = "mean"
    pair_scope: str = "relevant_only"
    expansion_terms: int = 10

    def __post_init__(self):
        if self.seed < 0:
            raise DomainError(f"seed must be nonnegative, got {self.seed!r}")
        if self.target_subset_size < 1:
            raise DomainError(f"target subset size must be positive, got {self.target_subset_size!r}")
        if not self.violation_tolerance > 0:
            raise DomainError(f"violation tolerance must be positive, got {self.violation_tolerance!r}")
        if self.image_aggregation not in IMAGE_AGGREGATIONS:
            raise DomainError(f"image aggregation must be one of {IMAGE_AGGREGATIONS}")
        if self.pair_scope not in PAIR_SCOPES:
            raise DomainError(f"pair scope must be one of {PAIR_SCOPES}")
        if self.expansion_terms < 0:
            raise DomainError("expansion_terms must be >= 0")

    def fingerprint(self) -> str:
        """SHA-256 of the canonical JSON form of this configuration."""
        blob = json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class QuerySubset:
    query_id: str
    relevant_ids: frozenset[str]
    filler_ids: frozenset[str]
    target_size: int = DEFAULT_TARGET_SIZE

    @property
    def doc_ids(self) -> list[str]:
        return sorted(self.relevant_ids | self.filler_ids)


@dataclass(frozen=True)
class PairResult:
    doc_id_1: str
    doc_id_2: str
    chsh: ChshResult

    def __post_init__(self):
        if self.doc_id_1 == self.doc_id_2:
            raise DomainError(f"a pair needs two distinct documents, got {self.doc_id_1!r} twice")
        if self.doc_id_1 > self.doc_id_2:
            raise DomainError("pair ids must be in canonical (lexicographic) order")


@dataclass(frozen=True)
class QueryReport:
    pair_count: int
    violating_pairs: int
    violation_pct: float
    max_s: float


@dataclass(frozen=True)
class ExperimentReport:
    per_query: Mapping[str, QueryReport]
    queries_with_violation_pct: float
    config_fingerprint: str
    seed: int
    scored: Mapping[str, list[ScoredDocument]] = field(default_factory=dict, compare=False, repr=False)

    def to_dict(self) -> dict:
        return {
            "per_query": {qid: asdict(r) for qid, r in self.per_query.items()},
            "queries_with_violation_pct": self.queries_with_violation_pct,
            "seed": self.seed,
            "config_fingerprint": self.config_fingerprint,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("query_id,pair_count,violating_pairs,violation_pct,max_s\n")
        for qid, r in self.per_query.items():
            buf.write(f"{qid},{r.pair_count},{r.violating_pairs},{r.violation_pct!r},{r.max_s!r}\n")
        return buf.getvalue()


def relevant_ids_for(query_id: str, qrels: Qrels, corpus_ids) -> set[str]:
    judged = qrels.get(query_id, {})
    return {d for d, rel in judged.items() if rel > 0 and d in corpus_ids}


def _query_rng(seed: int, query_id: str) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, zlib.crc32(query_id.encode("utf-8"))]))


def build_subset(
    query_id: str,
    qrels: Qrels,
    corpus_ids: Sequence[str],
    target_size: int = DEFAULT_TARGET_SIZE,
    seed: int = DEFAULT_SEED,
) -> QuerySubset:
    """All relevant documents of ``query_id`` plus seeded irrelevant filler.

    Filler is drawn from the rest of the corpus (judged irrelevant or
    unjudged) until ``min(target_size, len(corpus))`` documents are held.
    Relevant documents are never dropped, so a query with more relevant
    documents than ``target_size`` gets no filler and an oversized subset.
    """
    if query_id not in qrels:
        raise DomainError(f"query {query_id!r} has no relevance judgments")
    ids = set(corpus_ids)
    relevant = relevant_ids_for(query_id, qrels, ids)
    rest = sorted(ids - relevant)
    n_filler = max(0, min(target_size, len(ids)) - len(relevant))
    order = _query_rng(seed, query_id).permutation(len(rest))
    filler = frozenset(rest[i] for i in order[:n_filler])
    return QuerySubset(query_id, frozenset(relevant), filler, target_size)


def enumerate_pairs(doc_ids) -> list[tuple[str, str]]:
    return list(itertools.combinations(sorted(doc_ids), 2))


def enumerate_relevant_pairs(subset: QuerySubset) -> list[tuple[str, str]]:
    """All unordered pairs of relevant documents in canonical order."""
    return enumerate_pairs(subset.relevant_ids)


def pair_results(
    scored: Sequence[ScoredDocument],
    pairs: Sequence[tuple[str, str]],
    tol: float = DEFAULT_VIOLATION_TOLERANCE,
) -> list[PairResult]:
    by_id = {s.doc_id: s for s in scored}
    return [PairResult(a, b, chsh_from_document_pair(by_id[a], by_id[b], tol)) for a, b in pairs]


def summarize_pairs(scored: Sequence[ScoredDocument], pair_ids: Sequence[str], tol: float) -> QueryReport:
    """Count CHSH violations over all pairs drawn from ``pair_ids``."""
    by_id = {s.doc_id: s for s in scored}
    ids = sorted(pair_ids)
    n = len(ids)
    pt = np.array([by_id[d].p_text for d in ids])
    pi = np.array([by_id[d].p_image for d in ids])
    i, j = np.triu_indices(n, k=1)
    s = chsh_s_values(pt[i], pi[i], pt[j], pi[j])
    pair_count = int(i.size)
    violating = int(np.count_nonzero(s > CLASSICAL_BOUND + tol))
    pct = 100.0 * violating / pair_count if pair_count else 0.0
    max_s = float(s.max()) if pair_count else 0.0
    if not (0 <= violating <= pair_count and 0.0 <= pct <= 100.0):
        raise InvariantError(f"inconsistent pair counts: {violating} of {pair_count}")
    return QueryReport(pair_count, violating, pct, max_s)


def run_experiment(
    queries: Sequence[MultimodalQuery],
    corpus: Sequence[MultimodalDocument],
    qrels: Qrels,
    config: ExperimentConfig = ExperimentConfig(),
    index: TfidfIndex | None = None,
) -> ExperimentReport:
    """Run the full pipeline and aggregate per-query violation statistics."""
    per_query: dict[str, QueryReport] = {}
    scored_by_query: dict[str, list[ScoredDocument]] = {}
    if queries:
        by_id = {d.doc_id: d for d in corpus}
        corpus_ids = [d.doc_id for d in corpus]
        dims = {d.image_features.size for d in corpus}
        if len(dims) > 1:
            raise DomainError("corpus image features have inconsistent dimensions")
        dim = next(iter(dims), None)
        if index is None:
            index = build_tfidf_index(corpus)
        for query in sorted(queries, key=lambda q: q.query_id):
            for v in query.sample_image_features:
                if dim is not None and v.size != dim:
                    raise DomainError(
                        f"query {query.query_id!r}: sample image dimension {v.size} does not match corpus dimension {dim}"
                    )
            subset = build_subset(query.query_id, qrels, corpus_ids, config.target_subset_size, config.seed)
            docs = [by_id[d] for d in subset.doc_ids]
            relevant_docs = [by_id[d] for d in sorted(subset.relevant_ids)]
            scored = score_corpus(
                query,
                docs,
                relevant_docs,
                index=index,
                expansion_terms=config.expansion_terms,
                aggregation=config.image_aggregation,
            )
            pool = subset.relevant_ids if config.pair_scope == "relevant_only" else subset.doc_ids
            per_query[query.query_id] = summarize_pairs(scored, pool, config.violation_tolerance)
            scored_by_query[query.query_id] = scored

    flagged = sum(1 for r in per_query.values() if r.violating_pairs > 0)
    pct = 100.0 * flagged / len(per_query) if per_query else 0.0
    return ExperimentReport(per_query, pct, config.fingerprint(), config.seed, scored_by_query)
