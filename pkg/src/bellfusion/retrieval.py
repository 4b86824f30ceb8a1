"""Mono-modal relevance scoring for text and image features.

Text relevance is the cosine between TF-IDF vectors of an expanded query
and a document; image relevance averages the cosines between the query's
sample-image features and the document's features.  Both are clamped to
[0, 1] and used directly as relevance probabilities.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from .errors import DomainError

_TOKEN_RE = re.compile(r"[^\W_]+")
IMAGE_AGGREGATIONS = ("mean", "max")


@lru_cache(maxsize=1)
def stopwords() -> frozenset[str]:
    """The bundled stopword list."""
    text = resources.files("bellfusion").joinpath("data/stopwords.txt").read_text("utf-8")
    return frozenset(
        line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")
    )


@dataclass(frozen=True)
class TextDocument:
    doc_id: str
    text: str


@dataclass(frozen=True)
class MultimodalDocument(TextDocument):
    image_features: np.ndarray = field(default_factory=lambda: np.zeros(0), compare=False)


@dataclass(frozen=True)
class MultimodalQuery:
    query_id: str
    text: str
    sample_image_features: tuple[np.ndarray, ...]

    def __post_init__(self):
        samples = tuple(np.asarray(v, dtype=float) for v in self.sample_image_features)
        if not samples:
            raise DomainError(f"query {self.query_id!r} has no sample image features")
        object.__setattr__(self, "sample_image_features", samples)


@dataclass(frozen=True)
class ScoredDocument:
    doc_id: str
    p_text: float
    p_image: float

    def __post_init__(self):
        for name in ("p_text", "p_image"):
            value = float(getattr(self, name))
            if not (0.0 <= value <= 1.0):
                raise DomainError(f"{name} of {self.doc_id!r} must lie in [0, 1], got {value!r}")
            object.__setattr__(self, name, value)

    def to_dict(self) -> dict:
        return {"doc_id": self.doc_id, "p_text": self.p_text, "p_image": self.p_image}


def tokenize(text: str) -> list[str]:
    """Lowercase, split on non-alphanumerics, drop stopwords and 1-char terms.

    >>> tokenize("Plane at LHR airport")
    ['plane', 'lhr', 'airport']
    """
    stop = stopwords()
    return [t for t in _TOKEN_RE.findall(text.lower()) if len(t) >= 2 and t not in stop]


class TfidfIndex:
    """Raw-count TF with unsmoothed ``idf = ln(N / df)`` over a fixed corpus."""

    def __init__(self, doc_ids: list[str], vocabulary: dict[str, int], idf: np.ndarray, matrix: sparse.csr_matrix):
        self.doc_ids = doc_ids
        self.vocabulary = vocabulary
        self.idf = idf
        self.matrix = matrix
        self.row_of = {d: i for i, d in enumerate(doc_ids)}
        self.doc_norms = np.sqrt(np.asarray(matrix.multiply(matrix).sum(axis=1)).ravel())

    def __len__(self):
        return len(self.doc_ids)

    def vectorize(self, text: str) -> np.ndarray:
        """Dense TF-IDF vector of ``text``; out-of-vocabulary terms are dropped."""
        vec = np.zeros(len(self.vocabulary))
        for term, count in Counter(tokenize(text)).items():
            col = self.vocabulary.get(term)
            if col is not None:
                vec[col] = count * self.idf[col]
        return vec

    def document_vector(self, doc_id: str) -> np.ndarray:
        return self.matrix[self._row(doc_id)].toarray().ravel()

    def _row(self, doc_id: str) -> int:
        try:
            return self.row_of[doc_id]
        except KeyError:
            raise DomainError(f"document {doc_id!r} is not in the TF-IDF index") from None

    def cosine_scores(self, query_text: str, doc_ids: Sequence[str]) -> np.ndarray:
        """Clamped cosine of the query vector against each listed document."""
        rows = np.array([self._row(d) for d in doc_ids], dtype=int)
        q = self.vectorize(query_text)
        q_norm = math.sqrt(float(q @ q))
        if rows.size == 0:
            return np.zeros(0)
        dots = self.matrix[rows] @ q
        denom = self.doc_norms[rows] * q_norm
        out = np.zeros(rows.size)
        ok = denom > 0
        out[ok] = dots[ok] / denom[ok]
        return np.clip(out, 0.0, 1.0)


def build_tfidf_index(corpus: Sequence[TextDocument]) -> TfidfIndex:
    if not corpus:
        raise DomainError("cannot build a TF-IDF index over an empty corpus")
    counts = []
    df: Counter[str] = Counter()
    seen: set[str] = set()
    for doc in corpus:
        if not doc.doc_id:
            raise DomainError("document ids must be nonempty")
        if doc.doc_id in seen:
            raise DomainError(f"duplicate document id {doc.doc_id!r}")
        seen.add(doc.doc_id)
        c = Counter(tokenize(doc.text))
        counts.append(c)
        df.update(c.keys())

    vocabulary = {term: i for i, term in enumerate(sorted(df))}
    n = len(corpus)
    idf = np.array([math.log(n / df[t]) for t in sorted(df)])

    indptr, indices, data = [0], [], []
    for c in counts:
        for col, tf in sorted((vocabulary[t], tf) for t, tf in c.items()):
            indices.append(col)
            data.append(tf * idf[col])
        indptr.append(len(indices))
    matrix = sparse.csr_matrix(
        (np.array(data, dtype=float), np.array(indices, dtype=int), np.array(indptr)),
        shape=(n, len(vocabulary)),
    )
    return TfidfIndex([d.doc_id for d in corpus], vocabulary, idf, matrix)


def expand_query(query_text: str, relevant_docs: Iterable[TextDocument], k: int = 10) -> str:
    """Append the ``k`` most frequent relevant-document terms not already in the query.

    Frequencies are summed over documents; ties break lexicographically.
    """
    if k < 0:
        raise DomainError(f"number of expansion terms must be >= 0, got {k!r}")
    in_query = set(tokenize(query_text))
    freq: Counter[str] = Counter()
    for doc in relevant_docs:
        freq.update(t for t in tokenize(doc.text) if t not in in_query)
    if k == 0 or not freq:
        return query_text
    ranked = sorted(freq.items(), key=lambda kv: (-kv[1], kv[0]))[:k]
    return " ".join([query_text, *(term for term, _ in ranked)])


def cosine_relevance(u, v) -> float:
    """Cosine similarity clamped to [0, 1]; 0 when either vector is zero."""
    u = np.asarray(u, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    if u.shape != v.shape:
        raise DomainError(f"dimension mismatch: {u.size} vs {v.size}")
    nu, nv = float(np.linalg.norm(u)), float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return min(1.0, max(0.0, float(u @ v) / (nu * nv)))


def image_relevance(query: MultimodalQuery, doc_features, aggregation: str = "mean") -> float:
    """Aggregate cosine between each query sample image and the document image."""
    if aggregation not in IMAGE_AGGREGATIONS:
        raise DomainError(f"unknown image aggregation {aggregation!r}; expected one of {IMAGE_AGGREGATIONS}")
    scores = [cosine_relevance(sample, doc_features) for sample in query.sample_image_features]
    if aggregation == "max":
        return max(scores)
    return min(1.0, math.fsum(scores) / len(scores))


def score_corpus(
    query: MultimodalQuery,
    documents: Sequence[MultimodalDocument],
    relevant_docs: Iterable[TextDocument] = (),
    index: TfidfIndex | None = None,
    expansion_terms: int = 10,
    aggregation: str = "mean",
) -> list[ScoredDocument]:
    """Score each document's text and image relevance for ``query``, in order.

    ``relevant_docs`` are the ground-truth relevant documents used to expand
    the query text.  ``index`` defaults to one built over ``documents``; pass
    a corpus-wide index to keep IDF statistics independent of the subset.
    """
    if index is None:
        index = build_tfidf_index(documents)
    expanded = expand_query(query.text, relevant_docs, expansion_terms)
    p_text = index.cosine_scores(expanded, [d.doc_id for d in documents])
    out = []
    for doc, pt in zip(documents, p_text):
        try:
            pi = image_relevance(query, doc.image_features, aggregation)
        except DomainError as exc:
            raise DomainError(f"query {query.query_id!r}, document {doc.doc_id!r}: {exc}") from exc
        out.append(ScoredDocument(doc.doc_id, float(pt), pi))
    return out
