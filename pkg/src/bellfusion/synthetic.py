"""Seeded synthetic multimodal corpora shaped like a small image+text test collection.

Each query owns a block of ``docs_per_query`` documents, a handful of
topic terms and a feature-space centroid.  Relevant documents in the block
mix topic terms into their text and sit near the centroid in feature space,
so they score higher on average than the rest.  Every document in a block
is judged for that block's query.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import DomainError
from .formats import Qrels
from .retrieval import MultimodalDocument, MultimodalQuery, stopwords

_CONSONANTS = "bdfgklmnprstvz"
_VOWELS = "aeiou"
TOPIC_TERMS = 8
QUERY_TERMS = 4
SAMPLE_IMAGES = 3
_DECIMALS = 6


def synthetic_vocabulary(size: int) -> list[str]:
    """``size`` distinct pronounceable terms, none of them stopwords."""
    syllables = [c + v for c, v in itertools.product(_CONSONANTS, _VOWELS)]
    stop = stopwords()
    words: list[str] = []
    for n_syl in itertools.count(2):
        for combo in itertools.product(syllables, repeat=n_syl):
            w = "".join(combo)
            if w not in stop:
                words.append(w)
                if len(words) == size:
                    return words


def generate_synthetic_dataset(
    n_queries: int,
    docs_per_query: int,
    relevant_range: tuple[int, int],
    vocab_size: int,
    feature_dim: int,
    seed: int,
) -> tuple[list[MultimodalDocument], list[MultimodalQuery], Qrels]:
    """Return ``(corpus, queries, qrels)``; identical for identical arguments.

    The corpus holds ``n_queries * docs_per_query`` documents.  Query ``q``
    has between ``relevant_range[0]`` and ``relevant_range[1]`` relevant
    documents, all inside its own block.
    """
    lo, hi = relevant_range
    if min(n_queries, docs_per_query, vocab_size, feature_dim) < 1:
        raise DomainError("n_queries, docs_per_query, vocab_size and feature_dim must all be >= 1")
    if not 1 <= lo <= hi <= docs_per_query:
        raise DomainError(
            f"relevant_range {relevant_range!r} must satisfy 1 <= min <= max <= docs_per_query ({docs_per_query})"
        )
    if seed < 0:
        raise DomainError(f"seed must be nonnegative, got {seed!r}")

    rng = np.random.default_rng(seed)
    vocab = np.array(synthetic_vocabulary(vocab_size))
    zipf = 1.0 / np.arange(1, vocab_size + 1)
    zipf /= zipf.sum()
    n_topic = min(TOPIC_TERMS, vocab_size)

    corpus: list[MultimodalDocument] = []
    queries: list[MultimodalQuery] = []
    qrels: Qrels = {}
    for q in range(n_queries):
        qid = f"q{q + 1:03d}"
        topic = list(rng.choice(vocab, size=n_topic, replace=False))
        centroid = rng.gamma(2.0, 1.0, size=feature_dim)
        n_rel = int(rng.integers(lo, hi + 1))
        relevant = set(rng.choice(docs_per_query, size=n_rel, replace=False).tolist())

        samples = tuple(
            np.round(centroid + 0.5 * rng.gamma(1.0, 1.0, size=feature_dim), _DECIMALS)
            for _ in range(SAMPLE_IMAGES)
        )
        queries.append(MultimodalQuery(qid, " ".join(topic[:QUERY_TERMS]), samples))

        judged = {}
        for j in range(docs_per_query):
            doc_id = f"d{q + 1:03d}-{j + 1:04d}"
            is_rel = j in relevant
            length = int(rng.integers(12, 31))
            words = list(rng.choice(vocab, size=length, p=zipf))
            topic_share = 0.4 if is_rel else 0.05
            for k in np.flatnonzero(rng.random(length) < topic_share):
                words[k] = topic[int(rng.integers(n_topic))]
            noise = rng.gamma(2.0, 1.0, size=feature_dim)
            features = centroid + 0.7 * noise if is_rel else noise
            corpus.append(MultimodalDocument(doc_id, " ".join(words), np.round(features, _DECIMALS)))
            judged[doc_id] = int(is_rel)
        qrels[qid] = judged
    return corpus, queries, qrels
