"""Readers and writers for the corpus, query and qrels file formats.

* corpus: JSON lines ``{"doc_id", "text", "image_features": [float, ...]}``
* queries: JSON lines ``{"query_id", "text", "sample_image_features": [[float, ...], ...]}``
* qrels: tab-separated ``query_id<TAB>doc_id<TAB>rel`` with ``rel`` in {0, 1}

Files are UTF-8; blank lines are skipped.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .errors import DataFormatError
from .retrieval import MultimodalDocument, MultimodalQuery

Qrels = dict[str, dict[str, int]]


def _json_lines(path) -> Iterator[tuple[int, dict]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"invalid JSON: {exc.msg}", path, lineno) from None
            if not isinstance(record, dict):
                raise DataFormatError("record must be a JSON object", path, lineno)
            yield lineno, record


def _string_field(record, key, path, lineno) -> str:
    value = record.get(key)
    if not isinstance(value, str) or (key.endswith("_id") and not value):
        raise DataFormatError(f"field {key!r} must be a {'nonempty ' if key.endswith('_id') else ''}string", path, lineno)
    return value


def _vector(values, what, path, lineno) -> np.ndarray:
    if not isinstance(values, list) or not values:
        raise DataFormatError(f"{what} must be a nonempty list of numbers", path, lineno)
    if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in values):
        raise DataFormatError(f"{what} must contain only numbers", path, lineno)
    arr = np.array(values, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DataFormatError(f"{what} contains non-finite values", path, lineno)
    return arr


def load_corpus(path) -> list[MultimodalDocument]:
    docs: list[MultimodalDocument] = []
    seen: set[str] = set()
    dim = None
    for lineno, rec in _json_lines(path):
        doc_id = _string_field(rec, "doc_id", path, lineno)
        text = _string_field(rec, "text", path, lineno)
        if doc_id in seen:
            raise DataFormatError(f"duplicate doc_id {doc_id!r}", path, lineno)
        features = _vector(rec.get("image_features"), f"image_features of {doc_id!r}", path, lineno)
        if dim is None:
            dim = features.size
        elif features.size != dim:
            raise DataFormatError(
                f"document {doc_id!r} has feature dimension {features.size}, expected {dim}", path, lineno
            )
        seen.add(doc_id)
        docs.append(MultimodalDocument(doc_id, text, features))
    return docs


def load_queries(path, feature_dim: int | None = None) -> list[MultimodalQuery]:
    queries: list[MultimodalQuery] = []
    seen: set[str] = set()
    for lineno, rec in _json_lines(path):
        query_id = _string_field(rec, "query_id", path, lineno)
        text = _string_field(rec, "text", path, lineno)
        if query_id in seen:
            raise DataFormatError(f"duplicate query_id {query_id!r}", path, lineno)
        samples = rec.get("sample_image_features")
        if not isinstance(samples, list) or not 1 <= len(samples) <= 3:
            raise DataFormatError(
                f"query {query_id!r}: sample_image_features must hold 1 to 3 vectors", path, lineno
            )
        vectors = tuple(
            _vector(v, f"sample image {i} of query {query_id!r}", path, lineno) for i, v in enumerate(samples)
        )
        for i, v in enumerate(vectors):
            expected = feature_dim if feature_dim is not None else vectors[0].size
            if v.size != expected:
                raise DataFormatError(
                    f"query {query_id!r}: sample image {i} has dimension {v.size}, expected {expected}",
                    path,
                    lineno,
                )
        seen.add(query_id)
        queries.append(MultimodalQuery(query_id, text, vectors))
    return queries


def load_qrels(path) -> Qrels:
    qrels: Qrels = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise DataFormatError("expected 'query_id<TAB>doc_id<TAB>rel'", path, lineno)
            qid, did, rel = parts
            if not qid or not did:
                raise DataFormatError("query_id and doc_id must be nonempty", path, lineno)
            if rel not in ("0", "1"):
                raise DataFormatError(f"rel must be 0 or 1, got {rel!r}", path, lineno)
            qrels.setdefault(qid, {})[did] = int(rel)
    return qrels


def _fmt_vector(v) -> list[float]:
    return [float(x) for x in v]


def write_corpus(path, docs: Iterable[MultimodalDocument]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for d in docs:
            rec = {"doc_id": d.doc_id, "text": d.text, "image_features": _fmt_vector(d.image_features)}
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def write_queries(path, queries: Iterable[MultimodalQuery]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for q in queries:
            rec = {
                "query_id": q.query_id,
                "text": q.text,
                "sample_image_features": [_fmt_vector(v) for v in q.sample_image_features],
            }
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def write_qrels(path, qrels: Qrels) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for qid in sorted(qrels):
            for did in sorted(qrels[qid]):
                fh.write(f"{qid}\t{did}\t{qrels[qid][did]}\n")


def atomic_write_text(path, text: str) -> None:
    """Write ``text`` to ``path`` via a sibling temp file so readers never see a partial file."""
    path = Path(path)
    tmp = path.with_name(f".{path.name}.tmp-{os.getpid()}")
    try:
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    finally:
        if tmp.exists():
            tmp.unlink()
