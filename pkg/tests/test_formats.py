import json

import numpy as np
import pytest

from bellfusion import formats
from bellfusion.errors import DataFormatError
from bellfusion.retrieval import MultimodalDocument, MultimodalQuery


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_round_trip(tmp_path):
    docs = [MultimodalDocument("d1", "Plane ✈ at dusk", np.array([0.1, 2.0])),
            MultimodalDocument("d2", "", np.array([1e-300, 3.0]))]
    queries = [MultimodalQuery("q1", "plane", (np.array([1.0, 0.0]), np.array([0.5, 0.5])))]
    qrels = {"q1": {"d1": 1, "d2": 0}}
    formats.write_corpus(tmp_path / "c.jsonl", docs)
    formats.write_queries(tmp_path / "q.jsonl", queries)
    formats.write_qrels(tmp_path / "r.tsv", qrels)
    back = formats.load_corpus(tmp_path / "c.jsonl")
    assert [d.doc_id for d in back] == ["d1", "d2"] and back[0].text == "Plane ✈ at dusk"
    assert np.array_equal(back[1].image_features, docs[1].image_features)
    qb = formats.load_queries(tmp_path / "q.jsonl")
    assert len(qb[0].sample_image_features) == 2
    assert formats.load_qrels(tmp_path / "r.tsv") == qrels


def test_inconsistent_dimension_names_doc(tmp_path):
    p = write(tmp_path, "c.jsonl",
              json.dumps({"doc_id": "a", "text": "x", "image_features": [1, 2]}) + "\n"
              + json.dumps({"doc_id": "oddball", "text": "y", "image_features": [1, 2, 3]}) + "\n")
    with pytest.raises(DataFormatError, match="oddball") as exc:
        formats.load_corpus(p)
    assert exc.value.line == 2


@pytest.mark.parametrize("line, message", [
    ("{not json", "invalid JSON"),
    ("[1, 2]", "JSON object"),
    ('{"doc_id": "", "text": "x", "image_features": [1]}', "doc_id"),
    ('{"doc_id": "a", "image_features": [1]}', "text"),
    ('{"doc_id": "a", "text": "x", "image_features": []}', "nonempty"),
    ('{"doc_id": "a", "text": "x", "image_features": [1, "2"]}', "only numbers"),
    ('{"doc_id": "a", "text": "x", "image_features": [NaN]}', "non-finite"),
])
def test_corpus_errors(tmp_path, line, message):
    with pytest.raises(DataFormatError, match=message):
        formats.load_corpus(write(tmp_path, "c.jsonl", line + "\n"))


def test_duplicate_doc(tmp_path):
    rec = json.dumps({"doc_id": "a", "text": "x", "image_features": [1]})
    with pytest.raises(DataFormatError, match="duplicate"):
        formats.load_corpus(write(tmp_path, "c.jsonl", rec + "\n\n" + rec + "\n"))


def test_query_errors(tmp_path):
    four = json.dumps({"query_id": "q", "text": "t", "sample_image_features": [[1]] * 4})
    with pytest.raises(DataFormatError, match="1 to 3"):
        formats.load_queries(write(tmp_path, "q.jsonl", four))
    mixed = json.dumps({"query_id": "q", "text": "t", "sample_image_features": [[1, 2], [1]]})
    with pytest.raises(DataFormatError, match="dimension"):
        formats.load_queries(write(tmp_path, "q2.jsonl", mixed))
    ok = json.dumps({"query_id": "q", "text": "t", "sample_image_features": [[1, 2]]})
    with pytest.raises(DataFormatError, match="expected 3"):
        formats.load_queries(write(tmp_path, "q3.jsonl", ok), feature_dim=3)


@pytest.mark.parametrize("text, message", [
    ("q1\td1\n", "TAB"),
    ("q1\td1\t2\n", "0 or 1"),
    ("\td1\t1\n", "nonempty"),
])
def test_qrels_errors(tmp_path, text, message):
    with pytest.raises(DataFormatError, match=message):
        formats.load_qrels(write(tmp_path, "r.tsv", text))


def test_atomic_write_leaves_no_temp(tmp_path):
    target = tmp_path / "out.json"
    formats.atomic_write_text(target, "hello\n")
    assert target.read_text() == "hello\n"
    assert [p.name for p in tmp_path.iterdir()] == ["out.json"]
