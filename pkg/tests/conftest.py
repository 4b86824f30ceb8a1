import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def six_paths():
    return {
        "corpus": FIXTURES / "six_corpus.jsonl",
        "queries": FIXTURES / "six_queries.jsonl",
        "qrels": FIXTURES / "six_qrels.tsv",
    }


@pytest.fixture(scope="session")
def desk_dataset(tmp_path_factory):
    """Small synthetic dataset written to disk once per session."""
    from bellfusion import formats
    from bellfusion.synthetic import generate_synthetic_dataset

    corpus, queries, qrels = generate_synthetic_dataset(10, 50, (5, 10), 120, 16, seed=11)
    out = tmp_path_factory.mktemp("desk")
    formats.write_corpus(out / "corpus.jsonl", corpus)
    formats.write_queries(out / "queries.jsonl", queries)
    formats.write_qrels(out / "qrels.tsv", qrels)
    return {"dir": out, "corpus": out / "corpus.jsonl", "queries": out / "queries.jsonl",
            "qrels": out / "qrels.tsv", "data": (corpus, queries, qrels)}


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
