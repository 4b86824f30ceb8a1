"""Batch command line: ``bellfusion {score,pair-chsh,experiment,quantum-demo,synth}``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal invariant failure.
Single results go to stdout as JSON, bulk results to files, summaries to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import formats
from .chsh import DEFAULT_VIOLATION_TOLERANCE, chsh_from_document_pair, maximize_quantum_chsh, quantum_chsh
from .composite import BellStateKind, bell_state, is_entangled, schmidt_decompose, tensor_product
from .errors import DomainError, InvariantError
from .experiment import (
    DEFAULT_SEED,
    DEFAULT_TARGET_SIZE,
    PAIR_SCOPES,
    ExperimentConfig,
    build_subset,
    relevant_ids_for,
    run_experiment,
)
from .hilbert import DocumentState
from .retrieval import IMAGE_AGGREGATIONS, build_tfidf_index, score_corpus
from .synthetic import generate_synthetic_dataset

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3
CANONICAL_ANGLES = (0.0, math.pi / 4, math.pi / 8, 3 * math.pi / 8)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_data_args(p, qrels_required=False):
    p.add_argument("--corpus", required=True, help="corpus JSON-lines file")
    p.add_argument("--queries", required=True, help="queries JSON-lines file")
    p.add_argument("--qrels", required=qrels_required, help="qrels TSV file")


def _add_config_args(p):
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--target-subset-size", type=int, default=DEFAULT_TARGET_SIZE)
    p.add_argument("--violation-tolerance", type=float, default=DEFAULT_VIOLATION_TOLERANCE)
    p.add_argument("--image-aggregation", choices=IMAGE_AGGREGATIONS, default="mean")
    p.add_argument("--pair-scope", choices=PAIR_SCOPES, default="relevant_only")
    p.add_argument("--expansion-terms", type=int, default=10)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bellfusion", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("score", help="write per-query relevance scores")
    _add_data_args(p)
    _add_config_args(p)
    p.add_argument("--output", required=True, help="directory for <query_id>.jsonl score files")

    p = sub.add_parser("pair-chsh", help="CHSH statistic for one document pair")
    _add_data_args(p, qrels_required=True)
    _add_config_args(p)
    p.add_argument("--query-id", required=True)
    p.add_argument("--doc1", required=True)
    p.add_argument("--doc2", required=True)

    p = sub.add_parser("experiment", help="run the full pair experiment")
    _add_data_args(p)
    _add_config_args(p)
    p.add_argument("--output", required=True, help="report JSON path")
    p.add_argument("--csv", help="optional per-query CSV path")

    p = sub.add_parser("quantum-demo", help="quantum CHSH value on a Bell or product state")
    p.add_argument("--angles", type=float, nargs=4, metavar=("A", "A_PRIME", "B", "B_PRIME"),
                   default=list(CANONICAL_ANGLES))
    p.add_argument("--state", choices=("phi_plus", "psi_plus", "product"), default="phi_plus")
    p.add_argument("--weights", type=float, nargs=2, metavar=("W", "W_PRIME"))
    p.add_argument("--violation-tolerance", type=float, default=DEFAULT_VIOLATION_TOLERANCE)
    p.add_argument("--maximize", action="store_true", help="also search the pi/720 angle grid")

    p = sub.add_parser("synth", help="write a synthetic corpus, queries and qrels")
    p.add_argument("--output-dir", required=True)
    p.add_argument("--n-queries", type=int, default=30)
    p.add_argument("--docs-per-query", type=int, default=300)
    p.add_argument("--relevant-min", type=int, default=11)
    p.add_argument("--relevant-max", type=int, default=98)
    p.add_argument("--vocab-size", type=int, default=2000)
    p.add_argument("--feature-dim", type=int, default=128)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return parser


def _config(args) -> ExperimentConfig:
    return ExperimentConfig(
        seed=args.seed,
        target_subset_size=args.target_subset_size,
        violation_tolerance=args.violation_tolerance,
        image_aggregation=args.image_aggregation,
        pair_scope=args.pair_scope,
        expansion_terms=args.expansion_terms,
    )


def _load(args):
    corpus = formats.load_corpus(args.corpus)
    dim = corpus[0].image_features.size if corpus else None
    queries = formats.load_queries(args.queries, feature_dim=dim)
    qrels = formats.load_qrels(args.qrels) if args.qrels else None
    return corpus, queries, qrels


def cmd_score(args) -> int:
    config = _config(args)
    corpus, queries, qrels = _load(args)
    if not corpus:
        raise DomainError(f"{args.corpus}: corpus is empty")
    by_id = {d.doc_id: d for d in corpus}
    index = build_tfidf_index(corpus)
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    for query in sorted(queries, key=lambda q: q.query_id):
        if qrels is None:
            docs, relevant = corpus, []
        else:
            subset = build_subset(query.query_id, qrels, list(by_id), config.target_subset_size, config.seed)
            docs = [by_id[d] for d in subset.doc_ids]
            relevant = [by_id[d] for d in sorted(subset.relevant_ids)]
        scored = score_corpus(query, docs, relevant, index, config.expansion_terms, config.image_aggregation)
        lines = "".join(json.dumps({"query_id": query.query_id, **s.to_dict()}) + "\n" for s in scored)
        formats.atomic_write_text(out_dir / f"{query.query_id}.jsonl", lines)
    print(f"scored {len(queries)} queries into {out_dir}", file=sys.stderr)
    return EXIT_OK


def cmd_pair_chsh(args) -> int:
    config = _config(args)
    if args.doc1 == args.doc2:
        raise DomainError(f"a pair needs two distinct documents, got {args.doc1!r} twice")
    corpus, queries, qrels = _load(args)
    by_id = {d.doc_id: d for d in corpus}
    query = next((q for q in queries if q.query_id == args.query_id), None)
    if query is None:
        raise DomainError(f"unknown query id {args.query_id!r}")
    for doc_id in (args.doc1, args.doc2):
        if doc_id not in by_id:
            raise DomainError(f"unknown document id {doc_id!r}")
    id1, id2 = sorted((args.doc1, args.doc2))
    relevant = [by_id[d] for d in sorted(relevant_ids_for(query.query_id, qrels, by_id))]
    index = build_tfidf_index(corpus)
    s1, s2 = score_corpus(
        query, [by_id[id1], by_id[id2]], relevant, index, config.expansion_terms, config.image_aggregation
    )
    result = chsh_from_document_pair(s1, s2, config.violation_tolerance)
    payload = {
        "query_id": query.query_id,
        "doc_id_1": id1,
        "doc_id_2": id2,
        "scores": [s1.to_dict(), s2.to_dict()],
        **result.to_dict(),
    }
    print(json.dumps(payload, indent=2))
    return EXIT_OK


def cmd_experiment(args) -> int:
    if not args.qrels:
        raise UsageError("experiment requires --qrels (tab-separated query_id, doc_id, rel)")
    config = _config(args)
    corpus, queries, qrels = _load(args)
    report = run_experiment(queries, corpus, qrels, config)
    formats.atomic_write_text(args.output, report.to_json())
    if args.csv:
        formats.atomic_write_text(args.csv, report.to_csv())
    total = sum(r.pair_count for r in report.per_query.values())
    bad = sum(r.violating_pairs for r in report.per_query.values())
    print(
        f"{len(report.per_query)} queries, {total} pairs, {bad} violating; "
        f"queries with violation: {report.queries_with_violation_pct:.1f}%",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_quantum_demo(args) -> int:
    weights = tuple(args.weights) if args.weights else None
    if args.state == "product":
        w = weights or (1.0, 0.0)
        norm = math.hypot(*w)
        if norm == 0.0:
            raise DomainError("product state weights cannot both be zero")
        factor = DocumentState(w[0] / norm, w[1] / norm)
        state = tensor_product(factor, factor)
    else:
        state = bell_state(BellStateKind(args.state), weights)
    a, a_p, b, b_p = args.angles
    result = quantum_chsh(state, a, a_p, b, b_p, tol=args.violation_tolerance)
    payload = {
        "state": args.state,
        "coeffs": list(state.coeffs),
        "schmidt_number": schmidt_decompose(state).schmidt_number,
        "entangled": is_entangled(state),
        "angles": {"a": a, "a_prime": a_p, "b": b, "b_prime": b_p},
        **result.to_dict(),
    }
    if args.maximize:
        best = maximize_quantum_chsh(state)
        payload["grid_maximum"] = {
            "s_value": best.s_value,
            "angles": {"a": best.a, "a_prime": best.a_prime, "b": best.b, "b_prime": best.b_prime},
        }
    print(json.dumps(payload, indent=2))
    return EXIT_OK


def cmd_synth(args) -> int:
    corpus, queries, qrels = generate_synthetic_dataset(
        args.n_queries,
        args.docs_per_query,
        (args.relevant_min, args.relevant_max),
        args.vocab_size,
        args.feature_dim,
        args.seed,
    )
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    formats.write_corpus(out / "corpus.jsonl", corpus)
    formats.write_queries(out / "queries.jsonl", queries)
    formats.write_qrels(out / "qrels.tsv", qrels)
    print(f"wrote {len(corpus)} documents and {len(queries)} queries to {out}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "score": cmd_score,
    "pair-chsh": cmd_pair_chsh,
    "experiment": cmd_experiment,
    "quantum-demo": cmd_quantum_demo,
    "synth": cmd_synth,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"bellfusion {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantError as exc:
        print(f"bellfusion: internal invariant failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (DomainError, OSError) as exc:
        print(f"bellfusion {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
