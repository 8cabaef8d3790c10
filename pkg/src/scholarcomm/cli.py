"""Command-line entry point.

Subcommands mirror the library modules one-to-one::

    scholarcomm ingest     --records R [--manifest M] [--triples OUT]
    scholarcomm similarity --records R --manifest M --method simr --percentile 95 --out sc.tsv
    scholarcomm partition  --in sc.tsv --method semantic|kway [--k K] [--merge-floor F] --out partition.tsv
    scholarcomm evaluate   --in sc.tsv --partition partition.tsv --out report.csv
    scholarcomm predict    --records R --in sc.tsv --partition partition.tsv --out predictions.tsv
    scholarcomm holdout    --records R --manifest M --cutoff 2016 --k 10
    scholarcomm sweep      --records R --manifest M --out-dir DIR

Every subcommand also takes ``--config FILE`` (JSON object whose keys are
option names); options given on the command line win over the file.

Exit codes: 0 success, 2 bad configuration, 3 ingest failure, 4 pipeline failure.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .errors import ConflictingRecord, FatalEncoding, ScholarlyError
from .graph import EntityKind, derive_co_author_network, write_triples
from .ingest import DatasetManifest, build_graph, load_manifest, read_records
from .metrics import evaluate, write_report_csv
from .partition import Partition, PartitionerParams, read_partition, run_partitioner, write_partition
from .pipeline import (
    DEFAULT_METHODS,
    DEFAULT_PERCENTILES,
    SimilarityConfig,
    SweepConfig,
    holdout,
    similarity,
    sweep,
    write_sweep,
)
from .predict import generate_patterns, write_predictions
from .relatedness import RelatednessSet, percentile_threshold, read_scores, write_sc

log = logging.getLogger("scholarcomm")

EXIT_OK, EXIT_CONFIG, EXIT_INGEST, EXIT_PIPELINE = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@contextlib.contextmanager
def stage(name: str, code: int = EXIT_PIPELINE):
    try:
        yield
    except CliError:
        raise
    except (ScholarlyError, ValueError, KeyError) as exc:
        raise CliError(code, f"{name} failed: {exc}") from exc


def _existing(path: str | None, what: str) -> Path:
    if not path:
        raise CliError(EXIT_CONFIG, f"missing required option for {what}")
    p = Path(path)
    if not p.is_file():
        raise CliError(EXIT_CONFIG, f"{what} not found: {path}")
    return p


def _load_inputs(args, need_manifest: bool = False):
    records_path = _existing(args.records, "--records")
    manifest = None
    if getattr(args, "manifest", None) or need_manifest:
        manifest_path = _existing(getattr(args, "manifest", None), "--manifest")
        with stage("manifest", EXIT_INGEST):
            try:
                manifest = load_manifest(manifest_path)
            except json.JSONDecodeError as exc:
                raise CliError(EXIT_INGEST, f"manifest {manifest_path} is not valid JSON: {exc}") from exc
    with stage("ingest", EXIT_INGEST):
        records, diagnostics = read_records(records_path)
    for d in diagnostics:
        log.warning("%s: %s", records_path, d)
    return records, diagnostics, manifest


def _build(records, manifest):
    with stage("ingest", EXIT_INGEST):
        return build_graph(records, manifest)


def _percentiles(values) -> list[int]:
    out = [int(v) for v in values]
    for p in out:
        if not 1 <= p <= 99:
            raise CliError(EXIT_CONFIG, f"percentile {p} outside [1, 99]")
    return out


def _read_sc_file(path: str, kind: str, universe=()) -> RelatednessSet:
    src = _existing(path, "--in")
    with stage("read relatedness"):
        triples = read_scores(src)
        sc = RelatednessSet.from_triples(kind, triples, universe)
    if sc.scores:
        # a thresholded file keeps exactly the scores >= cutoff, so its minimum is the cutoff
        sc = sc.restrict(sc.scores, cutoff=min(sc.scores.values()))
    return sc


def _write(text: str, out: str | None, append: bool = False) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a" if append else "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# -- subcommands ---------------------------------------------------------------


def cmd_ingest(args) -> int:
    records, diagnostics, manifest = _load_inputs(args)
    if diagnostics and args.strict:
        raise CliError(EXIT_INGEST, f"{len(diagnostics)} invalid record line(s) in {args.records}")
    graph = _build(records, manifest)
    print(f"records={len(records)} diagnostics={len(diagnostics)} "
          f"researchers={graph.count(EntityKind.RESEARCHER)} "
          f"publications={graph.count(EntityKind.PUBLICATION)} "
          f"venues={graph.count(EntityKind.VENUE)} edges={graph.n_edges}")
    if args.triples:
        _write(write_triples(graph), args.triples)
    return EXIT_OK


def cmd_similarity(args) -> int:
    if args.method == "external" and not args.scores:
        raise CliError(EXIT_CONFIG, "--method external needs --scores")
    records, _, manifest = _load_inputs(args, need_manifest=args.method == "simr")
    graph = _build(records, manifest)
    config = SimilarityConfig(args.method, args.kind, args.max_len, args.scores)
    with stage("similarity"):
        sc = similarity(graph, manifest, config)
        if args.percentile is not None:
            sc = percentile_threshold(sc, _percentiles([args.percentile])[0])
    _write(write_sc(sc), args.out)
    return EXIT_OK


def cmd_partition(args) -> int:
    universe = ()
    if args.records:
        records, _, manifest = _load_inputs(args)
        universe = _build(records, manifest).entities(args.kind)
    sc = _read_sc_file(args.input, args.kind, universe)
    if args.method == "kway" and args.k is None:
        raise CliError(EXIT_CONFIG, "--method kway needs --k (no default: the number of communities "
                                    "changes every metric)")
    params = PartitionerParams(args.method, args.k, args.merge_floor, args.seed,
                               args.balance_tolerance, args.max_refine_iters)
    with stage("partition"):
        partition = run_partitioner(sc, params)
    _write(write_partition(partition), args.out)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    partition_path = _existing(args.partition, "--partition")
    with stage("read partition"):
        partition = read_partition(partition_path)
    sc = _read_sc_file(args.input, args.kind, partition.universe)
    with stage("evaluate"):
        report = evaluate(sc, partition, method=args.label or "", percentile=args.percentile,
                          conductance_aggregate=args.conductance)
    fresh = args.out in (None, "-") or not Path(args.out).exists()
    _write(write_report_csv([report], header=fresh), args.out, append=not fresh)
    return EXIT_OK


def cmd_predict(args) -> int:
    records, _, manifest = _load_inputs(args)
    graph = _build(records, manifest)
    observed = derive_co_author_network(graph)
    partition_path = _existing(args.partition, "--partition")
    with stage("read partition"):
        partition = read_partition(partition_path)
    sc = _read_sc_file(args.input, EntityKind.RESEARCHER, graph.entities(EntityKind.RESEARCHER))
    with stage("predict"):
        universe = graph.entities(EntityKind.RESEARCHER)
        full = Partition.from_groups([c.members for c in partition], universe | partition.universe)
        network = generate_patterns(full, sc, observed, args.aggregator, args.min_weight, args.pair_local)
    _write(write_predictions(network), args.out)
    return EXIT_OK


def cmd_holdout(args) -> int:
    records, _, manifest = _load_inputs(args, need_manifest=args.similarity == "simr")
    if args.cutoff is None:
        raise CliError(EXIT_CONFIG, "holdout needs --cutoff")
    config = SimilarityConfig(args.similarity, None, args.max_len, args.scores)
    with stage("holdout"):
        report, _ = holdout(records, manifest, args.cutoff, args.k, percentile=args.percentile,
                            method=args.method, similarity_config=config, partition_k=args.partition_k,
                            merge_floor=args.merge_floor, aggregator=args.aggregator)
    _write(report.to_csv(), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if not args.out_dir:
        raise CliError(EXIT_CONFIG, "sweep needs --out-dir")
    records, _, manifest = _load_inputs(args, need_manifest=args.similarity == "simr")
    for m in args.methods:
        if m not in DEFAULT_METHODS:
            raise CliError(EXIT_CONFIG, f"unknown partition method {m!r}")
    config = SweepConfig(
        methods=tuple(args.methods),
        percentiles=tuple(_percentiles(args.percentiles)),
        similarity=SimilarityConfig(args.similarity, args.kind, args.max_len, args.scores),
        k=args.k,
        merge_floor=args.merge_floor,
        aggregator=args.aggregator,
        min_weight=args.min_weight,
        cutoff_year=args.cutoff_year,
        holdout_k=args.holdout_k,
    )
    with stage("sweep"):
        results = sweep(records, manifest, config)
    with stage("write outputs"):
        paths = write_sweep(results, args.out_dir)
    log.info("wrote %d files under %s", len(paths), args.out_dir)
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with option defaults")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="scholarcomm", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    parser.subcommands = {}

    def add(name, func, help):
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=func)
        parser.subcommands[name] = p
        return p

    def records(p, manifest=True):
        p.add_argument("--records", help="newline-delimited JSON publication records")
        if manifest:
            p.add_argument("--manifest", help="dataset manifest (JSON)")

    kinds = [k.value.lower() for k in EntityKind]

    p = add("ingest", cmd_ingest, "parse records and report graph statistics")
    records(p)
    p.add_argument("--triples", help="write the sorted triple export here")
    p.add_argument("--strict", action="store_true", help="fail on any invalid record line")

    p = add("similarity", cmd_similarity, "compute scored same-type pairs")
    records(p)
    p.add_argument("--method", choices=["simr", "simc", "path", "external"], default="simr")
    p.add_argument("--kind", choices=kinds, default=None)
    p.add_argument("--max-len", type=int, default=2, choices=[2, 4])
    p.add_argument("--scores", help="external score file (left<TAB>right<TAB>score)")
    p.add_argument("--percentile", type=int, default=None)
    p.add_argument("--out", default=None)

    p = add("partition", cmd_partition, "group entities into communities")
    p.add_argument("--in", dest="input", help="relatedness file (sc.tsv)")
    p.add_argument("--method", choices=["semantic", "kway"], default="semantic")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--merge-floor", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--balance-tolerance", type=float, default=0.1)
    p.add_argument("--max-refine-iters", type=int, default=20)
    p.add_argument("--kind", choices=kinds, default="researcher")
    records(p)
    p.add_argument("--out", default=None)

    p = add("evaluate", cmd_evaluate, "partition quality metrics as a CSV row")
    p.add_argument("--in", dest="input", help="relatedness file (sc.tsv)")
    p.add_argument("--partition", help="partition file (partition.tsv)")
    p.add_argument("--label", help="method label for the report row")
    p.add_argument("--percentile", type=int, default=None)
    p.add_argument("--conductance", choices=["mean", "max"], default="mean")
    p.add_argument("--kind", choices=kinds, default="researcher")
    p.add_argument("--out", default=None, help="CSV file; rows are appended when it exists")

    p = add("predict", cmd_predict, "predict co-author relations inside communities")
    records(p)
    p.add_argument("--in", dest="input", help="relatedness file (sc.tsv)")
    p.add_argument("--partition", help="partition file (partition.tsv)")
    p.add_argument("--aggregator", choices=["avg", "min", "product"], default="avg")
    p.add_argument("--min-weight", type=float, default=0.0)
    p.add_argument("--pair-local", action="store_true")
    p.add_argument("--out", default=None)

    p = add("holdout", cmd_holdout, "temporal holdout evaluation")
    records(p)
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--percentile", type=int, default=95)
    p.add_argument("--method", choices=["semantic", "kway"], default="semantic")
    p.add_argument("--partition-k", type=int, default=None)
    p.add_argument("--merge-floor", type=float, default=None)
    p.add_argument("--similarity", choices=["simr", "path", "external"], default="path")
    p.add_argument("--max-len", type=int, default=4, choices=[2, 4])
    p.add_argument("--scores", default=None)
    p.add_argument("--aggregator", choices=["avg", "min", "product"], default="avg")
    p.add_argument("--out", default=None)

    p = add("sweep", cmd_sweep, "all methods x percentiles, end to end")
    records(p)
    p.add_argument("--out-dir", default=None)
    p.add_argument("--methods", nargs="+", default=list(DEFAULT_METHODS))
    p.add_argument("--percentiles", nargs="+", type=int, default=list(DEFAULT_PERCENTILES))
    p.add_argument("--similarity", choices=["simr", "simc", "path", "external"], default="simr")
    p.add_argument("--kind", choices=kinds, default=None)
    p.add_argument("--max-len", type=int, default=2, choices=[2, 4])
    p.add_argument("--scores", default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--merge-floor", type=float, default=None)
    p.add_argument("--aggregator", choices=["avg", "min", "product"], default="avg")
    p.add_argument("--min-weight", type=float, default=0.0)
    p.add_argument("--cutoff-year", type=int, default=None)
    p.add_argument("--holdout-k", type=int, default=10)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not args.config:
        return args
    path = Path(args.config)
    if not path.is_file():
        raise CliError(EXIT_CONFIG, f"config file not found: {args.config}")
    try:
        values = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_CONFIG, f"config file {args.config} is not valid JSON: {exc}") from exc
    if not isinstance(values, dict):
        raise CliError(EXIT_CONFIG, f"config file {args.config} must hold a JSON object")
    subparser = parser.subcommands[args.command]
    known = {a.dest for a in subparser._actions}
    defaults = {}
    for key, value in values.items():
        dest = {"in": "input"}.get(key, key.replace("-", "_"))
        if dest not in known or dest in ("config", "func", "help"):
            raise CliError(EXIT_CONFIG, f"unknown option {key!r} in {args.config} for {args.command}")
        defaults[dest] = value
    subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return args.func(args)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    except CliError as exc:
        print(f"scholarcomm: error: {exc}", file=sys.stderr)
        return exc.code
    except (FatalEncoding, ConflictingRecord) as exc:
        print(f"scholarcomm: error: ingest failed: {exc}", file=sys.stderr)
        return EXIT_INGEST
    except OSError as exc:
        print(f"scholarcomm: error: {exc}", file=sys.stderr)
        return EXIT_PIPELINE


if __name__ == "__main__":
    sys.exit(main())
