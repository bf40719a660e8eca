"""Command line interface.

Subcommands: validate, distance, matrix, dualize, build, embed,
pipeline, synth.  JSON goes to stdout; CSV copies of matrices and
coordinates are optional.  Exit codes: 0 success, 1 validation or
domain failure (class mismatch, empty corpus, ...), 2 I/O or format
errors.  Everything is deterministic given the inputs, the --seed
values and the flags; pipeline writes a manifest recording all of it.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._kernels import active_backend
from .core import (
    NetworkFormatError,
    load_network,
    save_network,
    validate_network,
)
from .distances import AUTO, distance_matrix, distance_vector, order_distance, pnorm_distance
from .duality import dualize
from .embedding import mds_embed
from .ingest import (
    CorpusFilter,
    CorpusFormatError,
    PROFILES,
    build_proximity_network,
    filter_records,
    parse_publications,
    save_corpus,
    synth_corpus,
)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _emit(obj) -> None:
    print(_dump(obj))


def _parse_p(text):
    if text.lower() in ("inf", "infinity"):
        return math.inf
    return float(text)


def _write_matrix_csv(path, labels, matrix):
    lines = ["," + ",".join(labels)]
    for label, row in zip(labels, matrix):
        lines.append(label + "," + ",".join(repr(float(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_coords_csv(path, labels, coords):
    lines = ["label,x,y"]
    for label, row in zip(labels, coords):
        lines.append(f"{label},{row[0]!r},{row[1]!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _maybe_write(path, text):
    if path:
        Path(path).write_text(text + "\n", encoding="utf-8")
        return True
    print(text)
    return False


# -- subcommands -------------------------------------------------------------


def cmd_validate(args) -> int:
    files = []
    all_ok = True
    for path in args.networks:
        net = load_network(path, require_complete=False)
        report = validate_network(net, relaxed=args.relaxed)
        all_ok = all_ok and report.ok
        entry = {"path": str(path), "class": net.kind, "epsilon": net.epsilon}
        entry.update(report.to_dict())
        files.append(entry)
    _emit({"ok": all_ok, "files": files})
    return 0 if all_ok else 1


def cmd_distance(args) -> int:
    netx = load_network(args.network_x)
    nety = load_network(args.network_y)
    if args.vector:
        report = distance_vector(netx, nety, solver=args.solver)
    elif args.p is not None:
        report = pnorm_distance(netx, nety, args.p, solver=args.solver)
    else:
        report = order_distance(netx, nety, args.k, solver=args.solver)
    print(report.to_json())
    return 0


def _matrix_labels(paths):
    stems = [Path(p).stem for p in paths]
    if len(set(stems)) < len(stems):
        return [f"{stem}#{i}" for i, stem in enumerate(stems)]
    return stems


def cmd_matrix(args) -> int:
    nets = [load_network(p) for p in args.networks]
    labels = _matrix_labels(args.networks)
    matrix = distance_matrix(nets, k=args.k, p=args.p, solver=args.solver)
    obj = {
        "mode": "pnorm" if args.p is not None else "order",
        "labels": labels,
        "matrix": [[float(v) for v in row] for row in matrix],
    }
    if args.p is not None:
        obj["p"] = "inf" if math.isinf(args.p) else args.p
    else:
        obj["k"] = args.k
    if args.csv:
        _write_matrix_csv(args.csv, labels, matrix)
    _maybe_write(args.out, _dump(obj))
    return 0


def cmd_dualize(args) -> int:
    net = load_network(args.network)
    save_network(dualize(net), args.out)
    return 0


def _build_one(records, args, start, end):
    cfilter = CorpusFilter(start, end, center=args.center, order=args.order)
    mode = args.epsilon_mode
    if mode == "value":
        if args.epsilon_value is None:
            raise ValueError("--epsilon-mode value needs --epsilon-value")
        mode = args.epsilon_value
    net = build_proximity_network(records, cfilter, epsilon_mode=mode)
    used = len(filter_records(records, cfilter))
    return net, used


def _report_parse_issues(result):
    for line_no, reason in result.skipped:
        print(f"skipped line {line_no}: {reason}", file=sys.stderr)
    for line_no, message in result.warnings:
        print(f"line {line_no}: {message}", file=sys.stderr)


def cmd_build(args) -> int:
    result = parse_publications(args.input)
    _report_parse_issues(result)
    net, used = _build_one(result.records, args, args.from_year, args.to_year)
    save_network(net, args.out)
    _emit(
        {
            "out": str(args.out),
            "nodes": list(net.labels),
            "order": net.order,
            "epsilon": net.epsilon,
            "records_used": used,
        }
    )
    return 0


def cmd_embed(args) -> int:
    obj = json.loads(Path(args.input).read_text(encoding="utf-8"))
    if isinstance(obj, dict):
        matrix = obj["matrix"]
        labels = obj.get("labels")
    else:
        matrix, labels = obj, None
    emb = mds_embed(
        np.asarray(matrix, dtype=float), labels=labels, seed=args.seed,
        dims=args.dims,
    )
    if args.csv:
        _write_coords_csv(args.csv, emb.labels, emb.coordinates)
    _maybe_write(args.out, _dump(emb.to_dict()))
    return 0


def cmd_synth(args) -> int:
    years = None
    if args.from_year is not None or args.to_year is not None:
        if args.from_year is None or args.to_year is None:
            raise ValueError("--from-year and --to-year go together")
        years = (args.from_year, args.to_year)
    records = synth_corpus(
        args.profile, seed=args.seed, papers=args.papers, years=years
    )
    save_corpus(records, args.out)
    authors = sorted({a for rec in records for a in rec.authors})
    _emit({"out": str(args.out), "papers": len(records), "authors": authors})
    return 0


def _parse_window(text):
    try:
        start, end = text.split(":")
        return int(start), int(end)
    except ValueError:
        raise ValueError(
            f"window {text!r} is not of the form START:END"
        ) from None


def _sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def cmd_pipeline(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    result = parse_publications(args.input)
    _report_parse_issues(result)

    outputs = []
    nets, labels = [], []
    for window in args.windows:
        start, end = _parse_window(window)
        label = f"{start}-{end}"
        net, _ = _build_one(result.records, args, start, end)
        net_path = out_dir / f"network-{label}.json"
        save_network(net, net_path)
        outputs.append(net_path)
        nets.append(net)
        labels.append(label)

    matrix = distance_matrix(nets, k=args.k, p=args.p, solver=args.solver)
    matrix_obj = {
        "mode": "pnorm" if args.p is not None else "order",
        "labels": labels,
        "matrix": [[float(v) for v in row] for row in matrix],
    }
    if args.p is not None:
        matrix_obj["p"] = "inf" if math.isinf(args.p) else args.p
    else:
        matrix_obj["k"] = args.k
    matrix_path = out_dir / "distances.json"
    matrix_path.write_text(_dump(matrix_obj) + "\n", encoding="utf-8")
    _write_matrix_csv(out_dir / "distances.csv", labels, matrix)
    outputs.extend([matrix_path, out_dir / "distances.csv"])

    emb = mds_embed(matrix, labels=labels, seed=args.seed)
    embed_path = out_dir / "embedding.json"
    embed_path.write_text(_dump(emb.to_dict()) + "\n", encoding="utf-8")
    _write_coords_csv(out_dir / "embedding.csv", emb.labels, emb.coordinates)
    outputs.extend([embed_path, out_dir / "embedding.csv"])

    manifest = {
        "command": "pipeline",
        "version": __version__,
        "backend": active_backend(),
        "seed": args.seed,
        "parameters": {
            "input": str(args.input),
            "windows": list(args.windows),
            "center": args.center,
            "order": args.order,
            "epsilon_mode": args.epsilon_mode,
            "epsilon_value": args.epsilon_value,
            "k": args.k,
            "p": ("inf" if math.isinf(args.p) else args.p)
            if args.p is not None
            else None,
            "solver": args.solver,
        },
        "outputs": {p.name: _sha256(p) for p in outputs},
    }
    (out_dir / "manifest.json").write_text(
        _dump(manifest) + "\n", encoding="utf-8"
    )
    _emit(manifest)
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperdist",
        description=(
            "Exact correspondence-based distances between high order "
            "networks, plus a coauthorship comparison pipeline."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="run class validators on network files")
    p.add_argument("networks", nargs="+")
    p.add_argument(
        "--relaxed",
        action="store_true",
        help="accept epsilon 0 in classed networks",
    )
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("distance", help="distance between two networks")
    p.add_argument("network_x")
    p.add_argument("network_y")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--k", type=int, help="single order k")
    mode.add_argument(
        "--vector", action="store_true", help="all orders, minimized separately"
    )
    mode.add_argument(
        "--p", type=_parse_p, help="p-norm over one correspondence (1..inf)"
    )
    p.add_argument(
        "--solver",
        default=AUTO,
        choices=["auto", "exhaustive", "branch-and-bound", "bnb"],
    )
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("matrix", help="pairwise distance matrix for many networks")
    p.add_argument("networks", nargs="+")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--k", type=int)
    mode.add_argument("--p", type=_parse_p)
    p.add_argument(
        "--solver",
        default=AUTO,
        choices=["auto", "exhaustive", "branch-and-bound", "bnb"],
    )
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.add_argument("--csv", help="also write a CSV copy")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("dualize", help="flip a classed network to its dual")
    p.add_argument("network")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_dualize)

    p = sub.add_parser("build", help="build a proximity network from a corpus")
    p.add_argument("--input", required=True, help="JSON-lines corpus")
    p.add_argument("--from-year", type=int, required=True)
    p.add_argument("--to-year", type=int, required=True)
    p.add_argument("--center", help="keep only records with this author")
    p.add_argument("--order", type=int, default=1)
    p.add_argument(
        "--epsilon-mode", default="ignore", choices=["ignore", "auto", "value"]
    )
    p.add_argument("--epsilon-value", type=float)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("embed", help="embed a distance matrix in the plane")
    p.add_argument("--input", required=True, help="matrix JSON (from 'matrix')")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.add_argument("--csv", help="also write label,x,y CSV")
    p.add_argument("--dims", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--profile", required=True, choices=sorted(PROFILES))
    p.add_argument("--papers", type=int)
    p.add_argument("--from-year", type=int)
    p.add_argument("--to-year", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser(
        "pipeline",
        help="corpus -> windowed networks -> distance matrix -> embedding",
    )
    p.add_argument("--input", required=True)
    p.add_argument(
        "--window",
        dest="windows",
        action="append",
        required=True,
        metavar="START:END",
        help="year window; repeat for several networks",
    )
    p.add_argument("--center")
    p.add_argument("--order", type=int, default=1)
    p.add_argument(
        "--epsilon-mode", default="ignore", choices=["ignore", "auto", "value"]
    )
    p.add_argument("--epsilon-value", type=float)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--k", type=int)
    mode.add_argument("--p", type=_parse_p)
    p.add_argument(
        "--solver",
        default=AUTO,
        choices=["auto", "exhaustive", "branch-and-bound", "bnb"],
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "command", None) == "pipeline" and args.k is None and args.p is None:
        args.k = 1
    try:
        return args.func(args)
    except (NetworkFormatError, CorpusFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
