"""Command-line front end: check, maximal, gen, oracle-check."""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time

from . import __version__
from .augment import is_graphic, maximal_graphic_rows
from .binmatrix import FORMATS, ParseError, SparseBinaryMatrix, parse_matrix
from .oracle import (
    OracleScaleError,
    oracle_is_graphic,
    random_graphic_instance,
    verify_realization,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2


def _read_matrix(path: str, fmt: str) -> SparseBinaryMatrix:
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    return parse_matrix(text, fmt)


def _seed(args) -> int:
    env = os.environ.get("GRAPHREC_SEED")
    if env is not None:
        return int(env)
    return args.seed


def _cert_entries(cert) -> list[dict]:
    return [
        {"u": str(u), "w": str(w), "origin": f"{o[0]}{o[1] + 1}", "tree": flag}
        for (u, w, o), flag in zip(cert.edges, cert.tree_flags)
    ]


def _row_trace(m: SparseBinaryMatrix, trace) -> list[dict]:
    return [
        {"index": t.index, "label": m.row_labels[t.index], "accepted": t.accepted, "ops": t.ops}
        for t in trace
    ]


def _emit(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=True))
        return
    print(f"verdict: {report.get('verdict', report.get('command'))}")
    for row in report.get("rows", []):
        status = "accepted" if row["accepted"] else "REJECTED"
        print(f"  row {row['label']}: {status}")
    if report.get("kept") is not None:
        print(f"kept rows: {' '.join(report['kept']) or '(none)'}")
        print(f"skipped rows: {' '.join(report['skipped']) or '(none)'}")
    stats = report.get("stats")
    if stats:
        print(f"forest: {stats}")
    cert = report.get("certificate")
    if cert:
        print("certificate (u -- w, origin, tree?):")
        for e in cert:
            marker = "T" if e["tree"] else " "
            print(f"  {e['u']} -- {e['w']}  {e['origin']} {marker}")


def cmd_check(args) -> int:
    try:
        m = _read_matrix(args.path, args.format)
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    started = time.perf_counter()
    result = is_graphic(m)
    report = {
        "command": "check",
        "verdict": "graphic" if result.graphic else "non-graphic",
        "rows": _row_trace(m, result.trace),
        "stats": result.forest.stats(),
        "timings": {"total_s": round(time.perf_counter() - started, 6)},
        "certificate": None,
    }
    if result.graphic and args.certificate:
        report["certificate"] = _cert_entries(result.certificate)
    if args.dump_spqr:
        payload = (
            result.forest.to_dot()
            if args.dump_spqr.endswith(".dot")
            else result.forest.to_json()
        )
        with open(args.dump_spqr, "w", encoding="utf-8") as handle:
            handle.write(payload)
    _emit(report, args.json)
    return EXIT_OK if result.graphic else EXIT_NEGATIVE


def cmd_maximal(args) -> int:
    try:
        m = _read_matrix(args.path, args.format)
    except (ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    started = time.perf_counter()
    result = maximal_graphic_rows(m)
    kept = set(result.kept)
    skipped = [i for i in range(m.num_rows) if i not in kept]
    report = {
        "command": "maximal",
        "kept": [m.row_labels[i] for i in result.kept],
        "skipped": [m.row_labels[i] for i in skipped],
        "rows": _row_trace(m, result.trace),
        "stats": result.forest.stats(),
        "timings": {"total_s": round(time.perf_counter() - started, 6)},
        "certificate": _cert_entries(result.certificate) if args.certificate else None,
    }
    if args.verify:
        try:
            sub = m.submatrix_rows(result.kept)
            if not oracle_is_graphic(sub).graphic:
                print("error: kept submatrix fails the oracle", file=sys.stderr)
                return EXIT_INPUT
            for r in skipped:
                widened = m.submatrix_rows(sorted(kept | {r}))
                if oracle_is_graphic(widened).graphic:
                    print(f"error: skipped row {r} could have been kept", file=sys.stderr)
                    return EXIT_INPUT
            report["verified_maximal"] = True
        except OracleScaleError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
    _emit(report, args.json)
    return EXIT_OK


def cmd_gen(args) -> int:
    seed = _seed(args)
    if args.edges < args.vertices - 1 or args.vertices < 1:
        print("error: need edges >= vertices - 1", file=sys.stderr)
        return EXIT_INPUT
    for k in range(args.count):
        try:
            _, m = random_graphic_instance(seed + k, args.vertices, args.edges, args.simple)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        path = f"{args.out}_{k:03d}.txt"
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(m.to_text("coordinate"))
        print(path)
    return EXIT_OK


def _random_trial_matrix(rng: random.Random, trial: int) -> SparseBinaryMatrix:
    if trial % 5 == 0:
        nv = rng.randint(2, 7)
        ne = rng.randint(nv - 1, min(nv + 5, nv - 1 + 6))
        return random_graphic_instance(rng.randrange(1 << 30), nv, ne)[1]
    m = rng.randint(1, 6)
    n = rng.randint(1, 6)
    density = rng.choice((0.15, 0.3, 0.5, 0.7))
    rows = [[j for j in range(n) if rng.random() < density] for _ in range(m)]
    return SparseBinaryMatrix.from_rows(rows, n)


def cmd_oracle_check(args) -> int:
    verdicts = {"graphic": 0, "non-graphic": 0}
    disagreements = 0
    trials = 0
    if args.random:
        rng = random.Random(_seed(args))
        for trial in range(args.random):
            m = _random_trial_matrix(rng, trial)
            trials += 1
            fast = is_graphic(m).graphic
            slow = oracle_is_graphic(m).graphic
            verdicts["graphic" if slow else "non-graphic"] += 1
            if fast != slow:
                disagreements += 1
                print(f"DISAGREEMENT on trial {trial}:", file=sys.stderr)
                print(m.to_text("coordinate"), file=sys.stderr)
    else:
        if not args.path:
            print("error: need a path or --random N", file=sys.stderr)
            return EXIT_INPUT
        try:
            m = _read_matrix(args.path, args.format)
        except (ParseError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        trials = 1
        try:
            fast = is_graphic(m).graphic
            slow = oracle_is_graphic(m).graphic
        except OracleScaleError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        verdicts["graphic" if slow else "non-graphic"] += 1
        disagreements = 0 if fast == slow else 1
    report = {
        "command": "oracle-check",
        "trials": trials,
        "agreements": trials - disagreements,
        "disagreements": disagreements,
        "oracle_verdicts": verdicts,
    }
    _emit(report, args.json)
    return EXIT_OK if disagreements == 0 else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphrec", description=__doc__)
    parser.add_argument("--version", action="version", version=f"graphrec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="decide graphicness of a matrix file")
    check.add_argument("path", help="matrix file, or - for stdin")
    check.add_argument("--format", choices=FORMATS, default="coordinate")
    check.add_argument("--certificate", action="store_true", help="emit a realization")
    check.add_argument("--dump-spqr", metavar="OUT", help="write the forest to OUT(.json|.dot)")
    check.add_argument("--json", action="store_true")
    check.set_defaults(func=cmd_check)

    maximal = sub.add_parser("maximal", help="greedy maximal graphic row subset")
    maximal.add_argument("path")
    maximal.add_argument("--format", choices=FORMATS, default="coordinate")
    maximal.add_argument("--certificate", action="store_true")
    maximal.add_argument("--verify", action="store_true", help="oracle-check maximality")
    maximal.add_argument("--json", action="store_true")
    maximal.set_defaults(func=cmd_maximal)

    gen = sub.add_parser("gen", help="generate graphic instances")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--vertices", type=int, required=True)
    gen.add_argument("--edges", type=int, required=True)
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument("--simple", action="store_true")
    gen.add_argument("--out", default="gen")
    gen.set_defaults(func=cmd_gen)

    oc = sub.add_parser("oracle-check", help="cross-validate against the brute-force oracle")
    oc.add_argument("path", nargs="?")
    oc.add_argument("--format", choices=FORMATS, default="coordinate")
    oc.add_argument("--random", type=int, metavar="N", help="run N random trials")
    oc.add_argument("--seed", type=int, default=0)
    oc.add_argument("--json", action="store_true")
    oc.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
