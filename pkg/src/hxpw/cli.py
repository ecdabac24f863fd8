"""Command-line front end: build, certify, and export with stable formats.

Exit codes follow the 0 / 1 / 2 contract (pass, failed check or empty
output, usage error).  There is no configuration file; every flag that
influenced a run is echoed into the output header, so results are
deterministic functions of the command line alone.

`--threads` caps the BLAS pool used by the counting products (results are
independent of it); everything else in the pipeline is single-threaded
numpy and exact arithmetic.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys

import numpy as np

from . import conic, hemisystem, schemes
from .certify import certify as run_certify
from .conic import pair_reps
from .fields import tower

FAMILIES = ("hx", "pw", "fine")


# ---------------------------------------------------------------------------
# graph6 (header-less, standard N(n) encoding)

def graph6_bytes(adj) -> bytes:
    """Encode a 0/1 adjacency matrix, vertices in index order."""
    adj = np.asarray(adj, dtype=bool)
    n = adj.shape[0]
    if n <= 62:
        head = bytes([n + 63])
    elif n <= 258047:
        head = bytes([126, ((n >> 12) & 63) + 63, ((n >> 6) & 63) + 63, (n & 63) + 63])
    else:
        raise ValueError("graph6 supports at most 258047 vertices here")
    bits = []
    for j in range(1, n):
        for i in range(j):
            bits.append(1 if adj[i, j] else 0)
    while len(bits) % 6:
        bits.append(0)
    body = bytearray()
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k:k + 6]:
            v = (v << 1) | b
        body.append(v + 63)
    return head + bytes(body) + b"\n"


# ---------------------------------------------------------------------------
# table construction per family

def _family_bundle(h: int, family: str):
    ctx = tower(h)
    hx = conic.table_bundle(ctx)
    if family == "hx":
        table, d = hx["table"], 3
    elif family == "pw":
        table, d = hemisystem.klein_table_bundle(ctx)["table"], 3
    elif family == "fine":
        table, d = hx["fine_table"], len(hx["fine_to_coarse"])
    else:
        raise ValueError(f"unknown family {family!r}")
    valencies = [int(np.count_nonzero(table[0] == k)) for k in range(1, d + 1)]
    header = {"h": h, "q": ctx.q, "n": table.shape[0],
              "modulus_hex": hex(ctx.modulus), "family": family,
              "class_count": d, "valencies": valencies,
              "point_reps": list(pair_reps(ctx))}
    return header, table


def _write_out(path, data: bytes):
    if path is None:
        sys.stdout.buffer.write(data)
    else:
        with open(path, "wb") as f:
            f.write(data)


def _threads_context(threads):
    if threads is None:
        return contextlib.nullcontext()
    try:
        from threadpoolctl import threadpool_limits
        return threadpool_limits(limits=threads)
    except ImportError:
        return contextlib.nullcontext()


# ---------------------------------------------------------------------------
# subcommands

def cmd_build(args) -> int:
    header, table = _family_bundle(args.h, args.family)
    if args.format == "json":
        doc = {"header": header, "classes": table.tolist()}
        _write_out(args.out, (json.dumps(doc, sort_keys=True) + "\n").encode())
    elif args.format == "csv":
        lines = [f"# {k}={v}" for k, v in header.items() if k != "point_reps"]
        lines += [",".join(str(int(x)) for x in row) for row in table]
        _write_out(args.out, ("\n".join(lines) + "\n").encode())
    else:
        print(f"build supports json or csv, not {args.format}", file=sys.stderr)
        return 2
    return 0


def cmd_certify(args) -> int:
    with _threads_context(args.threads):
        cert = run_certify(args.h, depth=args.depth, seed=args.seed)
    data = (json.dumps(cert, sort_keys=True, indent=1) + "\n").encode()
    _write_out(args.out, data)
    if cert["verdict"] != "pass":
        print(f"certificate FAILED; witness: {cert['witness']}", file=sys.stderr)
        return 1
    return 0


def cmd_export(args) -> int:
    header, table = _family_bundle(args.h, args.family)
    if args.format == "graph6":
        classes = _parse_classes(args.classes, header["class_count"])
        adj = np.isin(table, classes)
        np.fill_diagonal(adj, False)
        if not adj.any():
            print(f"class union {classes} is empty", file=sys.stderr)
            return 1
        _write_out(args.out, graph6_bytes(adj))
        return 0
    if args.format in ("csv", "json"):
        with _threads_context(args.threads):
            an = schemes.verify_scheme(schemes.RelationTable(table, d=header["class_count"]))
            P, Q, mult = an.eigenmatrix()
            kr = an.krein()
        d1 = an.d + 1
        fs = schemes.frac_str
        if args.format == "json":
            doc = {"header": {k: v for k, v in header.items() if k != "point_reps"},
                   "P": [[fs(x) for x in row] for row in P],
                   "Q": [[fs(x) for x in row] for row in Q],
                   "multiplicities": mult,
                   "krein": [[[fs(kr[k][i][j]) for j in range(d1)]
                              for i in range(d1)] for k in range(d1)],
                   "p_numbers": an.p}
            _write_out(args.out, (json.dumps(doc, sort_keys=True) + "\n").encode())
            return 0
        lines = [f"# {k}={v}" for k, v in header.items() if k != "point_reps"]
        lines.append("P")
        lines += [",".join(fs(x) for x in row) for row in P]
        lines.append("Q")
        lines += [",".join(fs(x) for x in row) for row in Q]
        lines.append("multiplicities")
        lines.append(",".join(str(m) for m in mult))
        for k in range(d1):
            lines.append(f"krein k={k}")
            lines += [",".join(fs(kr[k][i][j]) for j in range(d1)) for i in range(d1)]
        for k in range(d1):
            lines.append(f"p-numbers k={k}")
            lines += [",".join(f"{an.p[k][i][j]}/1" for j in range(d1)) for i in range(d1)]
        _write_out(args.out, ("\n".join(lines) + "\n").encode())
        return 0
    print(f"unknown export format {args.format}", file=sys.stderr)
    return 2


def _parse_classes(text: str, d: int):
    try:
        classes = sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError:
        raise SystemExit(2)
    if not classes or any(c < 1 or c > d for c in classes):
        print(f"--classes must name classes in 1..{d}", file=sys.stderr)
        raise SystemExit(2)
    return classes


# ---------------------------------------------------------------------------

def _build_parser():
    ap = argparse.ArgumentParser(
        prog="hxpw",
        description="Build, certify and export the two 3-class scheme constructions.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, family=False, fmt=None, classes=False):
        p.add_argument("--h", type=int, required=True, help="field exponent, q = 2^h")
        p.add_argument("--threads", type=int, default=None,
                       help="cap the BLAS pool during counting products")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        if family:
            p.add_argument("--family", choices=FAMILIES, default="hx")
        if fmt:
            p.add_argument("--format", choices=fmt, default=fmt[0])
        if classes:
            p.add_argument("--classes", default="1,2",
                           help="comma list of classes to merge (export)")

    b = sub.add_parser("build", help="write a relation table")
    common(b, family=True, fmt=("json", "csv"))

    c = sub.add_parser("certify", help="run the full certification pipeline")
    common(c)
    c.add_argument("--depth", choices=("full", "sampled"), default="full")
    c.add_argument("--seed", type=int, default=None,
                   help="sampling seed (required with --depth sampled)")

    e = sub.add_parser("export", help="export a class-union graph or analytics")
    common(e, family=True, fmt=("graph6", "csv", "json"), classes=True)
    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0,) else 0
    if args.h < 1:
        print("--h must be a positive integer", file=sys.stderr)
        return 2
    if args.command == "certify":
        if args.depth == "sampled" and args.seed is None:
            print("--depth sampled requires --seed", file=sys.stderr)
            return 2
        if args.h >= 4 and args.depth != "sampled":
            print("--h >= 4 requires --depth sampled", file=sys.stderr)
            return 2
    elif args.h >= 4:
        print("table materialization is supported for h <= 3", file=sys.stderr)
        return 2
    try:
        if args.command == "build":
            return cmd_build(args)
        if args.command == "certify":
            return cmd_certify(args)
        if args.command == "export":
            return cmd_export(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except (ValueError, schemes.SchemeAxiomError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
