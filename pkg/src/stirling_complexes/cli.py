"""Command-line interface.

Subcommands: count, betti, verify, decompose, valency, trees.  Results go to
stdout as JSON (one object per line for streaming commands) unless --pretty
is given; progress and timing diagnostics go to stderr.  Payloads carry no
timestamps and use fixed key orders, so identical invocations produce
byte-identical stdout.

Exit codes: 0 all executed checks passed; 1 a check failed or a resource cap
was hit; 2 usage, parse, or domain errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from multiprocessing import Pool
from typing import Iterable

from .complexes import (
    DEFAULT_MAX_CELLS,
    decompose_last_coordinate,
    enumerate_complex,
    vertex_valencies,
)
from .counting import (
    cell_count,
    euler_formula,
    expected_sphere_count,
    f_closed,
    f_recursive,
    f_surjection_form,
)
from .errors import (
    DomainError,
    FamilyError,
    InternalCheckError,
    ResourceCapError,
    TreeError,
)
from .homology import DEFAULT_PRIMES, DEFAULT_SNF_MAX_COLS, betti, is_prime
from .trees import (
    LabeledTree,
    enumerate_trees,
    parse_family_spec,
    parse_inline_tree,
    parse_tree,
    sample_trees,
)
from .verify import check_instance, payload_json

__all__ = ["main"]


def _emit(obj: dict, pretty: bool) -> None:
    if pretty:
        print(json.dumps(obj, indent=2))
    else:
        print(json.dumps(obj, separators=(",", ":")))


def _load_tree(args: argparse.Namespace) -> LabeledTree:
    if args.tree is not None:
        return parse_inline_tree(args.tree)
    with open(args.tree_file, "r", encoding="utf-8") as fh:
        return parse_tree(fh.read())


def _parse_primes(text: str) -> tuple[int, ...]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        p = int(tok)
        if not is_prime(p):
            raise DomainError(f"--primes entry {p} is not prime")
        if p not in out:
            out.append(p)
    if not out:
        raise DomainError("--primes needs at least one prime")
    return tuple(out)


def _parse_m_spec(text: str) -> list[int]:
    """Range grammar for --m: "4", "2..5", "2,3,5"."""
    out: list[int] = []
    try:
        for tok in text.split(","):
            tok = tok.strip()
            if ".." in tok:
                lo, hi = tok.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(tok))
    except ValueError:
        raise DomainError(f'bad --m specification {text!r}; expected "4", "2..5", or "2,3,5"')
    if not out:
        raise DomainError(f"empty --m specification {text!r}")
    return out


def _parse_n_endpoint(tok: str):
    """An n endpoint: absolute int, or m-relative "m", "m+2", "m-1"."""
    tok = tok.strip()
    try:
        if tok.startswith("m"):
            rest = tok[1:].replace(" ", "")
            offset = int(rest) if rest else 0
            return lambda m: m + offset
        value = int(tok)
    except ValueError:
        raise DomainError(f'bad --n endpoint {tok!r}; expected an integer, "m", or "m+2"')
    return lambda m: value


def _parse_n_spec(text: str):
    """Range grammar for --n: "5", "4..7", "m..m+2", "m+1"."""
    if text.count("..") > 1:
        raise DomainError(f"bad --n specification {text!r}")
    if ".." in text:
        lo_tok, hi_tok = text.split("..")
        lo = _parse_n_endpoint(lo_tok)
        hi = _parse_n_endpoint(hi_tok)
        return lambda m: list(range(lo(m), hi(m) + 1))
    point = _parse_n_endpoint(text)
    return lambda m: [point(m)]


# ---------------------------------------------------------------- count


def cmd_count(args: argparse.Namespace) -> int:
    m, n = args.m, args.n
    if not 2 <= m <= n:
        raise DomainError(f"count requires 2 <= m <= n, got m={m}, n={n}")
    values = {
        "closed": f_closed(m, n),
        "surjection_form": f_surjection_form(m, n),
        "recursive": f_recursive(m, n),
    }
    agree = len(set(values.values())) == 1
    payload = {
        "m": m,
        "n": n,
        "f": values["closed"],
        "f_closed": values["closed"],
        "f_surjection_form": values["surjection_form"],
        "f_recursive": values["recursive"],
        "agree": agree,
        "euler": euler_formula(m, n),
        "euler_theorem": 1 + (-1) ** (n - m) * values["closed"],
        "cell_counts": [cell_count(m, n, d) for d in range(n - m + 1)],
    }
    payload["euler_ok"] = payload["euler"] == payload["euler_theorem"]
    if args.pretty:
        print(f"f({m},{n}) = {values['closed']}")
        print(f"  closed form      : {values['closed']}")
        print(f"  surjection form  : {values['surjection_form']}")
        print(f"  recursion        : {values['recursive']}")
        print(f"  euler char       : {payload['euler']} (theorem: {payload['euler_theorem']})")
        print(f"  cells per dim    : {payload['cell_counts']}")
    else:
        _emit(payload, False)
    if not agree or not payload["euler_ok"]:
        raise InternalCheckError(
            f"counting formulas disagree for (m={m}, n={n}): {values}, euler {payload['euler']}"
        )
    return 0


# ---------------------------------------------------------------- betti


def cmd_betti(args: argparse.Namespace) -> int:
    tree = _load_tree(args)
    family = parse_family_spec(tree, args.family)
    primes = _parse_primes(args.primes)
    complex = enumerate_complex(tree, family, args.n, args.max_cells)
    profiles = [betti(complex, p) for p in primes]
    k = family.k
    if complex.is_empty:
        expected: list[int] = []
    else:
        expected = [0] * (complex.dim + 1)
        expected[args.n - k] = expected_sphere_count(k, args.n)
    ok = all(list(prof.reduced) == expected for prof in profiles)
    payload = {
        "tree": tree.inline(),
        "family": family.describe(),
        "n": args.n,
        "cells": complex.total_cells,
        "f_vector": list(complex.f_vector()),
        "betti": {str(p): list(prof.betti) for p, prof in zip(primes, profiles)},
        "reduced": {str(p): list(prof.reduced) for p, prof in zip(primes, profiles)},
        "expected_reduced": expected,
        "expected_spheres": expected_sphere_count(k, args.n) if args.n >= k else 0,
        "pass": ok,
    }
    if args.pretty:
        print(f"Str({tree.inline()}, {family.describe()}, n={args.n})")
        print(f"  f-vector : {payload['f_vector']}")
        for p, prof in zip(primes, profiles):
            print(f"  betti GF({p}) : {list(prof.betti)} (reduced {list(prof.reduced)})")
        print(f"  expected reduced : {expected}")
        print("  PASS" if ok else "  FAIL")
    else:
        _emit(payload, False)
    return 0 if ok else 1


# ---------------------------------------------------------------- verify


def _verify_worker(spec: tuple) -> tuple[dict, bool, bool, dict]:
    m, edges, family_spec, n, primes, max_cells, snf_max_cols, decompose = spec
    tree = LabeledTree(m, edges)
    family = parse_family_spec(tree, family_spec)
    report = check_instance(
        tree,
        family,
        n,
        primes=primes,
        max_cells=max_cells,
        snf_max_cols=snf_max_cols,
        decompose=decompose,
    )
    return report.payload, report.passed, report.skipped, report.timings


def cmd_verify(args: argparse.Namespace) -> int:
    primes = _parse_primes(args.primes)
    m_values = _parse_m_spec(args.m)
    n_for_m = _parse_n_spec(args.n)
    specs = []
    for m in m_values:
        trees = sample_trees(m, args.sample, args.seed) if args.sample else enumerate_trees(m)
        for tree in trees:
            for n in n_for_m(m):
                specs.append(
                    (
                        tree.m,
                        tree.edges,
                        args.family,
                        n,
                        primes,
                        args.max_cells,
                        args.snf_max_cols,
                        not args.no_decompose,
                    )
                )
    t_start = time.perf_counter()
    n_pass = n_fail = n_skip = 0
    if args.jobs > 1:
        pool = Pool(args.jobs)
        results: Iterable = pool.imap(_verify_worker, specs, chunksize=1)
    else:
        pool = None
        results = map(_verify_worker, specs)
    try:
        for spec, (payload, passed, skipped, timings) in zip(specs, results):
            if args.pretty:
                status = "SKIP" if skipped else ("PASS" if passed else "FAIL")
                print(
                    f"{status}  m={payload['m']} tree={payload['tree']} "
                    f"S={payload['family']} n={payload['n']} "
                    f"cells={payload.get('cells', '-')}"
                )
            else:
                print(json.dumps(payload, separators=(",", ":")))
            times = " ".join(f"{k}={v:.3f}s" for k, v in timings.items())
            print(
                f"# m={payload['m']} tree={payload['tree']} n={payload['n']} {times}",
                file=sys.stderr,
            )
            if skipped:
                n_skip += 1
            elif passed:
                n_pass += 1
            else:
                n_fail += 1
    finally:
        if pool is not None:
            pool.close()
            pool.join()
    elapsed = time.perf_counter() - t_start
    print(
        f"# verify: {n_pass} passed, {n_fail} failed, {n_skip} skipped "
        f"({len(specs)} instances, {elapsed:.1f}s)",
        file=sys.stderr,
    )
    return 0 if n_fail == 0 else 1


# ---------------------------------------------------------------- decompose


def cmd_decompose(args: argparse.Namespace) -> int:
    tree = _load_tree(args)
    family = parse_family_spec(tree, args.family)
    report = decompose_last_coordinate(tree, family, args.n, args.max_cells)
    payload = {
        "tree": tree.inline(),
        "family": family.describe(),
        "n": args.n,
        "cells": report.total_cells,
        "vertex_pieces": {
            str(v): {"count": c, "expected": e} for v, (c, e) in report.vertex_pieces.items()
        },
        "edge_pieces": {
            str(e): {"count": c, "expected": x} for e, (c, x) in report.edge_pieces.items()
        },
        "cylinders": {
            str(e): {
                "count": c,
                "expected": x,
                "literal_3x": report.cylinder_literal_3x[e],
            }
            for e, (c, x) in report.cylinders.items()
        },
        "partition_ok": report.partition_ok,
        "pass": report.passed,
    }
    if args.pretty:
        print(f"Str({tree.inline()}, {family.describe()}, n={args.n}): {report.total_cells} cells")
        for v, (c, e) in report.vertex_pieces.items():
            mark = "ok" if c == e else "MISMATCH"
            print(f"  last=v{v}: {c} cells, expected {e}  [{mark}]")
        for eid, (c, e) in report.edge_pieces.items():
            u, w = tree.edge(eid)
            mark = "ok" if c == e else "MISMATCH"
            print(f"  last=e{u}-{w}: {c} cells, expected {e}  [{mark}]")
        for eid, (c, e) in report.cylinders.items():
            u, w = tree.edge(eid)
            mark = "ok" if c == e else "MISMATCH"
            lit = " (=3x)" if report.cylinder_literal_3x[eid] else ""
            print(f"  cylinder e{u}-{w}: {c} cells, expected {e}{lit}  [{mark}]")
        print("PASS" if report.passed else "FAIL")
    else:
        _emit(payload, False)
    return 0 if report.passed else 1


# ---------------------------------------------------------------- valency


def cmd_valency(args: argparse.Namespace) -> int:
    tree = _load_tree(args)
    family = parse_family_spec(tree, args.family)
    complex = enumerate_complex(tree, family, args.n, args.max_cells)
    if complex.is_empty:
        hist: dict[int, int] = {}
    elif complex.dim < 1:
        hist = {0: len(complex.cells_by_dim[0])}
    else:
        hist = dict(vertex_valencies(complex))
    payload = {
        "tree": tree.inline(),
        "family": family.describe(),
        "n": args.n,
        "histogram": {str(k): hist[k] for k in sorted(hist)},
    }
    if args.pretty:
        print(f"Str({tree.inline()}, {family.describe()}, n={args.n}) valencies:")
        for k in sorted(hist):
            print(f"  {k}: {hist[k]}")
    else:
        _emit(payload, False)
    return 0


# ---------------------------------------------------------------- trees


def cmd_trees(args: argparse.Namespace) -> int:
    if args.sample:
        trees = sample_trees(args.m, args.sample, args.seed)
    else:
        trees = list(enumerate_trees(args.m))
    for i, tree in enumerate(trees):
        if args.pretty:
            print(tree.inline())
        else:
            _emit({"m": args.m, "index": i, "tree": tree.inline()}, False)
    return 0


# ---------------------------------------------------------------- parser


def _add_tree_args(sub: argparse.ArgumentParser) -> None:
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--tree", help='inline tree, e.g. "1-2,2-3,2-4"')
    group.add_argument("--tree-file", help="path to an edge-list tree file")


def _add_common(sub: argparse.ArgumentParser, family: bool = True) -> None:
    if family:
        sub.add_argument(
            "-S",
            "--family",
            default="all",
            help='family spec: "all", "none", "1,3,4", or "{1,2},{4}" (default: all)',
        )
    sub.add_argument(
        "--max-cells",
        type=int,
        default=DEFAULT_MAX_CELLS,
        help=f"cell-count cap per complex (default {DEFAULT_MAX_CELLS})",
    )
    sub.add_argument("--pretty", action="store_true", help="human-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stirling-complexes",
        description="Exact homology and counting checks for Stirling complexes over labeled trees.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_count = subs.add_parser("count", help="evaluate every counting formula at (m, n)")
    p_count.add_argument("m", type=int)
    p_count.add_argument("n", type=int)
    p_count.add_argument("--pretty", action="store_true")
    p_count.set_defaults(func=cmd_count)

    p_betti = subs.add_parser("betti", help="Betti numbers of one complex")
    _add_tree_args(p_betti)
    p_betti.add_argument("-n", type=int, required=True, help="number of coordinates")
    p_betti.add_argument("--primes", default="2,32749", help="comma-separated primes")
    _add_common(p_betti)
    p_betti.set_defaults(func=cmd_betti)

    p_verify = subs.add_parser("verify", help="run the full check suite over a sweep")
    p_verify.add_argument("--m", required=True, help='vertex counts: "4", "2..5", "2,3,5"')
    p_verify.add_argument("--n", required=True, help='coordinates: "5", "4..7", "m..m+2"')
    p_verify.add_argument("--primes", default="2,32749")
    p_verify.add_argument("--sample", type=int, default=None, help="sample this many trees per m")
    p_verify.add_argument("--seed", type=int, default=0, help="PRNG seed for sampling")
    p_verify.add_argument(
        "--snf-max-cols",
        type=int,
        default=DEFAULT_SNF_MAX_COLS,
        help=f"run SNF on boundaries with at most this many columns (default {DEFAULT_SNF_MAX_COLS}; 0 disables)",
    )
    p_verify.add_argument("--jobs", type=int, default=1, help="instance-level process parallelism")
    p_verify.add_argument("--no-decompose", action="store_true", help="skip decomposition checks")
    _add_common(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_dec = subs.add_parser("decompose", help="last-coordinate decomposition identities")
    _add_tree_args(p_dec)
    p_dec.add_argument("-n", type=int, required=True)
    _add_common(p_dec)
    p_dec.set_defaults(func=cmd_decompose)

    p_val = subs.add_parser("valency", help="valency histogram of the 1-skeleton")
    _add_tree_args(p_val)
    p_val.add_argument("-n", type=int, required=True)
    _add_common(p_val)
    p_val.set_defaults(func=cmd_valency)

    p_trees = subs.add_parser("trees", help="enumerate labeled trees on m vertices")
    p_trees.add_argument("-m", type=int, required=True)
    p_trees.add_argument("--sample", type=int, default=None)
    p_trees.add_argument("--seed", type=int, default=0)
    p_trees.add_argument("--pretty", action="store_true")
    p_trees.set_defaults(func=cmd_trees)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (TreeError, FamilyError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InternalCheckError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
