"""Instance-level verification: everything the theory predicts, checked exactly.

For one (tree, family, n) instance this runs: enumeration against the closed
cell-count formulas, the Euler characteristic three ways, Betti numbers over
each configured prime with the wedge-of-spheres profile as the expected value,
cross-field agreement, union-find component count against b_0, the integer
chain axiom, Smith normal forms of every small-enough boundary operator, and
the last-coordinate decomposition identities.  The report payload is a plain
dict with a fixed key order and no timestamps, so serialized runs are
byte-for-byte reproducible; wall-clock timings live next to the payload, not
inside it.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .complexes import (
    DEFAULT_MAX_CELLS,
    CubicalComplex,
    decompose_last_coordinate,
    enumerate_complex,
)
from .counting import (
    cell_count,
    cell_count_partial,
    euler_formula,
    expected_sphere_count,
)
from .errors import ResourceCapError
from .homology import (
    DEFAULT_PRIMES,
    DEFAULT_SNF_MAX_COLS,
    betti,
    connected_components,
    smith_normal_form,
    verify_chain_axiom,
)
from .trees import LabeledTree, SubtreeFamily, enumerate_trees, sample_trees

__all__ = ["VerificationReport", "check_instance", "run_sweep", "payload_json"]


@dataclass
class VerificationReport:
    """Outcome of one instance: deterministic payload + out-of-band timings."""

    payload: dict
    passed: bool
    skipped: bool
    timings: dict = field(default_factory=dict)


def payload_json(report: VerificationReport) -> str:
    """Canonical single-line JSON serialization of the payload."""
    return json.dumps(report.payload, separators=(",", ":"))


def _is_full_family(family: SubtreeFamily) -> bool:
    return family.is_singleton and len(family.support) == family.tree.m


def check_instance(
    tree: LabeledTree,
    family: SubtreeFamily,
    n: int,
    primes: Sequence[int] = DEFAULT_PRIMES,
    max_cells: int = DEFAULT_MAX_CELLS,
    snf_max_cols: int = DEFAULT_SNF_MAX_COLS,
    decompose: bool = True,
) -> VerificationReport:
    """Run the full check suite on one instance.

    If enumeration trips the cell cap the instance is marked skipped and only
    the formula-level Euler identity is checked.
    """
    m = tree.m
    k = family.k
    full = _is_full_family(family)
    payload: dict = {
        "m": m,
        "tree": tree.inline(),
        "family": family.describe(),
        "n": n,
        "skipped": False,
    }
    timings: dict = {}

    t0 = time.perf_counter()
    try:
        complex = enumerate_complex(tree, family, n, max_cells)
    except ResourceCapError as exc:
        payload["skipped"] = True
        payload["skip_reason"] = str(exc)
        euler_ok = True
        if full and m >= 2 and n >= m:
            chi_formula = euler_formula(m, n)
            chi_theorem = 1 + (-1) ** (n - m) * expected_sphere_count(m, n)
            payload["euler"] = {"formula": chi_formula, "theorem": chi_theorem}
            euler_ok = chi_formula == chi_theorem
        payload["euler_ok"] = euler_ok
        payload["passed"] = euler_ok
        return VerificationReport(payload, euler_ok, True, {"enumerate": time.perf_counter() - t0})
    timings["enumerate"] = time.perf_counter() - t0

    f = complex.f_vector()
    payload["cells"] = complex.total_cells
    payload["f_vector"] = list(f)

    # f-vector against the closed counting formulas (singleton families only;
    # general subtree parts have no per-dimension closed form here)
    if family.is_singleton:
        s = len(family.support)
        if full and m >= 2:
            expected_f = [cell_count(m, n, d) for d in range(n - m + 1)] if n >= m else []
        else:
            expected_f = [cell_count_partial(m, s, n, d) for d in range(n + 1)]
            while expected_f and expected_f[-1] == 0:
                expected_f.pop()
        fv_ok = list(f) == expected_f
        payload["f_vector_formula_ok"] = fv_ok
    else:
        fv_ok = None
        payload["f_vector_formula_ok"] = None

    # Euler characteristic: enumeration vs wedge theorem vs closed formula
    chi_enum = sum((-1) ** d * fd for d, fd in enumerate(f))
    if complex.is_empty:
        chi_theorem = 0
    else:
        chi_theorem = 1 + (-1) ** (n - k) * expected_sphere_count(k, n)
    euler_entry = {"enumerated": chi_enum, "theorem": chi_theorem}
    euler_ok = chi_enum == chi_theorem
    if full and m >= 2 and n >= m:
        chi_formula = euler_formula(m, n)
        euler_entry["formula"] = chi_formula
        euler_ok = euler_ok and chi_formula == chi_enum
    payload["euler"] = euler_entry
    payload["euler_ok"] = euler_ok

    # Betti profiles per prime, wedge-of-spheres expected value
    profiles = {}
    t0 = time.perf_counter()
    for p in primes:
        profiles[p] = betti(complex, p)
    timings["betti"] = time.perf_counter() - t0
    payload["betti"] = {str(p): list(profiles[p].betti) for p in primes}
    if complex.is_empty:
        expected_reduced: list = []
    else:
        # contractible cases (k <= 1) expect zeros everywhere, and their
        # nominal concentration degree n - k may exceed the actual dimension
        spheres = expected_sphere_count(k, n)
        size = complex.dim + 1
        if spheres and n - k >= size:
            size = n - k + 1
        expected_reduced = [0] * size
        if spheres:
            expected_reduced[n - k] = spheres
    payload["expected_reduced"] = expected_reduced
    betti_ok = all(list(profiles[p].reduced) == expected_reduced for p in primes)
    payload["betti_ok"] = betti_ok
    agreement_ok = len({profiles[p].betti for p in primes}) <= 1
    payload["field_agreement_ok"] = agreement_ok

    comps = connected_components(complex)
    payload["components"] = comps
    comps_ok = all(
        (profiles[p].betti[0] if profiles[p].betti else 0) == comps for p in primes
    )
    payload["components_ok"] = comps_ok

    t0 = time.perf_counter()
    chain_ok = verify_chain_axiom(complex)
    timings["chain_axiom"] = time.perf_counter() - t0
    payload["chain_axiom_ok"] = chain_ok

    # Smith normal form wherever the column cap allows
    snf_dims = [
        d
        for d in range(1, complex.dim + 1)
        if len(complex.cells_by_dim[d]) <= snf_max_cols
    ]
    if snf_dims:
        t0 = time.perf_counter()
        all_ones = True
        for d in snf_dims:
            diag = smith_normal_form(complex, d, snf_max_cols)
            all_ones = all_ones and diag.all_ones
        timings["snf"] = time.perf_counter() - t0
        payload["snf"] = {"dims": snf_dims, "all_ones": all_ones}
        snf_ok = all_ones
    else:
        payload["snf"] = None
        snf_ok = None

    # last-coordinate decomposition (classical setting only)
    if decompose and family.is_singleton and n >= k + 1:
        t0 = time.perf_counter()
        report = decompose_last_coordinate(tree, family, n, max_cells)
        timings["decompose"] = time.perf_counter() - t0
        dec_ok = report.passed
        payload["decompose_ok"] = dec_ok
    else:
        dec_ok = None
        payload["decompose_ok"] = None

    checks = [fv_ok, euler_ok, betti_ok, agreement_ok, comps_ok, chain_ok, snf_ok, dec_ok]
    passed = all(c for c in checks if c is not None)
    payload["passed"] = passed
    return VerificationReport(payload, passed, False, timings)


def run_sweep(
    instances: Iterable[tuple[LabeledTree, SubtreeFamily, int]],
    primes: Sequence[int] = DEFAULT_PRIMES,
    max_cells: int = DEFAULT_MAX_CELLS,
    snf_max_cols: int = DEFAULT_SNF_MAX_COLS,
    decompose: bool = True,
) -> Iterator[VerificationReport]:
    """check_instance over a stream of instances, preserving order."""
    for tree, family, n in instances:
        yield check_instance(
            tree,
            family,
            n,
            primes=primes,
            max_cells=max_cells,
            snf_max_cols=snf_max_cols,
            decompose=decompose,
        )


def standard_instances(
    m_values: Sequence[int],
    n_for_m,
    family_spec: str = "all",
    sample: int | None = None,
    seed: int = 0,
) -> Iterator[tuple[LabeledTree, SubtreeFamily, int]]:
    """The sweep grid: all trees on m vertices (or a seeded sample), each n.

    n_for_m maps m to an iterable of n values; family_spec is the CLI S-spec
    grammar applied per tree.
    """
    from .trees import parse_family_spec

    for m in m_values:
        trees = sample_trees(m, sample, seed) if sample else enumerate_trees(m)
        for tree in trees:
            family = parse_family_spec(tree, family_spec)
            for n in n_for_m(m):
                yield tree, family, n
