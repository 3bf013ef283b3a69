"""Exact homology of cubical complexes: Betti numbers over prime fields and
integer Smith normal form for torsion certificates.

Field ranks come from left-to-right sparse column reduction (the standard
boundary-reduction algorithm) with the clearing optimization between
consecutive dimensions inside :func:`betti`.  SNF works over exact Python
integers, preferring unit pivots in minimum-degree columns and repairing the
divisor chain at the end by gcd/lcm normalization.  Nothing here touches
floating point.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .complexes import CubicalComplex
from .errors import DomainError, InternalCheckError, ResourceCapError

__all__ = [
    "DEFAULT_PRIMES",
    "DEFAULT_SNF_MAX_COLS",
    "SparseMatrixModP",
    "BettiProfile",
    "SNFDiagnostics",
    "is_prime",
    "boundary_matrix",
    "rank",
    "betti",
    "connected_components",
    "smith_normal_form",
    "elementary_divisors",
    "verify_chain_axiom",
]

DEFAULT_PRIMES = (2, 32749)
DEFAULT_SNF_MAX_COLS = 5000

# residues must keep products inside int64 in the reduction kernel
_MAX_PRIME = 2**31


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    for q in range(3, isqrt(p) + 1, 2):
        if p % q == 0:
            return False
    return True


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise DomainError(f"modulus {p} is not prime")
    if p >= _MAX_PRIME:
        raise DomainError(f"prime {p} too large; residue arithmetic needs p < 2^31")


@dataclass(frozen=True, eq=False)
class SparseMatrixModP:
    """Column-major sparse matrix over GF(p).

    col_ptr/row_idx/vals are CSC arrays; residues lie in [1, p-1] and row
    indices are strictly increasing within each column.
    """

    rows: int
    cols: int
    p: int
    col_ptr: np.ndarray
    row_idx: np.ndarray
    vals: np.ndarray

    def __post_init__(self) -> None:
        _check_prime(self.p)
        if len(self.col_ptr) != self.cols + 1 or self.col_ptr[0] != 0:
            raise DomainError("malformed column pointers")
        for j in range(self.cols):
            lo, hi = self.col_ptr[j], self.col_ptr[j + 1]
            if lo > hi:
                raise DomainError("malformed column pointers")
            prev = -1
            for t in range(lo, hi):
                r = self.row_idx[t]
                if not 0 <= r < self.rows:
                    raise DomainError(f"row index {r} out of range")
                if r <= prev:
                    raise DomainError("row indices not strictly increasing in a column")
                prev = r
                if not 1 <= self.vals[t] <= self.p - 1:
                    raise DomainError(f"residue {self.vals[t]} outside [1, p-1]")

    @property
    def nnz(self) -> int:
        return int(self.col_ptr[-1])

    @classmethod
    def from_triples(
        cls, rows: int, cols: int, p: int, triples: Iterable[tuple[int, int, int]]
    ) -> "SparseMatrixModP":
        """Build from (row, col, value) with arbitrary integer values; values
        are reduced mod p and duplicate positions are summed."""
        _check_prime(p)
        acc: dict[tuple[int, int], int] = {}
        for r, c, v in triples:
            acc[(c, r)] = (acc.get((c, r), 0) + v) % p
        ptr = np.zeros(cols + 1, dtype=np.int64)
        keys = sorted(k for k, v in acc.items() if v % p != 0)
        ridx = np.empty(len(keys), dtype=np.int64)
        vals = np.empty(len(keys), dtype=np.int64)
        for t, (c, r) in enumerate(keys):
            ptr[c + 1] += 1
            ridx[t] = r
            vals[t] = acc[(c, r)] % p
        np.cumsum(ptr, out=ptr)
        return cls(rows, cols, p, ptr, ridx, vals)

    @classmethod
    def from_dense(cls, array, p: int) -> "SparseMatrixModP":
        a = np.asarray(array, dtype=object)
        if a.ndim != 2:
            raise DomainError("from_dense needs a 2-d array")
        triples = [
            (r, c, int(a[r, c])) for r in range(a.shape[0]) for c in range(a.shape[1])
        ]
        return cls.from_triples(a.shape[0], a.shape[1], p, triples)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.int64)
        for j in range(self.cols):
            for t in range(self.col_ptr[j], self.col_ptr[j + 1]):
                out[self.row_idx[t], j] = self.vals[t]
        return out

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "SparseMatrixModP":
        """Matrix with entry (row_perm[r], col_perm[c]) = old entry (r, c)."""
        triples = []
        for j in range(self.cols):
            for t in range(self.col_ptr[j], self.col_ptr[j + 1]):
                triples.append((row_perm[self.row_idx[t]], col_perm[j], int(self.vals[t])))
        return SparseMatrixModP.from_triples(self.rows, self.cols, self.p, triples)


def boundary_matrix(complex: CubicalComplex, d: int, p: int) -> SparseMatrixModP:
    """The boundary operator from d-chains to (d-1)-chains, reduced mod p."""
    _check_prime(p)
    ptr, rows, signs = complex.boundary_csc(d)
    vals = signs.astype(np.int64) % p
    return SparseMatrixModP(
        rows=len(complex.cells_by_dim[d - 1]),
        cols=len(complex.cells_by_dim[d]),
        p=p,
        col_ptr=ptr,
        row_idx=rows,
        vals=vals,
    )


def rank(matrix: SparseMatrixModP) -> int:
    """Exact rank over GF(p); deterministic sparse elimination."""
    skip = np.zeros(matrix.cols, dtype=np.bool_)
    r, _ = _kernels.reduce_rank(
        matrix.col_ptr, matrix.row_idx, matrix.vals, matrix.rows, matrix.cols, matrix.p, skip
    )
    return int(r)


@dataclass(frozen=True)
class BettiProfile:
    """Unreduced Betti numbers of a complex over GF(p).

    ranks[d] is the rank of the boundary operator from d-chains (ranks[0] = 0);
    betti[d] = f[d] - ranks[d] - ranks[d+1].  The reduced profile subtracts 1
    from b_0.  All tuples are empty for the empty complex.
    """

    p: int
    f_vector: tuple[int, ...]
    ranks: tuple[int, ...]
    betti: tuple[int, ...]

    def __post_init__(self) -> None:
        euler_f = sum((-1) ** d * f for d, f in enumerate(self.f_vector))
        euler_b = sum((-1) ** d * b for d, b in enumerate(self.betti))
        if euler_f != euler_b:
            raise InternalCheckError(
                f"Euler-Poincaré violated: sum f = {euler_f}, sum b = {euler_b}"
            )

    @property
    def reduced(self) -> tuple[int, ...]:
        if not self.betti:
            return ()
        return (self.betti[0] - 1,) + self.betti[1:]


def betti(complex: CubicalComplex, p: int) -> BettiProfile:
    """Betti numbers over GF(p) via column reduction with clearing.

    Boundary matrices are reduced top dimension downward; pivot rows of the
    reduced matrix one dimension up index columns that are skipped below
    (their contribution to the rank is already known to be nil).
    """
    _check_prime(p)
    if complex.is_empty:
        return BettiProfile(p=p, f_vector=(), ranks=(), betti=())
    dim = complex.dim
    f = complex.f_vector()
    ranks = [0] * (dim + 1)
    skip = np.zeros(f[dim], dtype=np.bool_)
    for d in range(dim, 0, -1):
        ptr, rows, signs = complex.boundary_csc(d)
        vals = signs.astype(np.int64) % p
        rank_d, pivot_of_row = _kernels.reduce_rank(ptr, rows, vals, f[d - 1], f[d], p, skip)
        ranks[d] = int(rank_d)
        skip = pivot_of_row >= 0
    bs = [
        f[d] - ranks[d] - (ranks[d + 1] if d < dim else 0)
        for d in range(dim + 1)
    ]
    return BettiProfile(p=p, f_vector=f, ranks=tuple(ranks), betti=tuple(bs))


def connected_components(complex: CubicalComplex) -> int:
    """Number of components of the 1-skeleton (0 for the empty complex)."""
    if complex.is_empty:
        return 0
    n0 = len(complex.cells_by_dim[0])
    if complex.dim == 0:
        return n0
    _, rows, _ = complex.boundary_csc(1)
    return int(_kernels.count_components(n0, rows))


@dataclass(frozen=True)
class SNFDiagnostics:
    """Elementary divisors of one integer boundary matrix.

    divisors is the full chain d_1 | d_2 | ... | d_r (r = rank); all equal to 1
    means the cokernel is free, i.e. no torsion can arise from this operator.
    """

    d: int
    rows: int
    cols: int
    divisors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.divisors)

    @property
    def all_ones(self) -> bool:
        return all(x == 1 for x in self.divisors)


def smith_normal_form(
    complex: CubicalComplex, d: int, max_cols: int = DEFAULT_SNF_MAX_COLS
) -> SNFDiagnostics:
    """Elementary divisors of the d-th boundary operator over the integers."""
    if not 1 <= d <= complex.dim:
        raise DomainError(f"boundary dimension {d} out of range 1..{max(complex.dim, 0)}")
    cols = len(complex.cells_by_dim[d])
    if cols > max_cols:
        raise ResourceCapError(
            f"SNF size cap exceeded: boundary has {cols} columns > {max_cols}"
        )
    ptr, rows, signs = complex.boundary_csc(d)
    triples = []
    for j in range(cols):
        for t in range(ptr[j], ptr[j + 1]):
            triples.append((int(rows[t]), j, int(signs[t])))
    divisors = elementary_divisors(len(complex.cells_by_dim[d - 1]), cols, triples)
    return SNFDiagnostics(d=d, rows=len(complex.cells_by_dim[d - 1]), cols=cols, divisors=divisors)


def elementary_divisors(
    nrows: int, ncols: int, entries: Iterable[tuple[int, int, int]]
) -> tuple[int, ...]:
    """Smith normal form divisor chain of an integer matrix given as triples.

    Exact arbitrary-precision elimination.  Pivots are chosen in a column of
    minimum fill (lazy heap), preferring unit entries and low row degree;
    when a pivot fails to divide its row/column, Euclidean steps shrink it
    first.  The resulting diagonal is normalized into a divisor chain by
    pairwise gcd/lcm exchanges (valid because all operations applied are
    unimodular, so the diagonal is equivalent to the input matrix).
    """
    col_entries: dict[int, dict[int, int]] = {}
    row_cols: dict[int, set[int]] = {}
    for r, c, v in entries:
        if v == 0:
            continue
        if not (0 <= r < nrows and 0 <= c < ncols):
            raise DomainError(f"entry position ({r}, {c}) out of range")
        col = col_entries.setdefault(c, {})
        nv = col.get(r, 0) + v
        if nv == 0:
            if r in col:
                del col[r]
                row_cols[r].discard(c)
        else:
            col[r] = nv
            row_cols.setdefault(r, set()).add(c)
    for c in [c for c, col in col_entries.items() if not col]:
        del col_entries[c]

    heap = [(len(col), c) for c, col in col_entries.items()]
    heapq.heapify(heap)

    def push(c: int) -> None:
        col = col_entries.get(c)
        if col is not None:
            heapq.heappush(heap, (len(col), c))

    def col_axpy(dst: int, src: int, coef: int) -> None:
        # column dst += coef * column src
        dcol = col_entries[dst]
        for r2, vv in col_entries[src].items():
            nv = dcol.get(r2, 0) + coef * vv
            if nv == 0:
                if r2 in dcol:
                    del dcol[r2]
                    row_cols[r2].discard(dst)
            else:
                if r2 not in dcol:
                    row_cols.setdefault(r2, set()).add(dst)
                dcol[r2] = nv
        if not dcol:
            del col_entries[dst]
        else:
            push(dst)

    def row_axpy(dst: int, src: int, coef: int) -> None:
        # row dst += coef * row src
        for c2 in sorted(row_cols.get(src, ())):
            vv = col_entries[c2][src]
            col = col_entries[c2]
            nv = col.get(dst, 0) + coef * vv
            if nv == 0:
                if dst in col:
                    del col[dst]
                    row_cols[dst].discard(c2)
            else:
                if dst not in col:
                    row_cols.setdefault(dst, set()).add(c2)
                col[dst] = nv
            push(c2)

    diag: list[int] = []
    while col_entries:
        size, c = heapq.heappop(heap)
        col = col_entries.get(c)
        if col is None or len(col) != size:
            continue
        # pivot row: prefer units, then sparse rows, then smallest row id
        best_key = None
        r = -1
        for r2, v2 in col.items():
            key = (0 if abs(v2) == 1 else 1, len(row_cols[r2]), r2)
            if best_key is None or key < best_key:
                best_key = key
                r = r2
        # Euclidean shrinking until the pivot divides its row and column
        while True:
            v = col_entries[c][r]
            bad_c = None
            for c2 in sorted(row_cols[r]):
                if c2 != c and col_entries[c2][r] % v != 0:
                    bad_c = c2
                    break
            if bad_c is not None:
                q = col_entries[bad_c][r] // v
                col_axpy(bad_c, c, -q)
                c = bad_c  # remainder lives there now; strictly smaller |pivot|
                continue
            bad_r = None
            for r2 in sorted(col_entries[c]):
                if r2 != r and col_entries[c][r2] % v != 0:
                    bad_r = r2
                    break
            if bad_r is not None:
                q = col_entries[c][bad_r] // v
                row_axpy(bad_r, r, -q)
                r = bad_r
                continue
            break
        v = col_entries[c][r]
        # clear the pivot row by exact column operations
        for c2 in sorted(row_cols[r]):
            if c2 == c:
                continue
            q = col_entries[c2][r] // v
            col_axpy(c2, c, -q)
            if c2 in col_entries and r in col_entries[c2]:
                raise InternalCheckError("pivot row not cleared; divisibility bookkeeping bug")
        # remaining pivot-column entries die by row operations that touch
        # nothing else (row r is now zero outside the pivot)
        for r2 in list(col_entries[c]):
            if r2 != r:
                row_cols[r2].discard(c)
                if not row_cols[r2]:
                    del row_cols[r2]
        row_cols[r].discard(c)
        if not row_cols[r]:
            del row_cols[r]
        del col_entries[c]
        diag.append(abs(v))
    return _divisor_chain(diag)


def _divisor_chain(diag: list[int]) -> tuple[int, ...]:
    ones = sum(1 for x in diag if x == 1)
    rest = sorted(x for x in diag if x != 1)
    changed = True
    while changed:
        changed = False
        for i in range(len(rest)):
            for j in range(i + 1, len(rest)):
                a, b = rest[i], rest[j]
                if b % a != 0:
                    g = gcd(a, b)
                    rest[i], rest[j] = g, a * b // g
                    changed = True
        if changed:
            rest.sort()
    return (1,) * ones + tuple(rest)


def verify_chain_axiom(complex: CubicalComplex) -> bool:
    """True iff boundary-of-boundary vanishes over the integers everywhere."""
    if complex.dim < 2:
        return True
    for d in range(2, complex.dim + 1):
        ptr_hi, rows_hi, signs_hi = complex.boundary_csc(d)
        ptr_lo, rows_lo, signs_lo = complex.boundary_csc(d - 1)
        scratch = np.empty(4 * d * d + 64, dtype=np.int64)
        ok = _kernels.chain_axiom_holds(
            ptr_hi,
            rows_hi,
            signs_hi.astype(np.int64),
            ptr_lo,
            rows_lo,
            signs_lo.astype(np.int64),
            len(complex.cells_by_dim[d - 2]),
            scratch,
        )
        if not ok:
            return False
    return True
