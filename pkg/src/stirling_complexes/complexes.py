"""Cells of the cubical product T^n and the subcomplexes Str(T, S, n).

A cell is an n-tuple whose coordinates are vertices or edges of the tree;
its dimension is the number of edge coordinates.  A cell belongs to
Str(T, S, n) when every part of the family S has some coordinate lying
entirely inside it (for singleton parts: the support contains the part's
vertex).  Supports only grow under taking faces, so membership is closed
under boundary and the enumerated cell sets form honest subcomplexes.

Bulk storage is flat: each cell is an int64 code in base (2m-1), big-endian
over coordinates, vertex v -> digit v-1, edge id e -> digit m+e-1.  Integer
order on codes is exactly the canonical cell order (lexicographic on entries,
vertices before edges), so the per-dimension arrays are sorted and index
lookup is a binary search.  The Cell/Vertex/Edge classes are a thin
user-facing layer over those codes.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Union

import numpy as np

from . import _kernels
from .errors import DomainError, FamilyError, InternalCheckError, ResourceCapError, TreeError
from .trees import LabeledTree, SubtreeFamily

__all__ = [
    "Vertex",
    "Edge",
    "Cell",
    "CubicalComplex",
    "LastCoordinateReport",
    "DEFAULT_MAX_CELLS",
    "support",
    "is_member",
    "boundary",
    "enumerate_complex",
    "f_vector",
    "vertex_valencies",
    "decompose_last_coordinate",
]

DEFAULT_MAX_CELLS = 5_000_000

# Codes are packed base-(2m-1) into int64; (2m-1)^n must stay below this.
_CODE_LIMIT = 2**62


@dataclass(frozen=True)
class Vertex:
    """A vertex entry of a cell tuple (1-based tree label)."""

    id: int


@dataclass(frozen=True)
class Edge:
    """An edge entry of a cell tuple (1-based canonical edge id)."""

    id: int


Entry = Union[Vertex, Edge]


@dataclass(frozen=True)
class Cell:
    """One cube of T^n: an n-tuple of Vertex/Edge entries over a fixed tree."""

    tree: LabeledTree
    entries: tuple[Entry, ...]

    def __post_init__(self) -> None:
        for entry in self.entries:
            if isinstance(entry, Vertex):
                if not 1 <= entry.id <= self.tree.m:
                    raise TreeError(f"vertex {entry.id} out of range 1..{self.tree.m}")
            elif isinstance(entry, Edge):
                if not 1 <= entry.id <= len(self.tree.edges):
                    raise TreeError(f"edge id {entry.id} out of range")
            else:
                raise TypeError(f"cell entries must be Vertex or Edge, got {entry!r}")

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def dimension(self) -> int:
        return sum(1 for e in self.entries if isinstance(e, Edge))

    def support(self) -> frozenset[int]:
        return frozenset(e.id for e in self.entries if isinstance(e, Vertex))

    def code(self) -> int:
        m = self.tree.m
        base = 2 * m - 1
        out = 0
        for e in self.entries:
            out = out * base + (e.id - 1 if isinstance(e, Vertex) else m + e.id - 1)
        return out

    @classmethod
    def from_code(cls, tree: LabeledTree, n: int, code: int) -> "Cell":
        m = tree.m
        base = 2 * m - 1
        digits = []
        for _ in range(n):
            code, dig = divmod(code, base)
            digits.append(dig)
        entries: list[Entry] = []
        for dig in reversed(digits):
            entries.append(Vertex(dig + 1) if dig < m else Edge(dig - m + 1))
        return cls(tree, tuple(entries))

    def tokens(self) -> str:
        """Serialized form: "v<label>" / "e<u>-<v>" tokens joined by commas."""
        parts = []
        for e in self.entries:
            if isinstance(e, Vertex):
                parts.append(f"v{e.id}")
            else:
                u, v = self.tree.edge(e.id)
                parts.append(f"e{u}-{v}")
        return ",".join(parts)

    @classmethod
    def from_tokens(cls, tree: LabeledTree, text: str) -> "Cell":
        entries: list[Entry] = []
        for tok in text.strip().split(","):
            tok = tok.strip()
            if tok.startswith("v"):
                entries.append(Vertex(int(tok[1:])))
            elif tok.startswith("e"):
                u, v = tok[1:].split("-")
                entries.append(Edge(tree.edge_id(int(u), int(v))))
            else:
                raise TreeError(f"bad cell token {tok!r}")
        return cls(tree, tuple(entries))

    def __str__(self) -> str:
        return self.tokens()


def support(cell: Cell) -> frozenset[int]:
    """Set of tree vertices occurring as entries (edges contribute nothing)."""
    return cell.support()


def is_member(cell: Cell, family: SubtreeFamily) -> bool:
    """True iff every part has a coordinate lying entirely inside it.

    A vertex entry lies inside a part containing it; an edge entry lies
    inside a part containing both endpoints.  For singleton parts this is
    exactly "support contains S".
    """
    for part in family.parts:
        for entry in cell.entries:
            if isinstance(entry, Vertex):
                if entry.id in part:
                    break
            else:
                u, v = cell.tree.edge(entry.id)
                if u in part and v in part:
                    break
        else:
            return False
    return True


def boundary(cell: Cell) -> list[tuple[int, Cell]]:
    """Signed faces of a cell of dimension >= 1.

    The i-th edge coordinate (1-based, left to right) is replaced by its
    head with sign (-1)^(i-1) and by its tail with the opposite sign; faces
    are listed in coordinate order, head before tail.
    """
    if cell.dimension == 0:
        raise DomainError("boundary of a 0-cell")
    out: list[tuple[int, Cell]] = []
    i_edge = 0
    for k, entry in enumerate(cell.entries):
        if not isinstance(entry, Edge):
            continue
        i_edge += 1
        sign = 1 if i_edge % 2 == 1 else -1
        tail, head = cell.tree.edge(entry.id)
        for s, vert in ((sign, head), (-sign, tail)):
            entries = cell.entries[:k] + (Vertex(vert),) + cell.entries[k + 1 :]
            out.append((s, Cell(cell.tree, entries)))
    return out


def _entry_part_table(family: SubtreeFamily) -> np.ndarray:
    """entry code -> index of the part it lies entirely inside, or -1."""
    tree = family.tree
    m = tree.m
    table = np.full(2 * m - 1, -1, dtype=np.int64)
    for idx, part in enumerate(family.parts):
        for v in part:
            table[v - 1] = idx
        for eid, (u, v) in enumerate(tree.edges, start=1):
            if u in part and v in part:
                table[m + eid - 1] = idx
    return table


class CubicalComplex:
    """Str(T, S, n): per-dimension sorted arrays of member-cell codes.

    Immutable after construction (boundary matrices are cached lazily).
    Built via :func:`enumerate_complex`.
    """

    def __init__(
        self,
        tree: LabeledTree,
        family: SubtreeFamily,
        n: int,
        cells_by_dim: list[np.ndarray],
    ) -> None:
        self.tree = tree
        self.family = family
        self.n = n
        self.cells_by_dim = cells_by_dim
        self._boundary_cache: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    @property
    def dim(self) -> int:
        """Top cell dimension; -1 for the empty complex."""
        return len(self.cells_by_dim) - 1

    @property
    def is_empty(self) -> bool:
        return not self.cells_by_dim

    @property
    def total_cells(self) -> int:
        return sum(len(a) for a in self.cells_by_dim)

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.cells_by_dim)

    def cell(self, d: int, i: int) -> Cell:
        return Cell.from_code(self.tree, self.n, int(self.cells_by_dim[d][i]))

    def cell_index(self, cell: Cell) -> tuple[int, int]:
        """(dimension, index) of a cell; KeyError if not in the complex."""
        d = cell.dimension
        if not 0 <= d <= self.dim:
            raise KeyError(f"cell {cell.tokens()} not in complex")
        codes = self.cells_by_dim[d]
        code = cell.code()
        i = int(np.searchsorted(codes, code))
        if i >= len(codes) or codes[i] != code:
            raise KeyError(f"cell {cell.tokens()} not in complex")
        return d, i

    def __contains__(self, cell: Cell) -> bool:
        try:
            self.cell_index(cell)
            return True
        except KeyError:
            return False

    def iter_cells(self, d: int) -> Iterator[Cell]:
        for code in self.cells_by_dim[d]:
            yield Cell.from_code(self.tree, self.n, int(code))

    def boundary_csc(self, d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(col_ptr, row_idx, signs) of the integer matrix of the boundary
        operator from d-chains to (d-1)-chains, canonical bases both sides."""
        if not 1 <= d <= self.dim:
            raise DomainError(f"boundary dimension {d} out of range 1..{max(self.dim, 0)}")
        if d not in self._boundary_cache:
            m = self.tree.m
            base = 2 * m - 1
            tails = np.full(base, -1, dtype=np.int64)
            heads = np.full(base, -1, dtype=np.int64)
            for eid, (u, v) in enumerate(self.tree.edges, start=1):
                tails[m + eid - 1] = u - 1
                heads[m + eid - 1] = v - 1
            codes_d = self.cells_by_dim[d]
            codes_dm1 = self.cells_by_dim[d - 1]
            rows, signs, ok = _kernels.boundary_entries(
                codes_d, codes_dm1, self.n, base, m, tails, heads, d
            )
            if not ok:
                raise InternalCheckError(
                    "a face of a member cell is missing from the complex; enumeration bug"
                )
            col_ptr = np.arange(len(codes_d) + 1, dtype=np.int64) * (2 * d)
            self._boundary_cache[d] = (col_ptr, rows, signs)
        return self._boundary_cache[d]


def enumerate_complex(
    tree: LabeledTree,
    family: SubtreeFamily,
    n: int,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> CubicalComplex:
    """Enumerate Str(T, S, n) by pruned depth-first search.

    Empty complex when n < number of parts.  Raises ResourceCapError if more
    than max_cells member cells would be produced.
    """
    if family.tree is not tree and family.tree != tree:
        raise FamilyError("family belongs to a different tree")
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    k = family.k
    if n < k:
        return CubicalComplex(tree, family, n, [])
    if n == 0:
        # single 0-cell: the empty tuple (k must be 0 here)
        return CubicalComplex(tree, family, n, [np.zeros(1, dtype=np.int64)])
    m = tree.m
    base = 2 * m - 1
    if base**n >= _CODE_LIMIT:
        raise ResourceCapError(
            f"cell codes for m={m}, n={n} exceed 62-bit range; instance far beyond desk scale"
        )
    table = _entry_part_table(family)
    codes, dims, overflowed = _kernels.enumerate_cells(n, base, m, table, k, max_cells)
    if overflowed:
        raise ResourceCapError(
            f"cell cap exceeded: more than {max_cells} cells in Str({tree.inline()}, "
            f"{family.describe()}, {n})"
        )
    cells_by_dim = []
    if len(codes):
        top = int(dims.max())
        for d in range(top + 1):
            cells_by_dim.append(codes[dims == d].copy())
    return CubicalComplex(tree, family, n, cells_by_dim)


def f_vector(complex: CubicalComplex) -> tuple[int, ...]:
    """Per-dimension cell counts (f_0, ..., f_top); () for the empty complex."""
    return complex.f_vector()


def vertex_valencies(complex: CubicalComplex) -> Counter:
    """Histogram {valency: number of 0-cells} of the 1-skeleton."""
    if complex.dim < 1:
        raise DomainError("vertex_valencies needs a complex of dimension >= 1")
    _, rows, _ = complex.boundary_csc(1)
    valency = np.zeros(len(complex.cells_by_dim[0]), dtype=np.int64)
    np.add.at(valency, rows, 1)
    return Counter(int(x) for x in valency)


@dataclass(frozen=True)
class LastCoordinateReport:
    """Exact bookkeeping for the last-coordinate decomposition.

    Cells of Str(T, S, n) are partitioned by their last entry.  For every
    vertex v, the piece {c_n = v} matches Str(T, S \\ {v}, n-1) cell-for-cell;
    for every edge e, the piece {c_n = e} matches Str(T, S, n-1).  The
    cylinder over e additionally collects the cells whose last entry is an
    endpoint of e repeated earlier in the tuple; its size equals
    |Str(T,S,n-1)| + |Str(T,S+{u},n-1)| + |Str(T,S+{w},n-1)|, which is
    3 * |Str(T,S,n-1)| whenever both endpoints already lie in S.

    Each mapping value is (observed count, expected count).
    """

    tree: LabeledTree
    family: SubtreeFamily
    n: int
    total_cells: int
    vertex_pieces: dict[int, tuple[int, int]]
    edge_pieces: dict[int, tuple[int, int]]
    cylinders: dict[int, tuple[int, int]]
    cylinder_literal_3x: dict[int, bool]

    @property
    def partition_ok(self) -> bool:
        pieces = sum(c for c, _ in self.vertex_pieces.values())
        pieces += sum(c for c, _ in self.edge_pieces.values())
        return pieces == self.total_cells

    @property
    def passed(self) -> bool:
        checks = [c == e for c, e in self.vertex_pieces.values()]
        checks += [c == e for c, e in self.edge_pieces.values()]
        checks += [c == e for c, e in self.cylinders.values()]
        checks.append(self.partition_ok)
        return all(checks)


def decompose_last_coordinate(
    tree: LabeledTree,
    family: SubtreeFamily,
    n: int,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> LastCoordinateReport:
    """Partition Str(T, S, n) by last coordinate and verify the piece counts.

    Requires a singleton family (the classical setting) and n >= k + 1.
    Every expected count is produced by an independent enumeration of the
    corresponding (n-1)-coordinate complex.
    """
    if not family.is_singleton:
        raise DomainError("decompose_last_coordinate needs a singleton family")
    if n < family.k + 1:
        raise DomainError(f"decompose_last_coordinate needs n >= k+1 = {family.k + 1}, got {n}")
    complex = enumerate_complex(tree, family, n, max_cells)
    m = tree.m
    base = 2 * m - 1
    counts = np.zeros(base, dtype=np.int64)
    with_repeat = np.zeros(max(m, 1), dtype=np.int64)
    for codes in complex.cells_by_dim:
        c, w = _kernels.last_coordinate_counts(codes, n, base, m)
        counts += c
        with_repeat += w

    sup = family.support

    def smaller_family(drop: int) -> SubtreeFamily:
        return SubtreeFamily.singletons(tree, sorted(sup - {drop}))

    def larger_family(add: int) -> SubtreeFamily:
        return SubtreeFamily.singletons(tree, sorted(sup | {add}))

    base_total = enumerate_complex(tree, family, n - 1, max_cells).total_cells
    vertex_pieces = {}
    grown_totals = {}
    for v in range(1, m + 1):
        fam_v = smaller_family(v) if v in sup else family
        expected = enumerate_complex(tree, fam_v, n - 1, max_cells).total_cells
        vertex_pieces[v] = (int(counts[v - 1]), expected)
        if v in sup:
            grown_totals[v] = base_total
        else:
            grown_totals[v] = enumerate_complex(tree, larger_family(v), n - 1, max_cells).total_cells
    edge_pieces = {}
    cylinders = {}
    literal = {}
    for eid, (u, w) in enumerate(tree.edges, start=1):
        edge_pieces[eid] = (int(counts[m + eid - 1]), base_total)
        observed = int(counts[m + eid - 1] + with_repeat[u - 1] + with_repeat[w - 1])
        expected = base_total + grown_totals[u] + grown_totals[w]
        cylinders[eid] = (observed, expected)
        literal[eid] = u in sup and w in sup
        if literal[eid] and expected != 3 * base_total:
            raise InternalCheckError("cylinder bookkeeping is inconsistent")
    return LastCoordinateReport(
        tree=tree,
        family=family,
        n=n,
        total_cells=complex.total_cells,
        vertex_pieces=vertex_pieces,
        edge_pieces=edge_pieces,
        cylinders=cylinders,
        cylinder_literal_3x=literal,
    )
