"""Labeled trees on vertex set {1, ..., m} and families of disjoint subtrees.

Edges are stored as ``(u, v)`` pairs with ``u < v``, sorted lexicographically;
edge ids are the 1-based positions in that order.  Every edge is oriented from
its smaller label (tail) to its larger label (head), which is what fixes the
signs of the boundary operator downstream.  Trees enumerate via Prüfer
sequences in lexicographic sequence order, so every iteration order in the
package is deterministic.
"""

from __future__ import annotations

import heapq
import itertools
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .errors import FamilyError, TreeError

__all__ = [
    "LabeledTree",
    "SubtreeFamily",
    "parse_tree",
    "parse_inline_tree",
    "serialize_tree",
    "prufer_decode",
    "prufer_encode",
    "enumerate_trees",
    "sample_trees",
    "validate_family",
    "parse_family_spec",
    "MAX_ENUM_VERTICES",
]

# Prüfer enumeration is all m^(m-2) trees; 8 vertices = 262144 trees is the
# largest exhaustive sweep that stays desk-scale.
MAX_ENUM_VERTICES = 8


@dataclass(frozen=True)
class LabeledTree:
    """A tree on vertices 1..m with canonically ordered, oriented edges.

    Construction validates everything: exactly m-1 edges, labels in range,
    no self-loops or duplicates, connected (hence acyclic).  Instances are
    immutable and safe to share.
    """

    m: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or self.m < 1:
            raise TreeError(f"vertex count must be a positive integer, got {self.m!r}")
        if len(self.edges) != self.m - 1:
            raise TreeError(
                f"a tree on {self.m} vertices needs {self.m - 1} edges, got {len(self.edges)}"
            )
        seen = set()
        for edge in self.edges:
            u, v = edge
            if not (1 <= u < v <= self.m):
                if u == v:
                    raise TreeError(f"self-loop at vertex {u}")
                raise TreeError(f"edge {edge} out of range for m={self.m} or not (u < v)")
            if edge in seen:
                raise TreeError(f"duplicate edge {edge}")
            seen.add(edge)
        if tuple(sorted(self.edges)) != self.edges:
            raise TreeError("edges not in canonical lexicographic order; use from_edges()")
        # m-1 distinct edges: connected <=> acyclic <=> tree.
        if self.m > 1:
            reached = {1}
            frontier = [1]
            adj = {}
            for u, v in self.edges:
                adj.setdefault(u, []).append(v)
                adj.setdefault(v, []).append(u)
            while frontier:
                x = frontier.pop()
                for y in adj.get(x, ()):
                    if y not in reached:
                        reached.add(y)
                        frontier.append(y)
            if len(reached) != self.m:
                raise TreeError(
                    "not a tree: graph is disconnected (equivalently, contains a cycle)"
                )

    @classmethod
    def from_edges(cls, m: int, edges: Iterable[tuple[int, int]]) -> "LabeledTree":
        """Build a tree from unordered vertex pairs; canonicalizes order."""
        canon = []
        for u, v in edges:
            if u > v:
                u, v = v, u
            canon.append((u, v))
        return cls(m, tuple(sorted(canon)))

    @cached_property
    def adjacency(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {v: [] for v in range(1, self.m + 1)}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edge_id(self, u: int, v: int) -> int:
        """1-based id of edge {u,v}; raises TreeError if absent."""
        if u > v:
            u, v = v, u
        try:
            return self._edge_index[(u, v)]
        except KeyError:
            raise TreeError(f"no edge {{{u},{v}}} in tree {self.inline()}") from None

    def edge(self, eid: int) -> tuple[int, int]:
        """(tail, head) of the 1-based edge id; tail < head."""
        if not 1 <= eid <= len(self.edges):
            raise TreeError(f"edge id {eid} out of range 1..{len(self.edges)}")
        return self.edges[eid - 1]

    @cached_property
    def _edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i + 1 for i, e in enumerate(self.edges)}

    def serialize(self) -> str:
        """Edge-list file format: one "u v" line per edge ("1" for the one-vertex tree)."""
        if self.m == 1:
            return "1\n"
        return "".join(f"{u} {v}\n" for u, v in self.edges)

    def inline(self) -> str:
        """Compact one-line form, e.g. "1-2,2-3,2-4"."""
        if self.m == 1:
            return "1"
        return ",".join(f"{u}-{v}" for u, v in self.edges)

    def __str__(self) -> str:
        return self.inline()


def parse_tree(text: str) -> LabeledTree:
    """Parse the edge-list file format.

    One edge per line as two whitespace-separated 1-based labels; lines
    starting with '#' are comments; blank lines are ignored.  A line with a
    single label declares an isolated vertex (only the one-vertex tree has
    one).  m is the maximum label seen and labels must cover 1..m.
    """
    edges: list[tuple[int, int]] = []
    max_label = 0
    seen_labels: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        try:
            labels = [int(f) for f in fields]
        except ValueError:
            raise TreeError(f"line {lineno}: expected integer labels, got {raw!r}")
        if len(labels) == 1:
            (u,) = labels
            if u < 1:
                raise TreeError(f"line {lineno}: vertex labels are 1-based, got {u}")
            seen_labels.add(u)
            max_label = max(max_label, u)
        elif len(labels) == 2:
            u, v = labels
            if u < 1 or v < 1:
                raise TreeError(f"line {lineno}: vertex labels are 1-based, got {raw!r}")
            if u == v:
                raise TreeError(f"line {lineno}: self-loop at vertex {u}")
            seen_labels.update((u, v))
            max_label = max(max_label, u, v)
            edges.append((min(u, v), max(u, v)))
        else:
            raise TreeError(f"line {lineno}: expected 'u v', got {raw!r}")
    if max_label == 0:
        raise TreeError("empty input: no edges or vertices")
    missing = set(range(1, max_label + 1)) - seen_labels
    if missing:
        raise TreeError(f"vertex labels do not cover 1..{max_label}: missing {sorted(missing)}")
    return LabeledTree.from_edges(max_label, edges)


def parse_inline_tree(text: str) -> LabeledTree:
    """Parse the compact CLI form "1-2,2-3,2-4" (or "1" for the 1-vertex tree)."""
    text = text.strip()
    if not text:
        raise TreeError("empty tree specification")
    lines = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            raise TreeError(f"empty edge in tree specification {text!r}")
        lines.append(chunk.replace("-", " "))
    return parse_tree("\n".join(lines))


def serialize_tree(tree: LabeledTree) -> str:
    return tree.serialize()


def prufer_decode(seq: Iterable[int], m: int) -> LabeledTree:
    """Decode a Prüfer sequence of length m-2 into a labeled tree on m vertices."""
    if m < 2:
        raise TreeError(f"Prüfer decoding needs m >= 2, got {m}")
    code = tuple(seq)
    if len(code) != m - 2:
        raise TreeError(f"Prüfer sequence for m={m} must have length {m - 2}, got {len(code)}")
    for x in code:
        if not 1 <= x <= m:
            raise TreeError(f"Prüfer entry {x} out of range 1..{m}")
    degree = [1] * (m + 1)
    for x in code:
        degree[x] += 1
    leaves = [v for v in range(1, m + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in code:
        v = heapq.heappop(leaves)
        edges.append((v, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u, v = heapq.heappop(leaves), heapq.heappop(leaves)
    edges.append((u, v))
    return LabeledTree.from_edges(m, edges)


def prufer_encode(tree: LabeledTree) -> tuple[int, ...]:
    """Inverse of prufer_decode: repeatedly strip the smallest leaf."""
    m = tree.m
    if m < 2:
        raise TreeError("Prüfer encoding needs m >= 2")
    adj = {v: set(ns) for v, ns in tree.adjacency.items()}
    leaves = [v for v in range(1, m + 1) if len(adj[v]) == 1]
    heapq.heapify(leaves)
    code = []
    for _ in range(m - 2):
        v = heapq.heappop(leaves)
        (w,) = adj[v]
        code.append(w)
        adj[w].remove(v)
        del adj[v]
        if len(adj[w]) == 1:
            heapq.heappush(leaves, w)
    return tuple(code)


def enumerate_trees(m: int) -> Iterator[LabeledTree]:
    """Yield all m^(m-2) labeled trees on m vertices, in Prüfer-lex order."""
    if not 1 <= m <= MAX_ENUM_VERTICES:
        raise TreeError(f"tree enumeration supports 1 <= m <= {MAX_ENUM_VERTICES}, got {m}")
    return _enumerate_trees(m)


def _enumerate_trees(m: int) -> Iterator[LabeledTree]:
    if m == 1:
        yield LabeledTree(1, ())
        return
    for code in itertools.product(range(1, m + 1), repeat=m - 2):
        yield prufer_decode(code, m)


def sample_trees(m: int, k: int, seed: int = 0) -> list[LabeledTree]:
    """k distinct trees on m vertices chosen uniformly by seeded PRNG.

    Sampling is over Prüfer-sequence indices without replacement, so the same
    (m, k, seed) always returns the same trees in the same order.
    """
    if m < 2:
        raise TreeError(f"tree sampling needs m >= 2, got {m}")
    total = m ** (m - 2)
    if not 1 <= k <= total:
        raise TreeError(f"cannot sample {k} distinct trees out of {total}")
    rng = random.Random(seed)
    indices = sorted(rng.sample(range(total), k))
    trees = []
    for idx in indices:
        code = []
        for _ in range(m - 2):
            idx, digit = divmod(idx, m)
            code.append(digit + 1)
        trees.append(prufer_decode(tuple(reversed(code)), m))
    return trees


@dataclass(frozen=True)
class SubtreeFamily:
    """Pairwise disjoint vertex sets, each inducing a connected subgraph.

    ``parts`` are stored sorted by minimum element (disjointness makes that
    unique).  The family of singletons {{v} : v in S} is the classical
    "support must contain S" constraint; larger parts generalize it to
    disjoint subtrees.  The empty family imposes no constraint.
    """

    tree: LabeledTree
    parts: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for part in self.parts:
            if not part:
                raise FamilyError("empty part in family")
            for v in part:
                if not 1 <= v <= self.tree.m:
                    raise FamilyError(f"vertex {v} out of range 1..{self.tree.m}")
                if v in seen:
                    raise FamilyError(f"parts are not pairwise disjoint: vertex {v} repeated")
                seen.add(v)
            if not _induces_connected(self.tree, part):
                raise FamilyError(
                    f"part {{{','.join(map(str, sorted(part)))}}} induces a disconnected subgraph"
                )
        mins = [min(p) for p in self.parts]
        if mins != sorted(mins):
            raise FamilyError("parts not in canonical order; use validate_family()")

    @property
    def k(self) -> int:
        """Number of parts."""
        return len(self.parts)

    @cached_property
    def support(self) -> frozenset[int]:
        out: set[int] = set()
        for part in self.parts:
            out |= part
        return frozenset(out)

    @property
    def is_singleton(self) -> bool:
        """True iff every part is a single vertex (the classical setting)."""
        return all(len(p) == 1 for p in self.parts)

    @classmethod
    def empty(cls, tree: LabeledTree) -> "SubtreeFamily":
        return cls(tree, ())

    @classmethod
    def singletons(cls, tree: LabeledTree, vertices: Iterable[int]) -> "SubtreeFamily":
        return validate_family(tree, [{v} for v in vertices])

    @classmethod
    def full(cls, tree: LabeledTree) -> "SubtreeFamily":
        """All of V(T) as singletons: the Str(T, n) constraint."""
        return cls.singletons(tree, range(1, tree.m + 1))

    def describe(self) -> str:
        """Canonical S-spec string; round-trips through parse_family_spec."""
        if not self.parts:
            return "none"
        if self.is_singleton and self.support == frozenset(range(1, self.tree.m + 1)):
            return "all"
        if self.is_singleton:
            return ",".join(str(min(p)) for p in self.parts)
        return ",".join("{" + ",".join(map(str, sorted(p))) + "}" for p in self.parts)

    def __str__(self) -> str:
        return self.describe()


def _induces_connected(tree: LabeledTree, part: frozenset[int]) -> bool:
    start = min(part)
    reached = {start}
    frontier = [start]
    while frontier:
        x = frontier.pop()
        for y in tree.adjacency[x]:
            if y in part and y not in reached:
                reached.add(y)
                frontier.append(y)
    return len(reached) == len(part)


def validate_family(tree: LabeledTree, parts: Iterable[Iterable[int]]) -> SubtreeFamily:
    """Validate and canonicalize a family of vertex sets into a SubtreeFamily."""
    frozen = [frozenset(p) for p in parts]
    for p in frozen:
        if not p:
            raise FamilyError("empty part in family")
    frozen.sort(key=lambda p: min(p))
    return SubtreeFamily(tree, tuple(frozen))


def parse_family_spec(tree: LabeledTree, spec: str) -> SubtreeFamily:
    """Parse the CLI S-spec grammar.

    "all" -> every vertex as a singleton; "none" -> the empty family;
    "1,3,4" -> listed vertices as singletons; "{1,2},{4}" -> explicit parts
    (disjoint subtrees).
    """
    text = spec.strip().lower()
    if text == "all":
        return SubtreeFamily.full(tree)
    if text == "none":
        return SubtreeFamily.empty(tree)
    if "{" in text:
        parts = []
        rest = text
        while rest:
            rest = rest.lstrip(", ")
            if not rest:
                break
            if not rest.startswith("{"):
                raise FamilyError(f"bad family spec {spec!r}: expected '{{' at {rest!r}")
            close = rest.find("}")
            if close < 0:
                raise FamilyError(f"bad family spec {spec!r}: unbalanced braces")
            body = rest[1:close].strip()
            if not body:
                raise FamilyError(f"bad family spec {spec!r}: empty part")
            try:
                parts.append({int(tok) for tok in body.split(",")})
            except ValueError:
                raise FamilyError(f"bad family spec {spec!r}: non-integer label in {body!r}")
            rest = rest[close + 1 :]
        return validate_family(tree, parts)
    try:
        vertices = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise FamilyError(f"bad family spec {spec!r}")
    if not vertices:
        raise FamilyError(f"bad family spec {spec!r}: no vertices")
    return SubtreeFamily.singletons(tree, vertices)
