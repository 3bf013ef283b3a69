"""Shared brute-force reference implementations used as test oracles.

Everything here recomputes library results from first principles by
exhaustive search over small inputs, deliberately avoiding the package's
own enumeration and linear-algebra code paths.
"""

from itertools import product

from stirling_complexes import LabeledTree, Vertex


def reference_cells(tree, family, n):
    """All member cells as tagged entry tuples, by exhaustive product search.

    Entries are ("v", a) or ("e", u, w) with u < w; a tuple is kept when every
    part of the family owns at least one coordinate, meaning a vertex lying in
    the part or an edge with both endpoints in it.
    """
    entries = [("v", a) for a in range(1, tree.m + 1)]
    entries += [("e", u, w) for (u, w) in tree.edges]
    parts = [frozenset(part) for part in family.parts]
    kept = set()
    for combo in product(entries, repeat=n):
        if all(any(part.issuperset(ent[1:]) for ent in combo) for part in parts):
            kept.add(combo)
    return kept


def tagged(cell):
    """A library cell re-encoded in the tagged-tuple form of reference_cells."""
    out = []
    for ent in cell.entries:
        if isinstance(ent, Vertex):
            out.append(("v", ent.id))
        else:
            u, w = cell.tree.edge(ent.id)
            out.append(("e", u, w))
    return tuple(out)


def complex_cells(complex):
    """Every cell of an enumerated complex in tagged-tuple form."""
    cells = set()
    for d in range(complex.dim + 1):
        for cell in complex.iter_cells(d):
            cells.add(tagged(cell))
    return cells


def path_tree(m):
    return LabeledTree.from_edges(m, [(i, i + 1) for i in range(1, m)])


def star_tree(m, center=1):
    others = [v for v in range(1, m + 1) if v != center]
    return LabeledTree.from_edges(m, [(min(center, v), max(center, v)) for v in others])
