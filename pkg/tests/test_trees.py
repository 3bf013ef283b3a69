"""Tree enumeration, Prüfer codes, parsing, and family validation.

Enumeration is checked against a brute-force oracle that filters every
(m-1)-subset of vertex pairs for connectivity, so the Prüfer machinery is
never trusted on its own word.
"""

import itertools

import pytest

from stirling_complexes import (
    FamilyError,
    LabeledTree,
    SubtreeFamily,
    TreeError,
    enumerate_trees,
    parse_family_spec,
    parse_inline_tree,
    parse_tree,
    prufer_decode,
    prufer_encode,
    sample_trees,
    serialize_tree,
    validate_family,
)


def brute_force_trees(m):
    """Every labeled tree on m vertices, as canonical edge tuples."""
    if m == 1:
        return {()}
    pairs = list(itertools.combinations(range(1, m + 1), 2))
    found = set()
    for subset in itertools.combinations(pairs, m - 1):
        parent = list(range(m + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        merged = 0
        for u, w in subset:
            ru, rw = find(u), find(w)
            if ru != rw:
                parent[ru] = rw
                merged += 1
        if merged == m - 1:
            found.add(tuple(sorted(subset)))
    return found


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_enumerate_trees_matches_brute_force(m):
    trees = list(enumerate_trees(m))
    assert len(trees) == max(1, m ** (m - 2))
    assert {t.edges for t in trees} == brute_force_trees(m)
    # no duplicates
    assert len({t.edges for t in trees}) == len(trees)


def test_enumerate_trees_rejects_bad_m():
    with pytest.raises(TreeError):
        enumerate_trees(0)
    with pytest.raises(TreeError):
        enumerate_trees(9)


def test_prufer_textbook_example():
    # the sequence (2, 2) codes the star with center 2 on four vertices
    tree = prufer_decode((2, 2), 4)
    assert tree.edges == ((1, 2), (2, 3), (2, 4))
    assert prufer_encode(tree) == (2, 2)


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_prufer_bijection_exhaustive(m):
    seen = set()
    for seq in itertools.product(range(1, m + 1), repeat=m - 2):
        tree = prufer_decode(seq, m)
        assert prufer_encode(tree) == seq
        seen.add(tree.edges)
    assert len(seen) == m ** (m - 2)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_prufer_round_trip_from_trees(m):
    for tree in enumerate_trees(m):
        assert prufer_decode(prufer_encode(tree), m) == tree


def test_tree_validation():
    with pytest.raises(TreeError):
        LabeledTree.from_edges(3, [(1, 2), (1, 2)])  # duplicate edge
    with pytest.raises(TreeError):
        LabeledTree.from_edges(3, [(1, 1), (2, 3)])  # self-loop
    with pytest.raises(TreeError):
        LabeledTree.from_edges(4, [(1, 2), (3, 4), (1, 3), (2, 4)])  # too many edges
    with pytest.raises(TreeError):
        LabeledTree.from_edges(4, [(1, 2), (2, 3)])  # too few edges
    with pytest.raises(TreeError):
        LabeledTree.from_edges(3, [(1, 2), (4, 5)])  # label out of range


def test_tree_accessors():
    tree = LabeledTree.from_edges(4, [(2, 1), (2, 3), (4, 2)])
    assert tree.edges == ((1, 2), (2, 3), (2, 4))  # canonicalized
    assert tree.degree(2) == 3
    assert tree.degree(1) == 1
    assert sorted(tree.adjacency[2]) == [1, 3, 4]
    eid = tree.edge_id(3, 2)
    assert tree.edge(eid) == (2, 3)
    with pytest.raises(TreeError):
        tree.edge_id(1, 3)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_serialize_parse_round_trip(m):
    for tree in enumerate_trees(m):
        assert parse_tree(serialize_tree(tree)) == tree
        if m >= 2:
            assert parse_inline_tree(tree.inline()) == tree


def test_parse_tree_tolerates_comments_and_blanks():
    text = "# a path on three vertices\n\n1 2\n  2 3\n# done\n"
    tree = parse_tree(text)
    assert tree.edges == ((1, 2), (2, 3))


def test_parse_tree_bare_vertex_lines():
    assert parse_tree("1\n").m == 1
    # a bare label may restate a vertex already covered by an edge
    assert parse_tree("1 2\n2\n").edges == ((1, 2),)
    with pytest.raises(TreeError):
        parse_tree("1 2\n4\n")  # isolated vertex 4 leaves 3 missing / disconnects


@pytest.mark.parametrize(
    "text",
    ["", "1 2 3\n", "a b\n", "1 -2\n", "0 1\n", "1 3\n", "1 2\n1 2\n"],
)
def test_parse_tree_rejects_garbage(text):
    with pytest.raises(TreeError):
        parse_tree(text)


def test_sample_trees_deterministic():
    first = sample_trees(5, 10, seed=7)
    second = sample_trees(5, 10, seed=7)
    assert first == second
    assert len({t.edges for t in first}) == 10
    universe = {t.edges for t in enumerate_trees(5)}
    assert {t.edges for t in first} <= universe
    assert sample_trees(5, 10, seed=8) != first
    with pytest.raises(TreeError):
        sample_trees(4, 17)  # only 16 exist


def test_family_constructors():
    tree = LabeledTree.from_edges(4, [(1, 2), (2, 3), (3, 4)])
    full = SubtreeFamily.full(tree)
    assert full.k == 4
    assert full.is_singleton
    assert full.describe() == "all"
    some = SubtreeFamily.singletons(tree, [3, 1])
    assert some.parts == (frozenset({1}), frozenset({3}))  # canonical order
    assert some.describe() == "1,3"
    empty = SubtreeFamily.empty(tree)
    assert empty.k == 0
    assert empty.describe() == "none"
    parts = validate_family(tree, [{3, 4}, {1, 2}])
    assert parts.parts == (frozenset({1, 2}), frozenset({3, 4}))
    assert not parts.is_singleton
    assert parts.describe() == "{1,2},{3,4}"
    assert parts.support == frozenset({1, 2, 3, 4})


def test_family_validation():
    tree = LabeledTree.from_edges(4, [(1, 2), (2, 3), (3, 4)])
    with pytest.raises(FamilyError):
        validate_family(tree, [{1, 2}, {2, 3}])  # overlapping parts
    with pytest.raises(FamilyError):
        validate_family(tree, [{1, 3}])  # not connected in the tree
    with pytest.raises(FamilyError):
        validate_family(tree, [{0, 1}])  # label out of range
    with pytest.raises(FamilyError):
        validate_family(tree, [set()])  # empty part
    with pytest.raises(FamilyError):
        validate_family(tree, [{1}, {1}])  # duplicated vertex
    with pytest.raises(FamilyError):
        # the raw constructor additionally insists on canonical part order
        SubtreeFamily(tree, (frozenset({3, 4}), frozenset({1, 2})))


def test_family_spec_grammar():
    tree = LabeledTree.from_edges(4, [(1, 2), (2, 3), (3, 4)])
    assert parse_family_spec(tree, "all") == SubtreeFamily.full(tree)
    assert parse_family_spec(tree, "none") == SubtreeFamily.empty(tree)
    assert parse_family_spec(tree, "2,4").parts == (frozenset({2}), frozenset({4}))
    assert parse_family_spec(tree, "{1,2},{4}").parts == (frozenset({1, 2}), frozenset({4}))
    for spec in ["all", "none", "1,3", "{1,2},{3,4}"]:
        family = parse_family_spec(tree, spec)
        assert parse_family_spec(tree, family.describe()) == family
    for bad in ["", "0", "1,1", "{1,4}", "{1,2},{2,3}", "1;2", "{1,2", "banana"]:
        with pytest.raises(FamilyError):
            parse_family_spec(tree, bad)
