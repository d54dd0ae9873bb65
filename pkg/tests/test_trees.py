"""Tree families: counts, oracle agreement, insertion properties, keys."""
import json

import pytest

from wptrees.trees import (
    DoubleTree,
    Tree,
    brute_force_enumerate,
    canonical_key,
    enumerate_family,
    insert_boundary,
    insert_label,
    plane_embedding_count,
    tree_to_json,
    trees_on,
    validate_tree,
)


def keys(items):
    return {canonical_key(t) for t in items}


def test_two_three_n3_is_the_single_seed():
    family = enumerate_family("two-three", 3)
    assert len(family) == 1
    d = family[0]
    assert d.t1 == Tree.single(1)
    assert d.t2 == Tree.edge(2, 3)


def test_two_three_n4_count_is_five():
    assert len(enumerate_family("two-three", 4)) == 5
    assert len(brute_force_enumerate("two-three", 4)) == 5


def test_full_n4_is_two_single_edge_pairs():
    family = enumerate_family("full", 4)
    assert len(family) == 2
    partitions = {(d.t1.boundary, d.t2.boundary) for d in family}
    assert partitions == {((1, 3), (2, 4)), ((1, 4), (2, 3))}
    for d in family:
        assert len(d.t1.edges) == 1 and len(d.t2.edges) == 1


def test_graph_n3_single_element():
    assert len(enumerate_family("graph", 3)) == 1
    assert len(brute_force_enumerate("graph", 3)) == 1


@pytest.mark.parametrize("family", ["two-three", "graph", "htc", "full"])
@pytest.mark.parametrize("n", [3, 4, 5])
def test_enumerators_agree_with_oracle(family, n):
    assert keys(enumerate_family(family, n)) == keys(brute_force_enumerate(family, n))


def test_two_three_oracle_n6():
    assert keys(enumerate_family("two-three", 6)) == keys(brute_force_enumerate("two-three", 6))


def test_family_validation_and_bounds():
    for family in ("two-three", "graph", "htc", "full"):
        for n in (3, 4, 5):
            for item in enumerate_family(family, n):
                comps = (item,) if isinstance(item, Tree) else (item.t1, item.t2)
                for t in comps:
                    validate_tree(t)
        with pytest.raises(ValueError):
            enumerate_family(family, 2)
    with pytest.raises(ValueError):
        enumerate_family("nope", 4)
    with pytest.raises(ValueError):
        brute_force_enumerate("htc", 8)


def test_graph_is_isolated_union_full():
    for n in (3, 4, 5):
        isolated = {canonical_key(DoubleTree(Tree.single(1), t))
                    for t in trees_on(tuple(range(2, n + 1)))}
        full = keys(enumerate_family("full", n))
        graph = keys(enumerate_family("graph", n))
        assert isolated.isdisjoint(full)
        assert graph == isolated | full
        assert keys(enumerate_family("two-three", n)) <= graph


def test_insert_boundary_seed_children():
    seed = enumerate_family("two-three", 3)[0]
    children = insert_boundary(seed)
    assert len(children) == 5
    degree_of_new = sorted(
        c.component_of(4).degree(4) for c in children)
    # one subdivision (degree 2), three leaf attachments, one via a new
    # inner vertex (degree 1); no inner vertex exists, so no replacement.
    assert degree_of_new == [1, 1, 1, 1, 2]
    new_inner = [c for c in children
                 if c.component_of(4).neighbors(4) and c.component_of(4).neighbors(4)[0] < 0]
    assert len(new_inner) == 1


def test_insert_boundary_counts_match_oracle_n5():
    parents = enumerate_family("two-three", 4)
    children = [c for p in parents for c in insert_boundary(p)]
    assert len(children) == len(brute_force_enumerate("two-three", 5))
    # injectivity across parents: all children distinct
    assert len(keys(children)) == len(children)


def test_insert_label_requires_new_label():
    with pytest.raises(ValueError):
        insert_label(Tree.edge(2, 3), 2)


def test_canonical_key_ignores_inner_ids():
    a = Tree.make((2, 3, 4), [(2, -1), (3, -1), (4, -1)])
    b = Tree.make((2, 3, 4), [(2, -7), (3, -7), (4, -7)])
    assert canonical_key(a) == canonical_key(b)


def test_canonical_key_distinguishes_labelings():
    path_234 = Tree.make((2, 3, 4), [(2, 3), (3, 4)])
    path_243 = Tree.make((2, 3, 4), [(2, 4), (4, 3)])
    assert canonical_key(path_234) != canonical_key(path_243)


def test_canonical_key_deterministic():
    t = Tree.make((2, 3, 4, 5), [(2, -1), (3, -1), (-1, -2), (4, -2), (5, -2)])
    fresh = Tree.make((2, 3, 4, 5), [(2, -3), (3, -3), (-3, -4), (4, -4), (5, -4)])
    assert canonical_key(t) == canonical_key(fresh)


def test_plane_embedding_counts():
    star = Tree.make((2, 3, 4), [(2, -1), (3, -1), (4, -1)])
    assert plane_embedding_count(star) == 2
    path = Tree.make((2, 3, 4, 5), [(2, 3), (3, 4), (4, 5)])
    assert plane_embedding_count(path) == 1
    star4 = Tree.make((2, 3, 4, 5), [(2, -1), (3, -1), (4, -1), (5, -1)])
    assert plane_embedding_count(star4) == 6


def test_inner_vertex_count_bound():
    for n in (4, 5, 6):
        for t in enumerate_family("htc", n):
            assert len(t.inner_ids()) <= len(t.boundary) - 2


def test_tree_json_export():
    t = enumerate_family("htc", 4)[0]
    payload = tree_to_json(t)
    blob = json.dumps(payload)
    again = json.loads(blob)
    labels = [v["label"] for v in again["vertices"] if v["kind"] == "boundary"]
    assert labels == list(t.boundary)
    inner = [v["id"] for v in again["vertices"] if v["kind"] == "inner"]
    assert len(inner) == len(t.inner_ids())
    assert again["plane_embeddings"] == plane_embedding_count(t)
    assert len(again["edges"]) == len(t.edges)
    d = enumerate_family("two-three", 4)[0]
    payload = tree_to_json(d)
    assert set(payload) == {"t1", "t2", "key", "plane_embeddings"}
