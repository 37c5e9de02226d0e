import pytest

from barnette.bases import path_graph
from barnette.family import (
    PeelError,
    bfs_levels,
    check_family_membership,
    layer_cycle,
    peel,
    peel_twice,
)
from barnette.planar_core import op_equivalent
from barnette.rewrite import apply_A
from helpers import icosahedron_with_degree_seven


def test_k4_levels(k4):
    lv = bfs_levels(k4)
    assert lv.level[k4.g] == 0
    assert lv.height == 1
    assert sorted(lv.level[v] for v in k4.vertices if v != k4.g) == [1, 1, 1]


def test_icosahedron_levels_and_stratum(ico):
    assert bfs_levels(ico).sizes() == [1, 5, 5, 1]
    fc = check_family_membership(ico)
    assert fc.member and fc.stratum == 1 and fc.height == 3
    assert len(layer_cycle(ico, 1).vertices) == 5
    top = layer_cycle(ico, 3)
    assert top.kind == "path" and top.vertices == (11,)


def test_degree_violation_rejected():
    fc = check_family_membership(icosahedron_with_degree_seven())
    assert not fc.member
    assert fc.stratum is None
    assert "degree 7" in fc.reason


def test_peel_inverts_A(small_members):
    for G in list(small_members.graphs.values())[:120]:
        assert op_equivalent(peel(apply_A(G)), G)


def test_peel_k4_is_rejected(k4):
    with pytest.raises(PeelError) as exc:
        peel(k4)
    assert exc.value.kind == "height"


def test_peel_icosahedron(ico):
    P = peel(ico)
    assert len(P) == 7
    assert check_family_membership(P).member
    assert sorted(P.neighbors(P.g)) == [6, 7, 8, 9, 10]


def test_peel_twice_of_double_wrap(k4):
    assert op_equivalent(peel_twice(apply_A(apply_A(k4))), k4)


def test_path_base_cannot_be_peeled():
    with pytest.raises(PeelError) as exc:
        peel(path_graph(3))
    assert exc.value.kind == "not-simple"


def test_lower_layers_are_cycles(small_members):
    for G in small_members.graphs.values():
        h = bfs_levels(G).height
        for k in range(1, h):
            c = layer_cycle(G, k)
            assert c.kind == "cycle"
            for i in range(len(c.vertices)):
                assert G.adjacent(c.vertices[i], c.vertices[(i + 1) % len(c.vertices)])


def test_adjacent_levels_differ_by_at_most_one(small_members):
    for G in list(small_members.graphs.values())[:100]:
        lv = bfs_levels(G).level
        assert all(abs(lv[u] - lv[v]) <= 1 for u, v in G.edges())


def test_stratum_matches_top_layer(small_members):
    for G in small_members.graphs.values():
        fc = check_family_membership(G)
        top = layer_cycle(G, fc.height)
        assert fc.stratum == (0 if top.kind == "cycle" else len(top.vertices))
