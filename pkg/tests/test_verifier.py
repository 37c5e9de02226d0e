import pytest

from barnette.family import layer_cycle
from barnette.verifier import FLAVORS, compatibility_witnesses, verify_hamiltonian_set


def test_k4_edge_is_a_hamiltonian_set(k4):
    rep = verify_hamiltonian_set(k4, {1, 2})
    assert rep.is_hamiltonian and rep.pm
    assert rep.best_flavor() == "pm"
    assert all(rep.holds(f) for f in FLAVORS)


def test_single_vertex_misses_a_face(k4):
    rep = verify_hamiltonian_set(k4, {1})
    assert rep.failure == "missing-face"
    assert 1 not in rep.witnesses["missing_face"]
    assert rep.best_flavor() is None


def test_triangle_has_a_cycle(k4):
    rep = verify_hamiltonian_set(k4, {1, 2, 3})
    assert rep.failure == "cycle-in-induced"
    assert sorted(rep.witnesses["cycle"]) == [1, 2, 3]


def test_g_is_not_allowed(k4):
    assert verify_hamiltonian_set(k4, {0, 1}).failure == "contains-g"


def test_unknown_vertex(k4):
    rep = verify_hamiltonian_set(k4, {1, 99})
    assert rep.failure == "unknown-vertex" and not rep.compatible


def test_disconnected_set(ico):
    # the ring next to g and the far pole dominate every face but do not touch
    rep = verify_hamiltonian_set(ico, {1, 2, 3, 4, 5, 11})
    assert rep.failure == "disconnected"
    assert rep.witnesses["disconnected"] == (1, 11)


def test_empty_set(k4):
    assert not verify_hamiltonian_set(k4, set()).is_hamiltonian


def test_unknown_flavor(k4):
    with pytest.raises(ValueError):
        verify_hamiltonian_set(k4, {1, 2}).holds("sideways")


def test_witness_positions_follow_the_cycle(small_members):
    for G in list(small_members.graphs.values())[:60]:
        c = layer_cycle(G, 1).vertices
        S = {c[0]}
        for i in compatibility_witnesses(G, S, 2):
            assert c[i] not in S and G.degree(c[i]) <= 4
            assert c[(i + 2) % len(c)] not in S


def test_report_text(k4):
    lines = verify_hamiltonian_set(k4, {1, 2}).lines()
    assert lines[0] == "is_hamiltonian=true"
    assert "pm=true" in lines
