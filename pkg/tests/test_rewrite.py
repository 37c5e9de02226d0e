import pytest

from barnette.bases import path_graph, strip_graph
from barnette.census import exhaustive_family_census
from barnette.family import bfs_levels, check_family_membership, layer_cycle
from barnette.planar_core import canonical_code, op_equivalent
from barnette.rewrite import (
    EDGE_OPS,
    EDGE_PATTERNS,
    DerivationTrace,
    Pattern,
    RewriteError,
    Step,
    TraceError,
    apply_A,
    apply_edge_operation,
    children,
    close_under,
    decompose,
    edge_operation_sites,
    edge_site,
    enumerate_family,
    match_configuration,
    parse_trace,
    replace_patterns,
    replay,
    sigma_compatible,
    verify_trace,
)


def test_A_of_k4(k4):
    A = apply_A(k4)
    assert len(A) == 7
    assert bfs_levels(A).height == 2
    outer = layer_cycle(A, 1).vertices
    assert len(outer) == 3
    assert all(A.degree(v) == 5 for v in outer)


def test_B_adds_degree_three_vertex(k4):
    H = apply_edge_operation(k4, "B", 0)
    assert len(H) == 5
    new = max(H.vertices)
    assert H.degree(new) == 3 and H.adjacent(new, H.g)


def test_C_needs_level_two_apex(k4):
    with pytest.raises(RewriteError, match="level 2"):
        edge_site(k4, "C", 0)


def test_B_rejects_degree_five_ends(k4):
    A = apply_A(k4)
    with pytest.raises(RewriteError, match="degree"):
        apply_edge_operation(A, "B", 0)


def test_edge_index_out_of_range(k4):
    with pytest.raises(RewriteError, match="outside"):
        edge_site(k4, "B", 7)


def test_operation_patterns_are_sigma_compatible():
    for kind in EDGE_OPS:
        site, repl = EDGE_PATTERNS[kind]
        assert sigma_compatible(repl, site)


def test_pattern_with_clashing_faces_rejected():
    with pytest.raises(ValueError):
        Pattern.from_left_faces([(1, 2, 3), (1, 2, 4)], (1, 2, 3), 1)


def test_sigma_compatibility_needs_matching_marks():
    site, repl = EDGE_PATTERNS["C"]
    marked = Pattern(repl.rotation, repl.sigma, repl.d, frozenset({repl.sigma[0]}))
    assert not sigma_compatible(marked, site)


def test_replacement_by_hand_matches_operation(k4):
    A = apply_A(k4)
    site, repl = EDGE_PATTERNS["C"]
    seeds = edge_site(A, "C", 0)
    m = match_configuration(A, site, seeds)
    assert m is not None
    H, _ = replace_patterns(A, None, [(m, repl)])
    assert op_equivalent(H, apply_edge_operation(A, "C", 0))


def test_overlapping_configurations_rejected(k4):
    A = apply_A(k4)
    site, repl = EDGE_PATTERNS["C"]
    m = match_configuration(A, site, edge_site(A, "C", 0))
    with pytest.raises(RewriteError, match="overlap"):
        replace_patterns(A, None, [(m, repl), (m, repl)])


@pytest.mark.parametrize("text", [
    "",
    "step A\n",
    "start G 3\nstep X 1\n",
    "start G 3\nstep C\n",
    "start G 3\nstart G 4\n",
    "hello\n",
])
def test_malformed_traces(text):
    with pytest.raises(TraceError):
        parse_trace(text)


def test_trace_text_round_trip():
    tr = DerivationTrace("G", 3, (Step("A"), Step("C", 0), Step("C", 1)))
    assert parse_trace(tr.serialize()) == tr


def test_replay_of_base_names():
    assert op_equivalent(replay(parse_trace("start F 2\n")), path_graph(2))
    assert op_equivalent(replay(parse_trace("start G 5\n")), strip_graph(5))


def test_decompose_round_trip(small_members):
    for code, G in small_members.graphs.items():
        tr = decompose(G)
        assert canonical_code(replay(tr)) == code
        assert verify_trace(tr, G)[0]


def test_decompose_rejects_non_members():
    from helpers import icosahedron_with_degree_seven

    with pytest.raises(RewriteError, match="not in the family"):
        decompose(icosahedron_with_degree_seven())


def test_every_child_is_a_member(small_members):
    for G in list(small_members.graphs.values())[:150]:
        for step, H in children(G, 16):
            assert check_family_membership(H).member, step


def test_enumerator_matches_census_small():
    E = enumerate_family(12)
    assert set(E.graphs) == set(exhaustive_family_census(12))


def test_enumeration_does_not_depend_on_jobs():
    one = enumerate_family(13, jobs=1)
    two = enumerate_family(13, jobs=2)
    assert one.traces == two.traces


def test_height_filter():
    E = enumerate_family(12, height=2)
    assert E.graphs and all(bfs_levels(G).height == 2 for G in E.graphs.values())


def _sites_after_A(G, kind):
    AG = apply_A(G)
    return {canonical_code(apply_edge_operation(AG, kind, j, check=False)) for j in edge_operation_sites(AG, kind)}


def test_A_commutes_with_edge_operations(small_members):
    for G in small_members.graphs.values():
        for kind, bar in (("B", "Bbar"), ("C", "Cbar")):
            want = _sites_after_A(G, bar)
            for i in edge_operation_sites(G, kind):
                assert canonical_code(apply_A(apply_edge_operation(G, kind, i))) in want


def test_closure_of_wrapped_strip_six():
    A = apply_A(strip_graph(6))
    R = close_under([(DerivationTrace("G", 6, (Step("A"),)), A)], 10 ** 6, ("B", "C"))
    assert len(R.graphs) == 36
