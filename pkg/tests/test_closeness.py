import pytest
from hypothesis import given, strategies as st

from cutset_lab.core.graph_core import build_window, edge_boundary
from cutset_lab.core.graph_providers import make_provider
from cutset_lab.cutsets.cutset_closeness import (
        ENDPOINT,
        SUBDIVISION,
        closeness,
        closeness_bruteforce,
        distance_matrices,
        sup_closeness
)
from cutset_lab.cutsets.cutset_enumerate import enumerate_min_cutsets_upto
from cutset_lab.errors import MarginError
from oracles import bipartition_closeness

O = (0, 0)


def test_star_at_origin(square_window):
    star = edge_boundary(square_window, [O])
    assert closeness(square_window, star, SUBDIVISION).value == 1
    assert closeness(square_window, star, ENDPOINT).value == 0


def test_domino(square_window):
    Y = edge_boundary(square_window, [O, (1, 0)])
    report = closeness(square_window, Y, SUBDIVISION, kind = 'edge')
    assert report.value == 2
    assert sorted([len(report.Y1), len(report.Y2)]) == [3, 3]
    assert closeness(square_window, Y, ENDPOINT).value == 1


def test_vertex_sets(square_window):
    assert closeness(square_window, [O, (3, 0)]).value == 3
    report = closeness(square_window, [O])
    assert report.value == 0
    assert report.degenerate
    with pytest.raises(ValueError):
        closeness(square_window, [])
    with pytest.raises(ValueError):
        closeness(square_window, [O, (1, 0)], convention = 'midpoint', kind = 'vertex')


def test_matches_bruteforce_on_all_small_cutsets(square_window):
    for cutsets in enumerate_min_cutsets_upto(square_window, 8).values():
        for c in cutsets:
            for convention in (ENDPOINT, SUBDIVISION):
                fast = closeness(square_window, c.edges, convention, kind = 'edge').value
                assert fast == closeness_bruteforce(square_window, c.edges, convention, kind = 'edge').value
            assert fast == bipartition_closeness(square_window, c.edges)


def test_hex_cutsets_against_bipartitions(hex_window):
    for cutsets in enumerate_min_cutsets_upto(hex_window, 6).values():
        for c in cutsets:
            assert closeness(hex_window, c.edges, kind = 'edge').value == bipartition_closeness(hex_window, c.edges)


@given(st.sets(st.tuples(st.integers(-2, 2), st.integers(-2, 2)), min_size = 2, max_size = 8))
def test_vertex_closeness_is_mst_bottleneck(square_window, Y):
    fast = closeness(square_window, sorted(Y), kind = 'vertex')
    slow = closeness_bruteforce(square_window, sorted(Y), kind = 'vertex')
    assert fast.value == slow.value
    upper, _ = distance_matrices(square_window, fast.Y1 + fast.Y2, 'vertex')
    k = len(fast.Y1)
    assert upper[:k, k:].min() == fast.value


def test_bruteforce_limit(square_window):
    Y = sorted(square_window.ball(3))
    assert len(Y) > 20
    with pytest.raises(ValueError):
        closeness_bruteforce(square_window, Y, kind = 'vertex')


def test_uncertified_closeness():
    w = build_window(make_provider('lattice'), 4)
    with pytest.raises(MarginError):
        closeness(w, [(4, 0), (-4, 0)], kind = 'vertex')


def test_sup_closeness_square(square_window):
    rows = sup_closeness(square_window, 8)
    assert [r.n for r in rows] == list(range(1, 9))
    assert rows[2].max_closeness is None
    assert rows[2].running_max is None
    assert rows[3].max_closeness == 1
    assert rows[4].running_max == 1
    assert rows[5].max_closeness == 2
    assert rows[-1].running_max == 2
    assert rows[5].witness.size == 6


def test_sup_closeness_hex(hex_window):
    rows = sup_closeness(hex_window, 6)
    assert [r.max_closeness for r in rows] == [None, None, 1, 2, 2, 3]
    assert rows[-1].running_max == 3
    # the claw: a vertex with all three neighbors, whose center carries no boundary edge
    assert len(rows[-1].witness.K) == 4
