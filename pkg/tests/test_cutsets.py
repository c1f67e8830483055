import pytest

from cutset_lab.core.graph_core import build_window, edge_boundary, make_edge
from cutset_lab.core.graph_providers import make_provider
from cutset_lab.cutsets.cutset_enumerate import (
        count_min_cutsets,
        enumerate_min_cutsets,
        enumerate_min_cutsets_upto,
        fit_growth_constant,
        is_minimal_cutset,
        is_minimal_xy_cutset,
        neighborhood_cutset
)
from cutset_lab.errors import MarginError, ResourceLimitError
from oracles import minimal_cutsets


def test_square_counts(square_window):
    by_size = enumerate_min_cutsets_upto(square_window, 8)
    assert { n: len(c) for n, c in by_size.items() } == { 1: 0, 2: 0, 3: 0, 4: 1, 5: 0, 6: 4, 7: 0, 8: 22 }
    only = by_size[4][0]
    assert only.K == frozenset([(0, 0)])
    assert only.exact
    assert only.inner_vertices == only.K
    assert len(only.outer_vertices) == 4


@pytest.mark.parametrize('family, params, R, n_max, size_max', [
        ('lattice', {}, 7, 8, 4),
        ('hex', {}, 8, 6, 6),
        ('tree', { 'degree': 3 }, 6, 6, 4),
        ('lamplighter', {}, 8, 8, 8),
        ('dl', { 'k': 2, 'n': 2 }, 7, 8, 8),
        ('lattice', { 'rank': 1 }, 6, 2, 9)
])
def test_enumeration_matches_oracle(family, params, R, n_max, size_max):
    w = build_window(make_provider(family, **params), R)
    expected = minimal_cutsets(w, n_max, size_max)
    found = [c for cutsets in enumerate_min_cutsets_upto(w, n_max).values() for c in cutsets]
    assert len(found) == len({ c.edges for c in found })
    assert { frozenset(c.edges): c.K for c in found } == expected


def test_tree_counts(tree_window):
    counts = count_min_cutsets(tree_window, 5).counts
    assert counts == { 1: 0, 2: 0, 3: 1, 4: 3, 5: 9 }


def test_z_counts():
    w = build_window(make_provider('lattice', rank = 1), 7)
    assert len(enumerate_min_cutsets(w, 2)) == 36


def test_sharding_partitions_the_search(square_window):
    whole = { c.edges for c in enumerate_min_cutsets(square_window, 8) }
    parts = [{ c.edges for c in enumerate_min_cutsets(square_window, 8, shard = s, shards = 3) } for s in range(3)]
    assert set().union(*parts) == whole
    assert sum(len(p) for p in parts) == len(whole)


def test_node_cap(square_window):
    with pytest.raises(ResourceLimitError):
        enumerate_min_cutsets(square_window, 8, max_nodes = 5)


def test_small_window_is_rejected():
    w = build_window(make_provider('lattice'), 1)
    with pytest.raises(MarginError):
        enumerate_min_cutsets(w, 4)


def test_fit_growth_constant():
    alpha, fit_range = fit_growth_constant({ 1: 0, 2: 4, 3: 8, 4: 16 })
    assert alpha == pytest.approx(2.0)
    assert fit_range == (2, 4)
    assert fit_growth_constant({ 4: 1 }) == (None, None)


def test_certificate(square_window):
    o = (0, 0)
    assert is_minimal_cutset(square_window, edge_boundary(square_window, [o])).minimal
    # the ring edges do not bound the origin component
    ring = [(x, y) for x in (-1, 0, 1) for y in (-1, 0, 1)]
    check = is_minimal_cutset(square_window, edge_boundary(square_window, ring) | edge_boundary(square_window, [o]))
    assert not check.minimal
    east = [make_edge(o, (1, 0))]
    check = is_minimal_cutset(square_window, east)
    assert not check.minimal
    assert check.reason == 'origin still reaches the boundary sphere'
    with pytest.raises(MarginError):
        is_minimal_cutset(square_window, [((10, 0), (9, 0))])


def test_xy_cutset(square_window):
    o = (0, 0)
    star = edge_boundary(square_window, [o])
    assert is_minimal_xy_cutset(square_window, star, o, (3, 0))
    assert not is_minimal_xy_cutset(square_window, list(star)[:3], o, (3, 0))
    with_extra = set(star) | { make_edge((5, 0), (6, 0)) }
    assert not is_minimal_xy_cutset(square_window, with_extra, o, (3, 0))


def test_neighborhood_cutset(square_window):
    o = (0, 0)
    assert neighborhood_cutset(square_window, [o], 0).size == 4
    plus = neighborhood_cutset(square_window, [o], 1)
    assert plus.size == 12
    assert len(plus.K) == 5
    with pytest.raises(ValueError):
        neighborhood_cutset(square_window, [(1, 0)], 1)
    with pytest.raises(ValueError):
        neighborhood_cutset(square_window, [o, (2, 0)], 1)


def test_neighborhood_cutset_swallows_holes(square_window):
    ring = [(x, y) for x in (2, 3, 4) for y in (-1, 0, 1) if (x, y) != (3, 0)]
    c = neighborhood_cutset(square_window, [(0, 0), (1, 0)] + ring, 0)
    assert (3, 0) in c.K
    assert len(c.K) == 11
    assert c.size == 16


def test_hexagon_cutset(hex_window):
    X = [(0, 0), (1, 0), (2, 0), (2, 1), (1, 1), (0, 1)]
    c = neighborhood_cutset(hex_window, X, 0)
    assert c.K == frozenset(X)
    assert c.size == 6
    assert is_minimal_cutset(hex_window, c.edges).minimal
