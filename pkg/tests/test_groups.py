import random

import pytest
from hypothesis import given, strategies as st

from cutset_lab.core.graph_core import build_window
from cutset_lab.core.graph_providers import make_provider
from cutset_lab.cutsets.cutset_closeness import closeness
from cutset_lab.cutsets.cutset_enumerate import is_minimal_cutset
from cutset_lab.errors import ConfigError, MarginError, WrongParametersError
from cutset_lab.groups.group_cayley import (
        FreeGroup,
        GeneratingSet,
        IntegerLattice,
        Lamplighter,
        LampState,
        cayley_provider,
        preset_generators,
        translation_is_automorphism,
        word_to_element
)
from cutset_lab.groups.group_dl import DLProvider, DLVertex, build_Hk, dl_provider, lamplighter_iso, lamplighter_iso_inverse

seeds = st.integers(min_value = 0, max_value = 2 ** 32 - 1)


def test_lattice_words():
    group = IntegerLattice(2)
    assert group.parse_word('xxY') == (2, -1)
    with pytest.raises(ConfigError):
        group.parse_word('z')


def test_free_group_reduces():
    group = FreeGroup(2)
    assert group.parse_word('abBA') == ()
    assert group.format_element(group.parse_word('abA')) == 'abA'
    assert group.inverse(group.parse_word('ab')) == group.parse_word('BA')


def test_lamplighter_products():
    group = Lamplighter()
    t, l = group.primitive('t'), group.primitive('l')
    assert group.multiply(t, l) == LampState(1, (1,))
    gens = preset_generators(group)
    assert word_to_element(group, gens, gens.parse('t,l,t')) == LampState(2, (1,))
    assert group.multiply(l, l) == group.identity()
    assert group.format_element(LampState(2, (1,))) == '2|1'


@pytest.mark.parametrize('group', [IntegerLattice(3), FreeGroup(3), Lamplighter()], ids = lambda g: g.name)
@given(seed = seeds)
def test_group_axioms(group, seed):
    rng = random.Random(seed)
    a, b, c = (group.random_element(rng) for _ in range(3))
    e = group.identity()
    assert group.multiply(group.multiply(a, b), c) == group.multiply(a, group.multiply(b, c))
    assert group.multiply(a, group.inverse(a)) == e
    assert group.multiply(group.inverse(a), a) == e
    assert group.multiply(e, a) == a


def test_generating_set_checks():
    group = IntegerLattice(2)
    with pytest.raises(ValueError):
        GeneratingSet(group, [(1, 0)])
    with pytest.raises(ValueError):
        GeneratingSet(group, [(0, 0)])
    with pytest.raises(ValueError):
        GeneratingSet(group, [(1, 0), (-1, 0)], names = ['a', 'a'])
    gens = preset_generators(group)
    assert gens.parse('E, N') == [0, 1]
    assert gens.inverse_index(gens.index_of('E')) == gens.index_of('W')
    with pytest.raises(ConfigError):
        gens.parse(['Q'])
    with pytest.raises(ConfigError):
        preset_generators(group, 'hexagonal')


def test_custom_lamplighter_generators():
    p = make_provider('lamplighter', generators = ['t', 'T', 'l', 'tl', 'lT'])
    assert p.degree_bound == 5
    assert p.gens.names == ('t', 'T', 'l', 'tl', 'lT')


def test_translations_are_automorphisms(square_window):
    assert translation_is_automorphism(square_window, (1, 0))
    assert translation_is_automorphism(square_window, (3, -2))
    w = build_window(make_provider('lamplighter'), 5)
    assert translation_is_automorphism(w, LampState(1, (0,)))


def test_dl_degrees():
    assert len(DLProvider(2, 2).neighbors(DLProvider(2, 2).origin)) == 4
    p = DLProvider(2, 3)
    assert len(p.neighbors(p.origin)) == 5
    assert p.degree_bound == 5
    with pytest.raises(ConfigError):
        make_provider('dl', k = 1, n = 2)


def test_dl_adjacency_is_symmetric():
    p = DLProvider(2, 3)
    w = build_window(p, 4)
    for v in w.vertices:
        for u in p.neighbors(v):
            assert v in p.neighbors(u)
        levels = sorted(u.level - v.level for u in p.neighbors(v))
        assert levels == [-1] * 3 + [1] * 2


def test_dl_is_the_lamplighter_graph():
    dl = DLProvider(2, 2)
    lamp = make_provider('lamplighter', generators = 'dl')
    w = build_window(dl, 4)
    for v in w.vertices:
        g = lamplighter_iso(v)
        assert lamplighter_iso_inverse(g) == v
        assert { lamplighter_iso(u) for u in dl.neighbors(v) } == set(lamp.neighbors(g))


def test_lamplighter_iso_example():
    v = DLVertex(1, ((0, 1),), ())
    assert lamplighter_iso(v) == LampState(1, (0,))
    with pytest.raises(WrongParametersError):
        lamplighter_iso(v, 2, 3)


@pytest.fixture(scope = 'module')
def dl_window():
    return build_window(DLProvider(2, 2), 10)


@pytest.mark.parametrize('k', [1, 2])
def test_hk_family(dl_window, k):
    fam = build_Hk(k, dl_window)
    assert len(fam.H) == (k + 1) * 2 ** k
    assert len(fam.C) == 4 * 2 ** k
    assert len(fam.A) == len(fam.B) == 2 ** k
    assert fam.distance_AB(dl_window) == k
    assert is_minimal_cutset(dl_window, fam.C).minimal
    assert closeness(dl_window, fam.C, kind = 'edge').value >= k - 1


def test_hk_outside_window():
    w = build_window(DLProvider(2, 2), 4)
    with pytest.raises(MarginError):
        build_Hk(3, w)


def test_direct_provider_constructors():
    group = IntegerLattice(2)
    w = build_window(cayley_provider(group, preset_generators(group)), 2)
    assert len(w) == 13
    assert len(build_window(make_provider('lattice', rank = 2), 2)) == 13

    p = dl_provider(2, 3)
    assert isinstance(p, DLProvider)
    assert p.degree_bound == 5
    w = build_window(p, 1)
    assert len(w) == 6
    assert len(w.adjacency[w.origin]) == 5
