import pytest

from cutset_lab.core.graph_core import build_window, boundary
from cutset_lab.core.graph_providers import make_provider
from cutset_lab.errors import ConfigError, MarginError
from cutset_lab.groups.group_cayley import LampState
from cutset_lab.groups.group_dl import DLVertex
from cutset_lab.qi import (
        boundary_growth_check,
        fiber_experiment,
        make_map,
        neighborhood_closeness_check,
        phi_map,
        transfer_noncloseness,
        verify_bilipschitz
)

O = (0, 0)


@pytest.fixture(scope = 'module')
def square_to_king(square, king_window):
    wG = build_window(square, 12)
    return make_map('identity-regenerate', square, king_window.provider), wG, king_window


def test_square_king_constant(square_to_king):
    qmap, wG, wH = square_to_king
    report = verify_bilipschitz(qmap, wG, wH, sample_radius = 3)
    assert report.m == 2
    assert report.pairs == 25 * 24 // 2
    x, y = report.worst_pair
    assert x != y


def test_uncertified_sample(square_to_king):
    qmap, wG, wH = square_to_king
    with pytest.raises(MarginError):
        verify_bilipschitz(qmap, wG, wH, sample = [((12, 0), (0, 12))])


def test_phi_of_the_origin(square_to_king):
    qmap, wG, wH = square_to_king
    result = phi_map(qmap, wH, [O], 2)
    assert result.image == frozenset([O])
    assert len(result.phi) == 25
    assert len(boundary(wH, result.phi)) == 24
    assert len(boundary(wG, [O])) == 4
    assert result.connected
    assert result.contains_origin
    with pytest.raises(ValueError):
        phi_map(qmap, wH, [O], 0)


def test_claimed_constant_travels_with_the_map(square, king_window):
    qmap = make_map('identity-regenerate', square, king_window.provider, m = 2)
    assert qmap.m == 2
    assert len(phi_map(qmap, king_window, [O]).phi) == 25
    report = boundary_growth_check(qmap, build_window(square, 12), king_window, [O, (1, 0)])
    assert report.m == 2
    assert report.ok
    unclaimed = make_map('identity-regenerate', square, king_window.provider)
    assert unclaimed.m is None
    with pytest.raises(ValueError):
        phi_map(unclaimed, king_window, [O])
    with pytest.raises(ConfigError):
        make_map('identity-regenerate', square, king_window.provider, m = 0)


def test_boundary_growth(square_to_king):
    qmap, wG, wH = square_to_king
    report = boundary_growth_check(qmap, wG, wH, [O, (1, 0)], 2)
    assert report.d == 8
    assert report.kappa_boundary == 6
    assert report.tau_extra == 5 * 6 - 2
    assert report.ok


def test_fibers(square_to_king):
    qmap, wG, wH = square_to_king
    report = fiber_experiment(qmap, wG, wH, 4, 2)
    assert (report.count, report.max_fiber) == (1, 1)
    report = fiber_experiment(qmap, wG, wH, 6, 2)
    assert report.count == 4
    assert sum(report.fiber_sizes) == 4


def test_transfer_is_vacuous_for_small_constants(square_to_king):
    qmap, wG, wH = square_to_king
    report = transfer_noncloseness(qmap, wG, wH, [O], 2)
    assert report.source_closeness == 1
    assert report.k == 0
    assert report.bound == -4
    assert report.vacuous
    assert report.precondition_ok
    assert report.holds
    assert report.cutset.K == frozenset((x, y) for x in range(-2, 3) for y in range(-2, 3))


def test_neighborhood_closeness(square_window):
    source, target, ok = neighborhood_closeness_check(square_window, [O, (1, 0)], 1)
    assert source == 2
    assert ok
    assert target >= source - 2


def test_map_lookup(square):
    dl = make_provider('dl', k = 2, n = 2)
    lamp = make_provider('lamplighter')
    forward = make_map('lamplighter-dl', dl, lamp)
    backward = make_map('lamplighter-dl', lamp, dl)
    v = DLVertex(1, ((0, 1),), ())
    assert forward.forward(v) == LampState(1, (0,))
    assert backward.inverse(v) == LampState(1, (0,))
    assert backward.forward(LampState(1, (0,))) == v
    with pytest.raises(ConfigError):
        make_map('lamplighter-dl', square, make_provider('king'))
    with pytest.raises(ConfigError):
        make_map('identity-regenerate', square, make_provider('hex'))
    with pytest.raises(ConfigError):
        make_map('identity-regenerate', square, lamp)
    with pytest.raises(ConfigError):
        make_map('shear', square, square)


def test_lamplighter_dl_constant():
    dl = make_provider('dl', k = 2, n = 2)
    lamp = make_provider('lamplighter')
    qmap = make_map('lamplighter-dl', dl, lamp)
    report = verify_bilipschitz(qmap, build_window(dl, 6), build_window(lamp, 12), sample_radius = 2)
    assert report.m >= 2
    assert report.pairs > 0
