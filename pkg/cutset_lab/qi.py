from typing import Callable, Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple
from dataclasses import dataclass, replace

import numpy as np

from .core.graph_core import GraphProvider, GraphWindow, VertexKey, bfs_distances, boundary, edge_boundary, escape_paths_exist, neighborhood
from .cutsets.cutset_closeness import SUBDIVISION, closeness
from .cutsets.cutset_enumerate import Cutset, enumerate_min_cutsets, neighborhood_cutset
from .errors import ConfigError, MarginError
from .groups.group_cayley import CayleyProvider
from .groups.group_dl import DLProvider, lamplighter_iso, lamplighter_iso_inverse
from .utils import log


@dataclass(frozen = True)
class QuasiIsometryMap:
    name: str
    forward: Callable[[VertexKey], VertexKey]
    inverse: Callable[[VertexKey], VertexKey]
    m: Optional[int] = None


class BilipschitzReport(NamedTuple):
    m: int
    pairs: int
    worst_pair: Optional[Tuple[VertexKey, VertexKey]]


class PhiResult(NamedTuple):
    image: FrozenSet[VertexKey]
    phi: FrozenSet[VertexKey]
    connected: bool
    contains_origin: bool


class BoundaryGrowthReport(NamedTuple):
    d: int
    m: int
    kappa_boundary: int
    image_boundary: int
    phi_boundary: int
    tau_extra: int
    image_bound_ok: bool
    phi_bound_ok: bool
    kappa_in_tau: bool
    tau_in_neighborhood: bool
    tau_extra_near_boundary: bool
    tau_extra_bound_ok: bool
    phi_connected: bool
    phi_contains_origin: bool

    @property
    def ok(self) -> bool:
        return all([
                self.image_bound_ok, self.phi_bound_ok, self.kappa_in_tau, self.tau_in_neighborhood,
                self.tau_extra_near_boundary, self.tau_extra_bound_ok, self.phi_connected, self.phi_contains_origin
        ])


class FiberReport(NamedTuple):
    n: int
    count: int
    fiber_sizes: List[int]
    max_fiber: int
    c_estimate: Optional[float]


class TransferReport(NamedTuple):
    k: int
    m: int
    radius: int
    source_closeness: int
    precondition_ok: bool
    cutset: Optional[Cutset]
    target_closeness: Optional[int]
    bound: float
    vacuous: bool
    holds: Optional[bool]


def _identity(v: VertexKey) -> VertexKey:
    return v


def identity_regenerate(source: GraphProvider, target: GraphProvider) -> QuasiIsometryMap:
    """The identity on group elements between two generating sets of one group."""
    if not isinstance(source, CayleyProvider) or not isinstance(target, CayleyProvider):
        raise ConfigError('identity-regenerate maps between two Cayley providers')
    if source.group.describe() != target.group.describe():
        raise ConfigError(f'identity-regenerate needs one group, got {source.group.name} and {target.group.name}')
    return QuasiIsometryMap('identity-regenerate', _identity, _identity)


def _is_binary_dl(p: GraphProvider) -> bool:
    return isinstance(p, DLProvider) and (p.k, p.n) == (2, 2)


def _is_lamplighter(p: GraphProvider) -> bool:
    return isinstance(p, CayleyProvider) and p.group.name == 'lamplighter'


def lamplighter_dl(source: GraphProvider, target: GraphProvider) -> QuasiIsometryMap:
    """
    The level/lamp correspondence between a lamplighter Cayley graph (any
    generating set) and DL(2, 2), in whichever direction the providers ask for.
    """
    if _is_lamplighter(source) and _is_binary_dl(target):
        return QuasiIsometryMap('lamplighter-dl', lamplighter_iso_inverse, lamplighter_iso)
    if _is_binary_dl(source) and _is_lamplighter(target):
        return QuasiIsometryMap('lamplighter-dl', lamplighter_iso, lamplighter_iso_inverse)
    raise ConfigError('lamplighter-dl maps between a lamplighter Cayley graph and DL(2, 2)')


QI_MAPS: Dict[str, Callable[[GraphProvider, GraphProvider], QuasiIsometryMap]] = {
        'identity-regenerate': identity_regenerate,
        'lamplighter-dl': lamplighter_dl
}


def make_map(name: str, source: GraphProvider, target: GraphProvider, m: Optional[int] = None) -> QuasiIsometryMap:
    """`m` is a claimed quasi-isometry constant; None leaves it to certification."""
    if name not in QI_MAPS:
        raise ConfigError(f'unknown quasi-isometry {name!r}; known: {sorted(QI_MAPS)}')
    if m is not None and m < 1:
        raise ConfigError(f'the quasi-isometry constant must be at least 1, got {m}')
    qmap = QI_MAPS[name](source, target)
    return qmap if m is None else replace(qmap, m = m)


def _constant(qmap: QuasiIsometryMap, m: Optional[int]) -> int:
    m = qmap.m if m is None else m
    if m is None:
        raise ValueError(f'no quasi-isometry constant given for {qmap.name}')
    if m < 1:
        raise ValueError(f'the quasi-isometry constant must be at least 1, got {m}')
    return m


def _images(qmap: QuasiIsometryMap, wH: GraphWindow, X: Iterable[VertexKey]) -> FrozenSet[VertexKey]:
    result = set()
    for v in X:
        u = qmap.forward(v)
        wH.require(u)
        result.add(u)
    return frozenset(result)


def verify_bilipschitz(
        qmap: QuasiIsometryMap,
        wG: GraphWindow,
        wH: GraphWindow,
        sample: Optional[Sequence[Tuple[VertexKey, VertexKey]]] = None,
        sample_radius: Optional[int] = None
) -> BilipschitzReport:
    """
    Smallest integer m with d_G / m <= d_H(f(x), f(y)) <= m d_G on the sample;
    by default every pair of distinct vertices in the ball of `sample_radius`.
    """
    if sample is None:
        r = wG.radius // 2 if sample_radius is None else sample_radius
        ball = sorted(wG.ball(r))
        sample = [(ball[i], ball[j]) for i in range(len(ball)) for j in range(i + 1, len(ball))]
    sample = [(x, y) for x, y in sample if x != y]
    if not sample:
        return BilipschitzReport(1, 0, None)
    dG = np.zeros(len(sample), dtype = np.int64)
    dH = np.zeros(len(sample), dtype = np.int64)
    for i, (x, y) in enumerate(sample):
        fx, fy = qmap.forward(x), qmap.forward(y)
        wH.require(fx)
        wH.require(fy)
        dG[i] = wG.distances_from(x)[y]
        dH[i] = wH.distances_from(fx)[fy]
        if not wG.distance_is_exact(x, y, int(dG[i])) or not wH.distance_is_exact(fx, fy, int(dH[i])):
            raise MarginError(f'distance between sampled pair {i} is not certified by the windows')
        assert qmap.inverse(fx) == x, f'{qmap.name} does not round-trip at {wG.provider.format_key(x)}'
    ratios = np.maximum(np.ceil(dH / dG), np.ceil(dG / dH)).astype(np.int64)
    worst = int(np.argmax(ratios))
    return BilipschitzReport(int(ratios[worst]), len(sample), sample[worst])


def _connected(adjacency: Dict[VertexKey, Sequence[VertexKey]], X: FrozenSet[VertexKey]) -> bool:
    if not X:
        return True
    blocked = frozenset(v for v in adjacency if v not in X)
    return len(bfs_distances(adjacency, [min(X)], blocked = blocked)) == len(X)


def phi_map(
        qmap: QuasiIsometryMap,
        wH: GraphWindow,
        kappa: Iterable[VertexKey],
        m: Optional[int] = None
) -> PhiResult:
    """φ(κ) = N_m(ι(κ)) in the target window, with its connectivity and origin checks."""
    m = _constant(qmap, m)
    image = _images(qmap, wH, kappa)
    phi = neighborhood(wH, image, m)
    return PhiResult(image, phi, _connected(wH.adjacency, phi), wH.origin in phi)


def boundary_growth_check(
        qmap: QuasiIsometryMap,
        wG: GraphWindow,
        wH: GraphWindow,
        kappa: Iterable[VertexKey],
        m: Optional[int] = None,
        d: Optional[int] = None
) -> BoundaryGrowthReport:
    kappa = frozenset(kappa)
    m = _constant(qmap, m)
    if d is None:
        d = max(wG.provider.degree_bound, wH.provider.degree_bound)
    result = phi_map(qmap, wH, kappa, m)
    kappa_boundary = boundary(wG, kappa)
    n = len(kappa_boundary)
    image_boundary = len(boundary(wH, result.image))
    phi_boundary = len(boundary(wH, result.phi))
    tau = set()
    for u in result.phi:
        v = qmap.inverse(u)
        wG.require(v)
        tau.add(v)
    tau = frozenset(tau)
    extra = tau - kappa
    near_kappa = neighborhood(wG, kappa, m * m)
    near_boundary = neighborhood(wG, kappa_boundary, m * m)
    return BoundaryGrowthReport(
            d = d,
            m = m,
            kappa_boundary = n,
            image_boundary = image_boundary,
            phi_boundary = phi_boundary,
            tau_extra = len(extra),
            image_bound_ok = image_boundary <= d ** m * n,
            phi_bound_ok = phi_boundary <= d ** (2 * m) * n,
            kappa_in_tau = kappa <= tau,
            tau_in_neighborhood = tau <= near_kappa,
            tau_extra_near_boundary = extra <= near_boundary,
            tau_extra_bound_ok = len(extra) <= d ** (m * m) * n,
            phi_connected = result.connected,
            phi_contains_origin = result.contains_origin
    )


def fiber_experiment(
        qmap: QuasiIsometryMap,
        wG: GraphWindow,
        wH: GraphWindow,
        n: int,
        m: Optional[int] = None,
        max_nodes: Optional[int] = None,
        verbose: bool = False
) -> FiberReport:
    """Groups the origin components of size-n minimal cutsets by their φ-image."""
    m = _constant(qmap, m)
    fibers: Dict[FrozenSet[VertexKey], int] = {}
    cutsets = enumerate_min_cutsets(wG, n, max_nodes = max_nodes)
    for c in cutsets:
        phi = phi_map(qmap, wH, c.K, m).phi
        fibers[phi] = fibers.get(phi, 0) + 1
    sizes = sorted(fibers.values(), reverse = True)
    top = sizes[0] if sizes else 0
    c_estimate = top ** (1 / n) if top and n > 0 else None
    log(f'fibers at n = {n}: {len(cutsets)} cutsets, {len(sizes)} images, max fiber {top}', verbose)
    return FiberReport(n, len(cutsets), sizes, top, c_estimate)


def neighborhood_closeness_check(
        w: GraphWindow,
        X: Iterable[VertexKey],
        n: int,
        convention: str = SUBDIVISION
) -> Tuple[int, int, bool]:
    """closeness(S_n) >= closeness(δX) - 2n for the neighborhood cutset S_n of X."""
    X = frozenset(X)
    source = closeness(w, edge_boundary(w, X), convention, kind = 'edge').value
    S = neighborhood_cutset(w, X, n)
    target = closeness(w, S.edges, convention, kind = 'edge').value
    return source, target, target >= source - 2 * n


def transfer_noncloseness(
        qmap: QuasiIsometryMap,
        wG: GraphWindow,
        wH: GraphWindow,
        X: Iterable[VertexKey],
        m: Optional[int] = None,
        k: Optional[int] = None,
        radius: Optional[int] = None,
        convention: str = SUBDIVISION
) -> TransferReport:
    """
    Carries a cutset δX that is not k-close in G to the cutset S separating
    N_radius(ι(X)) from infinity in H, which is not (k / m - 2 radius)-close.
    """
    m = _constant(qmap, m)
    X = frozenset(X)
    radius = m if radius is None else radius
    source = closeness(wG, edge_boundary(wG, X), convention, kind = 'edge').value
    k = source - 1 if k is None else k
    bound = k / m - 2 * radius
    if source <= k or not escape_paths_exist(wG, X):
        return TransferReport(k, m, radius, source, False, None, None, bound, bound <= 0, None)
    phi = neighborhood(wH, _images(qmap, wH, X), radius)
    S = neighborhood_cutset(wH, phi, 0)
    target = closeness(wH, S.edges, convention, kind = 'edge').value
    return TransferReport(k, m, radius, source, True, S, target, bound, bound <= 0, target > bound)
