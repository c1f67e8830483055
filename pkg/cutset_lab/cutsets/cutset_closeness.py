from typing import Any, Hashable, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, minimum_spanning_tree

from ..core.graph_core import GraphWindow, make_edge
from ..errors import MarginError
from ..utils import log
from .cutset_enumerate import Cutset, enumerate_min_cutsets_upto

ENDPOINT = 'endpoint'
SUBDIVISION = 'subdivision'
CONVENTIONS = (ENDPOINT, SUBDIVISION)

BRUTEFORCE_LIMIT = 20


class ClosenessReport(NamedTuple):
    value: int
    Y1: Tuple[Hashable, ...]
    Y2: Tuple[Hashable, ...]
    convention: str
    degenerate: bool = False


class SupClosenessRow(NamedTuple):
    n: int
    count: int
    max_closeness: Optional[int]
    witness: Optional[Cutset]
    running_max: Optional[int]


def _looks_like_edge(w: GraphWindow, y: Any) -> bool:
    return isinstance(y, tuple) and len(y) == 2 and y[0] in w and y[1] in w and make_edge(*y) in w.edge_index


def _resolve(w: GraphWindow, Y: Iterable[Hashable], kind: Optional[str]) -> Tuple[List[Hashable], str]:
    Y = list(Y)
    if not Y:
        raise ValueError('closeness of an empty set is undefined')
    if kind is None:
        if all(_looks_like_edge(w, y) for y in Y):
            kind = 'edge'
        elif all(y in w for y in Y):
            kind = 'vertex'
        else:
            raise ValueError('Y must consist of window edges or of window vertices')
    if kind == 'edge':
        Y = sorted({ make_edge(*y) for y in Y })
        for e in Y:
            if e not in w.edge_index:
                raise ValueError(f'{e} is not an edge of the window')
    elif kind == 'vertex':
        Y = sorted(set(Y))
        for v in Y:
            w.require(v)
    else:
        raise ValueError(f'unknown kind: {kind}')
    return Y, kind


def _pair_bounds(w: GraphWindow, u: Hashable, v: Hashable) -> Tuple[int, int]:
    # window distance and a certified lower bound for the distance in the full graph
    d = w.distances_from(u)[v]
    lower = max(abs(w.depth[u] - w.depth[v]), w.distance_lower_bound(u, v))
    return d, lower


def distance_matrices(
        w: GraphWindow,
        Y: Sequence[Hashable],
        kind: str,
        convention: str = SUBDIVISION
) -> Tuple[np.ndarray, np.ndarray]:
    """Upper (window) and certified lower distance matrices between the members of Y."""
    if convention not in CONVENTIONS:
        raise ValueError(f'unknown convention: {convention}')
    m = len(Y)
    upper = np.zeros((m, m), dtype = np.int64)
    lower = np.zeros((m, m), dtype = np.int64)
    for i in range(m):
        for j in range(i + 1, m):
            if kind == 'vertex':
                d, lb = _pair_bounds(w, Y[i], Y[j])
            else:
                pairs = [_pair_bounds(w, a, b) for a in Y[i] for b in Y[j]]
                d = min(p[0] for p in pairs)
                lb = min(p[1] for p in pairs)
                if convention == SUBDIVISION:
                    d += 1
                    lb += 1
            upper[i, j] = upper[j, i] = d
            lower[i, j] = lower[j, i] = lb
    return upper, lower


def _bottleneck(D: np.ndarray) -> Tuple[int, np.ndarray]:
    # scipy drops zero entries, so weights are shifted by one
    m = len(D)
    weights = D + 1
    np.fill_diagonal(weights, 0)
    tree = minimum_spanning_tree(csr_matrix(weights)).toarray()
    i, j = np.unravel_index(np.argmax(tree), tree.shape)
    value = int(tree[i, j]) - 1
    tree[i, j] = 0
    _, labels = connected_components(csr_matrix(tree), directed = False)
    assert len(set(labels.tolist())) == 2 or m < 2, 'removing the bottleneck edge must leave two parts'
    return value, labels


def closeness(
        w: GraphWindow,
        Y: Iterable[Hashable],
        convention: str = SUBDIVISION,
        kind: Optional[str] = None
) -> ClosenessReport:
    """
    C(Y): the largest, over bipartitions of Y, of the distance between the
    parts, read off as the bottleneck edge of a minimum spanning tree of the
    complete distance graph on Y.
    """
    Y, kind = _resolve(w, Y, kind)
    if len(Y) == 1:
        return ClosenessReport(0, tuple(Y), (), convention, degenerate = True)
    upper, lower = distance_matrices(w, Y, kind, convention)
    value, _ = _bottleneck(upper)
    certified, labels = _bottleneck(lower)
    if certified != value:
        raise MarginError(
                f'closeness not certified in the radius-{w.radius} window: window value {value}, lower bound {certified}'
        )
    side = labels[0]
    Y1 = tuple(y for y, l in zip(Y, labels) if l == side)
    Y2 = tuple(y for y, l in zip(Y, labels) if l != side)
    return ClosenessReport(value, Y1, Y2, convention)


def closeness_bruteforce(
        w: GraphWindow,
        Y: Iterable[Hashable],
        convention: str = SUBDIVISION,
        kind: Optional[str] = None
) -> ClosenessReport:
    """Every nontrivial bipartition, on window distances; |Y| <= 20."""
    Y, kind = _resolve(w, Y, kind)
    m = len(Y)
    if m > BRUTEFORCE_LIMIT:
        raise ValueError(f'brute-force closeness is limited to {BRUTEFORCE_LIMIT} elements, got {m}')
    if m == 1:
        return ClosenessReport(0, tuple(Y), (), convention, degenerate = True)
    upper, _ = distance_matrices(w, Y, kind, convention)
    best = -1
    best_side = None
    # the first element always stays in Y1
    for mask in range(1, 2 ** (m - 1)):
        side = np.array([False] + [bool(mask >> i & 1) for i in range(m - 1)])
        value = int(upper[np.ix_(~side, side)].min())
        if value > best:
            best = value
            best_side = side
    Y1 = tuple(y for y, s in zip(Y, best_side) if not s)
    Y2 = tuple(y for y, s in zip(Y, best_side) if s)
    return ClosenessReport(best, Y1, Y2, convention)


def sup_closeness(
        w: GraphWindow,
        n_max: int,
        convention: str = SUBDIVISION,
        max_nodes: Optional[int] = None,
        verbose: bool = False
) -> List[SupClosenessRow]:
    by_size = enumerate_min_cutsets_upto(w, n_max, max_nodes = max_nodes, verbose = verbose)
    rows = []
    running = None
    for n in range(1, n_max + 1):
        best = None
        witness = None
        for c in by_size.get(n, []):
            value = closeness(w, c.edges, convention, kind = 'edge').value
            if best is None or value > best:
                best = value
                witness = c
        if best is not None:
            running = best if running is None else max(running, best)
        rows.append(SupClosenessRow(n, len(by_size.get(n, [])), best, witness, running))
        log(f'n = {n}: {rows[-1].count} cutsets, max C = {best}, running max = {running}', verbose)
    return rows
