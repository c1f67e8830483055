from typing import Any, Dict, FrozenSet, List, NamedTuple, Tuple
from dataclasses import dataclass
import itertools

from ..core.graph_core import Edge, GraphProvider, GraphWindow, bfs_distances, edge_boundary, neighborhood
from ..errors import MarginError, WrongParametersError
from .group_cayley import LampState

# (position, label) pairs with nonzero labels, sorted by position
Labels = Tuple[Tuple[int, int], ...]


class DLVertex(NamedTuple):
    """
    A vertex (x, x') of DL(k, n) at level i. `a` holds the edge labels on the
    ray from x towards the end of T (edges between levels j and j + 1, j < i),
    `b` the labels on the ray from x' towards the end of T' (j >= i). The all
    zero ray is the reference path.
    """
    level: int
    a: Labels
    b: Labels


def _set_label(labels: Labels, position: int, label: int) -> Labels:
    rest = [(p, c) for p, c in labels if p != position]
    if label:
        rest.append((position, label))
    return tuple(sorted(rest))


def _drop_label(labels: Labels, position: int) -> Labels:
    return tuple((p, c) for p, c in labels if p != position)


def _format_labels(labels: Labels) -> str:
    return ','.join(str(p) if c == 1 else f'{p}:{c}' for p, c in labels)


class DLProvider(GraphProvider):
    """
    Diestel-Leader graph DL(k, n): T is (k + 1)-regular with children one
    level up, T' is (n + 1)-regular with children one level down. Every vertex
    has k neighbors one level up and n one level down.
    """
    def __init__(self, k: int = 2, n: int = 2) -> None:
        if k < 2 or n < 2:
            raise ValueError(f'DL(k, n) needs k, n >= 2, got ({k}, {n})')
        self.k = k
        self.n = n
        self.family = f'dl:{k},{n}'
        self.degree_bound = k + n
        self.origin = DLVertex(0, (), ())

    def neighbors(self, v: DLVertex) -> List[DLVertex]:
        i = v.level
        up = [DLVertex(i + 1, _set_label(v.a, i, c), _drop_label(v.b, i)) for c in range(self.k)]
        down = [DLVertex(i - 1, _drop_label(v.a, i - 1), _set_label(v.b, i - 1, c)) for c in range(self.n)]
        return up + down

    def format_key(self, v: DLVertex) -> str:
        return f'{v.level}|{_format_labels(v.a)}|{_format_labels(v.b)}'

    def describe(self) -> Dict[str, Any]:
        return { 'family': 'dl', 'k': self.k, 'n': self.n, 'degree_bound': self.degree_bound }


def dl_provider(k: int, n: int) -> DLProvider:
    return DLProvider(k, n)


def _check_binary(v: DLVertex, k: int, n: int) -> None:
    if (k, n) != (2, 2):
        raise WrongParametersError(f'the lamplighter isomorphism exists for DL(2, 2) only, got DL({k}, {n})')
    if any(c != 1 for _, c in v.a + v.b):
        raise WrongParametersError(f'{v} carries labels outside {{0, 1}}')


def lamplighter_iso(v: DLVertex, k: int = 2, n: int = 2) -> LampState:
    """Level is the lamplighter position; lamps left of it come from T, the rest from T'."""
    _check_binary(v, k, n)
    lamps = sorted(p for p, _ in v.a + v.b)
    return LampState(v.level, tuple(lamps))


def lamplighter_iso_inverse(g: LampState, k: int = 2, n: int = 2) -> DLVertex:
    if (k, n) != (2, 2):
        raise WrongParametersError(f'the lamplighter isomorphism exists for DL(2, 2) only, got DL({k}, {n})')
    a = tuple((p, 1) for p in g.lamps if p < g.position)
    b = tuple((p, 1) for p in g.lamps if p >= g.position)
    return DLVertex(g.position, a, b)


def level_of(v: DLVertex) -> int:
    return v.level


@dataclass(frozen = True)
class HkFamily:
    k: int
    H: FrozenSet[DLVertex]
    C: FrozenSet[Edge]
    A: FrozenSet[DLVertex]
    B: FrozenSet[DLVertex]
    A_edges: FrozenSet[Edge]
    B_edges: FrozenSet[Edge]

    def distance_AB(self, w: GraphWindow) -> int:
        dist = bfs_distances(w.adjacency, sorted(self.A))
        return min(dist[v] for v in self.B)


def _label_maps(positions: range, alphabet: int) -> List[Labels]:
    result = []
    for labels in itertools.product(range(alphabet), repeat = len(positions)):
        result.append(tuple((p, c) for p, c in zip(positions, labels) if c))
    return result


def build_Hk(k: int, w: GraphWindow) -> HkFamily:
    """
    H_k pairs the depth <= k offspring of o = (level 0, reference ray) in T with
    the depth <= k offspring of o' (level k on the reference ray) in T'. A_k
    are the pairs whose T-coordinate is a leaf of that subtree (level k), B_k
    those whose T'-coordinate is a leaf (level 0).
    """
    provider = w.provider
    if not isinstance(provider, DLProvider):
        raise WrongParametersError('H_k lives in a Diestel-Leader window')
    if k < 1:
        raise ValueError(f'k must be at least 1, got {k}')
    H = set()
    for j in range(k + 1):
        for a in _label_maps(range(0, j), provider.k):
            for b in _label_maps(range(j, k), provider.n):
                H.add(DLVertex(j, a, b))
    missing = [v for v in H if v not in w]
    if missing:
        raise MarginError(f'H_{k} does not fit in the radius-{w.radius} window')
    neighborhood(w, H, 1)
    H = frozenset(H)
    C = edge_boundary(w, H)
    A = frozenset(v for v in H if v.level == k)
    B = frozenset(v for v in H if v.level == 0)
    A_edges = frozenset(e for e in C if e[0] in A or e[1] in A)
    B_edges = frozenset(e for e in C if e[0] in B or e[1] in B)
    assert not (A_edges & B_edges), 'C_k edges must touch exactly one of A_k, B_k'
    assert A_edges | B_edges == C, 'every C_k edge touches A_k or B_k'
    return HkFamily(k, H, C, A, B, A_edges, B_edges)
