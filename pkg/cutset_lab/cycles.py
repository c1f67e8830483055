from typing import Any, Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple
from collections import deque
import random

from .core.graph_core import Edge, GraphWindow, VertexKey, bfs_distances, make_edge
from .cutsets.cutset_closeness import SUBDIVISION, ClosenessReport, closeness
from .cutsets.cutset_enumerate import Cutset, enumerate_min_cutsets_upto, is_minimal_xy_cutset
from .errors import (
        DecompositionUnreachableError,
        ExperimentAssertionError,
        MarginError,
        NoAvoidingPathError,
        NotFinitelyPresentedError,
        OddDegreeError,
        RelatorError
)
from .groups.group_cayley import CayleyProvider, word_to_element
from .utils import log


class BinaryEdgeVector:
    """An element of the mod 2 edge space of a window, as an int bitset over `edge_index`."""
    __slots__ = ('w', 'bits')

    def __init__(self, w: GraphWindow, bits: int = 0) -> None:
        self.w = w
        self.bits = bits

    @classmethod
    def from_edges(cls, w: GraphWindow, edges: Iterable[Edge]) -> 'BinaryEdgeVector':
        bits = 0
        for e in edges:
            bits ^= 1 << w.edge_index[make_edge(*e)]
        return cls(w, bits)

    @classmethod
    def from_walk(cls, w: GraphWindow, walk: Sequence[VertexKey]) -> 'BinaryEdgeVector':
        return cls.from_edges(w, zip(walk, walk[1:]))

    def __add__(self, other: 'BinaryEdgeVector') -> 'BinaryEdgeVector':
        assert self.w is other.w, 'edge vectors live in different windows'
        return BinaryEdgeVector(self.w, self.bits ^ other.bits)

    __sub__ = __add__

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, BinaryEdgeVector) and self.w is other.w and self.bits == other.bits

    def __hash__(self) -> int:
        return hash(self.bits)

    def __len__(self) -> int:
        return bin(self.bits).count('1')

    def __bool__(self) -> bool:
        return self.bits != 0

    def __repr__(self) -> str:
        return f'BinaryEdgeVector({len(self)} edges)'

    def edges(self) -> List[Edge]:
        result = []
        bits = self.bits
        while bits:
            low = bits & -bits
            result.append(self.w.edges[low.bit_length() - 1])
            bits ^= low
        return result

    def meets(self, edges: Iterable[Edge]) -> bool:
        return any(self.bits >> self.w.edge_index[make_edge(*e)] & 1 for e in edges)

    def odd_vertices(self) -> FrozenSet[VertexKey]:
        odd = set()
        for u, v in self.edges():
            odd ^= { u }
            odd ^= { v }
        return frozenset(odd)

    def vertices(self) -> FrozenSet[VertexKey]:
        return frozenset(x for e in self.edges() for x in e)

    def is_connected(self) -> bool:
        edges = self.edges()
        if not edges:
            return True
        adjacency: Dict[VertexKey, List[VertexKey]] = {}
        for u, v in edges:
            adjacency.setdefault(u, []).append(v)
            adjacency.setdefault(v, []).append(u)
        return len(bfs_distances(adjacency, [edges[0][0]])) == len(adjacency)


class CycleBasisSet:
    """Relator translates inside a window; spans the cycles the decomposition can reach."""
    def __init__(self, w: GraphWindow, cycles: Sequence[BinaryEdgeVector], t: int) -> None:
        self.w = w
        self.cycles: Tuple[BinaryEdgeVector, ...] = tuple(cycles)
        self.t = t
        self._pivots: Optional[Dict[int, Tuple[int, int]]] = None

    def __len__(self) -> int:
        return len(self.cycles)

    def _echelon(self) -> Dict[int, Tuple[int, int]]:
        # lowest set bit -> (reduced row, mask of the cycles summing to it)
        if self._pivots is None:
            pivots: Dict[int, Tuple[int, int]] = {}
            for i, c in enumerate(self.cycles):
                row = c.bits
                combo = 1 << i
                while row:
                    low = row & -row
                    if low not in pivots:
                        pivots[low] = (row, combo)
                        break
                    prow, pcombo = pivots[low]
                    row ^= prow
                    combo ^= pcombo
            self._pivots = pivots
        return self._pivots

    def solve(self, target: BinaryEdgeVector) -> Optional[List[int]]:
        pivots = self._echelon()
        row = target.bits
        combo = 0
        while row:
            low = row & -row
            if low not in pivots:
                return None
            prow, pcombo = pivots[low]
            row ^= prow
            combo ^= pcombo
        return [i for i in range(len(self.cycles)) if combo >> i & 1]


class CrossingWitness(NamedTuple):
    cycle: BinaryEdgeVector
    theta: BinaryEdgeVector
    P1: List[VertexKey]
    P2: List[VertexKey]
    K1: List[BinaryEdgeVector]
    K2: List[BinaryEdgeVector]
    edge_in_pi1: Edge
    edge_in_pi2: Edge
    endpoint_distance: int


class HalfTReport(NamedTuple):
    t: int
    bound: float
    checked: int
    max_closeness: Optional[int]
    ok: bool
    counterexample: Optional[Tuple[Cutset, ClosenessReport]]


def _cayley(w: GraphWindow) -> CayleyProvider:
    if not isinstance(w.provider, CayleyProvider):
        raise ValueError(f'relator cycles need a Cayley window, got {w.provider!r}')
    return w.provider


def relator_cycles(w: GraphWindow, relators: Sequence[Any]) -> CycleBasisSet:
    """
    Translates of every relator loop to every base vertex whose loop stays in
    the window, as mod 2 edge sets, deduplicated in base-vertex order. A
    relator is a list of generator names or a comma separated string.
    """
    provider = _cayley(w)
    group, gens = provider.group, provider.gens
    words = [gens.parse(r) for r in relators]
    for r, word in zip(relators, words):
        if word_to_element(group, gens, word) != group.identity():
            raise RelatorError(f'relator {r!r} does not evaluate to the identity')
    t = max((len(word) for word in words), default = 0)
    seen = set()
    cycles = []
    for v in w.vertices:
        for word in words:
            walk = [v]
            x = v
            for i in word:
                x = group.multiply(x, gens.elements[i])
                walk.append(x)
            if any(x not in w for x in walk):
                continue
            c = BinaryEdgeVector.from_walk(w, walk)
            if c and c.bits not in seen:
                seen.add(c.bits)
                cycles.append(c)
    return CycleBasisSet(w, cycles, t)


def decompose(w: GraphWindow, target: BinaryEdgeVector, basis: CycleBasisSet) -> Optional[List[BinaryEdgeVector]]:
    """
    Members of the basis summing to `target` mod 2, or None when the window
    system is inconsistent (possibly a window artifact).
    """
    odd = target.odd_vertices()
    if odd:
        raise OddDegreeError(f'target has {len(odd)} odd-degree vertices')
    too_deep = [v for v in target.vertices() if w.depth[v] > w.radius - basis.t]
    if too_deep:
        raise MarginError(f'target comes within {basis.t} of the boundary sphere S_{w.radius}')
    picked = basis.solve(target)
    if picked is None:
        return None
    return [basis.cycles[i] for i in picked]


def _avoiding_path(w: GraphWindow, x: VertexKey, y: VertexKey, forbidden: FrozenSet[Edge]) -> List[VertexKey]:
    parent: Dict[VertexKey, Optional[VertexKey]] = { x: None }
    queue = deque([x])
    while queue and y not in parent:
        v = queue.popleft()
        for u in w.adjacency[v]:
            if u not in parent and make_edge(u, v) not in forbidden:
                parent[u] = v
                queue.append(u)
    if y not in parent:
        raise NoAvoidingPathError('no path between x and y avoids the other part of the cutset')
    path = [y]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path[::-1]


def crossing_cycle_witness(
        w: GraphWindow,
        Pi: Iterable[Edge],
        Pi1: Iterable[Edge],
        Pi2: Iterable[Edge],
        x: VertexKey,
        y: VertexKey,
        basis: CycleBasisSet
) -> CrossingWitness:
    """
    A relator cycle meeting both parts of a bipartitioned minimal x-y cutset,
    built from paths P1 (missing Pi2) and P2 (missing Pi1): decompose P1 + P2,
    keep the members K1 that meet Pi1, and theta = P1 + sum(K1) misses Pi1 and
    is odd exactly at x and y, so some member of K1 must meet Pi2.
    """
    Pi = frozenset(make_edge(*e) for e in Pi)
    Pi1 = frozenset(make_edge(*e) for e in Pi1)
    Pi2 = frozenset(make_edge(*e) for e in Pi2)
    if not Pi1 or not Pi2:
        raise ValueError('the bipartition of the cutset must be nontrivial')
    if Pi1 & Pi2 or Pi1 | Pi2 != Pi:
        raise ValueError('Pi1 and Pi2 must partition Pi')
    if not is_minimal_xy_cutset(w, Pi, x, y):
        raise ValueError('Pi is not a minimal cutset between x and y')
    P1 = _avoiding_path(w, x, y, Pi2)
    P2 = _avoiding_path(w, x, y, Pi1)
    v1 = BinaryEdgeVector.from_walk(w, P1)
    v2 = BinaryEdgeVector.from_walk(w, P2)
    members = decompose(w, v1 + v2, basis)
    if members is None:
        raise DecompositionUnreachableError('P1 + P2 is not a sum of relator cycles inside the window')
    K1 = [c for c in members if c.meets(Pi1)]
    K2 = [c for c in members if not c.meets(Pi1)]
    theta = v1
    for c in K1:
        theta = theta + c
    if theta.meets(Pi1):
        raise ExperimentAssertionError('theta still contains an edge of Pi1')
    if theta.odd_vertices() != frozenset([x, y]):
        raise ExperimentAssertionError('theta must be odd exactly at x and y')
    for c in K1:
        if c.meets(Pi2):
            e1 = min(e for e in c.edges() if e in Pi1)
            e2 = min(e for e in c.edges() if e in Pi2)
            dist = min(w.distances_from(a)[b] for a in e1 for b in e2)
            return CrossingWitness(c, theta, P1, P2, K1, K2, e1, e2, dist)
    raise ExperimentAssertionError('no member of K1 meets Pi2')


def cycle_walk(c: BinaryEdgeVector) -> List[VertexKey]:
    """The closed vertex walk of a simple cycle, starting at its smallest vertex."""
    adjacency: Dict[VertexKey, List[VertexKey]] = {}
    for u, v in c.edges():
        adjacency.setdefault(u, []).append(v)
        adjacency.setdefault(v, []).append(u)
    if not adjacency:
        return []
    if any(len(nbrs) != 2 for nbrs in adjacency.values()):
        raise ValueError('not a simple cycle')
    start = min(adjacency)
    walk = [start]
    prev, cur = start, min(adjacency[start])
    while cur != start:
        walk.append(cur)
        a, b = adjacency[cur]
        prev, cur = cur, (b if a == prev else a)
    walk.append(start)
    return walk


def sample_crossing_instances(
        w: GraphWindow,
        rng: random.Random,
        count: int,
        max_size: int = 4,
        y_depth: int = 4,
        max_tries: int = 10000
) -> List[Tuple[FrozenSet[Edge], FrozenSet[Edge], FrozenSet[Edge], VertexKey, VertexKey]]:
    """
    Random (Pi, Pi1, Pi2, x, y): Pi = δK for a random connected K around the
    origin whose complement is connected, y outside K, and a random
    nontrivial bipartition of Pi.
    """
    x = w.origin
    far = sorted(v for v, d in w.depth.items() if d == y_depth)
    if not far:
        raise MarginError(f'no vertices at depth {y_depth} in the radius-{w.radius} window')
    result = []
    tries = 0
    while len(result) < count and tries < max_tries:
        tries += 1
        K = { x }
        size = rng.randint(1, max_size)
        while len(K) < size:
            frontier = sorted({ u for v in K for u in w.adjacency[v] if u not in K and w.depth[u] < y_depth })
            if not frontier:
                break
            K.add(rng.choice(frontier))
        y = rng.choice(far)
        if y in K:
            continue
        Pi = frozenset(make_edge(v, u) for v in K for u in w.adjacency[v] if u not in K)
        if len(Pi) < 2 or not is_minimal_xy_cutset(w, Pi, x, y):
            continue
        edges = sorted(Pi)
        mask = rng.randint(1, 2 ** (len(edges) - 1) - 1)
        Pi1 = frozenset(e for i, e in enumerate(edges[1:]) if mask >> i & 1)
        Pi2 = Pi - Pi1
        result.append((Pi, Pi1, Pi2, x, y))
    if len(result) < count:
        raise MarginError(f'only {len(result)} of {count} crossing instances found in {max_tries} tries')
    return result


def verify_half_t_bound(
        w: GraphWindow,
        relators: Sequence[Any],
        n_max: int,
        max_nodes: Optional[int] = None,
        verbose: bool = False
) -> HalfTReport:
    """closeness(Pi) <= t / 2 under SUBDIVISION for every enumerated minimal cutset up to n_max."""
    provider = _cayley(w)
    if not provider.group.finitely_presented:
        raise NotFinitelyPresentedError(f'{provider.group.name} is not finitely presented; no finite t exists')
    if not relators:
        raise NotFinitelyPresentedError('an empty relator list gives no bound on cycle lengths')
    t = relator_cycles(w, relators).t
    bound = t / 2
    checked = 0
    best = None
    by_size = enumerate_min_cutsets_upto(w, n_max, max_nodes = max_nodes, verbose = verbose)
    for n in sorted(by_size):
        for c in by_size[n]:
            report = closeness(w, c.edges, SUBDIVISION, kind = 'edge')
            checked += 1
            best = report.value if best is None else max(best, report.value)
            if report.value > bound:
                log(f'half-t bound violated by a size-{n} cutset: C = {report.value} > {bound}', verbose)
                return HalfTReport(t, bound, checked, best, False, (c, report))
    log(f'half-t bound: {checked} cutsets, max C = {best} <= {bound}', verbose)
    return HalfTReport(t, bound, checked, best, True, None)
