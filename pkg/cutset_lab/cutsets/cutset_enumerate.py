from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Tuple
from collections import deque
from dataclasses import dataclass
import math

import numpy as np

from ..core.graph_core import Edge, GraphWindow, VertexKey, bfs_distances, components, edge_boundary, make_edge, neighborhood
from ..errors import MarginError, ResourceLimitError
from ..utils import log, progress

DEFAULT_MAX_NODES = 10 ** 7


@dataclass(frozen = True)
class Cutset:
    """δK for a finite connected K containing the origin; `edges` sorted."""
    edges: Tuple[Edge, ...]
    K: FrozenSet[VertexKey]
    exact: bool

    @property
    def size(self) -> int:
        return len(self.edges)

    @property
    def inner_vertices(self) -> FrozenSet[VertexKey]:
        return frozenset(u for e in self.edges for u in e if u in self.K)

    @property
    def outer_vertices(self) -> FrozenSet[VertexKey]:
        return frozenset(u for e in self.edges for u in e if u not in self.K)


class CutsetCheck(NamedTuple):
    minimal: bool
    K: FrozenSet[VertexKey]
    reason: str


class CutsetCounts(NamedTuple):
    counts: Dict[int, int]
    alpha: Optional[float]
    fit_range: Optional[Tuple[int, int]]


def _window_exact(w: GraphWindow, K: Iterable[VertexKey]) -> bool:
    limit = w.radius - 2
    return w.radius >= w.provider.boundary_connected_radius and all(w.depth[v] <= limit for v in K)


def cutset_from_component(w: GraphWindow, K: Iterable[VertexKey]) -> Cutset:
    K = frozenset(K)
    return Cutset(tuple(sorted(edge_boundary(w, K))), K, _window_exact(w, K))


class _CutsetSearch:
    """
    Redelmeier-style growth of connected K containing the origin inside
    B_{R-2}. A unit-capacity flow from K to the excluded vertices and to
    everything beyond B_{R-2} bounds |δK'| from below for every K' grown in
    the current branch; it is warm-started along the recursion and undone on
    backtrack.
    """
    def __init__(self,
            w: GraphWindow,
            n_max: int,
            max_nodes: Optional[int] = None,
            shard: int = 0,
            shards: int = 1,
            verbose: bool = False
    ) -> None:
        if w.radius < 2:
            raise MarginError(f'cutset enumeration needs a window radius of at least 2, got {w.radius}')
        if not 0 <= shard < shards:
            raise ValueError(f'shard must be in 0..{shards - 1}, got {shard}')
        self.w = w
        self.n_max = n_max
        self.max_nodes = DEFAULT_MAX_NODES if max_nodes is None else max_nodes
        self.shard = shard
        self.shards = shards
        self.verbose = verbose
        self.adj = w.adjacency
        self.depth = w.depth
        self.limit = w.radius - 2
        self.exact = w.radius >= w.provider.boundary_connected_radius
        self.K: Dict[VertexKey, None] = {}
        self.seen = set()
        self.excluded = set()
        self.flow: Dict[Tuple[VertexKey, VertexKey], int] = {}
        self.value = 0
        self.delta = 0
        self.nodes = 0
        self.found: List[Cutset] = []

    def _is_target(self, v: VertexKey) -> bool:
        return v in self.excluded or self.depth[v] > self.limit

    def _push(self, a: VertexKey, b: VertexKey, amount: int) -> None:
        self.flow[(a, b)] = self.flow.get((a, b), 0) + amount
        self.flow[(b, a)] = self.flow.get((b, a), 0) - amount

    def _augment(self, journal: List[Tuple[VertexKey, VertexKey]]) -> bool:
        parent: Dict[VertexKey, Optional[VertexKey]] = { s: None for s in self.K }
        queue = deque(self.K)
        while queue:
            v = queue.popleft()
            for u in self.adj[v]:
                if u in parent or self.flow.get((v, u), 0) >= 1:
                    continue
                parent[u] = v
                if self._is_target(u):
                    x = u
                    while parent[x] is not None:
                        p = parent[x]
                        self._push(p, x, 1)
                        journal.append((p, x))
                        x = p
                    return True
                queue.append(u)
        return False

    def _bound_exceeded(self, journal: List[Tuple[VertexKey, VertexKey]]) -> bool:
        while self.value <= self.n_max and self._augment(journal):
            self.value += 1
        return self.value > self.n_max

    def _rollback(self, journal: List[Tuple[VertexKey, VertexKey]], value: int) -> None:
        for a, b in reversed(journal):
            self._push(a, b, -1)
        self.value = value

    def _hole_free(self) -> bool:
        # every vertex of ∂K must reach S_R outside K; greedy ascent finds the way fast
        escaping = set()
        R = self.w.radius
        for v in self.K:
            for s in self.adj[v]:
                if s in self.K or s in escaping:
                    continue
                visited = { s }
                stack = [s]
                ok = False
                while stack:
                    x = stack.pop()
                    if x in escaping or self.depth[x] == R:
                        ok = True
                        break
                    for u in sorted(self.adj[x], key = self.depth.__getitem__):
                        if u not in visited and u not in self.K:
                            visited.add(u)
                            stack.append(u)
                if not ok:
                    return False
                escaping |= visited
        return True

    def _emit(self) -> None:
        edges = sorted(make_edge(v, u) for v in self.K for u in self.adj[v] if u not in self.K)
        assert len(edges) == self.delta, 'incremental |δK| out of sync'
        self.found.append(Cutset(tuple(edges), frozenset(self.K), self.exact))

    def _visit(self, v: VertexKey, untried: List[VertexKey], emit: bool = True) -> None:
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise ResourceLimitError(f'cutset search exceeded {self.max_nodes} nodes (n_max = {self.n_max})')
        inside = sum(1 for u in self.adj[v] if u in self.K)
        step = len(self.adj[v]) - 2 * inside
        self.K[v] = None
        self.delta += step
        new = [u for u in self.adj[v] if u not in self.seen and self.depth[u] <= self.limit]
        self.seen.update(new)
        journal = []
        value = self.value
        if not self._bound_exceeded(journal):
            if emit and self.delta <= self.n_max and self._hole_free():
                self._emit()
            self._extend(untried + new)
        self._rollback(journal, value)
        self.seen.difference_update(new)
        del self.K[v]
        self.delta -= step

    def _extend(self, untried: List[VertexKey], top_level: bool = False) -> None:
        journal = []
        value = self.value
        excluded = []
        i = 0
        iterator = progress(None, desc = 'Branches', verbose = self.verbose, total = len(untried)) if top_level else None
        while untried:
            if self._bound_exceeded(journal):
                break
            v = untried.pop()
            if not top_level or i % self.shards == self.shard:
                self._visit(v, untried)
            i += 1
            if iterator is not None:
                iterator.update(1)
            self.excluded.add(v)
            excluded.append(v)
        if iterator is not None:
            iterator.close()
        self.excluded.difference_update(excluded)
        self._rollback(journal, value)

    def run(self) -> List[Cutset]:
        o = self.w.origin
        self.seen.add(o)
        self.nodes += 1
        self.K[o] = None
        self.delta = len(self.adj[o])
        new = [u for u in self.adj[o] if self.depth[u] <= self.limit]
        self.seen.update(new)
        journal = []
        if not self._bound_exceeded(journal):
            if self.shard == 0 and self.delta <= self.n_max and self._hole_free():
                self._emit()
            self._extend(new, top_level = True)
        self._rollback(journal, 0)
        log(f'cutset search: {self.nodes} nodes, {len(self.found)} cutsets of size <= {self.n_max}', self.verbose)
        return self.found


def _sort_key(c: Cutset) -> Tuple[int, Tuple[Edge, ...]]:
    return (c.size, c.edges)


def enumerate_min_cutsets_upto(
        w: GraphWindow,
        n_max: int,
        max_nodes: Optional[int] = None,
        shard: int = 0,
        shards: int = 1,
        verbose: bool = False
) -> Dict[int, List[Cutset]]:
    """All minimal cutsets of sizes 1..n_max whose origin component lies in B_{R-2}, grouped by size."""
    if n_max < 0:
        raise ValueError(f'n_max must be non-negative, got {n_max}')
    found = _CutsetSearch(w, n_max, max_nodes = max_nodes, shard = shard, shards = shards, verbose = verbose).run()
    result: Dict[int, List[Cutset]] = { n: [] for n in range(1, n_max + 1) }
    for c in sorted(found, key = _sort_key):
        result.setdefault(c.size, []).append(c)
    return result


def enumerate_min_cutsets(
        w: GraphWindow,
        n: int,
        max_nodes: Optional[int] = None,
        shard: int = 0,
        shards: int = 1,
        verbose: bool = False
) -> List[Cutset]:
    by_size = enumerate_min_cutsets_upto(w, n, max_nodes = max_nodes, shard = shard, shards = shards, verbose = verbose)
    return by_size.get(n, [])


def fit_growth_constant(counts: Dict[int, int]) -> Tuple[Optional[float], Optional[Tuple[int, int]]]:
    # least squares on (n, log count) over the nonzero counts
    points = sorted((n, c) for n, c in counts.items() if c > 0)
    if len(points) < 2:
        return None, None
    x = np.array([n for n, _ in points], dtype = np.float64)
    y = np.log(np.array([c for _, c in points], dtype = np.float64))
    slope, _ = np.polyfit(x, y, 1)
    return float(math.exp(slope)), (points[0][0], points[-1][0])


def count_min_cutsets(
        w: GraphWindow,
        n_max: int,
        max_nodes: Optional[int] = None,
        verbose: bool = False
) -> CutsetCounts:
    by_size = enumerate_min_cutsets_upto(w, n_max, max_nodes = max_nodes, verbose = verbose)
    counts = { n: len(by_size.get(n, [])) for n in range(1, n_max + 1) }
    alpha, fit_range = fit_growth_constant(counts)
    return CutsetCounts(counts, alpha, fit_range)


def _check_edges(w: GraphWindow, Y: Iterable[Edge]) -> FrozenSet[Edge]:
    Y = frozenset(make_edge(*e) for e in Y)
    for e in Y:
        if e not in w.edge_index:
            raise ValueError(f'{e} is not an edge of the window')
        if w.depth[e[0]] >= w.radius or w.depth[e[1]] >= w.radius:
            raise MarginError(f'edge {e} touches the boundary sphere S_{w.radius}')
    return Y


def is_minimal_cutset(w: GraphWindow, Y: Iterable[Edge]) -> CutsetCheck:
    """
    Y is a minimal cutset between the origin and infinity: it cuts the origin
    off S_R, equals δK of the origin component K, and leaves no other
    component that misses S_R.
    """
    Y = _check_edges(w, Y)
    parts = components(w, removed_edges = Y)
    K = next(c for c in parts if w.origin in c.vertices)
    if K.touches_boundary:
        return CutsetCheck(False, K.vertices, 'origin still reaches the boundary sphere')
    if edge_boundary(w, K.vertices) != Y:
        return CutsetCheck(False, K.vertices, 'not the edge boundary of the origin component')
    for c in parts:
        if c is not K and not c.touches_boundary:
            return CutsetCheck(False, K.vertices, 'removal leaves a finite component besides the origin')
    return CutsetCheck(True, K.vertices, 'ok')


def is_minimal_xy_cutset(w: GraphWindow, Y: Iterable[Edge], x: VertexKey, y: VertexKey) -> bool:
    """Y separates x from y and every edge of Y joins the x-component to the y-component."""
    Y = _check_edges(w, Y)
    w.require(x)
    w.require(y)
    parts = components(w, removed_edges = Y)
    cx = next(c.vertices for c in parts if x in c.vertices)
    if y in cx:
        return False
    cy = next(c.vertices for c in parts if y in c.vertices)
    return all((u in cx and v in cy) or (u in cy and v in cx) for u, v in Y)


def neighborhood_cutset(w: GraphWindow, X: Iterable[VertexKey], n: int) -> Cutset:
    """
    The minimal cutset separating N_n(X) from infinity: finite components of
    the window minus N_n(X) are swallowed into the origin side.
    """
    X = frozenset(X)
    if w.origin not in X:
        raise ValueError('X must contain the origin')
    reach = bfs_distances(w.adjacency, [w.origin], blocked = frozenset(v for v in w.vertices if v not in X))
    if len(reach) != len(X):
        raise ValueError('X must be connected')
    N = neighborhood(w, X, n)
    swallowed = set(N)
    for c in components(w, removed_vertices = N):
        if not c.touches_boundary:
            swallowed |= c.vertices
    return cutset_from_component(w, swallowed)
