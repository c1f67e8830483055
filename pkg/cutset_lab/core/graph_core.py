from typing import Any, Dict, FrozenSet, Hashable, Iterable, List, NamedTuple, Optional, Sequence, Tuple
from collections import deque

import networkx as nx

from ..errors import MarginError, NotInWindowError, ResourceLimitError
from ..utils import log, progress, resolve_max_vertices

VertexKey = Hashable
Edge = Tuple[VertexKey, VertexKey]


def make_edge(u: VertexKey, v: VertexKey) -> Edge:
    return (u, v) if u <= v else (v, u)


class GraphProvider:
    """
    An infinite, locally finite graph given by its neighbor function.

    Subclasses set `family`, `degree_bound` and `origin`, and implement
    `neighbors`. `boundary_connected_radius` is the radius from which every
    component of a window minus a set inside B_{R-2} that touches the sphere
    S_R is infinite in the full graph; windows at smaller radii produce
    results flagged as not exact.
    """
    family: str = 'abstract'
    degree_bound: int = 0
    origin: VertexKey = None
    boundary_connected_radius: int = 1

    def neighbors(self, v: VertexKey) -> List[VertexKey]:
        raise NotImplementedError

    def format_key(self, v: VertexKey) -> str:
        if isinstance(v, tuple):
            return ','.join(str(x) for x in v)
        return str(v)

    def describe(self) -> Dict[str, Any]:
        return { 'family': self.family, 'degree_bound': self.degree_bound }

    def __repr__(self) -> str:
        params = ', '.join(f'{k}={v}' for k, v in self.describe().items() if k != 'family')
        return f'{type(self).__name__}({params})'


class Component(NamedTuple):
    vertices: FrozenSet[VertexKey]
    touches_boundary: bool


class GraphWindow:
    """
    The exact radius-R ball around the provider's origin, with BFS depths,
    window-induced adjacency in provider order, a canonical edge index and the
    boundary sphere S_R.
    """
    def __init__(self,
            provider: GraphProvider,
            radius: int,
            max_vertices: Optional[int] = None,
            verbose: bool = False
    ) -> None:
        if radius < 1:
            raise ValueError(f'window radius must be at least 1, got {radius}')
        self.provider = provider
        self.radius = radius
        self.origin = provider.origin
        cap = resolve_max_vertices(max_vertices)

        depth: Dict[VertexKey, int] = { self.origin: 0 }
        raw: Dict[VertexKey, List[VertexKey]] = {}
        frontier = [self.origin]
        for r in progress(range(radius + 1), desc = 'Window', verbose = verbose):
            next_frontier = []
            for v in frontier:
                nbrs = provider.neighbors(v)
                raw[v] = nbrs
                if r == radius:
                    continue
                for u in nbrs:
                    if u not in depth:
                        depth[u] = r + 1
                        next_frontier.append(u)
                        if len(depth) > cap:
                            raise ResourceLimitError(
                                    f'ball of radius {radius} in {provider!r} exceeds {cap} vertices'
                            )
            frontier = next_frontier

        self.depth: Dict[VertexKey, int] = depth
        self.vertices: List[VertexKey] = sorted(depth)
        self.adjacency: Dict[VertexKey, Tuple[VertexKey, ...]] = {
                v: tuple(u for u in raw[v] if u in depth) for v in self.vertices
        }
        edges = set()
        for v, nbrs in self.adjacency.items():
            for u in nbrs:
                edges.add(make_edge(u, v))
        self.edges: List[Edge] = sorted(edges)
        self.edge_index: Dict[Edge, int] = { e: i for i, e in enumerate(self.edges) }
        self.sphere: FrozenSet[VertexKey] = frozenset(v for v, d in depth.items() if d == radius)
        self._bfs_cache: Dict[VertexKey, Dict[VertexKey, int]] = {}
        log(f'{provider!r}: |B_{radius}| = {len(self.vertices)}, |E| = {len(self.edges)}', verbose)

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v: VertexKey) -> bool:
        return v in self.depth

    def require(self, v: VertexKey) -> None:
        if v not in self.depth:
            raise NotInWindowError(f'{self.provider.format_key(v)} is not in the radius-{self.radius} window')

    def ball(self, r: int) -> FrozenSet[VertexKey]:
        return frozenset(v for v, d in self.depth.items() if d <= r)

    def distances_from(self, v: VertexKey) -> Dict[VertexKey, int]:
        self.require(v)
        cached = self._bfs_cache.get(v)
        if cached is None:
            cached = bfs_distances(self.adjacency, [v])
            self._bfs_cache[v] = cached
        return cached

    def distance_is_exact(self, u: VertexKey, v: VertexKey, d: int) -> bool:
        # a shorter path in the full graph has to cross S_{R+1} twice
        return d <= 2 * self.radius + 1 - self.depth[u] - self.depth[v]

    def distance_lower_bound(self, u: VertexKey, v: VertexKey) -> int:
        d = self.distances_from(u)[v]
        return min(d, 2 * self.radius + 2 - self.depth[u] - self.depth[v])

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        for v in self.vertices:
            g.add_node(v, depth = self.depth[v])
        g.add_edges_from(self.edges)
        return g


def bfs_distances(
        adjacency: Dict[VertexKey, Sequence[VertexKey]],
        sources: Iterable[VertexKey],
        blocked: FrozenSet[VertexKey] = frozenset(),
        limit: Optional[int] = None
) -> Dict[VertexKey, int]:
    dist: Dict[VertexKey, int] = {}
    queue = deque()
    for s in sources:
        if s not in dist:
            dist[s] = 0
            queue.append(s)
    while queue:
        v = queue.popleft()
        d = dist[v]
        if limit is not None and d >= limit:
            continue
        for u in adjacency[v]:
            if u not in dist and u not in blocked:
                dist[u] = d + 1
                queue.append(u)
    return dist


def build_window(
        provider: GraphProvider,
        R: int,
        max_vertices: Optional[int] = None,
        verbose: bool = False
) -> GraphWindow:
    return GraphWindow(provider, R, max_vertices = max_vertices, verbose = verbose)


def distance(w: GraphWindow, u: VertexKey, v: VertexKey) -> int:
    w.require(u)
    w.require(v)
    return w.distances_from(u)[v]


def distance_with_flag(w: GraphWindow, u: VertexKey, v: VertexKey) -> Tuple[int, bool]:
    d = distance(w, u, v)
    return d, w.distance_is_exact(u, v, d)


def _check_subset(w: GraphWindow, X: Iterable[VertexKey]) -> FrozenSet[VertexKey]:
    X = frozenset(X)
    for v in X:
        w.require(v)
    return X


def _check_off_sphere(w: GraphWindow, X: FrozenSet[VertexKey], what: str) -> None:
    hit = X & w.sphere
    if hit:
        sample = w.provider.format_key(min(hit))
        raise MarginError(f'{what} meets the boundary sphere S_{w.radius} (e.g. at {sample})')


def neighborhood(w: GraphWindow, X: Iterable[VertexKey], n: int) -> FrozenSet[VertexKey]:
    if n < 0:
        raise ValueError(f'neighborhood radius must be non-negative, got {n}')
    X = _check_subset(w, X)
    result = frozenset(bfs_distances(w.adjacency, sorted(X), limit = n))
    _check_off_sphere(w, result, f'N_{n}(X)')
    return result


def boundary(w: GraphWindow, X: Iterable[VertexKey]) -> FrozenSet[VertexKey]:
    X = _check_subset(w, X)
    _check_off_sphere(w, X, 'X')
    return frozenset(u for v in X for u in w.adjacency[v] if u not in X)


def inner_boundary(w: GraphWindow, X: Iterable[VertexKey]) -> FrozenSet[VertexKey]:
    X = _check_subset(w, X)
    _check_off_sphere(w, X, 'X')
    return frozenset(v for v in X if any(u not in X for u in w.adjacency[v]))


def edge_boundary(w: GraphWindow, X: Iterable[VertexKey]) -> FrozenSet[Edge]:
    X = _check_subset(w, X)
    _check_off_sphere(w, X, 'X')
    return frozenset(make_edge(v, u) for v in X for u in w.adjacency[v] if u not in X)


def components(
        w: GraphWindow,
        removed_vertices: Iterable[VertexKey] = (),
        removed_edges: Iterable[Edge] = ()
) -> List[Component]:
    removed_vertices = frozenset(removed_vertices)
    removed_edges = frozenset(make_edge(*e) for e in removed_edges)
    seen = set(removed_vertices)
    result = []
    for s in w.vertices:
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in w.adjacency[v]:
                if u in seen or make_edge(u, v) in removed_edges:
                    continue
                seen.add(u)
                comp.append(u)
                queue.append(u)
        comp = frozenset(comp)
        result.append(Component(comp, not comp.isdisjoint(w.sphere)))
    return result


def escape_paths_exist(w: GraphWindow, X: Iterable[VertexKey]) -> bool:
    """Every vertex of the external boundary of X reaches S_R without entering X."""
    X = _check_subset(w, X)
    return all(c.touches_boundary for c in components(w, removed_vertices = X))


def format_edge(w: GraphWindow, e: Edge) -> str:
    return f'{w.provider.format_key(e[0])}~{w.provider.format_key(e[1])}'


def dump_window(w: GraphWindow) -> List[str]:
    fmt = w.provider.format_key
    return [
            f'{fmt(v)}\t{w.depth[v]}\t' + ';'.join(fmt(u) for u in w.adjacency[v])
            for v in w.vertices
    ]


def window_to_dot(w: GraphWindow, highlight: Iterable[Edge] = ()) -> str:
    fmt = w.provider.format_key
    highlight = frozenset(make_edge(*e) for e in highlight)
    lines = ['graph window {', '  node [shape=point];']
    for v in w.vertices:
        attrs = f'label="{fmt(v)}"'
        if v == w.origin:
            attrs += ', shape=circle, color=red'
        elif v in w.sphere:
            attrs += ', color=gray'
        lines.append(f'  "{fmt(v)}" [{attrs}];')
    for u, v in w.edges:
        style = ' [color=red, penwidth=2]' if (u, v) in highlight else ''
        lines.append(f'  "{fmt(u)}" -- "{fmt(v)}"{style};')
    lines.append('}')
    return '\n'.join(lines) + '\n'
