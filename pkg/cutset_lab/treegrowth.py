from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union
from collections import deque

import numpy as np

from .core.graph_core import GraphProvider, GraphWindow, VertexKey, build_window
from .core.graph_flow import disjoint_ray_count
from .cutsets.cutset_enumerate import enumerate_min_cutsets
from .errors import MarginError, WrongParametersError
from .groups.group_cayley import CayleyProvider, GeneratingSet, Group, cayley_provider
from .utils import log, progress

DEFAULT_FX_MARGIN = 2


class SpanningTreeWindow:
    """
    Shortlex minimal spanning tree of a Cayley window: every vertex hangs off
    the endpoint of its shortlex-least word with the last letter removed.
    Breadth-first search that scans vertices in discovery order and generators
    in their fixed order discovers each vertex first from that parent.
    """
    def __init__(self, w: GraphWindow) -> None:
        provider = w.provider
        if not isinstance(provider, CayleyProvider):
            raise WrongParametersError('shortlex trees need a Cayley window')
        group, gens = provider.group, provider.gens
        self.window = w
        self.origin = w.origin
        self.gens = gens
        self.parent: Dict[VertexKey, Optional[VertexKey]] = { w.origin: None }
        self.word: Dict[VertexKey, Tuple[int, ...]] = { w.origin: () }
        self.children: Dict[VertexKey, List[VertexKey]] = { v: [] for v in w.vertices }
        self.order: List[VertexKey] = [w.origin]
        queue = deque([w.origin])
        while queue:
            v = queue.popleft()
            for i, s in enumerate(gens.elements):
                u = group.multiply(v, s)
                if u in w and u not in self.parent:
                    self.parent[u] = v
                    self.word[u] = self.word[v] + (i,)
                    self.children[v].append(u)
                    self.order.append(u)
                    queue.append(u)
        assert len(self.parent) == len(w), 'the shortlex tree must span the window'

    @property
    def radius(self) -> int:
        return self.window.radius

    def depth(self, v: VertexKey) -> int:
        return len(self.word[v])

    def word_names(self, v: VertexKey) -> List[str]:
        return [self.gens.names[i] for i in self.word[v]]

    def is_geodesic(self) -> bool:
        return all(len(self.word[v]) == d for v, d in self.window.depth.items())

    def subtree(self, x: VertexKey, depth: Optional[int] = None) -> List[VertexKey]:
        result = []
        stack = [(x, 0)]
        while stack:
            v, d = stack.pop()
            result.append(v)
            if depth is None or d < depth:
                stack.extend((u, d + 1) for u in self.children[v])
        return result


def build_shortlex_tree(
        group: Group,
        gens: GeneratingSet,
        R: int,
        max_vertices: Optional[int] = None,
        verbose: bool = False
) -> SpanningTreeWindow:
    w = build_window(cayley_provider(group, gens), R, max_vertices = max_vertices, verbose = verbose)
    return SpanningTreeWindow(w)


def growth(source: Union[GraphWindow, SpanningTreeWindow], n_max: int) -> List[int]:
    """|B_0|, ..., |B_{n_max}|, by window distance or by tree depth."""
    if isinstance(source, SpanningTreeWindow):
        R = source.radius
        depths = [len(word) for word in source.word.values()]
    else:
        R = source.radius
        depths = list(source.depth.values())
    if n_max > R:
        raise MarginError(f'growth up to {n_max} needs a window of radius at least {n_max}, got {R}')
    per_depth = np.bincount(np.array(depths, dtype = np.int64), minlength = R + 1)
    return np.cumsum(per_depth)[:n_max + 1].tolist()


def growth_ratios(sizes: Sequence[int]) -> List[float]:
    a = np.array(sizes, dtype = np.float64)
    return (a[1:] / a[:-1]).tolist()


class SubperiodicWitness(NamedTuple):
    x: VertexKey
    depth: int
    mapping: Dict[VertexKey, VertexKey]


def check_subperiodic(tree: SpanningTreeWindow, x: VertexKey, depth: int) -> Optional[SubperiodicWitness]:
    """
    An injective, depth-preserving map of T_x truncated at `depth` into T that
    sends x to the root, found by backtracking. None means no embedding was
    found inside the window, which does not refute subperiodicity.
    """
    tree.window.require(x)
    if depth < 0:
        raise ValueError(f'depth must be non-negative, got {depth}')
    if tree.depth(x) + depth > tree.radius:
        raise MarginError(
                f'T_x to depth {depth} below a vertex at depth {tree.depth(x)} leaves the radius-{tree.radius} window'
        )
    failed = set()

    def embed(a: VertexKey, b: VertexKey, d: int) -> Optional[Dict[VertexKey, VertexKey]]:
        if d == 0:
            return { a: b }
        if (a, b, d) in failed:
            return None
        ca = tree.children[a]
        cb = tree.children[b]
        if len(ca) > len(cb):
            failed.add((a, b, d))
            return None
        mapping = { a: b }
        used = set()

        def assign(i: int) -> bool:
            if i == len(ca):
                return True
            for c in cb:
                if c in used:
                    continue
                sub = embed(ca[i], c, d - 1)
                if sub is None:
                    continue
                used.add(c)
                mapping.update(sub)
                if assign(i + 1):
                    return True
                used.discard(c)
                for v in sub:
                    del mapping[v]
            return False

        if assign(0):
            return mapping
        failed.add((a, b, d))
        return None

    mapping = embed(x, tree.origin, depth)
    if mapping is None:
        return None
    return SubperiodicWitness(x, depth, mapping)


class FxReport(NamedTuple):
    fx: Dict[VertexKey, int]
    uncertain: frozenset
    S: List[VertexKey]
    max_by_depth: List[int]


def _subtree_stats(tree: SpanningTreeWindow) -> Tuple[Dict[VertexKey, int], Dict[VertexKey, bool]]:
    sizes: Dict[VertexKey, int] = {}
    reaches: Dict[VertexKey, bool] = {}
    sphere = tree.window.sphere
    for v in reversed(tree.order):
        sizes[v] = 1 + sum(sizes[c] for c in tree.children[v])
        reaches[v] = v in sphere or any(reaches[c] for c in tree.children[v])
    return sizes, reaches


def fx_and_s_sets(tree: SpanningTreeWindow, margin: int = DEFAULT_FX_MARGIN) -> FxReport:
    """
    |F_x| is the size of the finite branches hanging below x: child subtrees
    that never reach S_R. Vertices within `margin` of S_R are flagged as
    uncertain. S holds the strict records of |F| by distance from the root.
    """
    sizes, reaches = _subtree_stats(tree)
    R = tree.radius
    fx = {}
    uncertain = set()
    for v in tree.order:
        fx[v] = sum(sizes[c] for c in tree.children[v] if not reaches[c])
        if tree.depth(v) + margin > R:
            uncertain.add(v)
    max_by_depth = [0] * (R + 1)
    for v, f in fx.items():
        d = tree.depth(v)
        max_by_depth[d] = max(max_by_depth[d], f)
    S = []
    record = -1
    for d in range(R + 1):
        level = [v for v in tree.order if tree.depth(v) == d and fx[v] > record]
        S.extend(level)
        record = max(record, max_by_depth[d])
    return FxReport(fx, frozenset(uncertain), S, max_by_depth)


def ray_profile(tree: SpanningTreeWindow) -> List[int]:
    """Per depth, the number of tree vertices whose subtree reaches S_R."""
    _, reaches = _subtree_stats(tree)
    profile = [0] * (tree.radius + 1)
    for v in tree.order:
        if reaches[v]:
            profile[tree.depth(v)] += 1
    return profile


def dump_tree(tree: SpanningTreeWindow) -> List[str]:
    fmt = tree.window.provider.format_key
    lines = []
    for v in tree.order:
        p = tree.parent[v]
        lines.append(f'{fmt(v)}\t{"-" if p is None else fmt(p)}\t' + ','.join(tree.word_names(v)))
    return lines


class FinitenessReport(NamedTuple):
    n: int
    radii: List[int]
    counts: List[int]
    stabilized_at: Optional[int]
    core_radius: Optional[int]


def core_ball_radius(w: GraphWindow, n: int) -> Optional[int]:
    """Smallest r >= 1 with at least n + 1 disjoint rays starting on the sphere S_r."""
    for r in range(1, w.radius):
        if disjoint_ray_count(w, w.ball(r - 1)) >= n + 1:
            return r
    return None


def _stabilization(radii: Sequence[int], counts: Sequence[int]) -> Optional[int]:
    # the count has to stay put over at least two radii to count as stable
    for i in range(len(counts) - 1):
        if all(c == counts[i] for c in counts[i:]):
            return radii[i]
    return None


def finiteness_experiment(
        provider: GraphProvider,
        n: int,
        radii: Sequence[int],
        max_vertices: Optional[int] = None,
        max_nodes: Optional[int] = None,
        verbose: bool = False
) -> FinitenessReport:
    radii = sorted(radii)
    if not radii:
        raise ValueError('at least one radius is required')
    counts = []
    w = None
    for R in progress(radii, desc = 'Radii', verbose = verbose):
        w = build_window(provider, R, max_vertices = max_vertices)
        counts.append(len(enumerate_min_cutsets(w, n, max_nodes = max_nodes)))
        log(f'R = {R}: {counts[-1]} minimal cutsets of size {n}', verbose)
    stable = _stabilization(radii, counts)
    core = core_ball_radius(w, n)
    return FinitenessReport(n, list(radii), counts, stable, core)
