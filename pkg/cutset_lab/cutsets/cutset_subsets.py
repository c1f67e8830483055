from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Tuple
from collections import deque

from ..core.graph_core import GraphWindow, VertexKey
from ..errors import MarginError, ResourceLimitError
from ..utils import log

DEFAULT_MAX_SUBSETS = 10 ** 8


class WalkCertificate(NamedTuple):
    """
    A closed walk from the origin along a BFS spanning tree of the subset,
    written as neighbor indices into the window adjacency lists. Every tree
    edge is walked twice, so the length is 2 (|K| - 1) and the alphabet has at
    most `degree_bound` letters.
    """
    steps: Tuple[int, ...]


def _check_size(w: GraphWindow, n: int) -> None:
    if n < 1:
        raise ValueError(f'subset size must be at least 1, got {n}')
    if n > w.radius:
        raise MarginError(f'connected {n}-sets do not fit in the radius-{w.radius} window')


def iter_connected_subsets(
        w: GraphWindow,
        n: int,
        max_subsets: Optional[int] = None
) -> Iterator[FrozenSet[VertexKey]]:
    """Each connected n-vertex set containing the origin, exactly once."""
    _check_size(w, n)
    cap = DEFAULT_MAX_SUBSETS if max_subsets is None else max_subsets
    adj = w.adjacency
    K: List[VertexKey] = []
    seen = { w.origin }
    visited = 0

    def extend(untried: List[VertexKey]) -> Iterator[FrozenSet[VertexKey]]:
        nonlocal visited
        untried = list(untried)
        while untried:
            v = untried.pop()
            visited += 1
            if visited > cap:
                raise ResourceLimitError(f'connected-subset search exceeded {cap} nodes')
            K.append(v)
            if len(K) == n:
                yield frozenset(K)
            else:
                new = [u for u in adj[v] if u not in seen]
                seen.update(new)
                yield from extend(untried + new)
                seen.difference_update(new)
            K.pop()

    yield from extend([w.origin])


def count_connected_subsets(w: GraphWindow, n_max: int, verbose: bool = False) -> Dict[int, int]:
    """Counts of connected n-sets containing the origin for n = 1..n_max, in one pass."""
    _check_size(w, n_max)
    adj = w.adjacency
    counts = { n: 0 for n in range(1, n_max + 1) }
    seen = { w.origin }
    size = 0

    def extend(untried: List[VertexKey]) -> None:
        nonlocal size
        untried = list(untried)
        while untried:
            v = untried.pop()
            size += 1
            counts[size] += 1
            if size < n_max:
                new = [u for u in adj[v] if u not in seen]
                seen.update(new)
                extend(untried + new)
                seen.difference_update(new)
            size -= 1

    extend([w.origin])
    log(f'connected subsets: {counts}', verbose)
    return counts


def enumerate_connected_subsets(w: GraphWindow, n: int) -> List[FrozenSet[VertexKey]]:
    return sorted(iter_connected_subsets(w, n), key = sorted)


def _spanning_children(w: GraphWindow, K: FrozenSet[VertexKey]) -> Dict[VertexKey, List[VertexKey]]:
    children: Dict[VertexKey, List[VertexKey]] = { v: [] for v in K }
    seen = { w.origin }
    queue = deque([w.origin])
    while queue:
        v = queue.popleft()
        for u in w.adjacency[v]:
            if u in K and u not in seen:
                seen.add(u)
                children[v].append(u)
                queue.append(u)
    if len(seen) != len(K):
        raise ValueError('subset is not connected or misses the origin')
    return children


def encode_walk(w: GraphWindow, K: Iterable[VertexKey]) -> WalkCertificate:
    K = frozenset(K)
    if w.origin not in K:
        raise ValueError('subset must contain the origin')
    children = _spanning_children(w, K)
    steps = []
    stack = [(w.origin, iter(children[w.origin]))]
    while stack:
        v, it = stack[-1]
        u = next(it, None)
        if u is None:
            stack.pop()
            if stack:
                steps.append(w.adjacency[v].index(stack[-1][0]))
            continue
        steps.append(w.adjacency[v].index(u))
        stack.append((u, iter(children[u])))
    return WalkCertificate(tuple(steps))


def decode_walk(w: GraphWindow, certificate: WalkCertificate) -> FrozenSet[VertexKey]:
    v = w.origin
    visited = { v }
    for i in certificate.steps:
        v = w.adjacency[v][i]
        visited.add(v)
    return frozenset(visited)
