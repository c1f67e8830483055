from typing import FrozenSet, Iterable, Tuple

import networkx as nx
from networkx.algorithms.connectivity import minimum_st_node_cut

from .graph_core import GraphWindow, VertexKey, boundary

SOURCE = ('__source__',)
SINK = ('__sink__',)


def _ray_network(w: GraphWindow, X: FrozenSet[VertexKey]) -> Tuple[nx.DiGraph, FrozenSet[VertexKey]]:
    # vertex splitting: (v, 0) -> (v, 1) carries the unit vertex capacity
    starts = boundary(w, X)
    g = nx.DiGraph()
    for v in w.vertices:
        if v in X:
            continue
        g.add_edge((v, 0), (v, 1), capacity = 1)
        for u in w.adjacency[v]:
            if u not in X:
                g.add_edge((v, 1), (u, 0), capacity = 1)
    for v in starts:
        g.add_edge(SOURCE, (v, 0), capacity = 1)
    for v in w.sphere:
        if v not in X:
            g.add_edge((v, 1), SINK, capacity = 1)
    return g, starts


def disjoint_ray_count(w: GraphWindow, X: Iterable[VertexKey]) -> int:
    """
    Maximum number of vertex-disjoint paths from the external boundary of X to
    the sphere S_R that avoid X (Menger, via unit vertex capacities).
    """
    X = frozenset(X)
    g, starts = _ray_network(w, X)
    if not starts or SINK not in g:
        return 0
    return int(nx.maximum_flow_value(g, SOURCE, SINK))


def min_separator_size(w: GraphWindow, X: Iterable[VertexKey]) -> int:
    """
    Size of a smallest vertex set outside X separating its external boundary
    from S_R, computed on the undirected window independently of the flow
    network above.
    """
    X = frozenset(X)
    starts = boundary(w, X)
    g = nx.Graph()
    for u, v in w.edges:
        if u not in X and v not in X:
            g.add_edge(u, v)
    for v in w.vertices:
        if v not in X:
            g.add_node(v)
    # a boundary vertex on the sphere is a path of length zero; it must be cut itself
    both = starts & w.sphere
    for v in starts:
        g.add_edge(SOURCE, v)
    for v in w.sphere - X:
        g.add_edge(SINK, v)
    if not starts:
        return 0
    if both:
        # a vertex adjacent to both terminals forces itself into every cut
        reduced = g.copy()
        reduced.remove_nodes_from(both)
        rest = 0
        if nx.has_path(reduced, SOURCE, SINK):
            rest = len(minimum_st_node_cut(reduced, SOURCE, SINK))
        return len(both) + rest
    return len(minimum_st_node_cut(g, SOURCE, SINK))
