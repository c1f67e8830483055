"""Slow reference implementations the tests compare against."""
from itertools import combinations

from cutset_lab.core.graph_core import edge_boundary
from cutset_lab.cutsets.cutset_enumerate import is_minimal_cutset


def connected_sets(w, n_max, depth_limit = None):
    """Connected vertex sets containing the origin, by size, grown one neighbor at a time."""
    limit = w.radius if depth_limit is None else depth_limit
    layers = { 1: { frozenset([w.origin]) } }
    for n in range(2, n_max + 1):
        layer = set()
        for K in layers[n - 1]:
            for v in K:
                for u in w.adjacency[v]:
                    if u not in K and w.depth[u] <= limit:
                        layer.add(K | { u })
        layers[n] = layer
    return layers


def minimal_cutsets(w, n_max, size_max):
    """Edge boundaries of size <= n_max of origin sets inside B_{R-2} that pass the certificate."""
    found = {}
    for n, layer in connected_sets(w, size_max, depth_limit = w.radius - 2).items():
        for K in layer:
            edges = edge_boundary(w, K)
            if len(edges) <= n_max and is_minimal_cutset(w, edges).minimal:
                found[frozenset(edges)] = K
    return found


def bipartition_closeness(w, edges, subdivision = True):
    """Largest distance between the two sides over every bipartition of an edge set."""
    edges = sorted(edges)
    shift = 1 if subdivision else 0

    def dist(e, f):
        return min(w.distances_from(a)[b] for a in e for b in f) + shift

    best = 0
    rest = edges[1:]
    for k in range(len(rest)):
        for side in combinations(rest, k):
            Y1 = [edges[0], *side]
            Y2 = [e for e in rest if e not in side]
            best = max(best, min(dist(e, f) for e in Y1 for f in Y2))
    return best


def shortlex_words(group, gens, length):
    """First word reaching each element when all words up to `length` are listed in shortlex order."""
    words = { group.identity(): () }
    layer = [((), group.identity())]
    for _ in range(length):
        next_layer = []
        for word, g in layer:
            for i, s in enumerate(gens.elements):
                next_layer.append((word + (i,), group.multiply(g, s)))
        for word, g in next_layer:
            if g not in words:
                words[g] = word
        layer = next_layer
    return words
