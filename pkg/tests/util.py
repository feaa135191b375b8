"""Independent oracles and small builders shared across the test suite.

These deliberately avoid the library's solver code paths: pathwidth by
brute force over all orderings, graphic ranks by union-find, and graph
pathwidth by a state-space search over bounded bag sequences.
"""

from __future__ import annotations

import itertools

from matwidth import field_new
from matwidth.algebra import GfMatrix
from matwidth.matroid import VectorMatroid

GF2 = field_new(2)
GF3 = field_new(3)
GF4 = field_new(2, 2)
GF5 = field_new(5)


def brute_force_pathwidth(M: VectorMatroid) -> int:
    """Minimum ordering width over all n! orderings (prefix lambdas are
    cached per subset, so this is feasible up to n = 8)."""
    n = M.size
    lam = {}

    def lam_of(mask):
        if mask not in lam:
            lam[mask] = M.connectivity(mask)
        return lam[mask]

    best = None
    for perm in itertools.permutations(range(n)):
        mask = 0
        width = 0
        for i in perm:
            mask |= 1 << i
            width = max(width, lam_of(mask))
            if best is not None and width >= best + 1:
                break
        best = width if best is None else min(best, width)
    return 0 if best is None else best


def graphic_rank(G, edge_labels) -> int:
    """Union-find rank of an edge-label subset of a multigraph."""
    chosen = set(edge_labels)
    edges = [(u, v) for u, v, lbl in G.edges if lbl in chosen]
    verts = {w for e in edges for w in e}
    parent = {v: v for v in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    rank = 0
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            rank += 1
    return rank


def graphic_lambda(G, edge_labels) -> int:
    """Connectivity of an edge subset straight from union-find ranks."""
    inside = set(edge_labels)
    outside = [lbl for lbl in G.edge_labels() if lbl not in inside]
    total = graphic_rank(G, G.edge_labels())
    return graphic_rank(G, inside) + graphic_rank(G, outside) - total


def bag_search_pathwidth(G) -> int:
    """Exact graph pathwidth by searching over bag sequences of bounded
    width: states are (current bag, forgotten set); a vertex may be
    forgotten only once all its neighbours have been met."""
    n = G.vertex_count
    if n == 0:
        return 0
    adj = G.adjacency_masks()
    full = (1 << n) - 1

    def feasible(w):
        start = (0, 0)
        seen = {start}
        stack = [start]
        while stack:
            bag, gone = stack.pop()
            if bag | gone == full:
                return True
            for v in range(n):
                bit = 1 << v
                if not (bag | gone) & bit and bin(bag | bit).count("1") <= w + 1:
                    state = (bag | bit, gone)
                    if state not in seen:
                        seen.add(state)
                        stack.append(state)
            for v in range(n):
                bit = 1 << v
                if bag & bit and adj[v] & ~(bag | gone) == 0:
                    state = (bag ^ bit, gone | bit)
                    if state not in seen:
                        seen.add(state)
                        stack.append(state)
        return False

    w = 0
    while not feasible(w):
        w += 1
    return w


def uniform_check(M: VectorMatroid, k: int) -> bool:
    """Rank function equals min(|S|, k) on every subset."""
    for mask in range(1 << M.size):
        if M.rank_subset(mask) != min(bin(mask).count("1"), k):
            return False
    return True


def matrix(field, rows) -> GfMatrix:
    return GfMatrix(field, rows, cols=len(rows[0]) if rows else 0)


def matroid(field, rows, labels=None) -> VectorMatroid:
    return VectorMatroid(matrix(field, rows), labels)


def u24(field=GF3) -> VectorMatroid:
    if field == GF3:
        return matroid(GF3, [(1, 0, 1, 1), (0, 1, 1, 2)])
    from matwidth.minors import uniform_matroid

    return uniform_matroid(2, 4, field)
