"""Ordering widths, exact matroid pathwidth with certificate orderings,
a greedy upper bound, and caterpillar branch-decompositions.

The exact solver is a subset DP over prefix sets:
B(S) = max(lambda(S), min over e in S of B(S - e)), B(empty) = 0, swept in
cardinality layers over the full rank table; the optimal ordering is
recovered by walking predecessors from the full ground set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .matroid import VectorMatroid, label_key

DEFAULT_EXACT_CAP = 24


class NotAPermutation(ValueError):
    """The given ordering is not a permutation of the ground set."""


class GroundSetTooLargeForExact(ValueError):
    """Ground set exceeds the exact solver's cap; no silent approximation."""


class TooFewElements(ValueError):
    """Caterpillar trees need at least two leaves."""


class LeafLabelMismatch(ValueError):
    """A branch-decomposition's leaf labels must be exactly the ground set."""


@dataclass(frozen=True)
class WidthCertificate:
    """An ordering together with all its prefix connectivity values."""

    width: int
    ordering: tuple
    prefix_lambdas: tuple

    def to_doc(self) -> dict:
        return {
            "width": self.width,
            "ordering": list(self.ordering),
            "prefix_lambdas": list(self.prefix_lambdas),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_doc(), sort_keys=True, separators=(",", ":"))


def _check_permutation(M: VectorMatroid, ordering) -> tuple:
    ordering = tuple(ordering)
    if len(ordering) != M.size or set(ordering) != set(M.labels):
        raise NotAPermutation("ordering must list every ground element exactly once")
    return ordering


def width_of_ordering(M: VectorMatroid, ordering) -> WidthCertificate:
    """Certificate for w_M(e_1..e_n) = max over prefixes of lambda."""
    ordering = _check_permutation(M, ordering)
    mask = 0
    lambdas = []
    for lbl in ordering:
        mask |= 1 << M.position(lbl)
        lambdas.append(M.connectivity(mask))
    width = max(lambdas, default=0)
    return WidthCertificate(width, ordering, tuple(lambdas))


def _lambda_table(M: VectorMatroid) -> np.ndarray:
    ranks = M.rank_table()
    lam = ranks.astype(np.int16) + ranks[::-1].astype(np.int16) - int(M.rank_full)
    return lam.astype(np.uint8)


def _prefix_dp(lam: np.ndarray, n: int) -> np.ndarray:
    """B(S) for every subset, layered by cardinality (vectorized per element)."""
    size = 1 << n
    pc = np.bitwise_count(np.arange(size, dtype=np.uint32))
    B = np.zeros(size, dtype=np.uint8)
    for card in range(1, n + 1):
        idx = np.nonzero(pc == card)[0]
        best = np.full(idx.size, 255, dtype=np.uint8)
        for e in range(n):
            bit = 1 << e
            sel = (idx & bit) != 0
            sub = idx[sel]
            if sub.size:
                best[sel] = np.minimum(best[sel], B[sub ^ bit])
        B[idx] = np.maximum(lam[idx], best)
    return B


def pathwidth_exact(M: VectorMatroid, exact_cap: int = DEFAULT_EXACT_CAP) -> WidthCertificate:
    """Optimal width and a witnessing ordering; refuses beyond the cap."""
    n = M.size
    if n > exact_cap:
        raise GroundSetTooLargeForExact(f"{n} elements exceeds the exact cap {exact_cap}")
    if n == 0:
        return WidthCertificate(0, (), ())
    lam = _lambda_table(M)
    B = _prefix_dp(lam, n)
    # recover the ordering back to front: smallest B(S - e), ties by label
    seq = []
    S = (1 << n) - 1
    while S:
        best = None
        for i in range(n):
            bit = 1 << i
            if S & bit:
                cand = (int(B[S ^ bit]), label_key(M.labels[i]), i)
                if best is None or cand < best:
                    best = cand
        i = best[2]
        seq.append(M.labels[i])
        S ^= 1 << i
    ordering = tuple(reversed(seq))
    mask = 0
    lambdas = []
    for lbl in ordering:
        mask |= 1 << M.position(lbl)
        lambdas.append(int(lam[mask]))
    width = int(B[(1 << n) - 1])
    assert width == max(lambdas), "certificate does not match DP value"
    return WidthCertificate(width, ordering, tuple(lambdas))


def pathwidth_upper_greedy(M: VectorMatroid) -> WidthCertificate:
    """Greedy upper bound: repeatedly take the element minimizing the new
    prefix lambda, ties by label order."""
    remaining = list(range(M.size))
    mask = 0
    ordering = []
    lambdas = []
    while remaining:
        best = None
        for i in remaining:
            lam = M.connectivity(mask | (1 << i))
            cand = (lam, label_key(M.labels[i]), i)
            if best is None or cand < best:
                best = cand
        lam, _, i = best
        remaining.remove(i)
        mask |= 1 << i
        ordering.append(M.labels[i])
        lambdas.append(lam)
    return WidthCertificate(max(lambdas, default=0), tuple(ordering), tuple(lambdas))


# ---------------------------------------------------------------------------
# cubic trees


@dataclass(frozen=True)
class CubicTree:
    """A tree with all degrees 1 or 3 and leaves labelled by ground elements."""

    nodes: tuple
    edges: tuple
    leaf_labels: tuple  # (node, label) pairs

    def leaf_map(self) -> dict:
        return dict(self.leaf_labels)


def caterpillar(ordering) -> CubicTree:
    """The spine tree whose leaves, in spine order, are the ordering."""
    ordering = tuple(ordering)
    n = len(ordering)
    if n < 2:
        raise TooFewElements("caterpillar needs at least 2 elements")
    leaves = tuple(range(n))
    leaf_labels = tuple((i, ordering[i]) for i in range(n))
    if n == 2:
        return CubicTree(leaves, ((0, 1),), leaf_labels)
    t = n - 2
    spine = tuple(range(n, n + t))
    edges = [(spine[j], spine[j + 1]) for j in range(t - 1)]
    edges.append((0, spine[0]))
    for i in range(1, n - 1):
        edges.append((i, spine[i - 1]))
    edges.append((n - 1, spine[t - 1]))
    return CubicTree(leaves + spine, tuple(edges), leaf_labels)


def branch_width_of_tree(M: VectorMatroid, T: CubicTree) -> int:
    """Max over tree edges of lambda(displayed leaf set)."""
    leaf_map = T.leaf_map()
    if set(leaf_map.values()) != set(M.labels) or len(leaf_map) != M.size:
        raise LeafLabelMismatch("leaf labels must be exactly the ground set")
    adj = {v: [] for v in T.nodes}
    for a, b in T.edges:
        adj[a].append(b)
        adj[b].append(a)
    for v in T.nodes:
        d = len(adj[v])
        if d not in (1, 3):
            raise ValueError(f"node {v} has degree {d}; cubic trees need 1 or 3")
    width = 0
    for a, b in T.edges:
        # leaves on a's side of the edge (a, b)
        stack = [a]
        seen = {a, b}
        mask = 0
        while stack:
            v = stack.pop()
            if v in leaf_map:
                mask |= 1 << M.position(leaf_map[v])
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        width = max(width, M.connectivity(mask))
    return width
