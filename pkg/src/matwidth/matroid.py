"""Vector matroids M[A] on the columns of a matrix over GF(q).

Ground subsets travel as int bitmasks over column positions (ground sets are
capped at 64 elements); every public query also accepts an iterable of
labels.  Rank queries are memoized, and a full rank table over all 2^n
subsets can be materialized for the exact solvers: subsets are swept in
numeric order and each step reuses the canonical span (reduced echelon
basis) of the subset minus its lowest element, so Gaussian elimination runs
only once per distinct (span, element) pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra
from .algebra import GfMatrix

MAX_GROUND = 64
MAX_TABLE = 26  # 2^26 table entries; exact solvers apply their own caps
ISO_MAX_GROUND = 12


class GroundSetTooLarge(ValueError):
    """Ground set exceeds a hard size cap."""


class OverlappingSets(ValueError):
    """Contract and delete sets of a minor specification intersect."""


class FieldMismatch(ValueError):
    """Operands live over different fields."""


def label_key(label):
    """Total deterministic order on labels: ints first, then strings."""
    if isinstance(label, int):
        return (0, label, "")
    return (1, 0, str(label))


def sorted_labels(labels):
    return sorted(labels, key=label_key)


@dataclass(frozen=True)
class MinorSpec:
    """Disjoint contract / delete label sets defining a minor M/X\\Y."""

    contract: frozenset
    delete: frozenset

    def __post_init__(self):
        if self.contract & self.delete:
            raise OverlappingSets(f"contract and delete share {set(self.contract & self.delete)}")


class VectorMatroid:
    """The matroid of a matrix's columns, with memoized rank oracles.

    Logically immutable; the internal caches only memoize pure functions, so
    concurrent queries are safe (recomputing an entry is idempotent).
    """

    def __init__(self, matrix: GfMatrix, labels=None):
        if matrix.cols > MAX_GROUND:
            raise GroundSetTooLarge(f"{matrix.cols} > {MAX_GROUND} ground elements")
        if labels is None:
            labels = tuple(range(1, matrix.cols + 1))
        else:
            labels = tuple(labels)
        if len(labels) != matrix.cols:
            raise ValueError(f"{len(labels)} labels for {matrix.cols} columns")
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be pairwise distinct")
        self.matrix = matrix
        self.field = matrix.field
        self.labels = labels
        self._pos = {lbl: i for i, lbl in enumerate(labels)}
        self._cols = tuple(matrix.column(j) for j in range(matrix.cols))
        self.rank_full = algebra.rank(matrix)
        self._rank_cache = {0: 0}
        self._lambda_cache = {}
        self._rank_table = None

    # -- ground set ----------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def position(self, label) -> int:
        try:
            return self._pos[label]
        except KeyError:
            raise KeyError(f"unknown ground element {label!r}") from None

    def mask_of(self, subset) -> int:
        """Bitmask for an int mask (passed through) or an iterable of labels."""
        if isinstance(subset, int):
            if subset < 0 or subset > self.full_mask:
                raise ValueError(f"mask {subset} out of range")
            return subset
        mask = 0
        for lbl in subset:
            bit = 1 << self.position(lbl)
            if mask & bit:
                raise ValueError(f"repeated element {lbl!r}")
            mask |= bit
        return mask

    def labels_of(self, mask: int) -> tuple:
        """Labels of a mask in ground (column) order."""
        out = []
        i = 0
        while mask:
            if mask & 1:
                out.append(self.labels[i])
            mask >>= 1
            i += 1
        return tuple(out)

    # -- rank oracles ----------------------------------------------------------

    def _rank_mask(self, mask: int) -> int:
        table = self._rank_table
        if table is not None:
            return int(table[mask])
        cached = self._rank_cache.get(mask)
        if cached is not None:
            return cached
        cols = [self._cols[i] for i in _bit_positions(mask)]
        r = algebra.rank_of_columns(self.field, cols)
        self._rank_cache[mask] = r
        return r

    def rank_subset(self, subset) -> int:
        """r(J): dimension of the span of the columns indexed by J."""
        return self._rank_mask(self.mask_of(subset))

    def connectivity(self, subset) -> int:
        """lambda(X) = r(X) + r(E - X) - r(E); symmetric, cached on min(X, E-X)."""
        mask = self.mask_of(subset)
        comp = self.full_mask ^ mask
        key = min(mask, comp)
        lam = self._lambda_cache.get(key)
        if lam is None:
            lam = self._rank_mask(mask) + self._rank_mask(comp) - self.rank_full
            self._lambda_cache[key] = lam
        return lam

    def closure(self, subset):
        """cl(X) = {e : r(X + e) = r(X)}.  Mask in, mask out; labels in, frozenset out."""
        as_mask = isinstance(subset, int)
        mask = self.mask_of(subset)
        cl = mask
        r = self._rank_mask(mask)
        for i in range(self.size):
            bit = 1 << i
            if not (mask & bit) and self._rank_mask(mask | bit) == r:
                cl |= bit
        return cl if as_mask else frozenset(self.labels_of(cl))

    # -- full rank table -------------------------------------------------------

    def rank_table(self) -> np.ndarray:
        """Ranks of all 2^n subsets (uint8, indexed by mask)."""
        if self._rank_table is None:
            n = self.size
            if n > MAX_TABLE:
                raise GroundSetTooLarge(f"rank table needs 2^{n} entries")
            self._rank_table = self._sweep_rank_table()
        return self._rank_table

    def has_rank_table(self) -> bool:
        return self._rank_table is not None

    def _sweep_rank_table(self) -> np.ndarray:
        n = self.size
        field = self.field
        cols = self._cols
        size = 1 << n
        # interned canonical spans: tuple of reduced basis rows over F^m
        state_rank = [0]
        trans: list[dict] = [{}]
        states = {(): 0}
        sigs = [()]
        spans = [0] * size
        ranks = bytearray(size)
        for S in range(1, size):
            low_bit = S & -S
            prev = spans[S ^ low_bit]
            e = low_bit.bit_length() - 1
            t = trans[prev].get(e)
            if t is None:
                sig = _span_insert(field, sigs[prev], cols[e])
                if sig is None:
                    t = prev
                else:
                    t = states.get(sig)
                    if t is None:
                        t = len(sigs)
                        states[sig] = t
                        sigs.append(sig)
                        state_rank.append(len(sig))
                        trans.append({})
                trans[prev][e] = t
            spans[S] = t
            ranks[S] = state_rank[t]
        return np.frombuffer(bytes(ranks), dtype=np.uint8)

    def __repr__(self):
        return f"VectorMatroid({self.field!r}, n={self.size}, rank={self.rank_full})"


def _bit_positions(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _span_insert(field, basis, col):
    """Insert a column into a canonical reduced basis; None if already spanned."""
    v = list(col)
    for row in basis:
        p = _pivot(row)
        c = v[p]
        if c:
            v = [field.sub(x, field.mul(c, y)) for x, y in zip(v, row)]
    p = _pivot(v)
    if p is None:
        return None
    c = v[p]
    if c != 1:
        inv = field.inv(c)
        v = [field.mul(inv, x) for x in v]
    new_rows = []
    for row in basis:
        c = row[p]
        if c:
            row = tuple(field.sub(x, field.mul(c, y)) for x, y in zip(row, v))
        new_rows.append(row)
    new_rows.append(tuple(v))
    new_rows.sort(key=_pivot)
    return tuple(new_rows)


def _pivot(row):
    for i, x in enumerate(row):
        if x:
            return i
    return None


# ---------------------------------------------------------------------------
# minors, duals, direct sums


def apply_minor(M: VectorMatroid, spec: MinorSpec) -> VectorMatroid:
    """M / contract \\ delete.  Contraction of dependent sets is allowed:
    a maximal independent subset is contracted and the rest deleted, which
    realizes r_N(S) = r_M(S + X) - r_M(X)."""
    cmask = M.mask_of(spec.contract)
    dmask = M.mask_of(spec.delete)
    if cmask & dmask:
        raise OverlappingSets("contract and delete overlap")
    field = M.field

    # greedy maximal independent subset of the contract set, in ground order
    indep = []
    acc = 0
    r = 0
    for i in _bit_positions(cmask):
        bit = 1 << i
        if M._rank_mask(acc | bit) > r:
            indep.append(i)
            acc |= bit
            r += 1

    rows = [list(row) for row in M.matrix.entries]
    m = len(rows)
    pivot_rows = []
    used = set()
    for i in indep:
        piv = None
        for rr in range(m):
            if rr not in used and rows[rr][i]:
                piv = rr
                break
        assert piv is not None, "independent column has no pivot row"
        lead = rows[piv]
        c = lead[i]
        if c != 1:
            inv = field.inv(c)
            rows[piv] = lead = [field.mul(inv, x) for x in lead]
        for rr in range(m):
            if rr != piv and rows[rr][i]:
                c = rows[rr][i]
                rows[rr] = [field.sub(x, field.mul(c, y)) for x, y in zip(rows[rr], lead)]
        used.add(piv)
        pivot_rows.append(piv)

    drop_cols = cmask | dmask
    keep_cols = [j for j in range(M.size) if not (drop_cols >> j) & 1]
    keep_rows = [rr for rr in range(m) if rr not in used]
    entries = [[rows[rr][j] for j in keep_cols] for rr in keep_rows]
    sub = GfMatrix(field, entries, cols=len(keep_cols))
    return VectorMatroid(sub, tuple(M.labels[j] for j in keep_cols))


def delete(M: VectorMatroid, labels) -> VectorMatroid:
    return apply_minor(M, MinorSpec(frozenset(), frozenset(labels)))


def contract(M: VectorMatroid, labels) -> VectorMatroid:
    return apply_minor(M, MinorSpec(frozenset(labels), frozenset()))


def dual(M: VectorMatroid) -> VectorMatroid:
    """The dual matroid via [I | B] -> [-B^T | I], labels preserved."""
    return VectorMatroid(algebra.orthogonal_complement(M.matrix), M.labels)


def direct_sum(M1: VectorMatroid, M2: VectorMatroid) -> VectorMatroid:
    """Block-diagonal sum; clashing labels of the second operand get primes."""
    if M1.field != M2.field:
        raise FieldMismatch(f"{M1.field} vs {M2.field}")
    taken = set(M1.labels)
    labels2 = []
    for lbl in M2.labels:
        new = lbl
        while new in taken or new in labels2:
            new = f"{new}'"
        labels2.append(new)
    n1, n2 = M1.size, M2.size
    entries = [list(row) + [0] * n2 for row in M1.matrix.entries]
    entries += [[0] * n1 + list(row) for row in M2.matrix.entries]
    mat = GfMatrix(M1.field, entries, cols=n1 + n2)
    return VectorMatroid(mat, M1.labels + tuple(labels2))


# ---------------------------------------------------------------------------
# isomorphism


def is_isomorphic(M: VectorMatroid, N: VectorMatroid):
    """A label bijection {e of M -> f of N} under which the rank functions
    agree on every subset, or None.  Deterministic: elements are matched in
    decreasing small-circuit-degree order and images tried in label order."""
    if M.size > ISO_MAX_GROUND or N.size > ISO_MAX_GROUND:
        raise GroundSetTooLarge(f"isomorphism capped at {ISO_MAX_GROUND} elements")
    n = M.size
    if n != N.size or M.rank_full != N.rank_full:
        return None
    if n == 0:
        return {}
    TM = M.rank_table()
    TN = N.rank_table()
    for card in range(1, min(3, n) + 1):
        if _layer_profile(TM, n, card) != _layer_profile(TN, n, card):
            return None

    inv_m = _element_invariants(TM, n)
    inv_n = _element_invariants(TN, n)
    if sorted(inv_m) != sorted(inv_n):
        return None

    order = sorted(range(n), key=lambda i: (_circuit_degree_key(inv_m[i]), label_key(M.labels[i])))
    image = [-1] * n
    used = [False] * n

    def masks_through(depth):
        # all subsets of order[:depth+1] that contain order[depth]
        fixed = order[depth]
        rest = order[:depth]
        for sub in range(1 << depth):
            m_mask = 1 << fixed
            for t, pos in enumerate(rest):
                if (sub >> t) & 1:
                    m_mask |= 1 << pos
            yield m_mask

    def translate(mask):
        out = 0
        while mask:
            low = mask & -mask
            out |= 1 << image[low.bit_length() - 1]
            mask ^= low
        return out

    def backtrack(depth):
        if depth == n:
            return True
        pos = order[depth]
        for cand in sorted(range(n), key=lambda j: label_key(N.labels[j])):
            if used[cand] or inv_n[cand] != inv_m[pos]:
                continue
            image[pos] = cand
            used[cand] = True
            ok = all(TM[m_mask] == TN[translate(m_mask)] for m_mask in masks_through(depth))
            if ok and backtrack(depth + 1):
                return True
            used[cand] = False
            image[pos] = -1
        return False

    if not backtrack(0):
        return None
    # safety: verify the bijection on every subset
    for mask in range(1 << n):
        if TM[mask] != TN[translate(mask)]:
            raise AssertionError("isomorphism search returned an invalid bijection")
    return {M.labels[i]: N.labels[image[i]] for i in range(n)}


def _layer_profile(table, n, card):
    idx = [m for m in range(1 << n) if bin(m).count("1") == card]
    return sorted(int(table[m]) for m in idx)


def _element_invariants(table, n):
    inv = []
    for i in range(n):
        bit = 1 << i
        single = int(table[bit])
        dep_pairs = 0
        dep_triples = 0
        for j in range(n):
            if j == i:
                continue
            if table[bit | (1 << j)] < 2:
                dep_pairs += 1
            for k in range(j + 1, n):
                if k == i:
                    continue
                if table[bit | (1 << j) | (1 << k)] < 3:
                    dep_triples += 1
        inv.append((single, dep_pairs, dep_triples))
    return inv


def _circuit_degree_key(inv):
    single, dep_pairs, dep_triples = inv
    return (-dep_pairs, -dep_triples, single)


# ---------------------------------------------------------------------------
# matroid files: matrix text plus an optional trailing "labels ..." line


def matroid_to_text(M: VectorMatroid) -> str:
    text = algebra.matrix_to_text(M.matrix)
    if M.labels != tuple(range(1, M.size + 1)):
        text += "labels " + " ".join(str(lbl) for lbl in M.labels) + "\n"
    return text


def _parse_label_token(tok: str):
    try:
        return int(tok)
    except ValueError:
        return tok


def matroid_from_text(text: str) -> VectorMatroid:
    lines = text.splitlines()
    mat, nxt = algebra.matrix_from_lines(lines)
    labels = None
    for i in range(nxt, len(lines)):
        stripped = lines[i].strip()
        if not stripped:
            continue
        toks = stripped.split()
        if toks[0] != "labels":
            raise algebra.MatrixFormatError(f"unexpected line {stripped!r}", line=i + 1)
        if len(toks) - 1 != mat.cols:
            raise algebra.MatrixFormatError(
                f"expected {mat.cols} labels, found {len(toks) - 1}", line=i + 1
            )
        labels = tuple(_parse_label_token(t) for t in toks[1:])
    return VectorMatroid(mat, labels)
