"""Exact arithmetic over GF(q) and dense matrix operations.

Field elements are encoded as integers 0..q-1; for extension fields the
base-p digits of the code are the polynomial coefficients (little-endian:
digit i is the coefficient of x**i).  All matrix work is exact Gaussian
elimination driven by the field's arithmetic tables.  No floating point.
"""

from __future__ import annotations

import functools
import json

MAX_FIELD_ORDER = 256


class NonPrimeCharacteristic(ValueError):
    """The requested characteristic is not a prime number."""


class FieldTooLarge(ValueError):
    """The requested field order exceeds the supported cap of 256."""


class RankDeficient(ValueError):
    """standard_form requires a matrix of full row rank."""


class MatrixFormatError(ValueError):
    """A matrix text document failed to parse; carries the offending line."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# polynomial helpers over GF(p), coefficient lists little-endian


def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a, m, p):
    # m monic
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        c = a[-1]
        if c:
            shift = len(a) - 1 - dm
            for i, mi in enumerate(m):
                a[shift + i] = (a[shift + i] - c * mi) % p
        a.pop()
    return _poly_trim(a)


def _poly_is_irreducible(m, p):
    k = len(m) - 1
    for d in range(1, k // 2 + 1):
        for code in range(p**d):
            g = []
            c = code
            for _ in range(d):
                g.append(c % p)
                c //= p
            g.append(1)
            if not _poly_mod(m, g, p):
                return False
    return True


def _find_reduction_poly(p: int, k: int) -> tuple:
    """Smallest-encoding monic irreducible polynomial of degree k over GF(p)."""
    for code in range(p**k):
        digits = []
        c = code
        for _ in range(k):
            digits.append(c % p)
            c //= p
        cand = digits + [1]
        if _poly_is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError(f"no irreducible polynomial of degree {k} over GF({p})")


class FieldSpec:
    """A finite field GF(p**k), q <= 256, with precomputed arithmetic tables.

    Prime fields use direct modular arithmetic; extension fields use
    log/antilog tables over a fixed reduction polynomial so that products
    and inverses are constant-time lookups.
    """

    def __init__(self, p: int, k: int, reduction_poly: tuple):
        self.p = p
        self.k = k
        self.q = p**k
        self.reduction_poly = reduction_poly
        if k > 1:
            self._build_tables()

    # -- construction helpers ------------------------------------------------

    def _to_digits(self, code):
        digits = []
        for _ in range(self.k):
            digits.append(code % self.p)
            code //= self.p
        return digits

    def _from_digits(self, digits):
        code = 0
        for d in reversed(digits):
            code = code * self.p + d
        return code

    def _mul_poly(self, a: int, b: int) -> int:
        prod = _poly_mul(self._to_digits(a), self._to_digits(b), self.p)
        return self._from_digits(_poly_mod(prod, list(self.reduction_poly), self.p) + [0] * self.k)

    def _build_tables(self):
        q, p = self.q, self.p
        gen = None
        for g in range(2, q):
            seen = 1
            x = g
            while x != 1:
                x = self._mul_poly(x, g)
                seen += 1
            if seen == q - 1:
                gen = g
                break
        assert gen is not None
        exp = [1] * (q - 1)
        for i in range(1, q - 1):
            exp[i] = self._mul_poly(exp[i - 1], gen)
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        self._exp = exp
        self._log = log
        add = []
        for a in range(q):
            da = self._to_digits(a)
            row = []
            for b in range(q):
                db = self._to_digits(b)
                row.append(self._from_digits([(x + y) % p for x, y in zip(da, db)]))
            add.append(tuple(row))
        self._add = tuple(add)
        self._neg = tuple(self._from_digits([(-d) % p for d in self._to_digits(a)]) for a in range(q))

    # -- arithmetic ----------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        return self._add[a][b]

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self.k == 1:
            return pow(a, e, self.p)
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def elements(self):
        return range(self.q)

    def q_token(self) -> str:
        return str(self.p) if self.k == 1 else f"{self.p}^{self.k}"

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((self.p, self.k))

    def __repr__(self):
        return f"GF({self.q})" if self.k == 1 else f"GF({self.p}^{self.k})"


@functools.lru_cache(maxsize=None)
def field_new(p: int, k: int = 1) -> FieldSpec:
    """Build GF(p**k).  Instances are cached, so equal fields are identical."""
    if not _is_prime(p):
        raise NonPrimeCharacteristic(f"{p} is not prime")
    if k < 1:
        raise ValueError("extension degree must be >= 1")
    if p**k > MAX_FIELD_ORDER:
        raise FieldTooLarge(f"{p}^{k} exceeds the cap of {MAX_FIELD_ORDER}")
    poly = () if k == 1 else _find_reduction_poly(p, k)
    return FieldSpec(p, k, poly)


def field_from_order(q: int) -> FieldSpec:
    """GF(q) for a prime power q."""
    if q < 2:
        raise NonPrimeCharacteristic(f"{q} is not a prime power")
    p = 2
    while q % p:
        p += 1
    k = 0
    n = q
    while n % p == 0:
        n //= p
        k += 1
    if n != 1:
        raise NonPrimeCharacteristic(f"{q} is not a prime power")
    return field_new(p, k)


# ---------------------------------------------------------------------------
# matrices


class GfMatrix:
    """Immutable dense matrix over a FieldSpec.

    `rows`/`cols` are counts; `entries` is a tuple of row tuples of element
    codes.  Zero-row and zero-column matrices are allowed (rank 0).
    """

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: FieldSpec, entries, cols: int | None = None):
        rows = tuple(tuple(r) for r in entries)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged rows")
            if cols is not None and cols != width:
                raise ValueError("cols does not match row width")
            cols = width
        elif cols is None:
            cols = 0
        q = field.q
        for r in rows:
            for x in r:
                if not (0 <= x < q):
                    raise ValueError(f"entry {x} out of range for {field}")
        self.field = field
        self.rows = len(rows)
        self.cols = cols
        self.entries = rows

    def entry(self, i: int, j: int) -> int:
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "GfMatrix":
        return GfMatrix(self.field, [self.column(j) for j in range(self.cols)], cols=self.rows)

    def __eq__(self, other):
        return (
            isinstance(other, GfMatrix)
            and self.field == other.field
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.field, self.cols, self.entries))

    def __repr__(self):
        return f"GfMatrix({self.field!r}, {self.rows}x{self.cols})"


def identity_matrix(field: FieldSpec, n: int) -> GfMatrix:
    return GfMatrix(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)


def zero_matrix(field: FieldSpec, rows: int, cols: int) -> GfMatrix:
    return GfMatrix(field, [[0] * cols for _ in range(rows)], cols=cols)


def rank(A: GfMatrix) -> int:
    """Rank of the row space by exact Gaussian elimination."""
    f = A.field
    m, n = A.rows, A.cols
    if m == 0 or n == 0:
        return 0
    rows = [list(r) for r in A.entries]
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, m):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r]
        c = lead[col]
        if c != 1:
            inv = f.inv(c)
            rows[r] = lead = [f.mul(inv, x) for x in lead]
        for i in range(r + 1, m):
            c = rows[i][col]
            if c:
                ri = rows[i]
                rows[i] = [f.sub(x, f.mul(c, y)) for x, y in zip(ri, lead)]
        r += 1
        if r == m:
            break
    return r


def rank_of_columns(field: FieldSpec, columns) -> int:
    """Rank of a list of column vectors (tuples over the field)."""
    if not columns:
        return 0
    rows = [[col[i] for col in columns] for i in range(len(columns[0]))]
    return rank(GfMatrix(field, rows, cols=len(columns)))


def rref(A: GfMatrix) -> tuple:
    """Reduced row-echelon form.

    Args:
        A: any matrix; zero rows end up at the bottom.

    Returns:
        (R, pivot_cols): R is the RREF with the same row space as A, and
        pivot_cols is the strictly increasing tuple of pivot column indices
        (its length is the rank).
    """
    f = A.field
    m, n = A.rows, A.cols
    rows = [list(r) for r in A.entries]
    pivots = []
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, m):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r]
        c = lead[col]
        if c != 1:
            inv = f.inv(c)
            rows[r] = lead = [f.mul(inv, x) for x in lead]
        for i in range(m):
            if i != r and rows[i][col]:
                c = rows[i][col]
                ri = rows[i]
                rows[i] = [f.sub(x, f.mul(c, y)) for x, y in zip(ri, lead)]
        pivots.append(col)
        r += 1
        if r == m:
            break
    return GfMatrix(f, rows, cols=n), tuple(pivots)


def row_basis(A: GfMatrix) -> GfMatrix:
    """The nonzero rows of rref(A): a full-row-rank matrix with A's row space."""
    R, pivots = rref(A)
    return GfMatrix(A.field, R.entries[: len(pivots)], cols=A.cols)


def standard_form(A: GfMatrix) -> tuple:
    """Column-permute a full-row-rank matrix into [I | B].

    Returns (B, perm) where column j of B is column perm[j] of the
    row-reduced input.  Applying the inverse permutation to B's columns
    recovers a matrix with the same row space as A.
    """
    R, pivots = rref(A)
    if len(pivots) < A.rows:
        raise RankDeficient(f"rank {len(pivots)} < {A.rows} rows")
    others = [j for j in range(A.cols) if j not in set(pivots)]
    perm = tuple(pivots) + tuple(others)
    entries = [[R.entries[i][j] for j in perm] for i in range(A.rows)]
    return GfMatrix(A.field, entries, cols=A.cols), perm


def apply_column_permutation(A: GfMatrix, perm) -> GfMatrix:
    """Matrix whose column j is A's column perm[j]."""
    entries = [[row[j] for j in perm] for row in A.entries]
    return GfMatrix(A.field, entries, cols=A.cols)


def inverse_permutation(perm) -> tuple:
    inv = [0] * len(perm)
    for i, j in enumerate(perm):
        inv[j] = i
    return tuple(inv)


def same_row_space(A: GfMatrix, B: GfMatrix) -> bool:
    if A.field != B.field or A.cols != B.cols:
        return False
    return row_basis(A) == row_basis(B)


def orthogonal_complement(A: GfMatrix) -> GfMatrix:
    """A full-row-rank generator of the orthogonal complement of A's row
    space, via [I | B] -> [-B^T | I] with the column permutation undone."""
    field = A.field
    n = A.cols
    basis = row_basis(A)
    r = basis.rows
    if r == 0:
        return identity_matrix(field, n)
    if r == n:
        return GfMatrix(field, [], cols=n)
    std, perm = standard_form(basis)
    entries = []
    for i in range(n - r):
        row = [field.neg(std.entries[j][r + i]) for j in range(r)]
        row += [1 if j == i else 0 for j in range(n - r)]
        entries.append(row)
    return apply_column_permutation(GfMatrix(field, entries, cols=n), inverse_permutation(perm))


# ---------------------------------------------------------------------------
# text format: first line "q m n", then m rows of n space-separated codes


def matrix_to_text(A: GfMatrix) -> str:
    lines = [f"{A.field.q_token()} {A.rows} {A.cols}"]
    for row in A.entries:
        lines.append(" ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"


def parse_field_token(token: str) -> FieldSpec:
    if "^" in token:
        ps, ks = token.split("^", 1)
        return field_new(int(ps), int(ks))
    return field_from_order(int(token))


def matrix_from_lines(lines, start: int = 0) -> tuple:
    """Parse a matrix from a list of lines; returns (GfMatrix, next_index)."""
    i = start
    while i < len(lines) and not lines[i].strip():
        i += 1
    if i >= len(lines):
        raise MatrixFormatError("missing header", line=start + 1)
    header = lines[i].split()
    if len(header) != 3:
        raise MatrixFormatError("header must be 'q m n'", line=i + 1)
    try:
        field = parse_field_token(header[0])
        m, n = int(header[1]), int(header[2])
    except (ValueError, NonPrimeCharacteristic, FieldTooLarge) as exc:
        raise MatrixFormatError(str(exc), line=i + 1) from exc
    i += 1
    rows = []
    for r in range(m):
        while i < len(lines) and not lines[i].strip():
            i += 1
        if i >= len(lines):
            raise MatrixFormatError(f"expected {m} rows, found {r}", line=i)
        toks = lines[i].split()
        if len(toks) != n:
            raise MatrixFormatError(f"expected {n} entries, found {len(toks)}", line=i + 1)
        try:
            row = [int(t) for t in toks]
        except ValueError as exc:
            raise MatrixFormatError(str(exc), line=i + 1) from exc
        for x in row:
            if not (0 <= x < field.q):
                raise MatrixFormatError(f"entry {x} out of range 0..{field.q - 1}", line=i + 1)
        rows.append(row)
        i += 1
    return GfMatrix(field, rows, cols=n), i


def matrix_from_text(text: str) -> GfMatrix:
    A, _ = matrix_from_lines(text.splitlines())
    return A


def matrix_to_doc(A: GfMatrix) -> dict:
    return {
        "field": A.field.q_token(),
        "rows": A.rows,
        "cols": A.cols,
        "entries": [list(r) for r in A.entries],
    }


def doc_to_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))
