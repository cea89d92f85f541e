"""Exact dense linear algebra over the rings of ``weylknots.rings``.

Matrices are immutable grids of ring elements sharing one ring tag.
Determinants run fraction-free (Bareiss) whenever the entry ring has exact
division; Laurent matrices are first cleared row by row to the polynomial
ring with the extracted monomial unit tracked, which keeps intermediate
entries polynomial.  Rings without exact division (bivariate) fall back to
a division-free minor-expansion determinant, which also serves as the
independent oracle for the Bareiss path in the test suite.
"""

from __future__ import annotations

import itertools

from .rings import (
    FieldScalar,
    FractionElement,
    FractionField,
    LaurentPolynomial,
    LaurentRing,
    NonUnitError,
    PolynomialRing,
    PrimeField,
    RationalField,
    RingError,
    RingMismatchError,
    UniPolynomial,
    laurent_canonicalize,
    poly_gcd,
)


def _ring_of(entry):
    return entry.ring


class Matrix:
    """Immutable rectangular matrix over one declared ring."""

    __slots__ = ("ring", "rows", "nrows", "ncols")

    def __init__(self, rows, ring=None):
        rows = tuple(tuple(r) for r in rows)
        if not rows or not rows[0]:
            raise ValueError("matrix needs at least one row and one column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        if ring is None:
            ring = _ring_of(rows[0][0])
        for r in rows:
            for e in r:
                if e.ring != ring:
                    raise RingMismatchError(f"entry {e!r} not in {ring}")
        self.ring = ring
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = width

    @classmethod
    def identity(cls, ring, n: int):
        z, o = ring.zero, ring.one
        return cls([[o if i == j else z for j in range(n)] for i in range(n)], ring)

    @classmethod
    def zeros(cls, ring, nrows: int, ncols: int | None = None):
        z = ring.zero
        ncols = nrows if ncols is None else ncols
        return cls([[z] * ncols for _ in range(nrows)], ring)

    @classmethod
    def scalar(cls, ring, n: int, value):
        z = ring.zero
        return cls([[value if i == j else z for j in range(n)] for i in range(n)], ring)

    @classmethod
    def block(cls, grid):
        """Assemble from a 2D grid of equally-ringed matrices."""
        rows = []
        for band in grid:
            height = band[0].nrows
            if any(b.nrows != height for b in band):
                raise ValueError("block heights differ within a band")
            for i in range(height):
                row = []
                for b in band:
                    row.extend(b.rows[i])
                rows.append(row)
        return cls(rows)

    def is_square(self):
        return self.nrows == self.ncols

    def __getitem__(self, i):
        return self.rows[i]

    def submatrix(self, row_idx, col_idx):
        return Matrix([[self.rows[i][j] for j in col_idx] for i in row_idx], self.ring)

    def block_at(self, i: int, j: int, k: int):
        """The k x k block with top-left corner (i*k, j*k)."""
        return self.submatrix(range(i * k, (i + 1) * k), range(j * k, (j + 1) * k))

    def transpose(self):
        return Matrix(list(zip(*self.rows)), self.ring)

    def map_entries(self, fn, ring=None):
        return Matrix([[fn(e) for e in r] for r in self.rows],
                      ring if ring is not None else None)

    def __add__(self, other):
        self._compat(other, same_shape=True)
        return Matrix([[a + b for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.rows, other.rows)], self.ring)

    def __sub__(self, other):
        self._compat(other, same_shape=True)
        return Matrix([[a - b for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.rows, other.rows)], self.ring)

    def __neg__(self):
        return Matrix([[-a for a in r] for r in self.rows], self.ring)

    def _compat(self, other, same_shape=False):
        if not isinstance(other, Matrix):
            raise TypeError(f"expected a Matrix, got {other!r}")
        if other.ring != self.ring:
            raise RingMismatchError(f"mixed matrix rings: {self.ring} vs {other.ring}")
        if same_shape and (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError(f"shape mismatch: {self.nrows}x{self.ncols} "
                             f"vs {other.nrows}x{other.ncols}")

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return self.scale(other)
        self._compat(other)
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.nrows}x{self.ncols} "
                             f"by {other.nrows}x{other.ncols}")
        cols = other.transpose().rows
        out = []
        for row in self.rows:
            out_row = []
            for col in cols:
                acc = self.ring.zero
                for a, b in zip(row, col):
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                out_row.append(acc)
            out.append(out_row)
        return Matrix(out, self.ring)

    def scale(self, scalar):
        return Matrix([[scalar * a for a in r] for r in self.rows], self.ring)

    def __pow__(self, n: int):
        if not self.is_square():
            raise ValueError("power of a non-square matrix")
        if n < 0:
            return mat_inverse(self) ** (-n)
        result = Matrix.identity(self.ring, self.nrows)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Matrix) or other.ring != self.ring:
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))

    def is_zero(self):
        return all(e.is_zero() for r in self.rows for e in r)

    def is_identity(self):
        if not self.is_square():
            return False
        return all((self.rows[i][j].is_one() if i == j else self.rows[i][j].is_zero())
                   for i in range(self.nrows) for j in range(self.ncols))

    def trace(self):
        if not self.is_square():
            raise ValueError("trace of a non-square matrix")
        acc = self.ring.zero
        for i in range(self.nrows):
            acc = acc + self.rows[i][i]
        return acc

    def __repr__(self):
        body = ", ".join("[" + ", ".join(repr(e) for e in r) + "]" for r in self.rows)
        return f"[{body}]"


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return a * b


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return a + b


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return a - b


def scalar_mul(c, m: Matrix) -> Matrix:
    return m.scale(c)


# ---------------------------------------------------------------------------
# determinants
# ---------------------------------------------------------------------------

def _bareiss_det(rows, zero, one):
    """Fraction-free elimination; every division is exact in the domain."""
    n = len(rows)
    m = [list(r) for r in rows]
    sign = 1
    prev = one
    for k in range(n - 1):
        if m[k][k].is_zero():
            for i in range(k + 1, n):
                if not m[i][k].is_zero():
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return zero
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            if mik.is_zero():
                for j in range(k + 1, n):
                    row_i[j] = (pivot * row_i[j]).exact_div(prev)
            else:
                for j in range(k + 1, n):
                    row_i[j] = (pivot * row_i[j] - mik * row_k[j]).exact_div(prev)
            row_i[k] = zero
        prev = pivot
    d = m[n - 1][n - 1]
    return -d if sign < 0 else d


def det_division_free(m: Matrix):
    """Minor expansion over column subsets; works in any commutative ring.

    O(2^n * n) ring operations, used for rings without exact division and
    as the oracle the Bareiss path is tested against.
    """
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = m.nrows
    zero = m.ring.zero
    minors = {0: m.ring.one}
    for r in range(n):
        nxt = {}
        row = m.rows[r]
        for mask, val in minors.items():
            if val.is_zero():
                continue
            pos = 0
            for j in range(n):
                bit = 1 << j
                if mask & bit:
                    pos += 1
                    continue
                e = row[j]
                if not e.is_zero():
                    term = val * e if (r + pos) % 2 == 0 else -(val * e)
                    key = mask | bit
                    acc = nxt.get(key)
                    nxt[key] = term if acc is None else acc + term
        minors = nxt
    return minors.get((1 << n) - 1, zero)


def _laurent_clear_rows(m: Matrix):
    """Multiply each row by x^-k to make it polynomial; returns (poly matrix,
    total extracted exponent)."""
    lring: LaurentRing = m.ring
    pring = lring.poly_ring
    total = 0
    rows = []
    for row in m.rows:
        exps = [e.min_exp for e in row if not e.is_zero()]
        k = min(exps) if exps else 0
        total += k
        rows.append([e.poly.shift(e.offset - k) if not e.is_zero() else pring.zero
                     for e in row])
    return Matrix(rows, pring), total


def det_exact(m: Matrix):
    """Exact determinant in the entry ring (Laurent results stay Laurent)."""
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    ring = m.ring
    if isinstance(ring, LaurentRing):
        poly_m, shift = _laurent_clear_rows(m)
        d = _bareiss_det(poly_m.rows, poly_m.ring.zero, poly_m.ring.one)
        return ring.from_poly(d, shift)
    if isinstance(ring, (PolynomialRing, PrimeField, RationalField, FractionField)):
        return _bareiss_det(m.rows, ring.zero, ring.one)
    return det_division_free(m)


def _is_unit_in(value, ring):
    if isinstance(ring, (PrimeField, RationalField, FractionField)):
        return not value.is_zero()
    if isinstance(ring, LaurentRing):
        return value.is_unit()
    if isinstance(ring, PolynomialRing):
        return not value.is_zero() and value.is_constant()
    # two-variable ring: the indeterminates stand for invertible parameters,
    # so monomials with invertible coefficients count as units
    if hasattr(value, "terms"):
        return len(value.terms) == 1
    return value.is_one()


# ---------------------------------------------------------------------------
# fraction-field embedding and inverses
# ---------------------------------------------------------------------------

def fraction_field_over(ring):
    """The smallest supported field containing the given entry ring."""
    if isinstance(ring, (PrimeField, RationalField, FractionField)):
        return ring
    if isinstance(ring, LaurentRing):
        return FractionField(ring.poly_ring)
    if isinstance(ring, PolynomialRing):
        return FractionField(ring)
    raise RingError(f"no fraction field support for {ring}")


def to_fraction(entry, field):
    if isinstance(entry, (FieldScalar, FractionElement)):
        return entry
    if isinstance(entry, LaurentPolynomial):
        num = entry.poly.shift(max(entry.offset, 0))
        den = entry.ring.poly_ring.gen ** max(-entry.offset, 0)
        return field(num, den)
    if isinstance(entry, UniPolynomial):
        return field(entry)
    raise RingError(f"cannot embed {entry!r} into {field}")


def from_fraction(entry, ring):
    """Map a fraction back into a Laurent/polynomial ring; the reduced
    denominator must be a monomial (monic after normalization)."""
    if ring == entry.ring:
        return entry
    if isinstance(ring, LaurentRing):
        den = entry.den
        if den.is_zero() or any(c != den.ring.field.czero for c in den.coeffs[:-1]) \
                or not den.ring.field.ceq(den.coeffs[-1], den.ring.field.cone):
            raise RingError(f"denominator {den!r} is not a monomial")
        return ring.from_poly(entry.num, -den.degree)
    if isinstance(ring, PolynomialRing):
        if not entry.den.is_one():
            raise RingError(f"denominator {entry.den!r} is not 1")
        return entry.num
    raise RingError(f"cannot map a fraction into {ring}")


def _as_fraction_matrix(m: Matrix):
    field = fraction_field_over(m.ring)
    if field == m.ring:
        return m, field
    return m.map_entries(lambda e: to_fraction(e, field), field), field


def mat_inverse(m: Matrix) -> Matrix:
    """Exact inverse; raises NonUnitError carrying the determinant when it
    is not a unit of the entry ring."""
    if not m.is_square():
        raise ValueError("inverse of a non-square matrix")
    d = det_exact(m)
    if not _is_unit_in(d, m.ring):
        raise NonUnitError(f"determinant {d!r} is not a unit in {m.ring}", d)
    fm, field = _as_fraction_matrix(m)
    n = m.nrows
    aug = [list(fr) + list(Matrix.identity(field, n).rows[i])
           for i, fr in enumerate(fm.rows)]
    for k in range(n):
        if aug[k][k].is_zero():
            for i in range(k + 1, n):
                if not aug[i][k].is_zero():
                    aug[k], aug[i] = aug[i], aug[k]
                    break
        inv = aug[k][k].inv()
        aug[k] = [e * inv for e in aug[k]]
        for i in range(n):
            if i != k and not aug[i][k].is_zero():
                f = aug[i][k]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[k])]
    inv_rows = [row[n:] for row in aug]
    if field == m.ring:
        result = Matrix(inv_rows, field)
    else:
        result = Matrix([[from_fraction(e, m.ring) for e in row] for row in inv_rows],
                        m.ring)
    if not (m * result).is_identity():
        raise RingError("internal inverse verification failed")
    return result


def rank_over_fractions(m: Matrix) -> int:
    """Rank by exact Gaussian elimination over the entry fraction field."""
    fm, _ = _as_fraction_matrix(m)
    rows = [list(r) for r in fm.rows]
    rank = 0
    col = 0
    while rank < len(rows) and col < fm.ncols:
        pivot = None
        for i in range(rank, len(rows)):
            if not rows[i][col].is_zero():
                pivot = i
                break
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = rows[rank][col].inv()
        rows[rank] = [e * inv for e in rows[rank]]
        for i in range(rank + 1, len(rows)):
            if not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


# ---------------------------------------------------------------------------
# minors and characteristic polynomials
# ---------------------------------------------------------------------------

def _canonical_of_det(d) -> UniPolynomial:
    if isinstance(d, LaurentPolynomial):
        return laurent_canonicalize(d)[0]
    raise RingError(f"minors_gcd needs Laurent entries, got {d!r}")


def minors_gcd(m: Matrix, r: int) -> UniPolynomial:
    """Monic gcd of all (N-r) x (N-r) minors, each canonicalized first.

    Subsets are enumerated row-major lexicographically; the running gcd
    exits early once it reaches 1.
    """
    if not m.is_square():
        raise ValueError("minors of a non-square matrix")
    if not isinstance(m.ring, LaurentRing):
        raise RingError(f"minors_gcd needs a Laurent matrix, got ring {m.ring}")
    n = m.nrows
    if not 0 <= r < n:
        raise ValueError(f"codimension {r} out of range for size {n}")
    size = n - r
    pring = m.ring.poly_ring
    acc = pring.zero
    one = pring.one
    for rows_sel in itertools.combinations(range(n), size):
        for cols_sel in itertools.combinations(range(n), size):
            d = det_exact(m.submatrix(rows_sel, cols_sel))
            if d.is_zero():
                continue
            acc = poly_gcd(acc, _canonical_of_det(d))
            if acc == one:
                return acc
    return acc


def _raw_coeff(entry, field):
    # FieldScalar raw values are ints/Fractions; FractionElement is its own
    # raw value under the FractionField coefficient protocol.
    if isinstance(entry, FieldScalar):
        return entry.value
    return entry


def char_poly(m: Matrix) -> UniPolynomial:
    """det(lambda*I - m) as a polynomial in lambda over the entry fraction
    field, computed fraction-free."""
    if not m.is_square():
        raise ValueError("characteristic polynomial of a non-square matrix")
    fm, field = _as_fraction_matrix(m)
    lring = PolynomialRing(field, "λ")
    lam = lring.gen
    n = m.nrows
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            c = lring.from_raw([field.cneg(_raw_coeff(fm.rows[i][j], field))])
            if i == j:
                c = c + lam
            row.append(c)
        rows.append(row)
    return _bareiss_det(rows, lring.zero, lring.one)
