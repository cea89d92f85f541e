"""Exact scalar, polynomial, Laurent and fraction arithmetic.

Every value is immutable and carries a reference to its ring, so mixed-ring
operations fail loudly instead of coercing.  The ring objects double as
factories: ``ring(x)`` builds an element from ints, strings or raw data.

Representation conventions:

* ``PrimeField(p)`` scalars are ints reduced to ``[0, p)``; ``QQ`` scalars
  are ``fractions.Fraction`` in lowest terms.
* ``UniPolynomial`` stores an ascending coefficient tuple with a nonzero
  last entry; the zero polynomial is the empty tuple and its ``degree`` is
  the sentinel ``None``.
* ``LaurentPolynomial`` is a ``UniPolynomial`` with a nonzero constant term
  plus an integer ``offset`` (the lowest exponent), so the stored pair is
  unique.  Values with negative offset print as ``p(x)/x^k``.
* ``BivariatePolynomial`` maps exponent pairs to nonzero integer (or
  prime-field) coefficients.
* ``FractionElement`` keeps numerator/denominator in a declared domain.
  Over a univariate domain the pair is reduced by gcd and the denominator
  made monic; over a bivariate domain only integer content and common
  monomial factors are stripped (no multivariate gcd).  Equality is by
  cross-multiplication either way.

Multiplication of prime-field polynomials goes through Kronecker
substitution (pack into one big int, multiply, unpack mod p), which keeps
the fraction-free determinant code in ``linalg`` fast enough for the 9x9
minor sweeps the invariants need.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction


class RingError(Exception):
    """Base class for exact-arithmetic failures."""


class RingMismatchError(RingError):
    """Operands belong to different rings."""


class NonUnitError(RingError):
    """Inversion of a non-unit; carries the offending value."""

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


def _check_same_ring(a, b):
    if a.ring != b.ring:
        raise RingMismatchError(f"mixed rings: {a.ring} vs {b.ring}")


# ---------------------------------------------------------------------------
# scalar fields
# ---------------------------------------------------------------------------

def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    for d in range(3, math.isqrt(p) + 1, 2):
        if p % d == 0:
            return False
    return True


class FieldScalar:
    """Element of a ``PrimeField`` or of ``QQ``."""

    __slots__ = ("ring", "value")

    def __init__(self, ring, value):
        self.ring = ring
        self.value = value

    def is_zero(self):
        return self.ring.ciszero(self.value)

    def is_one(self):
        return self.ring.ceq(self.value, self.ring.cone)

    def inv(self):
        return FieldScalar(self.ring, self.ring.cinv(self.value))

    def _coerce(self, other):
        if isinstance(other, FieldScalar):
            _check_same_ring(self, other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldScalar(self.ring, self.ring.cadd(self.value, other.value))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldScalar(self.ring, self.ring.csub(self.value, other.value))

    def __rsub__(self, other):
        return self._coerce(other).__sub__(self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldScalar(self.ring, self.ring.cmul(self.value, other.value))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldScalar(self.ring, self.ring.cdiv(self.value, other.value))

    def __rtruediv__(self, other):
        return self._coerce(other).__truediv__(self)

    exact_div = __truediv__

    def __neg__(self):
        return FieldScalar(self.ring, self.ring.cneg(self.value))

    def __pow__(self, n):
        return FieldScalar(self.ring, self.ring.cpow(self.value, n))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring(other)
        if not isinstance(other, FieldScalar) or other.ring != self.ring:
            return NotImplemented
        return self.ring.ceq(self.value, other.value)

    def __hash__(self):
        return hash((self.ring, self.value))

    def __repr__(self):
        return self.ring.cstr(self.value)


class PrimeField:
    """The field Z_p for a machine-word-safe prime p (< 2^31).

    Also implements the raw-coefficient protocol (``cadd`` etc.) used by
    ``UniPolynomial``: raw values are plain ints in ``[0, p)``.
    """

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not isinstance(p, int) or not 2 <= p < 2**31 or not _is_prime(p):
            raise ValueError(f"modulus must be a prime below 2^31, got {p!r}")
        self.p = p

    characteristic = property(lambda self: self.p)

    def __call__(self, value) -> FieldScalar:
        if isinstance(value, FieldScalar):
            if value.ring != self:
                raise RingMismatchError(f"{value!r} is not in {self}")
            return value
        if isinstance(value, str):
            value = int(value)
        if isinstance(value, Fraction):
            return FieldScalar(self, self.cdiv(value.numerator % self.p,
                                                value.denominator % self.p))
        if not isinstance(value, int):
            raise TypeError(f"cannot build a Z_{self.p} scalar from {value!r}")
        return FieldScalar(self, value % self.p)

    @property
    def zero(self):
        return FieldScalar(self, 0)

    @property
    def one(self):
        return FieldScalar(self, 1)

    def from_int(self, n: int):
        return FieldScalar(self, n % self.p)

    # raw-coefficient protocol
    czero = 0
    cone = 1

    def cadd(self, a, b):
        return (a + b) % self.p

    def csub(self, a, b):
        return (a - b) % self.p

    def cmul(self, a, b):
        return (a * b) % self.p

    def cneg(self, a):
        return (-a) % self.p

    def cinv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"inverse of 0 in Z_{self.p}")
        return pow(a, self.p - 2, self.p)

    def cdiv(self, a, b):
        return (a * self.cinv(b)) % self.p

    def cpow(self, a, n):
        if n < 0:
            return pow(self.cinv(a), -n, self.p)
        return pow(a, n, self.p)

    def ceq(self, a, b):
        return (a - b) % self.p == 0

    def ciszero(self, a):
        return a % self.p == 0

    def cfrom_int(self, n):
        return n % self.p

    def cstr(self, a):
        return str(a % self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"Z_{self.p}"


class RationalField:
    """The rationals with exact ``Fraction`` arithmetic.  Use the ``QQ``
    singleton."""

    __slots__ = ()

    characteristic = 0

    def __call__(self, value) -> FieldScalar:
        if isinstance(value, FieldScalar):
            if value.ring != self:
                raise RingMismatchError(f"{value!r} is not rational")
            return value
        if isinstance(value, (int, str)):
            value = Fraction(value)
        if not isinstance(value, Fraction):
            raise TypeError(f"cannot build a rational from {value!r}")
        return FieldScalar(self, value)

    @property
    def zero(self):
        return FieldScalar(self, Fraction(0))

    @property
    def one(self):
        return FieldScalar(self, Fraction(1))

    def from_int(self, n: int):
        return FieldScalar(self, Fraction(n))

    czero = Fraction(0)
    cone = Fraction(1)

    def cadd(self, a, b):
        return a + b

    def csub(self, a, b):
        return a - b

    def cmul(self, a, b):
        return a * b

    def cneg(self, a):
        return -a

    def cinv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return 1 / a

    def cdiv(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by 0 in Q")
        return a / b

    def cpow(self, a, n):
        if n < 0 and a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return a ** n

    def ceq(self, a, b):
        return a == b

    def ciszero(self, a):
        return a == 0

    def cfrom_int(self, n):
        return Fraction(n)

    def cstr(self, a):
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("RationalField")

    def __repr__(self):
        return "Q"


QQ = RationalField()


# ---------------------------------------------------------------------------
# univariate polynomials
# ---------------------------------------------------------------------------

def _kronecker_mul(a, b, p):
    # Pack coefficient tuples into big ints so Python's integer
    # multiplication does the convolution; digit width is chosen so no
    # convolution coefficient overflows into the next digit.
    digit_bits = 2 * (p - 1).bit_length() + min(len(a), len(b)).bit_length() + 1
    nbytes = (digit_bits + 7) // 8
    ea = int.from_bytes(b"".join(c.to_bytes(nbytes, "little") for c in a), "little")
    eb = int.from_bytes(b"".join(c.to_bytes(nbytes, "little") for c in b), "little")
    prod = ea * eb
    out_len = len(a) + len(b) - 1
    raw = prod.to_bytes(out_len * nbytes + nbytes, "little")
    return [int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") % p
            for i in range(out_len)]


def _mul_raw(field, a, b):
    if not a or not b:
        return []
    if isinstance(field, PrimeField):
        p = field.p
        if len(a) * len(b) > 64:
            return _kronecker_mul(a, b, p)
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return [c % p for c in out]
    out = [field.czero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not field.ciszero(ai):
            for j, bj in enumerate(b):
                out[i + j] = field.cadd(out[i + j], field.cmul(ai, bj))
    return out


def _divmod_raw(field, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], list(a)
    rem = list(a)
    lead_inv = field.cinv(b[-1])
    quot = [field.czero] * (len(a) - len(b) + 1)
    if isinstance(field, PrimeField):
        p = field.p
        for k in range(len(quot) - 1, -1, -1):
            c = (rem[k + len(b) - 1] * lead_inv) % p
            quot[k] = c
            if c:
                for j in range(len(b)):
                    rem[k + j] = (rem[k + j] - c * b[j]) % p
    else:
        for k in range(len(quot) - 1, -1, -1):
            c = field.cmul(rem[k + len(b) - 1], lead_inv)
            quot[k] = c
            if not field.ciszero(c):
                for j in range(len(b)):
                    rem[k + j] = field.csub(rem[k + j], field.cmul(c, b[j]))
    del rem[len(b) - 1:]
    return quot, rem


class PolynomialRing:
    """K[var] for a coefficient field K implementing the raw protocol."""

    __slots__ = ("field", "var")

    def __init__(self, field, var: str = "x"):
        self.field = field
        self.var = var

    def __call__(self, value) -> UniPolynomial:
        if isinstance(value, UniPolynomial):
            if value.ring != self:
                raise RingMismatchError(f"{value!r} is not in {self}")
            return value
        if isinstance(value, FieldScalar):
            if value.ring != self.field:
                raise RingMismatchError(f"{value!r} has the wrong coefficient field")
            return self.from_raw([value.value])
        if isinstance(value, int):
            return self.from_raw([self.field.cfrom_int(value)])
        if isinstance(value, str):
            return parse_polynomial(value, self)
        if isinstance(value, (list, tuple)):
            return self.from_raw([self.field.cfrom_int(c) if isinstance(c, int) else c
                                  for c in value])
        raise TypeError(f"cannot build a polynomial from {value!r}")

    def from_raw(self, coeffs) -> UniPolynomial:
        coeffs = list(coeffs)
        while coeffs and self.field.ciszero(coeffs[-1]):
            coeffs.pop()
        return UniPolynomial(self, tuple(coeffs))

    @property
    def zero(self):
        return UniPolynomial(self, ())

    @property
    def one(self):
        return UniPolynomial(self, (self.field.cone,))

    @property
    def gen(self):
        return UniPolynomial(self, (self.field.czero, self.field.cone))

    def from_int(self, n: int):
        return self.from_raw([self.field.cfrom_int(n)])

    def __eq__(self, other):
        return (isinstance(other, PolynomialRing)
                and other.field == self.field and other.var == self.var)

    def __hash__(self):
        return hash(("PolynomialRing", self.field, self.var))

    def __repr__(self):
        return f"{self.field}[{self.var}]"


class UniPolynomial:
    """Dense univariate polynomial; the zero polynomial's degree is None."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        self.ring = ring
        self.coeffs = coeffs

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self):
        return not self.coeffs

    def is_one(self):
        return len(self.coeffs) == 1 and self.ring.field.ceq(self.coeffs[0],
                                                             self.ring.field.cone)

    def is_constant(self):
        return len(self.coeffs) <= 1

    def leading_scalar(self) -> FieldScalar:
        if not self.coeffs:
            return FieldScalar(self.ring.field, self.ring.field.czero)
        return FieldScalar(self.ring.field, self.coeffs[-1])

    def constant_scalar(self) -> FieldScalar:
        if not self.coeffs:
            return FieldScalar(self.ring.field, self.ring.field.czero)
        return FieldScalar(self.ring.field, self.coeffs[0])

    def coefficient(self, k: int) -> FieldScalar:
        raw = self.coeffs[k] if 0 <= k < len(self.coeffs) else self.ring.field.czero
        return FieldScalar(self.ring.field, raw)

    def _coerce(self, other):
        if isinstance(other, UniPolynomial):
            _check_same_ring(self, other)
            return other
        if isinstance(other, (int, FieldScalar)):
            return self.ring(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        f = self.ring.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = f.cadd(out[i], c)
        return self.ring.from_raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other).__sub__(self)

    def __neg__(self):
        f = self.ring.field
        return UniPolynomial(self.ring, tuple(f.cneg(c) for c in self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.ring.from_raw(_mul_raw(self.ring.field, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        q, r = _divmod_raw(self.ring.field, self.coeffs, other.coeffs)
        return self.ring.from_raw(q), self.ring.from_raw(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if not r.is_zero():
            raise RingError(f"inexact polynomial division: {self} by {other}")
        return q

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def monic(self):
        if self.is_zero():
            return self
        f = self.ring.field
        inv = f.cinv(self.coeffs[-1])
        return self.ring.from_raw([f.cmul(c, inv) for c in self.coeffs])

    def evaluate(self, point):
        """Horner evaluation; accepts and returns raw coefficient values."""
        if isinstance(point, FieldScalar):
            point = point.value
        f = self.ring.field
        acc = f.czero
        for c in reversed(self.coeffs):
            acc = f.cadd(f.cmul(acc, point), c)
        return acc

    def scale(self, scalar):
        scalar = scalar.value if isinstance(scalar, FieldScalar) else scalar
        f = self.ring.field
        return self.ring.from_raw([f.cmul(c, scalar) for c in self.coeffs])

    def shift(self, k: int):
        """Multiply by var^k (k >= 0)."""
        if self.is_zero() or k == 0:
            return self if k >= 0 else self
        return UniPolynomial(self.ring, (self.ring.field.czero,) * k + self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring(other)
        if not isinstance(other, UniPolynomial) or other.ring != self.ring:
            return NotImplemented
        f = self.ring.field
        return (len(self.coeffs) == len(other.coeffs)
                and all(f.ceq(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __repr__(self):
        return _poly_str(self.ring.field, self.coeffs, self.ring.var)


def poly_gcd(a: UniPolynomial, b: UniPolynomial) -> UniPolynomial:
    """Monic gcd by the Euclidean algorithm; gcd(0, 0) = 0."""
    _check_same_ring(a, b)
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def _poly_str(field, coeffs, var):
    if not coeffs:
        return "0"
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if field.ciszero(c):
            continue
        cs = field.cstr(c)
        if k == 0:
            term = cs
        else:
            vp = var if k == 1 else f"{var}^{k}"
            if cs == "1":
                term = vp
            elif cs == "-1":
                term = f"-{vp}"
            elif "/" in cs or (cs.startswith("-") and "/" in cs):
                term = f"({cs}){vp}"
            else:
                term = f"{cs}{vp}"
        parts.append(term)
    out = parts[0]
    for term in parts[1:]:
        if term.startswith("-"):
            out += " - " + term[1:]
        else:
            out += " + " + term
    return out


_TERM_RE = re.compile(
    r"(?P<sign>[+-])?\s*(?P<coeff>\d+(?:/\d+)?)?\s*\*?\s*"
    r"(?:(?P<var>[A-Za-zλ_][A-Za-z0-9_]*)\s*(?:\^\s*(?P<exp>-?\d+))?)?\s*"
)


def _parse_terms(text: str, varname: str | None):
    """Parse `2y^3 + y + 1`-style text into {exponent: int-or-Fraction}."""
    pos = 0
    terms: dict[int, object] = {}
    seen_var = None
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial string")
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos or (m.group("coeff") is None and m.group("var") is None):
            raise ValueError(f"bad polynomial syntax near {text[pos:]!r}")
        pos = m.end()
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("sign") is None and m.start() != 0:
            raise ValueError(f"missing +/- before {text[m.start():]!r}")
        coeff_s = m.group("coeff")
        coeff = Fraction(coeff_s) if coeff_s else Fraction(1)
        var = m.group("var")
        if var is not None:
            if seen_var is None:
                seen_var = var
            elif seen_var != var:
                raise ValueError(f"two indeterminates in one polynomial: {seen_var}, {var}")
            if varname is not None and var != varname:
                raise ValueError(f"expected indeterminate {varname!r}, got {var!r}")
            exp = int(m.group("exp")) if m.group("exp") else 1
        else:
            exp = 0
        terms[exp] = terms.get(exp, Fraction(0)) + sign * coeff
    return terms


def parse_polynomial(text: str, ring: PolynomialRing) -> UniPolynomial:
    terms = _parse_terms(text, ring.var)
    if any(e < 0 for e in terms):
        raise ValueError(f"negative exponent in plain polynomial: {text!r}")
    deg = max(terms) if terms else 0
    coeffs = [ring.field.czero] * (deg + 1)
    for e, c in terms.items():
        if c.denominator != 1 and isinstance(ring.field, PrimeField):
            c = Fraction(c.numerator * ring.field.cinv(c.denominator % ring.field.p), 1)
        raw = ring.field.cfrom_int(c.numerator) if c.denominator == 1 else c
        coeffs[e] = raw
    return ring.from_raw(coeffs)


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------

class LaurentRing:
    """K[var, var^-1] built over a PolynomialRing."""

    __slots__ = ("poly_ring",)

    def __init__(self, poly_ring: PolynomialRing):
        self.poly_ring = poly_ring

    @property
    def field(self):
        return self.poly_ring.field

    @property
    def var(self):
        return self.poly_ring.var

    def __call__(self, value, offset: int = 0) -> LaurentPolynomial:
        if isinstance(value, LaurentPolynomial):
            if value.ring != self:
                raise RingMismatchError(f"{value!r} is not in {self}")
            if offset:
                return self.from_poly(value.poly, value.offset + offset)
            return value
        if isinstance(value, str):
            if offset:
                raise ValueError("offset not allowed with string input")
            return parse_laurent(value, self)
        if isinstance(value, (int, FieldScalar, list, tuple)):
            value = self.poly_ring(value)
        if isinstance(value, UniPolynomial):
            if value.ring != self.poly_ring:
                raise RingMismatchError(f"{value!r} has the wrong polynomial ring")
            return self.from_poly(value, offset)
        raise TypeError(f"cannot build a Laurent polynomial from {value!r}")

    def from_poly(self, poly: UniPolynomial, offset: int = 0) -> LaurentPolynomial:
        if poly.is_zero():
            return LaurentPolynomial(self, poly, 0)
        field = self.poly_ring.field
        shift = 0
        while field.ciszero(poly.coeffs[shift]):
            shift += 1
        if shift:
            poly = self.poly_ring.from_raw(poly.coeffs[shift:])
        return LaurentPolynomial(self, poly, offset + shift)

    @property
    def zero(self):
        return LaurentPolynomial(self, self.poly_ring.zero, 0)

    @property
    def one(self):
        return LaurentPolynomial(self, self.poly_ring.one, 0)

    @property
    def gen(self):
        return LaurentPolynomial(self, self.poly_ring.one, 1)

    def monomial(self, k: int, coeff=1):
        c = self.poly_ring(coeff)
        return self.from_poly(c, k)

    def from_int(self, n: int):
        return self.from_poly(self.poly_ring.from_int(n))

    def __eq__(self, other):
        return isinstance(other, LaurentRing) and other.poly_ring == self.poly_ring

    def __hash__(self):
        return hash(("LaurentRing", self.poly_ring))

    def __repr__(self):
        v = self.poly_ring.var
        return f"{self.poly_ring.field}[{v},{v}^-1]"


class LaurentPolynomial:
    """poly * var^offset with poly having a nonzero constant term (or zero)."""

    __slots__ = ("ring", "poly", "offset")

    def __init__(self, ring, poly, offset):
        self.ring = ring
        self.poly = poly
        self.offset = offset

    def is_zero(self):
        return self.poly.is_zero()

    def is_one(self):
        return self.offset == 0 and self.poly.is_one()

    def is_unit(self):
        """Units are c * var^k with c a nonzero scalar."""
        return not self.poly.is_zero() and self.poly.is_constant()

    @property
    def min_exp(self):
        return self.offset

    @property
    def max_exp(self):
        return None if self.poly.is_zero() else self.offset + self.poly.degree

    def _coerce(self, other):
        if isinstance(other, LaurentPolynomial):
            _check_same_ring(self, other)
            return other
        if isinstance(other, (int, FieldScalar, UniPolynomial)):
            return self.ring(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        base = min(self.offset, other.offset)
        a = self.poly.shift(self.offset - base)
        b = other.poly.shift(other.offset - base)
        return self.ring.from_poly(a + b, base)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other).__sub__(self)

    def __neg__(self):
        return LaurentPolynomial(self.ring, -self.poly, self.offset)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.ring.from_poly(self.poly * other.poly, self.offset + other.offset)

    __rmul__ = __mul__

    def exact_div(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            raise TypeError(f"cannot divide by {other!r}")
        return self.ring.from_poly(self.poly.exact_div(other.poly),
                                   self.offset - other.offset)

    def __truediv__(self, other):
        return self.exact_div(other)

    def inv(self):
        if not self.is_unit():
            raise NonUnitError(f"not a unit in {self.ring}: {self}", self)
        c = self.ring.field.cinv(self.poly.coeffs[0])
        return self.ring.monomial(-self.offset, FieldScalar(self.ring.field, c))

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring(other)
        if not isinstance(other, LaurentPolynomial) or other.ring != self.ring:
            return NotImplemented
        return self.offset == other.offset and self.poly == other.poly

    def __hash__(self):
        return hash((self.ring, self.poly, self.offset))

    def __repr__(self):
        if self.poly.is_zero():
            return "0"
        if self.offset >= 0:
            return repr(self.poly.shift(self.offset))
        num = repr(self.poly)
        den = self.ring.var if self.offset == -1 else f"{self.ring.var}^{-self.offset}"
        if " " in num:
            return f"({num})/{den}"
        return f"{num}/{den}"


class UnitRecord:
    """The unit c*var^k with canonical = value * c * var^k."""

    __slots__ = ("coeff", "exponent")

    def __init__(self, coeff: FieldScalar, exponent: int):
        self.coeff = coeff
        self.exponent = exponent

    def element(self, ring: LaurentRing) -> LaurentPolynomial:
        return ring.monomial(self.exponent, self.coeff)

    def __eq__(self, other):
        return (isinstance(other, UnitRecord)
                and other.coeff == self.coeff and other.exponent == self.exponent)

    def __repr__(self):
        c = repr(self.coeff)
        if self.exponent == 0:
            return c
        xpart = "x" if self.exponent == 1 else f"x^{self.exponent}"
        return xpart if c == "1" else f"{c}*{xpart}"


def laurent_canonicalize(f: LaurentPolynomial):
    """Unique monic polynomial with nonzero constant term, plus the unit
    multiplier that produced it.  Zero maps to (0, trivial unit)."""
    field = f.ring.field
    if f.is_zero():
        return f.poly, UnitRecord(FieldScalar(field, field.cone), 0)
    c = field.cinv(f.poly.coeffs[-1])
    return f.poly.monic(), UnitRecord(FieldScalar(field, c), -f.offset)


def parse_laurent(text: str, ring: LaurentRing) -> LaurentPolynomial:
    text = text.strip()
    m = re.fullmatch(r"\(?\s*(?P<num>[^()/]+?)\s*\)?\s*/\s*(?P<var>[A-Za-z_][A-Za-z0-9_]*)"
                     r"(?:\^(?P<k>\d+))?", text)
    if m:
        if m.group("var") != ring.var:
            raise ValueError(f"expected indeterminate {ring.var!r} in {text!r}")
        k = int(m.group("k") or 1)
        num = parse_polynomial(m.group("num"), ring.poly_ring)
        return ring.from_poly(num, -k)
    terms = _parse_terms(text, ring.var)
    out = ring.zero
    field = ring.field
    for e, c in terms.items():
        if c.denominator != 1:
            if isinstance(field, PrimeField):
                raw = field.cdiv(c.numerator % field.p, c.denominator % field.p)
            else:
                raw = c
        else:
            raw = field.cfrom_int(c.numerator)
        out = out + ring.monomial(e, FieldScalar(field, raw))
    return out


# ---------------------------------------------------------------------------
# bivariate polynomials (integer or prime-field coefficients)
# ---------------------------------------------------------------------------

class BivariateRing:
    """Polynomials in two named variables with int (or Z_p) coefficients."""

    __slots__ = ("vars", "p")

    def __init__(self, variables=("q", "h"), p: int | None = None):
        if len(variables) != 2:
            raise ValueError("exactly two variable names required")
        if p is not None and not _is_prime(p):
            raise ValueError(f"modulus must be prime, got {p}")
        self.vars = tuple(variables)
        self.p = p

    def _red(self, c: int) -> int:
        return c % self.p if self.p is not None else c

    def __call__(self, value) -> BivariatePolynomial:
        if isinstance(value, BivariatePolynomial):
            if value.ring != self:
                raise RingMismatchError(f"{value!r} is not in {self}")
            return value
        if isinstance(value, int):
            c = self._red(value)
            return BivariatePolynomial(self, {(0, 0): c} if c else {})
        if isinstance(value, dict):
            terms = {}
            for (e1, e2), c in value.items():
                c = self._red(c)
                if c:
                    terms[(e1, e2)] = c
            return BivariatePolynomial(self, terms)
        raise TypeError(f"cannot build a bivariate polynomial from {value!r}")

    def monomial(self, e1: int, e2: int, coeff: int = 1):
        return self({(e1, e2): coeff})

    @property
    def zero(self):
        return BivariatePolynomial(self, {})

    @property
    def one(self):
        return self(1)

    def gen(self, index: int):
        return self.monomial(1, 0) if index == 0 else self.monomial(0, 1)

    def from_int(self, n: int):
        return self(n)

    def __eq__(self, other):
        return (isinstance(other, BivariateRing)
                and other.vars == self.vars and other.p == self.p)

    def __hash__(self):
        return hash(("BivariateRing", self.vars, self.p))

    def __repr__(self):
        base = f"Z_{self.p}" if self.p is not None else "Z"
        return f"{base}[{self.vars[0]},{self.vars[1]}]"


class BivariatePolynomial:
    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    def is_zero(self):
        return not self.terms

    def is_one(self):
        return self.terms == {(0, 0): 1}

    def degree_in(self, index: int):
        if not self.terms:
            return None
        return max(e[index] for e in self.terms)

    def total_degree(self):
        if not self.terms:
            return None
        return max(e1 + e2 for e1, e2 in self.terms)

    def _coerce(self, other):
        if isinstance(other, BivariatePolynomial):
            _check_same_ring(self, other)
            return other
        if isinstance(other, int):
            return self.ring(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        red = self.ring._red
        for e, c in other.terms.items():
            s = red(out.get(e, 0) + c)
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return BivariatePolynomial(self.ring, out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other).__sub__(self)

    def __neg__(self):
        red = self.ring._red
        return BivariatePolynomial(self.ring, {e: red(-c) for e, c in self.terms.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict = {}
        red = self.ring._red
        for (a1, a2), ca in self.terms.items():
            for (b1, b2), cb in other.terms.items():
                e = (a1 + b1, a2 + b2)
                s = red(out.get(e, 0) + ca * cb)
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return BivariatePolynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def substitute(self, index: int, value: int) -> BivariatePolynomial:
        """Specialize one variable to an integer."""
        out = self.ring.zero
        for (e1, e2), c in self.terms.items():
            exps = [e1, e2]
            scalar = c * value ** exps[index]
            exps[index] = 0
            out = out + self.ring.monomial(exps[0], exps[1], scalar)
        return out

    def as_unipoly(self, index: int, target: PolynomialRing) -> UniPolynomial:
        """View as univariate in the given variable; the other must not occur."""
        other = 1 - index
        coeffs: dict[int, int] = {}
        for e, c in self.terms.items():
            if e[other] != 0:
                raise RingError(f"{self} is not univariate in {self.ring.vars[index]}")
            coeffs[e[index]] = c
        deg = max(coeffs) if coeffs else 0
        raw = [target.field.cfrom_int(coeffs.get(k, 0)) for k in range(deg + 1)]
        return target.from_raw(raw)

    def content_and_monomials(self):
        """(integer content, min exponent pair); content of 0 is 0."""
        if not self.terms:
            return 0, (0, 0)
        g = 0
        for c in self.terms.values():
            g = math.gcd(g, c)
        m1 = min(e[0] for e in self.terms)
        m2 = min(e[1] for e in self.terms)
        return g, (m1, m2)

    def strip(self, content: int, monomials) -> BivariatePolynomial:
        m1, m2 = monomials
        return BivariatePolynomial(
            self.ring,
            {(e1 - m1, e2 - m2): c // content for (e1, e2), c in self.terms.items()})

    def leading_sign(self) -> int:
        if not self.terms:
            return 1
        e = max(self.terms)
        return 1 if self.terms[e] > 0 else -1

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring(other)
        if not isinstance(other, BivariatePolynomial) or other.ring != self.ring:
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        v1, v2 = self.ring.vars
        parts = []
        for (e1, e2) in sorted(self.terms, reverse=True):
            c = self.terms[(e1, e2)]
            factors = []
            if e1:
                factors.append(v1 if e1 == 1 else f"{v1}^{e1}")
            if e2:
                factors.append(v2 if e2 == 1 else f"{v2}^{e2}")
            body = "*".join(factors)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}")
        out = parts[0]
        for term in parts[1:]:
            out += " - " + term[1:] if term.startswith("-") else " + " + term
        return out


# ---------------------------------------------------------------------------
# fractions over a polynomial domain
# ---------------------------------------------------------------------------

class FractionField:
    """Frac(D) for D a PolynomialRing or BivariateRing.

    Also implements the raw-coefficient protocol with FractionElement raw
    values, so UniPolynomial can take coefficients in a fraction field
    (used for characteristic polynomials).
    """

    __slots__ = ("domain",)

    def __init__(self, domain):
        self.domain = domain

    def __call__(self, num, den=None) -> FractionElement:
        if isinstance(num, FractionElement):
            if num.ring != self:
                raise RingMismatchError(f"{num!r} is not in {self}")
            if den is not None:
                raise ValueError("denominator not allowed with a fraction input")
            return num
        num = self.domain(num)
        den = self.domain.one if den is None else self.domain(den)
        return _make_fraction(self, num, den)

    @property
    def zero(self):
        return FractionElement(self, self.domain.zero, self.domain.one)

    @property
    def one(self):
        return FractionElement(self, self.domain.one, self.domain.one)

    def from_int(self, n: int):
        return FractionElement(self, self.domain.from_int(n), self.domain.one)

    # raw-coefficient protocol (raw values are FractionElement)
    @property
    def czero(self):
        return self.zero

    @property
    def cone(self):
        return self.one

    def cadd(self, a, b):
        return a + b

    def csub(self, a, b):
        return a - b

    def cmul(self, a, b):
        return a * b

    def cneg(self, a):
        return -a

    def cinv(self, a):
        return a.inv()

    def cdiv(self, a, b):
        return a / b

    def cpow(self, a, n):
        return a ** n

    def ceq(self, a, b):
        return a == b

    def ciszero(self, a):
        return a.is_zero()

    def cfrom_int(self, n):
        return self.from_int(n)

    def cstr(self, a):
        return repr(a)

    def __eq__(self, other):
        return isinstance(other, FractionField) and other.domain == self.domain

    def __hash__(self):
        return hash(("FractionField", self.domain))

    def __repr__(self):
        return f"Frac({self.domain})"


def _make_fraction(ring, num, den):
    if den.is_zero():
        raise ZeroDivisionError(f"zero denominator in {ring}")
    if num.is_zero():
        return FractionElement(ring, num, ring.domain.one)
    if isinstance(ring.domain, PolynomialRing):
        g = poly_gcd(num, den)
        if not g.is_one():
            num = num.exact_div(g)
            den = den.exact_div(g)
        lead = den.coeffs[-1]
        field = ring.domain.field
        if not field.ceq(lead, field.cone):
            inv = field.cinv(lead)
            num = num.scale(inv)
            den = den.scale(inv)
    else:
        cn, mn = num.content_and_monomials()
        cd, md = den.content_and_monomials()
        content = math.gcd(cn, cd)
        mono = (min(mn[0], md[0]), min(mn[1], md[1]))
        if content > 1 or mono != (0, 0):
            num = num.strip(content, mono)
            den = den.strip(content, mono)
        if den.leading_sign() < 0:
            num = -num
            den = -den
    return FractionElement(ring, num, den)


class FractionElement:
    """num/den with a nonzero denominator; equality by cross-multiplication."""

    __slots__ = ("ring", "num", "den")

    def __init__(self, ring, num, den):
        self.ring = ring
        self.num = num
        self.den = den

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num == self.den

    def _coerce(self, other):
        if isinstance(other, FractionElement):
            _check_same_ring(self, other)
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        if isinstance(other, (UniPolynomial, BivariatePolynomial)):
            return self.ring(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return _make_fraction(self.ring,
                              self.num * other.den + other.num * self.den,
                              self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return _make_fraction(self.ring,
                              self.num * other.den - other.num * self.den,
                              self.den * other.den)

    def __rsub__(self, other):
        return self._coerce(other).__sub__(self)

    def __neg__(self):
        return FractionElement(self.ring, -self.num, self.den)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return _make_fraction(self.ring, self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inv(self):
        if self.num.is_zero():
            raise ZeroDivisionError(f"inverse of 0 in {self.ring}")
        return _make_fraction(self.ring, self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return self._coerce(other).__truediv__(self)

    exact_div = __truediv__

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero()

    __hash__ = None  # equality is not structural

    def __repr__(self):
        if self.den.is_one():
            return repr(self.num)
        ns, ds = repr(self.num), repr(self.den)
        if " " in ns:
            ns = f"({ns})"
        if " " in ds:
            ds = f"({ds})"
        return f"{ns}/{ds}"


def frac_equal(a: FractionElement, b: FractionElement) -> bool:
    """Zero-test a*den(b) - b*den(a) without any gcd computation."""
    _check_same_ring(a, b)
    return (a.num * b.den - b.num * a.den).is_zero()


def ring_arith(a, b, op: str):
    """Dispatch one exact ring operation; op is add|sub|mul|div."""
    ops = {"add": lambda: a + b,
           "sub": lambda: a - b,
           "mul": lambda: a * b,
           "div": lambda: a / b}
    if op not in ops:
        raise ValueError(f"unknown op {op!r}")
    result = ops[op]()
    if result is NotImplemented:
        raise RingMismatchError(f"cannot {op} {a!r} and {b!r}")
    return result
