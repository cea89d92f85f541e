"""Normal-form arithmetic in the quantum Weyl algebra.

The algebra on invertible generators u, v with uv - qvu = 1 embeds
faithfully into a skew Laurent ring: coefficients are rational functions
of h, x twists them by the substitution sigma(h) = (h - 1)/q, and the
generators map to

    u  ->  h x^-1          v  ->  x
    u' ->  (q/(h-1)) x     v' ->  x^-1

so every word flattens to a finite sum  sum_i  c_i(q, h) x^i.  Two
expressions agree in the algebra exactly when their normal forms agree
coefficientwise, which turns all the identities the rest of the package
relies on into decidable zero-tests.

Engine modes:

* symbolic  -- coefficients in Frac(Z[q, h]); q is a free parameter, so a
  verified identity holds for every q at once.
* finite(p, q) -- coefficients in Frac(Z_p[h]) with q a fixed invertible
  scalar; cheap randomized corroboration of the symbolic runs.

``parse_expression`` accepts the text grammar used by the CLI: whitespace
or juxtaposition for products, ``u'`` or ``u^-1`` for inverses, ``q`` for
the ground scalar, integer constants, parentheses, ``+`` and ``-``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .rings import (
    BivariateRing,
    FractionElement,
    FractionField,
    PolynomialRing,
    PrimeField,
    RingError,
)

SYMBOLIC = "symbolic"
FINITE = "finite"


class EngineMode:
    """Coefficient context for the skew-Laurent engine."""

    def __init__(self, kind, p=None, q=None, _token=None):
        if _token is not _MODE_TOKEN:
            raise TypeError("use EngineMode.symbolic() or EngineMode.finite(p, q)")
        self.kind = kind
        self.p = p
        self.q_int = q
        if kind == SYMBOLIC:
            self.domain = BivariateRing(("q", "h"))
            self.coeff_field = FractionField(self.domain)
        else:
            self.domain = PolynomialRing(PrimeField(p), "h")
            self.coeff_field = FractionField(self.domain)
        self._images = None

    @classmethod
    def symbolic(cls) -> EngineMode:
        return cls(SYMBOLIC, _token=_MODE_TOKEN)

    @classmethod
    def finite(cls, p: int, q: int, allow_flat: bool = False) -> EngineMode:
        """Finite mode needs q and 1-q invertible mod p.  The classical
        q = 1 case is only admitted explicitly (allow_flat), for checks of
        the flat algebra where sigma(h) = h - 1."""
        field = PrimeField(p)
        q = q % p
        if q == 0:
            raise ValueError(f"q must be invertible mod {p}")
        if q == 1 and not allow_flat:
            raise ValueError(f"1 - q must be invertible mod {p} (q=1 needs allow_flat)")
        return cls(FINITE, p=p, q=q, _token=_MODE_TOKEN)

    def __eq__(self, other):
        return (isinstance(other, EngineMode)
                and (self.kind, self.p, self.q_int) == (other.kind, other.p, other.q_int))

    def __hash__(self):
        return hash((self.kind, self.p, self.q_int))

    def __repr__(self):
        if self.kind == SYMBOLIC:
            return "EngineMode(symbolic)"
        return f"EngineMode(finite p={self.p}, q={self.q_int})"

    # coefficient helpers ---------------------------------------------------

    def q_coeff(self) -> FractionElement:
        if self.kind == SYMBOLIC:
            return self.coeff_field(self.domain.monomial(1, 0))
        return self.coeff_field(self.domain.from_int(self.q_int))

    def h_coeff(self) -> FractionElement:
        if self.kind == SYMBOLIC:
            return self.coeff_field(self.domain.monomial(0, 1))
        return self.coeff_field(self.domain.gen)

    def coeff_from_int(self, n: int) -> FractionElement:
        return self.coeff_field.from_int(n)

    # skew elements ---------------------------------------------------------

    def skew(self, terms: dict) -> SkewLaurentElement:
        pruned = {e: c for e, c in terms.items() if not c.is_zero()}
        return SkewLaurentElement(self, pruned)

    def skew_scalar(self, coeff: FractionElement) -> SkewLaurentElement:
        return self.skew({0: coeff})

    @property
    def zero(self):
        return SkewLaurentElement(self, {})

    @property
    def one(self):
        return self.skew_scalar(self.coeff_field.one)

    def images(self) -> dict:
        """Images of u, v, u', v'; validated as two-sided inverses once."""
        if self._images is None:
            q = self.q_coeff()
            h = self.h_coeff()
            imgs = {
                "u": self.skew({-1: h}),
                "v": self.skew({1: self.coeff_field.one}),
                "u'": self.skew({1: q / (h - 1)}),
                "v'": self.skew({-1: self.coeff_field.one}),
            }
            for g, gi in (("u", "u'"), ("v", "v'")):
                left = skew_mul(imgs[g], imgs[gi])
                right = skew_mul(imgs[gi], imgs[g])
                if not (left.is_one() and right.is_one()):
                    raise RingError(f"generator inverse self-check failed for {g}")
            self._images = imgs
        return self._images


_MODE_TOKEN = object()


# ---------------------------------------------------------------------------
# the twist sigma(h) = (h - 1)/q and its powers
# ---------------------------------------------------------------------------

def _geometric_sum(mode, k: int):
    """1 + q + ... + q^(k-1) as a domain element."""
    if mode.kind == SYMBOLIC:
        return mode.domain({(j, 0): 1 for j in range(k)})
    acc = 0
    qp = 1
    for _ in range(k):
        acc += qp
        qp = qp * mode.q_int
    return mode.domain.from_int(acc)


def _h_parts_symbolic(poly, ring):
    by_b: dict[int, dict] = {}
    for (a, b), c in poly.terms.items():
        by_b.setdefault(b, {})[(a, 0)] = c
    top = max(by_b) if by_b else 0
    return [ring({**by_b[b]}) if b in by_b else ring.zero for b in range(top + 1)]


def _subst_h_symbolic(poly, k: int, mode):
    """poly with h replaced by sigma^k(h); returns (numerator, q-exponent of
    the denominator)."""
    ring = mode.domain
    if not poly.terms or k == 0:
        return poly, 0
    parts = _h_parts_symbolic(poly, ring)
    top = len(parts) - 1
    if k > 0:
        z = ring.monomial(0, 1) - _geometric_sum(mode, k)
        qk = ring.monomial(k, 0)
        acc = parts[top]
        qp = ring.one
        for b in range(top - 1, -1, -1):
            qp = qp * qk
            acc = acc * z + parts[b] * qp
        return acc, k * top
    m = -k
    z = ring.monomial(m, 1) + _geometric_sum(mode, m)
    acc = parts[top]
    for b in range(top - 1, -1, -1):
        acc = acc * z + parts[b]
    return acc, 0


def _geosum_int(mode, k: int) -> int:
    acc, qp = 0, 1
    for _ in range(k):
        acc = (acc + qp) % mode.p
        qp = (qp * mode.q_int) % mode.p
    return acc


def _subst_h_finite(poly, k: int, mode):
    ring = mode.domain
    p = mode.p
    if poly.is_zero() or k == 0:
        return poly
    if k > 0:
        s = _geosum_int(mode, k)
        qk_inv = pow(pow(mode.q_int, k, p), p - 2, p)
        z = ring.from_raw([(-s * qk_inv) % p, qk_inv])
    else:
        m = -k
        s = _geosum_int(mode, m)
        z = ring.from_raw([s % p, pow(mode.q_int, m, p)])
    acc = ring.from_raw([poly.coeffs[-1]])
    for b in range(len(poly.coeffs) - 2, -1, -1):
        acc = acc * z + ring.from_raw([poly.coeffs[b]])
    return acc


def sigma_apply(f: FractionElement, k: int, mode: EngineMode) -> FractionElement:
    """Apply sigma^k to a coefficient, where sigma(h) = (h-1)/q and
    sigma^-1(h) = qh + 1, extended to fractions componentwise."""
    if f.ring != mode.coeff_field:
        raise RingError(f"{f!r} is not a coefficient of {mode!r}")
    if k == 0:
        return f
    if mode.kind == FINITE:
        return mode.coeff_field(_subst_h_finite(f.num, k, mode),
                                _subst_h_finite(f.den, k, mode))
    num, en = _subst_h_symbolic(f.num, k, mode)
    den, ed = _subst_h_symbolic(f.den, k, mode)
    ring = mode.domain
    return mode.coeff_field(num * ring.monomial(ed, 0), den * ring.monomial(en, 0))


# ---------------------------------------------------------------------------
# skew Laurent elements
# ---------------------------------------------------------------------------

class SkewLaurentElement:
    """Finite sum of c_i * x^i with twisted multiplication x*r = sigma(r)*x."""

    __slots__ = ("mode", "terms")

    def __init__(self, mode, terms):
        self.mode = mode
        self.terms = terms

    def is_zero(self):
        return not self.terms

    def is_one(self):
        return set(self.terms) == {0} and self.terms[0].is_one()

    def _check(self, other):
        if not isinstance(other, SkewLaurentElement) or other.mode != self.mode:
            raise RingError("mixed engine modes")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return SkewLaurentElement(self.mode, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return SkewLaurentElement(self.mode, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        return skew_mul(self, other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers need an explicit inverse word")
        result = self.mode.one
        for _ in range(n):
            result = skew_mul(result, self)
        return result

    def __eq__(self, other):
        if not isinstance(other, SkewLaurentElement) or other.mode != self.mode:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def leading_witness(self):
        """One nonzero term rendered as text, or None."""
        if not self.terms:
            return None
        e = min(self.terms)
        return f"({self.terms[e]!r}) * x^{e}"

    def max_coeff_degree(self):
        """Largest numerator/denominator total degree over all coefficients."""
        worst = 0
        for c in self.terms.values():
            for part in (c.num, c.den):
                if hasattr(part, "total_degree"):
                    d = part.total_degree()
                else:
                    d = part.degree
                worst = max(worst, d or 0)
        return worst

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms):
            c = repr(self.terms[e])
            if e == 0:
                bits.append(c)
            else:
                xp = "x" if e == 1 else f"x^{e}"
                bits.append(xp if c == "1" else f"({c})*{xp}")
        return " + ".join(bits)


def skew_mul(a: SkewLaurentElement, b: SkewLaurentElement) -> SkewLaurentElement:
    """(r x^i)(s x^j) = r * sigma^i(s) * x^(i+j), summed with zero pruning."""
    a._check(b)
    mode = a.mode
    out: dict = {}
    for i, r in a.terms.items():
        for j, s in b.terms.items():
            c = r * sigma_apply(s, i, mode)
            e = i + j
            acc = out.get(e)
            acc = c if acc is None else acc + c
            if acc.is_zero():
                out.pop(e, None)
            else:
                out[e] = acc
    return SkewLaurentElement(mode, out)


# ---------------------------------------------------------------------------
# expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Gen:
    name: str  # u, v, u', v'


@dataclass(frozen=True)
class QScalar:
    pass


@dataclass(frozen=True)
class IntScalar:
    n: int


@dataclass(frozen=True)
class Add:
    terms: tuple


@dataclass(frozen=True)
class Mul:
    factors: tuple


@dataclass(frozen=True)
class Neg:
    term: object


U, V = Gen("u"), Gen("v")
UI, VI = Gen("u'"), Gen("v'")
Q = QScalar()
ONE = IntScalar(1)


def mul(*factors):
    flat = []
    for f in factors:
        if isinstance(f, Mul):
            flat.extend(f.factors)
        else:
            flat.append(f)
    return Mul(tuple(flat)) if len(flat) != 1 else flat[0]


def add(*terms):
    return Add(tuple(terms)) if len(terms) != 1 else terms[0]


def sub(a, b):
    return Add((a, Neg(b)))


def evaluate(expr, mode: EngineMode) -> SkewLaurentElement:
    """Map an expression tree to its skew-Laurent normal form."""
    if isinstance(expr, Gen):
        return mode.images()[expr.name]
    if isinstance(expr, QScalar):
        return mode.skew_scalar(mode.q_coeff())
    if isinstance(expr, IntScalar):
        return mode.skew_scalar(mode.coeff_from_int(expr.n))
    if isinstance(expr, Neg):
        return -evaluate(expr.term, mode)
    if isinstance(expr, Add):
        acc = mode.zero
        for t in expr.terms:
            acc = acc + evaluate(t, mode)
        return acc
    if isinstance(expr, Mul):
        acc = mode.one
        for f in expr.factors:
            acc = skew_mul(acc, evaluate(f, mode))
        return acc
    raise TypeError(f"not an algebra expression: {expr!r}")


_TOKEN_RE = re.compile(r"\s*(?:(?P<gen>[uv]'?)|(?P<q>q)|(?P<int>\d+)"
                       r"|(?P<pow>\^-?\d+)|(?P<op>[+\-()]))")

_INVERSES = {"u": "u'", "v": "v'", "u'": "u", "v'": "v"}


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ValueError(f"bad expression syntax near {text[pos:]!r}")
            break
        pos = m.end()
        if m.group("gen"):
            tokens.append(("gen", m.group("gen")))
        elif m.group("q"):
            tokens.append(("q", None))
        elif m.group("int"):
            tokens.append(("int", int(m.group("int"))))
        elif m.group("pow"):
            tokens.append(("pow", int(m.group("pow")[1:])))
        else:
            tokens.append(("op", m.group("op")))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse_expr(self):
        terms = [self.parse_term()]
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            _, op = self.next()
            term = self.parse_term()
            terms.append(term if op == "+" else Neg(term))
        return add(*terms)

    def parse_term(self):
        if self.peek() == ("op", "-"):
            self.next()
            return Neg(self.parse_term())
        factors = [self.parse_factor()]
        while True:
            kind, _ = self.peek()
            if kind in ("gen", "q", "int") or self.peek() == ("op", "("):
                factors.append(self.parse_factor())
            else:
                break
        return mul(*factors)

    def parse_factor(self):
        atom = self.parse_atom()
        kind, val = self.peek()
        if kind == "pow":
            self.next()
            if val < 0:
                if not isinstance(atom, Gen):
                    raise ValueError("negative powers only apply to generators")
                atom = Gen(_INVERSES[atom.name])
                val = -val
            if val == 0:
                return ONE
            return mul(*([atom] * val))
        return atom

    def parse_atom(self):
        kind, val = self.next()
        if kind == "gen":
            return Gen(val)
        if kind == "q":
            return Q
        if kind == "int":
            return IntScalar(val)
        if (kind, val) == ("op", "("):
            inner = self.parse_expr()
            if self.next() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return inner
        raise ValueError(f"unexpected token {val!r}")


def parse_expression(text: str):
    parser = _Parser(_tokenize(text))
    expr = parser.parse_expr()
    if parser.pos != len(parser.tokens):
        raise ValueError(f"trailing input after expression: {text!r}")
    return expr


# ---------------------------------------------------------------------------
# identity verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VerifyResult:
    name: str
    ok: bool
    witness: str | None = None


def _vanishes_at_q_one(elem: SkewLaurentElement):
    """Zero-test after specializing q := 1 in a symbolic normal form."""
    for e in sorted(elem.terms):
        c = elem.terms[e]
        den1 = c.den.substitute(0, 1)
        if den1.is_zero():
            raise RingError(f"coefficient denominator vanishes at q=1: {c!r}")
        num1 = c.num.substitute(0, 1)
        if not num1.is_zero():
            return False, f"({num1!r})/({den1!r}) * x^{e}"
    return True, None


def verify_identity(lhs, rhs, mode: EngineMode, name: str = "identity",
                    specialize_q_one: bool = False) -> VerifyResult:
    """True iff lhs - rhs normalizes to zero termwise; on failure the
    witness is the first surviving term."""
    diff = evaluate(lhs, mode) - evaluate(rhs, mode)
    if specialize_q_one:
        if mode.kind != SYMBOLIC:
            raise ValueError("q=1 specialization applies to symbolic mode only")
        ok, witness = _vanishes_at_q_one(diff)
        return VerifyResult(name, ok, witness)
    return VerifyResult(name, diff.is_zero(), diff.leading_witness())


# A = v'u' and B = u; their inverses are uv and u'.
_A = mul(VI, UI)
_AI = mul(U, V)
_B = U
_BI = UI
_C_WORD = mul(Q, U, V, UI, VI, UI, VI, UI, V, U)
_C_FLAT_WORD = mul(U, V, UI, VI, UI, V, U, VI, UI)

IDENTITY_SUITE = (
    ("fundamental",
     "A'B'AB - B'AB = BA'B'A - A with A=v'u', B=u",
     sub(mul(_AI, _BI, _A, _B), mul(_BI, _A, _B)),
     sub(mul(_B, _AI, _BI, _A), _A),
     False),
    ("quantum-exchange",
     "B = BA' - q A'B",
     _B,
     sub(mul(_B, _AI), mul(Q, _AI, _B)),
     False),
    ("closed-form-C",
     "A'B'A(1 - A) equals the q-scaled 9-letter word",
     mul(_AI, _BI, _A, sub(ONE, _A)),
     _C_WORD,
     False),
    ("closed-form-D",
     "1 - A'B'AB = 1 - q - u'v'",
     sub(ONE, mul(_AI, _BI, _A, _B)),
     sub(sub(ONE, Q), mul(UI, VI)),
     False),
    ("hecke-scalar",
     "(1 - A)A'B'AB = q",
     mul(sub(ONE, _A), _AI, _BI, _A, _B),
     Q,
     False),
    ("flat-c-words",
     "the two closed forms of C agree at q = 1",
     _C_FLAT_WORD,
     _C_WORD,
     True),
)


def run_identity_suite(mode: EngineMode) -> list[VerifyResult]:
    """Run every built-in identity in the given mode.

    In a finite mode the q=1 item is checked in the companion flat mode
    (same prime, q=1), since the two C-words only agree classically.
    """
    results = []
    for name, _desc, lhs, rhs, flat_only in IDENTITY_SUITE:
        if flat_only:
            if mode.kind == SYMBOLIC:
                results.append(verify_identity(lhs, rhs, mode, name,
                                               specialize_q_one=True))
            else:
                flat = EngineMode.finite(mode.p, 1, allow_flat=True)
                results.append(verify_identity(lhs, rhs, flat, name))
        else:
            results.append(verify_identity(lhs, rhs, mode, name))
    return results


def sample_finite_modes(trials: int, rng) -> list[EngineMode]:
    """Random (p, q) pairs with q and 1-q invertible."""
    primes = (5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43)
    modes = []
    for _ in range(trials):
        p = rng.choice(primes)
        q = rng.randrange(2, p)
        modes.append(EngineMode.finite(p, q))
    return modes


def injectivity_spot_check(max_degree: int, mode: EngineMode) -> bool:
    """Images of u^m v^n for m, n <= max_degree are one-term normal forms
    with pairwise distinct (h-degree, x-degree) signatures."""
    if max_degree > 6:
        raise ValueError("spot check is meant for desk scale (max_degree <= 6)")
    seen = set()
    for m in range(max_degree + 1):
        for n in range(max_degree + 1):
            word = [U] * m + [V] * n
            img = evaluate(mul(*word) if word else ONE, mode)
            if len(img.terms) != 1:
                return False
            exp, coeff = next(iter(img.terms.items()))
            if exp != n - m:
                return False
            if mode.kind == SYMBOLIC:
                hdeg = (coeff.num.degree_in(1) or 0) - (coeff.den.degree_in(1) or 0)
            else:
                hdeg = (coeff.num.degree or 0) - (coeff.den.degree or 0)
            if hdeg != m or (hdeg, exp) in seen:
                return False
            seen.add((hdeg, exp))
    return True
