"""Finite-dimensional matrix representations of the (quantum) Weyl algebra.

A representation is a validated pair of invertible matrices U, V with
UV - qVU = I.  ``validate_rep`` is the single source of truth: every
family constructor assembles its matrices and then runs the validator, so
a typo in an assembly formula surfaces as a hard failure instead of a
silently wrong invariant downstream.

Families:

* ``family_char_p_bidiagonal`` -- char p | n, q = 1: U upper bidiagonal
  with diagonal x, V lower bidiagonal with diagonal y and subdiagonal
  entries i/a_i.  Parameters may involve one indeterminate each (two
  distinct indeterminates switch the entries to a two-variable ring that
  supports validation but not inversion).
* ``family_truncated`` -- q = 1 operators f -> f'/I' + Jf and f -> If on
  K[x]/(x^n) with p | n; the inverse-derivative coefficients k_r come from
  the difference equation  i_1 k_r + 2 i_2 k_{r-1} + ... + (r+1) i_{r+1} k_0 = 0.
* ``family_q_bidiagonal`` -- lower/upper bidiagonal pair whose diagonal
  products beta_i = b_i d_i and the product ac are solved exactly from the
  recurrence  beta_{i-1} - q beta_i + (1-q) q^(2(n-i)) ac = 1  with
  beta_0 = beta_n = 0.
* ``family_q_upper`` -- the upper-triangular pair with geometric diagonals
  q^(n-1)a ... a and c ... q^(n-1)c, where c = 1/(a q^(n-1) (1-q)).

Representations over a characteristic-zero field with q = 1 are rejected
at construction: trace(UV - VU) = 0 can never equal trace(I) = n.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field

from .linalg import Matrix, det_exact, _is_unit_in
from .rings import (
    QQ,
    BivariateRing,
    FieldScalar,
    FractionElement,
    FractionField,
    LaurentRing,
    PolynomialRing,
    PrimeField,
    RationalField,
    RingError,
    parse_laurent,
    parse_polynomial,
)

logger = logging.getLogger("weylknots.reps")


class RepError(RingError):
    """Representation construction or validation failure."""


def _characteristic(ring) -> int:
    if isinstance(ring, PrimeField):
        return ring.p
    if isinstance(ring, RationalField):
        return 0
    if isinstance(ring, (PolynomialRing, LaurentRing)):
        return _characteristic(ring.field)
    if isinstance(ring, FractionField):
        return _characteristic(ring.domain)
    if isinstance(ring, BivariateRing):
        return ring.p or 0
    raise RepError(f"unknown characteristic for {ring}")


@dataclass
class RepReport:
    ok: bool
    relation_ok: bool
    det_u: object
    det_v: object
    det_u_unit: bool
    det_v_unit: bool
    first_failure: tuple | None = None

    def describe(self) -> str:
        if self.ok:
            return "valid: UV - qVU = I, det(U) and det(V) are units"
        parts = []
        if not self.relation_ok:
            i, j, got = self.first_failure
            parts.append(f"UV - qVU != I at entry ({i},{j}): got {got!r}")
        if not self.det_u_unit:
            parts.append(f"det(U) = {self.det_u!r} is not a unit")
        if not self.det_v_unit:
            parts.append(f"det(V) = {self.det_v!r} is not a unit")
        return "; ".join(parts)


class MatrixRep:
    """A pair (U, V) with UV - qVU = I over a common entry ring."""

    def __init__(self, U: Matrix, V: Matrix, q, label: str = "custom"):
        if not (U.is_square() and V.is_square() and U.nrows == V.nrows):
            raise RepError("U and V must be square of equal size")
        if U.ring != V.ring or q.ring != U.ring:
            raise RepError("U, V and q must share one ring")
        self.U = U
        self.V = V
        self.q = q
        self.dim = U.nrows
        self.ring = U.ring
        self.label = label
        if _characteristic(self.ring) == 0 and q.is_one():
            raise RepError(
                "no q=1 representation exists over characteristic 0: "
                f"trace(UV - VU) = 0 but trace(I) = {self.dim}")

    def det_u(self):
        return det_exact(self.U)

    def det_v(self):
        return det_exact(self.V)

    def __repr__(self):
        return (f"MatrixRep({self.label}, dim={self.dim}, ring={self.ring}, "
                f"q={self.q!r})")


def validate_rep(rep: MatrixRep) -> RepReport:
    """Check UV - qVU = I exactly and that both determinants are units."""
    got = rep.U * rep.V - (rep.V * rep.U).scale(rep.q)
    identity = Matrix.identity(rep.ring, rep.dim)
    relation_ok = True
    first = None
    for i in range(rep.dim):
        for j in range(rep.dim):
            if got.rows[i][j] != identity.rows[i][j]:
                relation_ok = False
                first = (i, j, got.rows[i][j])
                break
        if not relation_ok:
            break
    du, dv = rep.det_u(), rep.det_v()
    du_unit = _is_unit_in(du, rep.ring)
    dv_unit = _is_unit_in(dv, rep.ring)
    return RepReport(relation_ok and du_unit and dv_unit, relation_ok,
                     du, dv, du_unit, dv_unit, first)


def _validated(rep: MatrixRep) -> MatrixRep:
    report = validate_rep(rep)
    if not report.ok:
        raise RepError(f"{rep.label}: {report.describe()}")
    return rep


# ---------------------------------------------------------------------------
# parameter parsing
# ---------------------------------------------------------------------------

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def _indeterminates(values) -> list[str]:
    names = set()
    for v in values:
        if isinstance(v, str):
            names.update(_NAME_RE.findall(v))
    return sorted(names)


def _charp_ring(p, values):
    """Entry ring for char-p families: Laurent in one indeterminate, or a
    two-variable polynomial ring when the parameters use two names."""
    names = _indeterminates(values)
    if len(names) <= 1:
        var = names[0] if names else "x"
        return LaurentRing(PolynomialRing(PrimeField(p), var))
    if len(names) == 2:
        return BivariateRing(tuple(names), p)
    raise RepError(f"too many indeterminates in parameters: {names}")


def _charp_value(ring, value):
    if isinstance(ring, LaurentRing):
        if isinstance(value, int):
            return ring.from_int(value)
        return parse_laurent(str(value), ring)
    # two-variable ring: each parameter may mention at most one name
    if isinstance(value, int):
        return ring.from_int(value)
    from .rings import _parse_terms
    terms = _parse_terms(str(value), None)
    names = _indeterminates([value])
    out = ring.zero
    for e, c in terms.items():
        if c.denominator != 1:
            raise RepError(f"fractional coefficient not allowed here: {value!r}")
        if e and not names:
            raise RepError(f"cannot parse {value!r}")
        if not names:
            out = out + ring.from_int(c.numerator)
        else:
            idx = ring.vars.index(names[0])
            out = out + ring.monomial(e if idx == 0 else 0, e if idx == 1 else 0,
                                      c.numerator)
    return out


def _q_context(p):
    """(entry ring, embed) for the q-families: Z_p scalars, or Frac(Q[q])
    with q symbolic when p is None."""
    if p is not None:
        fieldring = PrimeField(p)

        def embed(value):
            if isinstance(value, str) and _NAME_RE.search(value):
                raise RepError(f"indeterminate parameter {value!r} needs p=None")
            return fieldring(value if isinstance(value, int) else str(value))

        return fieldring, embed
    dom = PolynomialRing(QQ, "q")
    fieldring = FractionField(dom)

    def embed(value):
        if isinstance(value, int):
            return fieldring.from_int(value)
        return fieldring(parse_polynomial(str(value), dom))

    return fieldring, embed


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------

def _charp_inverse(ring, val):
    if isinstance(ring, LaurentRing):
        return val.inv()
    # the two-variable ring carries no negative exponents, so only scalars
    # can be inverted there
    if len(val.terms) == 1 and (0, 0) in val.terms:
        return ring.from_int(pow(val.terms[(0, 0)], ring.p - 2, ring.p))
    raise RepError(f"{val!r} must be an invertible scalar when two "
                   "indeterminates are in play")


def family_char_p_bidiagonal(n: int, p: int, x, y, a) -> MatrixRep:
    """U upper bidiagonal (diagonal x, superdiagonal a_i), V lower
    bidiagonal (diagonal y, subdiagonal i/a_i); q = 1, valid when p | n."""
    if n % p != 0:
        raise RepError(f"characteristic {p} must divide the dimension {n}")
    a = list(a)
    if len(a) != n - 1:
        raise RepError(f"need {n - 1} superdiagonal parameters, got {len(a)}")
    ring = _charp_ring(p, [x, y, *a])
    xv = _charp_value(ring, x)
    yv = _charp_value(ring, y)
    av = [_charp_value(ring, ai) for ai in a]
    for nameval, val in (("x", xv), ("y", yv)):
        if val.is_zero():
            raise RepError(f"parameter {nameval} must be nonzero")
    if any(ai.is_zero() for ai in av):
        raise RepError("superdiagonal parameters must be nonzero")
    zero = ring.zero
    urows = [[xv if r == c else (av[r] if c == r + 1 else zero) for c in range(n)]
             for r in range(n)]
    vrows = []
    for r in range(n):
        row = [zero] * n
        row[r] = yv
        if r >= 1:
            row[r - 1] = ring.from_int(r) * _charp_inverse(ring, av[r - 1])
        vrows.append(row)
    rep = MatrixRep(Matrix(urows, ring), Matrix(vrows, ring), ring.one,
                    label=f"char_p_bidiagonal(n={n},p={p})")
    return _validated(rep)


def truncated_k_sequence(i_vals, length: int):
    """Coefficients of (I')^-1 from the difference equation; i_vals are the
    coefficients of I in the entry ring, i_1 a unit."""
    i1 = i_vals[1]
    k = [i1.inv() if hasattr(i1, "inv") else i1 ** -1]
    for r in range(1, length):
        acc = None
        for m in range(1, r + 1):
            im = i_vals[m + 1] if m + 1 < len(i_vals) else None
            if im is None or im.is_zero():
                continue
            term = (m + 1) * im * k[r - m]
            acc = term if acc is None else acc + term
        if acc is None:
            k.append(k[0] - k[0])
        else:
            k.append(-(acc * k[0]))
    return k


def family_truncated(n: int, p: int, i_coeffs, j_coeffs) -> MatrixRep:
    """q = 1 representation on K[x]/(x^n) by f -> f'/I' + Jf and f -> If.

    The matrices are assembled in the basis {1, x, ..., x^(n-1)} in the
    row-convention layout u[r][c] = j_(c-r) + r*k_(c-r+1), v[r][c] = i_(c-r);
    if that orientation fails the validator (it flips the commutator sign
    in odd characteristic), the transposed pair is used and the switch is
    logged.
    """
    if n % p != 0:
        raise RepError(f"characteristic {p} must divide the dimension {n}")
    ring = _charp_ring(p, list(i_coeffs) + list(j_coeffs))
    if not isinstance(ring, LaurentRing):
        raise RepError("truncated family needs scalar or single-variable parameters")
    ivals = [_charp_value(ring, c) for c in i_coeffs]
    jvals = [_charp_value(ring, c) for c in j_coeffs]
    ivals += [ring.zero] * (n - len(ivals))
    jvals += [ring.zero] * (n - len(jvals))
    if ivals[0].is_zero() or ivals[1].is_zero():
        raise RepError("i_0 and i_1 must be nonzero units")
    if not ivals[1].is_unit():
        raise RepError(f"i_1 = {ivals[1]!r} must be a unit")
    kvals = truncated_k_sequence(ivals, n)

    def jat(m):
        return jvals[m] if 0 <= m < n else ring.zero

    def kat(m):
        return kvals[m] if 0 <= m < n else ring.zero

    urows = [[jat(c - r) + ring.from_int(r) * kat(c - r + 1) for c in range(n)]
             for r in range(n)]
    vrows = [[ivals[c - r] if 0 <= c - r < n else ring.zero for c in range(n)]
             for r in range(n)]
    U, V = Matrix(urows, ring), Matrix(vrows, ring)
    du = det_exact(U)
    if du.is_zero():
        raise RepError("singular u: the parameters fail the determinant condition")
    rep = MatrixRep(U, V, ring.one, label=f"truncated(n={n},p={p})")
    report = validate_rep(rep)
    if not report.ok:
        flipped = MatrixRep(U.transpose(), V.transpose(), ring.one, label=rep.label)
        flip_report = validate_rep(flipped)
        if flip_report.ok:
            logger.warning("truncated family: row-convention layout fails for "
                           "p=%d, using the transposed (operator) orientation", p)
            return flipped
        raise RepError(f"{rep.label}: {report.describe()}")
    return rep


def family_q_bidiagonal(n: int, q, a, b, p: int | None = None) -> MatrixRep:
    """Lower-bidiagonal U (diagonal q^(n-i) a, subdiagonal b_i) and
    upper-bidiagonal V (diagonal q^(n-i) c, superdiagonal beta_i / b_i),
    with beta_i and ac solved exactly from the diagonal recurrence."""
    ring, embed = _q_context(p)
    qv = embed(q)
    av = embed(a)
    b = list(b)
    if len(b) != n - 1:
        raise RepError(f"need {n - 1} subdiagonal parameters, got {len(b)}")
    bv = [embed(bi) for bi in b]
    one = ring.one
    if qv.is_zero() or (one - qv).is_zero():
        raise RepError("q and 1 - q must be invertible")
    if av.is_zero() or any(x.is_zero() for x in bv):
        raise RepError("a and every b_i must be invertible")

    # beta_i = alpha_i + gamma_i * t with t = ac, from
    # beta_i = (beta_{i-1} + (1-q) q^(2(n-i)) t - 1) / q, beta_0 = 0
    alpha, gamma = ring.zero, ring.zero
    qinv = one / qv
    for i in range(1, n):
        alpha = (alpha - one) * qinv
        gamma = (gamma + (one - qv) * qv ** (2 * (n - i))) * qinv
    # closing equation: alpha + gamma t + (1-q) t = 1
    denom = gamma + (one - qv)
    if denom.is_zero():
        raise RepError(f"unsolvable recurrence: q = {qv!r} makes the system singular")
    t = (one - alpha) / denom
    cv = t / av

    beta = []
    bi_val = ring.zero
    for i in range(1, n):
        bi_val = (bi_val + (one - qv) * qv ** (2 * (n - i)) * t - one) * qinv
        beta.append(bi_val)
    _log_beta_discrepancy(n, qv, beta, ring)

    zero = ring.zero
    urows = [[zero] * n for _ in range(n)]
    vrows = [[zero] * n for _ in range(n)]
    for r in range(n):
        urows[r][r] = qv ** (n - 1 - r) * av
        vrows[r][r] = qv ** (n - 1 - r) * cv
        if r >= 1:
            urows[r][r - 1] = bv[r - 1]
        if r < n - 1:
            vrows[r][r + 1] = beta[r] / bv[r]
    rep = MatrixRep(Matrix(urows, ring), Matrix(vrows, ring), qv,
                    label=f"q_bidiagonal(n={n})")
    return _validated(rep)


def _log_beta_discrepancy(n, qv, beta, ring):
    # the printed closed form: sum_{e=n-2i}^{n-i-1} q^e - sum_{e=1-i}^{-1} q^e
    one = ring.one
    for i in range(1, n):
        printed = ring.zero
        for e in range(n - 2 * i, n - i):
            printed = printed + (qv ** e if e >= 0 else one / qv ** (-e))
        for e in range(1 - i, 0):
            printed = printed - (one / qv ** (-e))
        if printed != beta[i - 1]:
            logger.info("q_bidiagonal(n=%d): solved beta_%d differs from the "
                        "printed sum formula (solver wins): %r vs %r",
                        n, i, beta[i - 1], printed)


def family_q_upper(n: int, q, a, b, d, e, p: int | None = None) -> MatrixRep:
    """The upper-triangular pair with geometric diagonals and
    c = 1/(a q^(n-1) (1-q))."""
    ring, embed = _q_context(p)
    qv, av, bvv, dv, ev = (embed(v) for v in (q, a, b, d, e))
    one = ring.one
    if qv.is_zero() or (one - qv).is_zero():
        raise RepError("q and 1 - q must be invertible")
    if av.is_zero() or bvv.is_zero():
        raise RepError("a and b must be invertible")
    cv = one / (av * qv ** (n - 1) * (one - qv))
    zero = ring.zero
    urows = [[zero] * n for _ in range(n)]
    vrows = [[zero] * n for _ in range(n)]
    binv = one / bvv
    for r in range(n):
        urows[r][r] = qv ** (n - 1 - r) * av
        vrows[r][r] = qv ** r * cv
        if r < n - 1:
            urows[r][r + 1] = bvv ** (n - 2 - r) * dv
            vrows[r][r + 1] = (qv * binv) ** r * ev
    rep = MatrixRep(Matrix(urows, ring), Matrix(vrows, ring), qv,
                    label=f"q_upper(n={n})")
    report = validate_rep(rep)
    if not report.ok:
        logger.warning("q_upper(n=%d) failed validation: %s", n, report.describe())
        raise RepError(f"{rep.label}: {report.describe()}")
    return rep


# ---------------------------------------------------------------------------
# named specs and JSON ingestion
# ---------------------------------------------------------------------------

@dataclass
class RepSpec:
    family: str
    n: int
    p: int | None = None
    params: dict = field(default_factory=dict)
    name: str = ""

    @classmethod
    def from_json(cls, data) -> RepSpec:
        if isinstance(data, str):
            data = json.loads(data)
        known = {"family", "n", "p", "params", "name"}
        extra = set(data) - known
        if extra:
            raise RepError(f"unknown RepSpec keys: {sorted(extra)}")
        try:
            return cls(family=data["family"], n=int(data["n"]),
                       p=data.get("p"), params=dict(data.get("params", {})),
                       name=data.get("name", ""))
        except KeyError as missing:
            raise RepError(f"RepSpec is missing {missing}") from None

    def build(self) -> MatrixRep:
        params = self.params
        try:
            if self.family == "char_p_bidiagonal":
                rep = family_char_p_bidiagonal(self.n, self.p, params["x"],
                                               params["y"], params["a"])
            elif self.family == "truncated":
                rep = family_truncated(self.n, self.p, params["i"], params["j"])
            elif self.family == "q_bidiagonal":
                rep = family_q_bidiagonal(self.n, params["q"], params["a"],
                                          params["b"], p=self.p)
            elif self.family == "q_upper":
                rep = family_q_upper(self.n, params["q"], params["a"], params["b"],
                                     params["d"], params["e"], p=self.p)
            else:
                raise RepError(f"unknown family {self.family!r}")
        except KeyError as missing:
            raise RepError(f"family {self.family!r} needs parameter {missing}")
        if self.name:
            rep.label = self.name
        return rep


BUILTIN_SPECS = {
    # the 3x3 pair over Z_3[y] used for the Kishino shadow
    "kishino3": RepSpec("char_p_bidiagonal", n=3, p=3,
                        params={"x": "1", "y": "y", "a": ["1", "1"]},
                        name="kishino3"),
    # the 2x2 pair over Z_2[x] used for the flat 2-braid closures
    "flat2": RepSpec("char_p_bidiagonal", n=2, p=2,
                     params={"x": "x", "y": "1", "a": ["1"]},
                     name="flat2"),
}


def build_rep(source) -> MatrixRep:
    """Build from a builtin name, a JSON file path, a JSON string, a dict,
    a RepSpec or a finished MatrixRep."""
    if isinstance(source, MatrixRep):
        return source
    if isinstance(source, RepSpec):
        return source.build()
    if isinstance(source, dict):
        return RepSpec.from_json(source).build()
    if isinstance(source, str):
        if source in BUILTIN_SPECS:
            return BUILTIN_SPECS[source].build()
        if source.lstrip().startswith("{"):
            return RepSpec.from_json(source).build()
        try:
            with open(source, "r", encoding="utf-8") as fh:
                return RepSpec.from_json(fh.read()).build()
        except FileNotFoundError:
            raise RepError(f"no builtin rep or spec file named {source!r}") from None
    raise RepError(f"cannot build a representation from {source!r}")
