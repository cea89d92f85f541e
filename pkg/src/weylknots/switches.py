"""Linear switches: 2x2 block solutions of the braid relation.

A linear switch is the block matrix S = [[A, B], [C, D]] acting on pairs
of k-dimensional strand blocks.  ``check_switch`` verifies the axioms as
exact matrix identities: the braid relation on three blocks, the Hecke
quadratic S^2 = (1-q)S + qI for the switch's declared scalar, and S^2 = I
when q = 1 (the flat case).

``weyl_switch`` builds the canonical switch of a validated representation:
A = V'U', B = U, D = (1-q)I - U'V', and C both as the closed form
A'B'A(I - A) and as the q-scaled 9-letter word in U, V -- the two must
agree entrywise, which cross-checks the construction against the algebra.
"""

from __future__ import annotations

from .linalg import Matrix, det_exact, mat_inverse
from .reps import MatrixRep, validate_rep
from .rings import (
    QQ,
    LaurentRing,
    NonUnitError,
    PolynomialRing,
    RingError,
)


class SwitchError(RingError):
    """Switch construction or axiom failure."""


class LinearSwitch:
    """Blocks A, B, C, D (k x k) with the assembled 2k x 2k matrix S and a
    declared Hecke scalar q (None when the switch has no such scalar)."""

    def __init__(self, A, B, C, D, q, label="custom"):
        for m in (B, C, D):
            if m.ring != A.ring or m.nrows != A.nrows or not m.is_square():
                raise SwitchError("blocks must be square, equal-sized, one ring")
        if q is not None and q.ring != A.ring:
            raise SwitchError("q must live in the block entry ring")
        self.A, self.B, self.C, self.D = A, B, C, D
        self.q = q
        self.k = A.nrows
        self.ring = A.ring
        self.label = label
        self._S = None
        self._S_inv = None

    @property
    def S(self) -> Matrix:
        if self._S is None:
            self._S = Matrix.block([[self.A, self.B], [self.C, self.D]])
        return self._S

    def is_flat(self) -> bool:
        s = self.S
        return (s * s).is_identity()

    def inverse(self) -> Matrix:
        if self._S_inv is None:
            self._S_inv = switch_inverse(self)
        return self._S_inv

    def det_b(self):
        """det of the B block; the normalization ambiguity of closures."""
        return det_exact(self.B)

    def __repr__(self):
        return f"LinearSwitch({self.label}, k={self.k}, ring={self.ring})"


def weyl_switch(rep: MatrixRep, label=None) -> LinearSwitch:
    """The canonical switch of a representation, with C cross-checked
    against its two formulas and asserted invertible."""
    report = validate_rep(rep)
    if not report.ok:
        raise SwitchError(f"representation fails validation: {report.describe()}")
    U, V, q = rep.U, rep.V, rep.q
    Uinv, Vinv = mat_inverse(U), mat_inverse(V)
    identity = Matrix.identity(rep.ring, rep.dim)
    A = Vinv * Uinv
    Ainv = U * V
    B = U
    C_closed = Ainv * Uinv * A * (identity - A)
    C_word = (U * V * Uinv * Vinv * Uinv * Vinv * Uinv * V * U).scale(q)
    if C_closed != C_word:
        raise SwitchError("the two formulas for C disagree; construction bug")
    D = identity.scale(rep.ring.one - q) - Uinv * Vinv
    try:
        mat_inverse(C_closed)
    except NonUnitError as err:
        raise SwitchError(f"block C is singular: det = {err.value!r}") from None
    return LinearSwitch(A, B, C_closed, D, q,
                        label=label or f"weyl({rep.label})")


def burau_switch(t=None, ring=None) -> LinearSwitch:
    """The 1x1-block switch [[0, 1], [t, 1-t]] with Hecke scalar t.

    With no arguments t is the generator of Q[t, t^-1].
    """
    if ring is None:
        ring = LaurentRing(PolynomialRing(QQ, "t"))
    if t is None:
        t = ring.gen
    else:
        t = ring(t)
    if not t.is_unit():
        raise SwitchError(f"Burau parameter must be a unit, got {t!r}")
    one, zero = ring.one, ring.zero
    mk = lambda e: Matrix([[e]], ring)
    return LinearSwitch(mk(zero), mk(one), mk(t), mk(one - t), t, label="burau")


def sawollek_switch(b, c, ring=None) -> LinearSwitch:
    """[[1 - BC, B], [C, 0]]; for commuting scalar blocks the Hecke scalar
    is BC, and C = 1 recovers the Burau form with t = B."""
    if isinstance(b, Matrix):
        B, C = b, c
        ring = B.ring
        identity = Matrix.identity(ring, B.nrows)
        q = None
        bc = B * C
        diag = bc.rows[0][0]
        if bc == Matrix.scalar(ring, B.nrows, diag):
            q = diag
        return LinearSwitch(identity - bc, B, C, Matrix.zeros(ring, B.nrows),
                            q, label="sawollek")
    if ring is None:
        raise SwitchError("scalar blocks need an explicit ring")
    b, c = ring(b), ring(c)
    mk = lambda e: Matrix([[e]], ring)
    return LinearSwitch(mk(ring.one - b * c), mk(b), mk(c), mk(ring.zero),
                        b * c, label="sawollek")


def custom_switch(A, B, C, D, q, label="custom") -> LinearSwitch:
    """Assemble and gate on check_switch; axiom failures raise."""
    switch = LinearSwitch(A, B, C, D, q, label=label)
    report = check_switch(switch)
    if not report.ok:
        raise SwitchError(f"switch axioms fail: {report.describe()}")
    return switch


class SwitchReport:
    def __init__(self, yang_baxter, hecke, involution, failures):
        self.yang_baxter = yang_baxter
        self.hecke = hecke          # None = no declared scalar to check
        self.involution = involution  # None = not a q=1 switch
        self.failures = failures

    @property
    def ok(self):
        return (self.yang_baxter and self.hecke is not False
                and self.involution is not False)

    def describe(self) -> str:
        if self.ok:
            return "yang-baxter, hecke and flat checks pass"
        return "; ".join(self.failures)


def check_switch(switch: LinearSwitch) -> SwitchReport:
    """Exact verification of the braid relation on three blocks, the Hecke
    quadratic, and (at q = 1) involutivity."""
    k = switch.k
    ring = switch.ring
    ik = Matrix.identity(ring, k)
    s = switch.S
    s1 = Matrix.block([[s, Matrix.zeros(ring, 2 * k, k)],
                       [Matrix.zeros(ring, k, 2 * k), ik]])
    s2 = Matrix.block([[ik, Matrix.zeros(ring, k, 2 * k)],
                       [Matrix.zeros(ring, 2 * k, k), s]])
    failures = []
    yb = (s1 * s2 * s1) == (s2 * s1 * s2)
    if not yb:
        failures.append("braid relation S1 S2 S1 = S2 S1 S2 fails")
    hecke = None
    involution = None
    if switch.q is not None:
        q = switch.q
        i2k = Matrix.identity(ring, 2 * k)
        hecke = (s * s) == s.scale(ring.one - q) + i2k.scale(q)
        if not hecke:
            failures.append(f"Hecke quadratic fails for q = {q!r}")
        if q.is_one():
            involution = (s * s).is_identity()
            if not involution:
                failures.append("S^2 = I fails although q = 1")
    return SwitchReport(yb, hecke, involution, failures)


def _factorization_inverse(switch: LinearSwitch) -> Matrix:
    """Inverse through the elementary factorization available when
    D = CA'B + I - A'; needs A, C and I - A' invertible."""
    ring = switch.ring
    k = switch.k
    ik = Matrix.identity(ring, k)
    zk = Matrix.zeros(ring, k)
    Ainv = mat_inverse(switch.A)
    if switch.D != switch.C * Ainv * switch.B + ik - Ainv:
        raise SwitchError("factorization path needs the canonical D block")
    m1 = Matrix.block([[ik, -(Ainv * switch.B)], [zk, ik]])
    m2 = Matrix.block([[ik, zk], [zk, mat_inverse(ik - Ainv)]])
    m3 = Matrix.block([[ik, zk], [-switch.C, ik]])
    m4 = Matrix.block([[Ainv, zk], [zk, ik]])
    return m1 * m2 * m3 * m4


def switch_inverse(switch: LinearSwitch) -> Matrix:
    """S^-1 via the Hecke quadratic (q^-1 (S - (1-q)I)) and/or the
    elementary factorization; when both apply they must agree."""
    from .linalg import _is_unit_in

    ring = switch.ring
    s = switch.S
    candidates = []
    q = switch.q
    if q is not None and _is_unit_in(q, ring):
        report = check_switch(switch)
        if report.hecke:
            one = ring.one
            if hasattr(q, "inv"):
                qinv = q.inv()
            else:
                qinv = one / q
            i2k = Matrix.identity(ring, 2 * switch.k)
            candidates.append((s - i2k.scale(one - q)).scale(qinv))
    try:
        candidates.append(_factorization_inverse(switch))
    except (SwitchError, NonUnitError):
        pass
    if not candidates:
        raise SwitchError("no inverse path: q is not a unit and the "
                          "factorization preconditions fail")
    first = candidates[0]
    for other in candidates[1:]:
        if other != first:
            raise SwitchError("Hecke and factorization inverses disagree")
    if not (s * first).is_identity() or not (first * s).is_identity():
        raise SwitchError("switch inverse failed verification")
    return first
