import logging

import pytest

from weylknots.linalg import Matrix, det_exact
from weylknots.reps import (
    BUILTIN_SPECS,
    MatrixRep,
    RepError,
    RepSpec,
    build_rep,
    family_char_p_bidiagonal,
    family_q_bidiagonal,
    family_q_upper,
    family_truncated,
    truncated_k_sequence,
    validate_rep,
)
from weylknots.rings import (
    QQ,
    FractionField,
    LaurentRing,
    PolynomialRing,
    PrimeField,
)

F2, F3 = PrimeField(2), PrimeField(3)
L3y = LaurentRing(PolynomialRing(F3, "y"))
L2x = LaurentRing(PolynomialRing(F2, "x"))


def lmat(ring, rows):
    return Matrix([[ring(e) for e in row] for row in rows], ring)


class TestValidate:
    def test_kishino_pair_is_valid(self):
        u = lmat(L3y, [[1, 1, 0], [0, 1, 1], [0, 0, 1]])
        v = lmat(L3y, [["y", 0, 0], [1, "y", 0], [0, 2, "y"]])
        rep = MatrixRep(u, v, L3y.one)
        assert validate_rep(rep).ok

    def test_flat_pair_is_valid(self):
        u = lmat(L2x, [["x", 1], [0, "x"]])
        v = lmat(L2x, [[1, 0], [1, 1]])
        assert validate_rep(MatrixRep(u, v, L2x.one)).ok

    def test_identity_pair_invalid(self):
        i2 = Matrix.identity(L2x, 2)
        report = validate_rep(MatrixRep(i2, i2, L2x.one))
        assert not report.ok and not report.relation_ok
        assert report.first_failure[:2] == (0, 0)

    def test_char0_q1_guard(self):
        i2 = Matrix.identity(PolynomialRing(QQ, "t"), 2)
        from weylknots.rings import LaurentRing as LR
        ring = LR(PolynomialRing(QQ, "t"))
        i2 = Matrix.identity(ring, 2)
        with pytest.raises(RepError, match="trace"):
            MatrixRep(i2, i2, ring.one)


class TestCharPBidiagonal:
    def test_kishino_matrices(self):
        rep = family_char_p_bidiagonal(3, 3, "1", "y", ["1", "1"])
        assert rep.U == lmat(L3y, [[1, 1, 0], [0, 1, 1], [0, 0, 1]])
        assert rep.V == lmat(L3y, [["y", 0, 0], [1, "y", 0], [0, 2, "y"]])

    def test_flat2_matrices(self):
        rep = family_char_p_bidiagonal(2, 2, "x", "1", ["1"])
        assert rep.U == lmat(L2x, [["x", 1], [0, "x"]])
        assert rep.V == lmat(L2x, [[1, 0], [1, 1]])

    def test_characteristic_guard(self):
        with pytest.raises(RepError, match="divide"):
            family_char_p_bidiagonal(3, 2, "x", "1", ["1", "1"])

    def test_zero_parameter_guard(self):
        with pytest.raises(RepError, match="nonzero"):
            family_char_p_bidiagonal(2, 2, "0", "1", ["1"])

    def test_two_symbolic_parameters_validate(self):
        # x and y both indeterminate: entries live in Z_p[x, y]
        rep = family_char_p_bidiagonal(2, 2, "x", "y", ["1"])
        assert validate_rep(rep).ok

    @pytest.mark.parametrize("n,p", [(2, 2), (3, 3), (4, 2), (5, 5), (6, 2), (6, 3)])
    def test_symbolic_family_members(self, n, p):
        a = [str(i + 1) if (i + 1) % p else "1" for i in range(n - 1)]
        rep = family_char_p_bidiagonal(n, p, "x", "y", a)
        assert validate_rep(rep).ok


class TestTruncated:
    def test_k_sequence_formulas(self):
        # k_1 = -2 i_2 i_1^-2 and k_2 = (4 i_2^2 - 3 i_1 i_3) i_1^-3
        F7 = PrimeField(7)
        ring = LaurentRing(PolynomialRing(F7, "x"))
        i1, i2, i3 = 2, 3, 5
        ivals = [ring.from_int(c) for c in (1, i1, i2, i3)]
        k = truncated_k_sequence(ivals, 3)
        inv = pow(i1, 5, 7)
        assert k[0] == ring.from_int(inv)
        assert k[1] == ring.from_int(-2 * i2 * inv * inv)
        assert k[2] == ring.from_int((4 * i2 * i2 - 3 * i1 * i3) * pow(inv, 3, 7))

    def test_n2_p2_displayed_orientation(self):
        rep = family_truncated(2, 2, [1, 1], [1])
        assert rep.V == lmat(L2x, [[1, 1], [0, 1]])
        assert validate_rep(rep).ok

    def test_singular_u_rejected(self):
        # J = 0 makes u singular, which the determinant condition rejects
        with pytest.raises(RepError, match="singular"):
            family_truncated(2, 2, [1, 1], [0])

    def test_i1_zero_rejected(self):
        with pytest.raises(RepError, match="i_0 and i_1"):
            family_truncated(2, 2, [1, 0], [1])

    def test_odd_characteristic_uses_transpose(self, caplog):
        with caplog.at_level(logging.WARNING, logger="weylknots.reps"):
            rep = family_truncated(3, 3, [1, 1, 1], [0, 1, 0])
        assert validate_rep(rep).ok
        assert any("transposed" in r.message for r in caplog.records)


class TestQBidiagonal:
    def test_n2_numeric(self):
        rep = family_q_bidiagonal(2, q=3, a=2, b=[1], p=7)
        assert validate_rep(rep).ok

    def test_n3_symbolic_q(self):
        rep = family_q_bidiagonal(3, q="q", a=1, b=[1, 1])
        assert validate_rep(rep).ok
        dom = PolynomialRing(QQ, "q")
        assert rep.ring == FractionField(dom)

    def test_symbolic_members_up_to_6(self):
        for n in range(2, 7):
            rep = family_q_bidiagonal(n, q="q", a=2, b=[1] * (n - 1))
            assert validate_rep(rep).ok

    def test_q_one_rejected(self):
        with pytest.raises(RepError, match="1 - q"):
            family_q_bidiagonal(2, q=1, a=1, b=[1], p=5)

    def test_unsolvable_recurrence(self):
        # q = -1 makes the closing equation singular for n = 2
        with pytest.raises(RepError, match="unsolvable"):
            family_q_bidiagonal(2, q=4, a=1, b=[1], p=5)

    def test_printed_formula_discrepancy_is_logged(self, caplog):
        with caplog.at_level(logging.INFO, logger="weylknots.reps"):
            family_q_bidiagonal(3, q="q", a=1, b=[1, 1])
        assert any("solver wins" in r.message for r in caplog.records)


class TestQUpper:
    def test_n2_instance(self):
        rep = family_q_upper(2, q=3, a=2, b=1, d=1, e=1, p=7)
        assert validate_rep(rep).ok

    def test_diagonal_law(self):
        # diag(U)_i * diag(V)_i = 1/(1-q) for the upper-triangular pair
        for n in (2, 3, 4):
            rep = family_q_upper(n, q="q", a=3, b=2, d=1, e=5)
            one = rep.ring.one
            target = one / (one - rep.q)
            for i in range(n):
                assert rep.U.rows[i][i] * rep.V.rows[i][i] == target

    def test_q_one_rejected(self):
        with pytest.raises(RepError):
            family_q_upper(2, q=1, a=1, b=1, d=1, e=1, p=3)


class TestSpecs:
    def test_builtin_kishino3(self):
        rep = build_rep("kishino3")
        assert rep.dim == 3 and rep.label == "kishino3"
        assert validate_rep(rep).ok

    def test_builtin_flat2(self):
        rep = build_rep("flat2")
        assert rep.dim == 2 and rep.ring == L2x

    def test_json_roundtrip(self):
        spec = RepSpec.from_json(
            '{"family":"char_p_bidiagonal","p":3,"n":3,'
            '"params":{"x":"1","y":"y","a":["1","1"]}}')
        rep = spec.build()
        assert rep.U == build_rep("kishino3").U

    def test_json_file(self, tmp_path):
        path = tmp_path / "rep.json"
        path.write_text('{"family":"q_upper","n":2,"p":7,'
                        '"params":{"q":3,"a":1,"b":1,"d":2,"e":1}}')
        assert validate_rep(build_rep(str(path))).ok

    def test_unknown_name(self):
        with pytest.raises(RepError, match="no builtin"):
            build_rep("nonesuch")

    def test_missing_param(self):
        with pytest.raises(RepError, match="needs parameter"):
            RepSpec("q_upper", n=2, p=7, params={"q": 3}).build()

    def test_det_b_is_unit(self):
        for name in BUILTIN_SPECS:
            rep = build_rep(name)
            assert det_exact(rep.U).is_unit()
