import random
from fractions import Fraction

import pytest

from eulerbrick.curves import (
    DegenerateFamilyError,
    EllipticFamily,
    M_value,
    f_value,
    halve,
    lift_to_genus3,
    model_rhs,
    octic_point,
    octic_rhs,
    quotient_map,
    rational_roots,
    torsion_subgroup,
    x_translate_t2,
)
from eulerbrick.fields import Fp, legendre, sqrt_mod


@pytest.fixture(scope="module")
def curve2():
    return EllipticFamily.at(2)


@pytest.fixture(scope="module")
def torsion2(curve2):
    return torsion_subgroup(curve2)


def oracle_double(curve, P):
    """Independent doubling via the duplication polynomial, not the chord-
    tangent slope: x(2P) = (x^4 - 2bx^2 - 8cx + b^2 - 4ac) / (4 y^2)."""
    A = curve.A
    a, b, c = A, Fraction(-4), -4 * A
    x, y = P.x, P.y
    num = x**4 - 2 * b * x * x - 8 * c * x + (b * b - 4 * a * c)
    x2 = num / (4 * y * y)
    lam = (3 * x * x + 2 * a * x + b) / (2 * y)
    y2 = lam * (x - x2) - y
    return curve.point(x2, y2)


class TestGroupLaw:
    def test_identity(self, curve2, torsion2):
        O = curve2.infinity()
        for P in torsion2.points:
            assert P + O == P
            assert O + P == P

    def test_two_torsion_doubles_to_identity(self, curve2):
        for T in curve2.two_torsion():
            assert (T + T).is_infinity

    def test_klein_four(self, curve2):
        T1, T2, T3 = curve2.two_torsion()
        assert T1 + T2 == T3
        assert T2 + T3 == T1
        assert T1 + T3 == T2

    def test_two_torsion_values(self, curve2):
        T1, T2, T3 = curve2.two_torsion()
        assert T1.x == Fraction(-1054, 625)
        assert (T2.x, T3.x) == (2, -2)

    def test_order4_doubling_against_oracle(self, curve2):
        T4 = curve2.point(Fraction(146, 25), Fraction(9408, 625))
        doubled = T4 + T4
        assert doubled == curve2.point(2, 0)
        assert oracle_double(curve2, T4) == doubled

    def test_field_mismatch(self, curve2):
        other = EllipticFamily.at(4)  # s = 3 would give the same A as s = 2
        assert other.A != curve2.A
        with pytest.raises(ValueError):
            curve2.two_torsion()[1] + other.two_torsion()[1]

    def test_on_curve_validation(self, curve2):
        with pytest.raises(ValueError):
            curve2.point(1, 1)

    def test_degenerate_family_rejected(self):
        with pytest.raises(DegenerateFamilyError):
            EllipticFamily(Fraction(2))

    def test_associativity_commutativity_mod_p(self, curve2):
        Ep = curve2.reduction(101)
        rng = random.Random(31)
        for _ in range(1000):
            P, Q, R = (Ep.random_point(rng) for _ in range(3))
            assert P + Q == Q + P
            assert (P + Q) + R == P + (Q + R)

    def test_scalar_multiples_cycle(self, curve2):
        Ep = curve2.reduction(101)
        rng = random.Random(32)
        for _ in range(50):
            P = Ep.random_point(rng)
            a, b = rng.randrange(1, 30), rng.randrange(1, 30)
            assert a * P + b * P == (a + b) * P


class TestHalving:
    def test_halve_t2(self, curve2):
        T2 = curve2.point(2, 0)
        got = halve(curve2, T2)
        xs = {P.x for P in got}
        assert xs == {Fraction(146, 25), Fraction(-46, 25)}
        assert curve2.point(Fraction(146, 25), Fraction(9408, 625)) in got
        assert curve2.point(Fraction(-46, 25), Fraction(192, 625)) in got
        for Q in got:
            assert Q + Q == T2

    def test_halve_t1_empty_matches_criterion(self, curve2):
        # classical 2-divisibility: (t - r_j) must all be squares; for T1 the
        # difference r1 - r2 = -(A + 2) = -4 kappa^2 < 0 blocks it
        T1, T2, T3 = curve2.two_torsion()
        assert halve(curve2, T1) == []
        assert halve(curve2, T3) == []

    def test_criterion_oracle_many_s(self):
        from eulerbrick.exact import is_perfect_square

        def is_rat_square(q):
            if q < 0:
                return False
            return is_perfect_square(q.numerator)[0] and is_perfect_square(q.denominator)[0]

        for s in (Fraction(2), Fraction(3, 2), Fraction(5, 2), Fraction(7, 4)):
            curve = EllipticFamily.at(s)
            for T in curve.two_torsion():
                others = [r for r in curve.roots if r != T.x]
                expected = is_rat_square(T.x - others[0]) and is_rat_square(T.x - others[1])
                assert bool(halve(curve, T)) == expected

    def test_halve_infinity(self, curve2):
        got = halve(curve2, curve2.infinity())
        assert curve2.infinity() in got
        assert set(curve2.two_torsion()) <= set(got)
        assert len(got) == 4


class TestTorsion:
    def test_structure_s2(self, torsion2, curve2):
        assert torsion2.structure == (4, 2)
        assert torsion2.order == 8
        assert curve2.point(Fraction(146, 25), Fraction(9408, 625)) in torsion2.points
        assert torsion2.double_t4_label == 2

    def test_every_point_annihilated(self, torsion2):
        for P in torsion2.points:
            assert (P.order() * P).is_infinity

    def test_s3_same_family(self):
        # c(3) = 7/25 has the same square as c(2), so A agrees
        curve = EllipticFamily.at(3)
        assert curve.A == Fraction(1054, 625)
        tors = torsion_subgroup(curve)
        assert tors.structure == (4, 2)

    def test_more_specializations(self):
        for s in (Fraction(3, 2), Fraction(4), Fraction(5, 2)):
            tors = torsion_subgroup(EllipticFamily.at(s))
            assert tors.structure == (4, 2)
            assert tors.double_t4_label == 2


class TestBridgeFunctions:
    def test_M_at_t4(self, curve2):
        P = curve2.point(Fraction(146, 25), Fraction(9408, 625))
        assert M_value(curve2, P) == 1
        assert f_value(curve2, P) == 1

    def test_f_at_other_preimage(self, curve2):
        P = curve2.point(Fraction(-46, 25), Fraction(192, 625))
        assert f_value(curve2, P) == -1

    def test_zero_at_t1(self, curve2):
        T1 = curve2.two_torsion()[0]
        assert M_value(curve2, T1) == 0
        assert f_value(curve2, T1) == 0

    def test_poles(self, curve2):
        with pytest.raises(ValueError):
            f_value(curve2, curve2.point(2, 0))
        with pytest.raises(ValueError):
            M_value(curve2, curve2.infinity())

    def test_f_squared_is_M_mod_p(self, curve2):
        rng = random.Random(33)
        for p in (101, 103, 107, 109, 113):
            Ep = curve2.reduction(p)
            for _ in range(100):
                P = Ep.random_point(rng)
                if not P.y or P.x == 2 or P.x == -2:
                    continue
                assert f_value(Ep, P) ** 2 == M_value(Ep, P)

    def test_translation_formula(self, curve2):
        rng = random.Random(34)
        Ep = curve2.reduction(101)
        T2 = Ep.point(2, 0)
        for _ in range(200):
            P = Ep.random_point(rng)
            if not P.y or P.x == 2:
                continue
            assert (P + T2).x == x_translate_t2(Ep.A, P.x)


class TestLift:
    def test_no_lift_f_one(self, curve2):
        P = curve2.point(Fraction(146, 25), Fraction(9408, 625))
        r = lift_to_genus3(curve2, P)
        assert not r.ok and "degenerate" in r.reason

    def test_no_lift_negative(self, curve2):
        P = curve2.point(Fraction(-46, 25), Fraction(192, 625))
        r = lift_to_genus3(curve2, P)
        assert not r.ok and r.reason == "negative"

    def test_no_lift_zero(self, curve2):
        T1 = curve2.two_torsion()[0]
        r = lift_to_genus3(curve2, T1)
        assert not r.ok and "lambda = 0" in r.reason

    def test_finite_field_lift(self, curve2):
        Ep = curve2.reduction(101)
        rng = random.Random(35)
        lifted = 0
        for _ in range(400):
            P = Ep.random_point(rng)
            if not P.y or P.x == 2 or P.x == -2:
                continue
            r = lift_to_genus3(Ep, P)
            if r.ok:
                lifted += 1
                lam, w = r.point.coords
                assert w * w == octic_rhs(Ep.A, lam)
                assert lam * lam == r.f
        assert lifted > 0


class TestQuotients:
    def test_base_point(self):
        A = Fraction(1054, 625)
        pt = octic_point(A, Fraction(0), Fraction(1))
        image = quotient_map(A, pt, "mu")
        assert image.coords == (0, 1)

    def test_reciprocal_pole(self):
        A = Fraction(1054, 625)
        pt = octic_point(A, Fraction(0), Fraction(1))
        with pytest.raises(ValueError):
            quotient_map(A, pt, "eta")

    def test_models_mod_p(self):
        p = 101
        curve = EllipticFamily.at(2)
        A = curve.reduction(p).A
        count = 0
        for lam_v in range(1, p):
            lam = Fp(p, lam_v)
            w2 = octic_rhs(A, lam)
            if not w2 or not w2.is_square():
                continue
            pt = octic_point(A, lam, w2.sqrt())
            for which in ("mu", "eta", "sigma"):
                image = quotient_map(A, pt, which)
                t, u = image.coords
                assert u * u == model_rhs(A, image.model, t)
            count += 1
        assert count > 10

    def test_invalid_point_rejected(self):
        with pytest.raises(ValueError):
            octic_point(Fraction(1054, 625), Fraction(2), Fraction(1))


class TestRationalRoots:
    def test_simple(self):
        # (x - 2)(x + 3)(2x - 1)
        coeffs = [Fraction(2), Fraction(1), Fraction(-13), Fraction(6)]
        assert rational_roots(coeffs) == [Fraction(-3), Fraction(1, 2), Fraction(2)]

    def test_no_roots(self):
        assert rational_roots([Fraction(1), Fraction(0), Fraction(1)]) == []

    def test_zero_roots(self):
        assert rational_roots([Fraction(1), Fraction(0), Fraction(0)]) == [0]

    def test_pm_one(self):
        assert rational_roots([Fraction(1), Fraction(0), Fraction(-1)]) == [-1, 1]


class TestFields:
    def test_sqrt_mod(self):
        for p in (101, 103, 10007):
            rng = random.Random(p)
            for _ in range(50):
                a = rng.randrange(p)
                if legendre(a, p) >= 0:
                    r = sqrt_mod(a, p)
                    assert r * r % p == a % p

    def test_fp_arithmetic(self):
        a = Fp(13, 7)
        assert (a + 8).v == 2
        assert (a * a).v == 10
        assert (a / a).v == 1
        assert (1 / a * a).v == 1
        assert -a == Fp(13, 6)
        assert a**3 == Fp(13, 343 % 13)
