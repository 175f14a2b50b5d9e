from fractions import Fraction

import pytest

from leafspace.errors import PeriodMismatchError, PreconditionError
from leafspace.plmap import Bracket, Exact, PLMap, translation_number
from leafspace.qfield import qnum, sqrt_of
from leafspace.selftest import random_plmap, random_qnum

R2 = sqrt_of(2)
BETA = PLMap(1, [(0, 0), (Fraction(1, 2), Fraction(3, 4))])


def periodic_orbit_map(points, m, period=1):
    """PL map cyclically permuting the given points, shifted m periods."""
    pts = sorted(Fraction(p) for p in points)
    q = len(pts)
    bps = []
    for j, x in enumerate(pts):
        tgt = pts[(j + m) % q] + period * ((j + m) // q)
        bps.append((x, tgt))
    return PLMap(period, bps)


class TestConstruction:
    def test_translation_is_canonical_single_breakpoint(self):
        t = PLMap.translation(R2, 1)
        assert t.is_translation()
        assert t.breakpoints == ((qnum(0), R2),)
        assert PLMap(1, [(Fraction(1, 3), Fraction(1, 3) + R2)]) == t

    def test_collinear_breakpoints_removed(self):
        f = PLMap(1, [(0, 0), (Fraction(1, 4), Fraction(3, 8)), (Fraction(1, 2), Fraction(3, 4))])
        assert f == BETA

    def test_rejects_nonpositive_period(self):
        with pytest.raises(PreconditionError):
            PLMap(0, [(0, 0)])

    def test_rejects_non_monotone(self):
        with pytest.raises(PreconditionError):
            PLMap(1, [(0, 0), (Fraction(1, 2), Fraction(-1, 4))])
        with pytest.raises(PreconditionError):
            PLMap(1, [(0, 0), (Fraction(1, 2), Fraction(3, 2))])  # wrap fails

    def test_rejects_breakpoints_outside_period(self):
        with pytest.raises(PreconditionError):
            PLMap(1, [(2, 2)])

    def test_rejects_empty(self):
        with pytest.raises(PreconditionError):
            PLMap(1, [])


class TestEval:
    def test_identity(self, rng):
        ident = PLMap.identity(1)
        for _ in range(20):
            x = random_qnum(rng)
            assert ident(x) == x

    def test_translation_eval(self):
        assert PLMap.translation(R2, 1)(0) == R2

    def test_equivariance(self, rng):
        for _ in range(100):
            f = random_plmap(rng)
            x = random_qnum(rng)
            assert f(x + 1) == f(x) + 1

    def test_breakpoints_interpolate(self, rng):
        for _ in range(50):
            f = random_plmap(rng)
            for x, y in f.breakpoints:
                assert f(x) == y


class TestGroupOps:
    def test_translations_compose(self):
        a, b = random_qnum(__import__("random").Random(7)), R2
        lhs = PLMap.translation(a, 1).compose(PLMap.translation(b, 1))
        assert lhs == PLMap.translation(a + b, 1)

    def test_inverse_roundtrip(self, rng):
        for _ in range(200):
            f = random_plmap(rng)
            assert f.compose(f.inverse()) == PLMap.identity(1)
            assert f.inverse().compose(f) == PLMap.identity(1)

    def test_inverse_of_translation(self):
        assert PLMap.translation(R2, 1).inverse() == PLMap.translation(-R2, 1)

    def test_pow_additive(self, rng):
        for _ in range(30):
            f = random_plmap(rng, max_breaks=3)
            m, n = rng.randint(-3, 3), rng.randint(-3, 3)
            assert f.pow(m + n) == f.pow(m).compose(f.pow(n))

    def test_associativity(self, rng):
        for _ in range(100):
            f, g, h = (random_plmap(rng) for _ in range(3))
            assert f.compose(g).compose(h) == f.compose(g.compose(h))

    def test_eval_composition_coherence(self, rng):
        for _ in range(100):
            f, g = random_plmap(rng), random_plmap(rng)
            x = random_qnum(rng)
            assert f.compose(g)(x) == f(g(x))

    def test_period_mismatch_raises(self):
        f = BETA
        g = BETA.affine_conjugate(R2)
        with pytest.raises(PeriodMismatchError):
            f.compose(g)

    def test_commensurable_periods_compose(self):
        g = BETA._tiled(2)
        h = BETA.compose(BETA)
        assert g.compose(BETA) == h._tiled(2) or g.compose(BETA)(Fraction(1, 3)) == h(Fraction(1, 3))


class TestCommutes:
    def test_with_own_powers(self, rng):
        for _ in range(20):
            f = random_plmap(rng)
            assert f.commutes(f.pow(3))

    def test_translations_commute(self):
        assert PLMap.translation(R2, 1).commutes(PLMap.translation(Fraction(1, 3), 1))

    def test_beta_does_not_commute_with_irrational_translation(self):
        assert not BETA.commutes(PLMap.translation(1 + R2, 1))

    def test_beta_commutes_with_unit_translation(self):
        assert BETA.commutes(PLMap.translation(1, 1))


class TestFixedPoints:
    def test_identity_all(self):
        assert PLMap.identity(1).fixed_points().kind == "all"

    def test_translation_none(self):
        assert PLMap.translation(R2, 1).fixed_points().kind == "none"

    def test_beta_fixes_zero(self):
        fp = BETA.fixed_points()
        assert fp.kind == "some"
        assert qnum(0) in fp.points
        assert BETA(0) == 0

    def test_diagonal_segment_reported_as_interval(self):
        f = PLMap(1, [(0, 0), (Fraction(1, 4), Fraction(1, 4)), (Fraction(1, 2), Fraction(5, 8))])
        fp = f.fixed_points()
        assert fp.intervals
        lo, hi = fp.intervals[0]
        assert lo == 0 and hi == Fraction(1, 4)


class TestTranslationNumber:
    def test_translation_exact(self):
        res = translation_number(PLMap.translation(1 + R2, 1))
        assert isinstance(res, Exact) and res.value == 1 + R2

    def test_fixed_point_forces_zero(self):
        res = translation_number(BETA)
        assert isinstance(res, Exact) and res.value == 0

    def test_forced_periodic_orbit(self):
        f = periodic_orbit_map([0, Fraction(3, 5)], 1)
        res = translation_number(f)
        assert isinstance(res, Exact) and res.value == Fraction(1, 2)
        g = periodic_orbit_map([0, Fraction(1, 5), Fraction(2, 5)], 2)
        res = translation_number(g)
        assert isinstance(res, Exact) and res.value == Fraction(2, 3)

    def test_bracket_contains_exact_value(self):
        f = periodic_orbit_map([0, Fraction(3, 5)], 1)
        res = translation_number(f, eps=Fraction(1, 10**6), force_bracket=True)
        assert isinstance(res, Bracket)
        assert res.hi - res.lo <= Fraction(1, 10**6)
        assert res.contains(Fraction(1, 2))

    def test_bracket_for_translation(self):
        res = translation_number(PLMap.translation(R2, 1), eps=Fraction(1, 10**6), force_bracket=True)
        assert res.contains(R2)

    def test_doubling(self, rng):
        for _ in range(10):
            f = random_plmap(rng, max_breaks=2)
            r1 = translation_number(f, eps=Fraction(1, 100), max_denom=8)
            r2 = translation_number(f.compose(f), eps=Fraction(1, 100), max_denom=8)
            lo1, hi1 = (r1.value, r1.value) if isinstance(r1, Exact) else (r1.lo, r1.hi)
            lo2, hi2 = (r2.value, r2.value) if isinstance(r2, Exact) else (r2.lo, r2.hi)
            assert lo2 <= 2 * hi1 and 2 * lo1 <= hi2

    def test_conjugation_invariance(self, rng):
        for _ in range(10):
            f = random_plmap(rng, max_breaks=2)
            g = random_plmap(rng, max_breaks=2)
            conj = g.compose(f).compose(g.inverse())
            r1 = translation_number(f, eps=Fraction(1, 100), max_denom=8)
            r2 = translation_number(conj, eps=Fraction(1, 100), max_denom=8)
            lo1, hi1 = (r1.value, r1.value) if isinstance(r1, Exact) else (r1.lo, r1.hi)
            lo2, hi2 = (r2.value, r2.value) if isinstance(r2, Exact) else (r2.lo, r2.hi)
            assert lo1 <= hi2 and lo2 <= hi1


class TestPeriodGroup:
    def test_translation_all_reals(self):
        assert PLMap.translation(R2, 1).period_group().all_reals

    def test_beta_step_one(self):
        pg = BETA.period_group()
        assert not pg.all_reals and pg.step == 1

    def test_tiled_pattern_halves_step(self):
        tiled = PLMap(
            1,
            [
                (0, 0),
                (Fraction(1, 4), Fraction(3, 8)),
                (Fraction(1, 2), Fraction(1, 2)),
                (Fraction(3, 4), Fraction(7, 8)),
            ],
        )
        assert tiled.period_group().step == Fraction(1, 2)
        assert tiled.commutes(PLMap.translation(Fraction(1, 2), 1))

    def test_reported_step_commutes_half_does_not(self, rng):
        for _ in range(50):
            f = random_plmap(rng)
            pg = f.period_group()
            if pg.all_reals:
                continue
            assert f.commutes(PLMap.translation(pg.step, 1))
            assert f.commutes(PLMap.translation(2 * pg.step, 1))
            if pg.step < 1:
                assert not f.commutes(PLMap.translation(pg.step / 2, 1))

    def test_contains_own_period(self, rng):
        for _ in range(30):
            f = random_plmap(rng)
            pg = f.period_group()
            if not pg.all_reals:
                steps = (1 / pg.step).as_fraction()
                assert steps.denominator == 1  # p is a multiple of the step


class TestAffineConjugate:
    def test_translation_rescale(self):
        t = 1 + R2
        assert PLMap.translation(t, 1).affine_conjugate(t) == PLMap.translation(
            1, (1 + R2).inverse()
        )

    def test_identity_scale(self, rng):
        f = random_plmap(rng)
        assert f.affine_conjugate(1) == f

    def test_step_rescales(self, rng):
        for _ in range(20):
            f = random_plmap(rng)
            pg = f.period_group()
            if pg.all_reals:
                continue
            c = 1 + R2
            assert f.affine_conjugate(c).period_group().step == pg.step / c

    def test_rejects_nonpositive_scale(self):
        with pytest.raises(PreconditionError):
            BETA.affine_conjugate(0)


class TestSerialization:
    def test_round_trip(self, rng):
        for _ in range(30):
            f = random_plmap(rng)
            assert PLMap.from_json(f.to_json()) == f

    def test_irrational_round_trip(self):
        f = BETA.affine_conjugate(1 + R2)
        assert PLMap.from_json(f.to_json()) == f
