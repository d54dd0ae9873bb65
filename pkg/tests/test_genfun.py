"""Series root, half-tight generating function, and the insertion recursion."""
from fractions import Fraction
from math import factorial

import pytest

from wptrees.algebra import AUX, INV_GAMMA1, PI2, GradedSeries, Polynomial, ghat, lsq, mom, that
from wptrees.genfun import (
    MomentContext,
    f_from_trees,
    f_recursion,
    f_substituted,
    htc_genfun,
    mu_average,
    solve_r,
    symmetric_from_moments,
    t_moment,
    z_residual,
    z_series,
)
from wptrees.volumes import htc_volume, v0n_reduced

P = Polynomial


def test_z_series_low_coefficients():
    # Recomputed by hand from J1(x) = sum (-1)^k (x/2)^(2k+1)/(k!(k+1)!)
    # and I0(x) = sum (x/2)^(2k)/(k!)^2 at x = 2 pi sqrt(2r), L sqrt(2r).
    z = z_series(3, MomentContext(3)).body
    assert z.coefficient([(mom(0), 1)]) == -1
    assert z.coefficient([(AUX, 1)]) == 1
    assert z.coefficient([(mom(1), 1), (AUX, 1)]) == Fraction(-1, 2)
    assert z.coefficient([(PI2, 1), (AUX, 2)]) == -1
    assert z.coefficient([(mom(2), 1), (AUX, 2)]) == Fraction(-1, 16)
    assert z.coefficient([(PI2, 2), (AUX, 3)]) == Fraction(1, 3)
    assert z.coefficient([(mom(3), 1), (AUX, 3)]) == Fraction(-1, 288)


def test_t_moment_conversion():
    assert t_moment(0) == P.const(2) * P.of_atom(mom(0))
    assert t_moment(1) == P.const(Fraction(1, 2)) * P.of_atom(mom(1))
    assert t_moment(2) == P.const(Fraction(1, 16)) * P.of_atom(mom(2))


def test_solve_r_grade_1():
    assert solve_r(MomentContext(1)).body == P.of_atom(mom(0))


def test_solve_r_grade_2():
    expected = (P.of_atom(mom(0))
                + P.monomial(Fraction(1, 2), [(mom(0), 1), (mom(1), 1)])
                + P.monomial(1, [(PI2, 1), (mom(0), 2)]))
    assert solve_r(MomentContext(2)).body == expected


def test_solve_r_grade_3():
    # One more Newton step by hand on Z(R) = 0:
    # R_3 = 5/3 pi^4 m0^3 + 3/2 pi^2 m0^2 m1 + 1/4 m0 m1^2 + 1/16 m0^2 m2.
    grade3 = solve_r(MomentContext(3)).grade_part(3)
    expected = (P.monomial(Fraction(5, 3), [(PI2, 2), (mom(0), 3)])
                + P.monomial(Fraction(3, 2), [(PI2, 1), (mom(0), 2), (mom(1), 1)])
                + P.monomial(Fraction(1, 4), [(mom(0), 1), (mom(1), 2)])
                + P.monomial(Fraction(1, 16), [(mom(0), 2), (mom(2), 1)]))
    assert grade3 == expected


@pytest.mark.parametrize("cap", [1, 2, 3, 4, 5, 6])
def test_z_root_vanishes(cap):
    ctx = MomentContext(cap)
    assert z_residual(solve_r(ctx), ctx).is_zero()


def test_htc_genfun_low_grades():
    ctx = MomentContext(2)
    h = htc_genfun(ctx)
    assert h.grade_part(1) == P.of_atom(mom(0))
    expected2 = (P.monomial(Fraction(1, 2), [(mom(0), 1), (mom(1), 1)])
                 + P.monomial(1, [(PI2, 1), (mom(0), 2)])
                 + P.monomial(Fraction(1, 4), [(mom(0), 2), (lsq(2), 1)])
                 - P.monomial(Fraction(1, 4), [(mom(0), 2), (lsq(1), 1)]))
    assert h.grade_part(2) == expected2


def test_htc_genfun_structure():
    # Each power of (L2^2 - L1^2) appears with weight 2^-k R^(k+1)/(k!(k+1)!).
    ctx = MomentContext(3)
    h = htc_genfun(ctx)
    r = solve_r(ctx)
    diff = P.of_atom(lsq(2)) - P.of_atom(lsq(1))
    total = GradedSeries(P.zero(), ctx.grade_cap)
    r_power = r
    for k in range(ctx.grade_cap):
        coeff = Fraction(1, 2 ** k * factorial(k) * factorial(k + 1))
        total = total + r_power * GradedSeries(diff ** k * coeff, ctx.grade_cap)
        r_power = r_power * r
    assert h.body == total.body


@pytest.mark.parametrize("p", [1, 2, 3])
def test_htc_genfun_matches_averaged_volumes(p):
    ctx = MomentContext(3)
    h = htc_genfun(ctx)
    avg = mu_average(htc_volume(p + 2), range(3, p + 3), ctx)
    assert h.grade_part(p) == avg.body * Fraction(1, factorial(p))


def test_htc_genfun_collapses_to_r_at_equal_lengths():
    ctx = MomentContext(4)
    collapsed = htc_genfun(ctx).body.substitute({lsq(2): P.of_atom(lsq(1))})
    assert collapsed == solve_r(ctx).body


def test_f_base_and_one_step():
    assert f_recursion(3) == P.monomial(-1, [(that(0), 3), (INV_GAMMA1, 1)])
    expected4 = (P.monomial(4, [(that(0), 3), (that(1), 1), (INV_GAMMA1, 2)])
                 - P.monomial(1, [(that(0), 4), (ghat(2), 1), (INV_GAMMA1, 3)]))
    assert f_recursion(4) == expected4
    with pytest.raises(ValueError):
        f_recursion(2)


def test_f4_substitution_matches_averaged_v04():
    sub = f_substituted(4)
    expected = (P.monomial(2, [(mom(0), 3), (mom(1), 1)])
                + P.monomial(2, [(PI2, 1), (mom(0), 4)]))
    assert sub == expected
    avg = mu_average(v0n_reduced(4), range(1, 5), MomentContext(4))
    assert sub == avg.body


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_f_from_trees_equals_recursion(n):
    assert f_from_trees(n) == f_recursion(n)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_recursion_equals_averaged_volumes(n):
    lhs = f_substituted(n)
    rhs = mu_average(v0n_reduced(n), range(1, n + 1), MomentContext(n))
    assert lhs == rhs.body


def test_mu_average_examples():
    ctx = MomentContext(4)
    assert mu_average(P.one(), (1, 2, 3), ctx).body == P.of_atom(mom(0), 3)
    avg = mu_average(v0n_reduced(4), range(1, 5), ctx).body
    assert avg == (P.monomial(2, [(PI2, 1), (mom(0), 4)])
                   + P.monomial(2, [(mom(0), 3), (mom(1), 1)]))


def test_symmetric_from_moments_round_trip():
    for n in (3, 4, 5):
        poly = v0n_reduced(n)
        avg = mu_average(poly, range(1, n + 1), MomentContext(n)).body
        assert symmetric_from_moments(avg, n) == poly


def test_symmetric_from_moments_degree_check():
    with pytest.raises(ValueError):
        symmetric_from_moments(P.of_atom(mom(0), 2), 3)


def test_moment_context_validation():
    with pytest.raises(ValueError):
        MomentContext(0)
