"""Generating functions over the moments of a boundary-length measure.

A measure mu enters only through its moments m_k = int dmu(L) L^(2k); the
per-boundary weight in moment form is t_k[mu] = 2 m_k / (4^k k!).  Series
are graded by the number of mu-integrations: every atom m_k carries grade 1,
and a :class:`~wptrees.algebra.GradedSeries` keeps terms up to a cap.

The module provides

* ``z_series``      the formal expansion of
                    Z(r) = sqrt(r)/(sqrt(2) pi) J1(2 pi sqrt(2r))
                           - int dmu(L) I0(L sqrt(2r)),
                    with the Bessel factors entering only through their
                    Taylor coefficients:
                    J1(x) = sum_k (-1)^k (x/2)^(2k+1) / (k! (k+1)!),
                    I0(x) = sum_k (x/2)^(2k) / (k!)^2, so that
                    Z(r) = sum_{k>=0} (-1)^k 2^k pi^(2k) r^(k+1) / (k!(k+1)!)
                           - sum_{k>=0} m_k r^k / (2^k (k!)^2);
* ``solve_r``       the unique series root R = m_0 + O(grade 2) of Z(R) = 0,
                    found by Newton iteration on truncated series;
* ``htc_genfun``    H(L1, L2) = sum_{k>=0} 2^(-k) R^(k+1) (L2^2 - L1^2)^k
                    / (k! (k+1)!);
* ``f_recursion``   the polynomial sequence f_3, f_4, ... in the counting
                    variables t0.., gam2.., invgam1, built by the
                    boundary-insertion operator;
* ``f_from_trees``  the same polynomials read off directly from the
                    ``two-three`` tree family;
* ``mu_average``    termwise replacement L_i^(2a) -> m_a over a label subset;
* ``symmetric_from_moments``   the inverse of a full mu-average, recovering
                    the (symmetric) length polynomial.

``invgam1`` is its own atom with derivative convention
d(gam1^-e)/d gam1 = -e gam1^-(e+1); substituting gam1 = -1 maps it to -1.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial

from .algebra import (
    AUX,
    INV_GAMMA1,
    PI2,
    GradedSeries,
    Polynomial,
    ghat,
    lsq,
    mom,
    that,
)
from .trees import enumerate_family
from .volumes import weight_gamma

__all__ = [
    "MomentContext",
    "t_moment",
    "z_series",
    "z_residual",
    "solve_r",
    "htc_genfun",
    "f_recursion",
    "f_from_trees",
    "f_substituted",
    "mu_average",
    "symmetric_from_moments",
]


@dataclass(frozen=True)
class MomentContext:
    """Working precision: series keep moment grade <= grade_cap and use the
    moment atoms m_0 .. m_grade_cap."""

    grade_cap: int

    def __post_init__(self):
        if self.grade_cap < 1:
            raise ValueError("grade_cap must be >= 1")


def t_moment(k: int) -> Polynomial:
    """t_k[mu] = 2 m_k / (4^k k!) as a moment polynomial."""
    if k < 0:
        raise ValueError(f"need k >= 0, got {k}")
    return Polynomial.of_atom(mom(k)) * Fraction(2, 4 ** k * factorial(k))


def z_series(r_order: int, ctx: MomentContext) -> GradedSeries:
    """Z expanded to order r^r_order, moments expressed in the m_k atoms."""
    if r_order < 1:
        raise ValueError("r_order must be >= 1")
    body = Polynomial.zero()
    for k in range(r_order):  # r^(k+1) term of the J1 part
        coeff = Fraction((-1) ** k * 2 ** k, factorial(k) * factorial(k + 1))
        body = body + Polynomial.monomial(coeff, [(PI2, k), (AUX, k + 1)])
    for k in range(min(r_order, ctx.grade_cap) + 1):  # r^k term of the I0 part
        coeff = Fraction(-1, 2 ** k * factorial(k) ** 2)
        body = body + Polynomial.monomial(coeff, [(mom(k), 1), (AUX, k)])
    return GradedSeries(body, ctx.grade_cap)


def _compose_aux(p: Polynomial, r: GradedSeries) -> GradedSeries:
    """Substitute the auxiliary variable by the series r, truncating."""
    by_exp: dict[int, Polynomial] = {}
    for mono, c in p.items():
        e = 0
        rest = []
        for a, ex in mono:
            if a == AUX:
                e = ex
            else:
                rest.append((a, ex))
        by_exp[e] = by_exp.get(e, Polynomial.zero()) + Polynomial.monomial(c, rest)
    out = GradedSeries(Polynomial.zero(), r.grade_cap)
    power = GradedSeries(Polynomial.one(), r.grade_cap)
    for e in range(max(by_exp) + 1 if by_exp else 0):
        if e in by_exp:
            out = out + power * GradedSeries(by_exp[e], r.grade_cap)
        power = power * r
    return out


def _series_reciprocal(s: GradedSeries) -> GradedSeries:
    """1/s for a series with grade-0 part exactly 1."""
    if s.grade_part(0) != Polynomial.one():
        raise ArithmeticError("series reciprocal needs unit grade-0 part")
    one = GradedSeries(Polynomial.one(), s.grade_cap)
    u = one - s
    inv = one
    power = one
    for _ in range(s.grade_cap):
        power = power * u
        inv = inv + power
    return inv


def solve_r(ctx: MomentContext) -> GradedSeries:
    """The series root R of Z(R) = 0 with R = m_0 + (grade >= 2).

    Newton iteration on truncated series, starting from m_0; every step
    gains at least one exact grade, so grade_cap + 1 steps always suffice.
    The residual is re-checked at the end as a guard.
    """
    z = z_series(ctx.grade_cap, ctx).body
    z_prime = z.partial(AUX)
    r = GradedSeries(Polynomial.of_atom(mom(0)), ctx.grade_cap)
    for _ in range(ctx.grade_cap + 1):
        residual = _compose_aux(z, r)
        if residual.is_zero():
            return r
        step = residual * _series_reciprocal(_compose_aux(z_prime, r))
        r = r - step
    if not _compose_aux(z, r).is_zero():
        raise ArithmeticError("root iteration did not reach a zero residual")
    return r


def z_residual(r: GradedSeries, ctx: MomentContext) -> GradedSeries:
    """Z evaluated at a series, truncated to the context grade."""
    return _compose_aux(z_series(ctx.grade_cap, ctx).body, r)


def htc_genfun(ctx: MomentContext) -> GradedSeries:
    """H(L1, L2) = sum_k 2^(-k) R^(k+1) (L2^2 - L1^2)^k / (k! (k+1)!).

    Terms with k >= grade_cap vanish under truncation since R has grade >= 1.
    """
    r = solve_r(ctx)
    diff = Polynomial.of_atom(lsq(2)) - Polynomial.of_atom(lsq(1))
    out = GradedSeries(Polynomial.zero(), ctx.grade_cap)
    r_power = r
    for k in range(ctx.grade_cap):
        coeff = Fraction(1, 2 ** k * factorial(k) * factorial(k + 1))
        out = out + r_power * GradedSeries(diff ** k * coeff, ctx.grade_cap)
        r_power = r_power * r
    return out


# -- the boundary-insertion recursion ------------------------------------

_T0_OVER_G1 = Polynomial.monomial(1, [(that(0), 1), (INV_GAMMA1, 1)])


def _d_gamma(p: Polynomial, k: int) -> Polynomial:
    """d/d gam_k; for k = 1 this acts on the inverse atom."""
    if k >= 2:
        return p.partial(ghat(k))
    out = Polynomial.zero()
    for mono, c in p.items():
        pairs = dict(mono)
        e = pairs.get(INV_GAMMA1, 0)
        if e == 0:
            continue
        pairs[INV_GAMMA1] = e + 1
        out = out + Polynomial.monomial(c * (-e), pairs.items())
    return out


def f_recursion(n: int) -> Polynomial:
    """f_n in t0.., gam2.., invgam1, from f_3 = -t0^3/gam1 and

    f_{m+1} = sum_{k=0}^{m-3} [ t_{k+1} (d/d gam_{k+1}
                                         - t0 invgam1 d/d t_k)
                                - gam_{k+2} t0 invgam1 d/d gam_{k+1} ] f_m.
    """
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    f = Polynomial.monomial(-1, [(that(0), 3), (INV_GAMMA1, 1)])
    for m in range(3, n):
        new = Polynomial.zero()
        for k in range(m - 2):
            dg = _d_gamma(f, k + 1)
            dt = f.partial(that(k))
            new = new + Polynomial.of_atom(that(k + 1)) * (dg - _T0_OVER_G1 * dt)
            new = new - Polynomial.of_atom(ghat(k + 2)) * _T0_OVER_G1 * dg
        f = new
    return f


def f_from_trees(n: int) -> Polynomial:
    """f_n read off the ``two-three`` family.

    A double tree contributes prod_b t_{deg(b)-1} (with a half-edge added to
    boundary 1, so it contributes t_{deg(b1)}), prod_v gam_{deg(v)-1}, and
    each edge contributes -invgam1.
    """
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    total = Polynomial.zero()
    for d in enumerate_family("two-three", n):
        edges = len(d.t1.edges) + len(d.t2.edges)
        exps: Counter = Counter()
        exps[that(d.t1.degree(1))] += 1
        for t in (d.t1, d.t2):
            deg = t.degrees()
            for b in t.boundary:
                if b != 1:
                    exps[that(deg[b] - 1)] += 1
            for v in t.inner_ids():
                exps[ghat(deg[v] - 1)] += 1
        exps[INV_GAMMA1] += edges
        total = total + Polynomial.monomial((-1) ** edges, exps.items())
    return total


def f_substituted(n: int) -> Polynomial:
    """(1/8) f_n with t_k -> t_k[mu], gam_k -> gamma_k, invgam1 -> -1.

    Equals the full mu-average of V_{0,n}.
    """
    f = f_recursion(n)
    mapping: dict = {INV_GAMMA1: Polynomial.const(-1)}
    for k in range(n - 2):
        mapping[that(k)] = t_moment(k)
    for k in range(2, n - 1):
        mapping[ghat(k)] = weight_gamma(k)
    return f.substitute(mapping) * Fraction(1, 8)


# -- moment averaging ------------------------------------------------------

def mu_average(p: Polynomial, subset, ctx: MomentContext) -> GradedSeries:
    """Integrate the boundaries in ``subset`` against mu.

    Termwise, each factor L_i^(2a) with i in the subset becomes the moment
    atom m_a; a boundary absent from a term contributes m_0.  Evenness in
    every averaged length is guaranteed by the squared-length atoms.
    """
    subset = set(subset)
    total = Polynomial.zero()
    for mono, c in p.items():
        pairs: Counter = Counter()
        for a, e in mono:
            if a.kind == lsq(1).kind and a.index in subset:
                pairs[mom(e)] += 1
            else:
                pairs[a] += e
        for i in subset:
            if not any(a.kind == lsq(1).kind and a.index == i for a, _ in mono):
                pairs[mom(0)] += 1
        total = total + Polynomial.monomial(c, pairs.items())
    return GradedSeries(total, ctx.grade_cap)


def symmetric_from_moments(p: Polynomial, n: int) -> Polynomial:
    """Invert a full mu-average back to the symmetric length polynomial.

    Each term must have total moment degree exactly n.  A moment monomial
    prod_k m_k^(c_k) with coefficient C is the average of the monomial orbit
    whose exponent multiset is {k with multiplicity c_k}; every monomial of
    that orbit receives coefficient C * prod_k c_k! / n!.
    """
    total = Polynomial.zero()
    for mono, c in p.items():
        orders: list[int] = []
        passthrough = []
        mult = Fraction(1)
        for a, e in mono:
            if a.kind == mom(0).kind:
                orders.extend([a.index] * e)
                mult *= factorial(e)
            else:
                passthrough.append((a, e))
        if len(orders) != n:
            raise ValueError(
                f"term has moment degree {len(orders)}, expected {n}")
        coeff = c * mult / factorial(n)
        for assign in set(permutations(orders)):
            pairs = list(passthrough) + [
                (lsq(i + 1), a) for i, a in enumerate(assign) if a]
            total = total + Polynomial.monomial(coeff, pairs)
    return total
