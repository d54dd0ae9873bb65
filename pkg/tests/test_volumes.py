"""Weights and the three volume routes against hand and table oracles."""
import random
from fractions import Fraction

import pytest

from wptrees.algebra import PI2, Polynomial, lsq
from wptrees.volumes import (
    ell_integral,
    full_decomposition_v0n,
    htc_volume,
    is_homogeneous,
    is_symmetric,
    known_v0n,
    v0n_graph_sum,
    v0n_reduced,
    weight_gamma,
    weight_t,
)

P = Polynomial


def test_weight_t_values():
    assert weight_t(0, 1) == P.const(2)
    assert weight_t(1, 1) == P.const(Fraction(1, 2)) * P.of_atom(lsq(1))
    assert weight_t(2, 1) == P.const(Fraction(1, 16)) * P.of_atom(lsq(1), 2)
    with pytest.raises(ValueError):
        weight_t(-1, 1)


def test_weight_gamma_values():
    assert weight_gamma(1) == P.const(-1)
    assert weight_gamma(2) == P.of_atom(PI2)
    assert weight_gamma(3) == P.const(Fraction(-1, 2)) * P.of_atom(PI2, 2)
    with pytest.raises(ValueError):
        weight_gamma(0)


def test_htc_volume_small():
    assert htc_volume(3) == P.one()
    expected = (P.const(2) * P.of_atom(PI2)
                + P.const(Fraction(1, 2)) * (P.of_atom(lsq(2)) - P.of_atom(lsq(1)))
                + P.const(Fraction(1, 2)) * P.of_atom(lsq(3))
                + P.const(Fraction(1, 2)) * P.of_atom(lsq(4)))
    assert htc_volume(4) == expected
    with pytest.raises(ValueError):
        htc_volume(2)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_reduced_matches_table(n):
    assert v0n_reduced(n) == known_v0n(n)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_routes_agree(n):
    reduced = v0n_reduced(n)
    assert v0n_graph_sum(n) == reduced
    assert full_decomposition_v0n(n) == reduced


def test_v05_sum_of_squares_coefficient_is_3_pi2():
    coeff = v0n_reduced(5).coefficient([(PI2, 1), (lsq(1), 1)])
    assert coeff == 3


def test_full_part_n4_is_l1_squared():
    assert full_decomposition_v0n(4) - htc_volume(4) == P.of_atom(lsq(1))


def test_ell_integral_examples():
    assert ell_integral(0, 0) == P.const(2) * P.of_atom(lsq(1))
    assert ell_integral(-1, 0) == P.const(8)
    assert ell_integral(1, 1) == ell_integral(1, 1, mode="integral")


@pytest.mark.parametrize("a", [-1, 0, 1, 2, 3])
@pytest.mark.parametrize("b", [0, 1, 2, 3])
def test_ell_integral_modes_agree(a, b):
    assert ell_integral(a, b) == ell_integral(a, b, mode="integral")


def test_ell_integral_validation():
    with pytest.raises(ValueError):
        ell_integral(-2, 0)
    with pytest.raises(ValueError):
        ell_integral(0, -1)
    with pytest.raises(ValueError):
        ell_integral(0, 0, mode="nope")


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_homogeneity(n):
    assert is_homogeneous(v0n_reduced(n), n - 3)
    assert is_homogeneous(htc_volume(n), n - 3)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_full_symmetry(n):
    assert is_symmetric(v0n_reduced(n), n, all_permutations=True)


def test_symmetry_n6_via_generators():
    assert is_symmetric(v0n_reduced(6), 6)


def test_positivity_at_positive_lengths():
    rng = random.Random(7)
    for n in (4, 5, 6):
        poly = v0n_reduced(n)
        for _ in range(3):
            bindings = {PI2: 9.8696044010893586}
            bindings.update({lsq(i): rng.uniform(0.1, 5.0) ** 2
                             for i in range(1, n + 1)})
            assert poly.eval_float(bindings) > 0


def test_known_table_bounds():
    with pytest.raises(ValueError):
        known_v0n(7)
