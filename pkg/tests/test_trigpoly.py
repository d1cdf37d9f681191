import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardyops import (
    TrigPoly,
    conj_bar,
    constant,
    evaluate,
    make_trigpoly,
    monomial,
    multiply,
    reflect,
    shift,
    split_plus_minus,
    sup_norm_estimate,
    zero,
)
from hardyops.io import symbol_from_dict, symbol_to_dict
from hardyops.trigpoly import values_on_grid

from conftest import rand_poly

seeds = st.integers(0, 2**32 - 1)
windows = st.tuples(st.integers(-6, 0), st.integers(0, 6))


def poly_from(seed, win, d=1):
    return rand_poly(np.random.default_rng(seed), win[0], win[1], d)


def test_canonical_trimming():
    p = TrigPoly(-3, [0, 0, 1, 2, 0])
    assert (p.lo, p.hi) == (-1, 0)
    assert TrigPoly(5, [0, 0]) == zero()
    assert zero().is_zero()


def test_coefficient_access():
    p = TrigPoly(-1, [2, 3, 5])
    assert p.coeff(-1)[0, 0] == 2 and p.coeff(1)[0, 0] == 5 and p.coeff(7)[0, 0] == 0
    np.testing.assert_array_equal(p.scalar_window(-2, 2), [0, 2, 3, 5, 0])
    assert p.degree == 1 and not p.is_analytic()
    assert monomial(3).is_analytic()


def test_multiply_example():
    # (1 + z)(1 - z) = 1 - z^2
    p = multiply(TrigPoly(0, [1, 1]), TrigPoly(0, [1, -1]))
    assert p == TrigPoly(0, [1, 0, -1])
    # zbar * z = 1
    assert multiply(monomial(-1), monomial(1)) == constant(1.0)


def test_conj_bar_example():
    p = TrigPoly(0, [1j, 2])
    assert conj_bar(p) == TrigPoly(-1, [2, -1j])


def test_reflect_and_shift():
    p = TrigPoly(-1, [1, 2, 3j])
    assert reflect(p) == TrigPoly(-1, [3j, 2, 1])
    assert shift(p, 2) == TrigPoly(1, [1, 2, 3j])


def test_evaluate_off_circle_raises():
    with pytest.raises(ValueError):
        evaluate(monomial(1), 0.5)


def test_make_trigpoly_errors():
    with pytest.raises(ValueError):
        make_trigpoly(0, [])
    with pytest.raises(ValueError):
        make_trigpoly(0, [np.eye(2), np.eye(3)])


def test_block_dim_mismatch():
    with pytest.raises(ValueError):
        constant(1.0) + constant(1.0, block_dim=2)


def test_sup_norm_grid_too_coarse():
    with pytest.raises(ValueError):
        sup_norm_estimate(TrigPoly(-3, np.ones(7)), 4)


def test_sup_norm_unimodular():
    assert sup_norm_estimate(monomial(5, 2j), 64) == pytest.approx(2.0)


@settings(max_examples=50, deadline=None)
@given(seeds, windows, st.sampled_from([1, 2]))
def test_conj_bar_involution(seed, win, d):
    p = poly_from(seed, win, d)
    assert conj_bar(conj_bar(p)) == p
    assert reflect(reflect(p)) == p


@settings(max_examples=50, deadline=None)
@given(seeds, windows, windows, st.sampled_from([1, 2]))
def test_conj_bar_reverses_products(seed, w1, w2, d):
    a, b = poly_from(seed, w1, d), poly_from(seed + 1, w2, d)
    assert conj_bar(multiply(a, b)).allclose(multiply(conj_bar(b), conj_bar(a)), 1e-12)


@settings(max_examples=50, deadline=None)
@given(seeds, windows)
def test_split_sums_back(seed, win):
    p = poly_from(seed, win)
    plus, minus = split_plus_minus(p)
    assert plus.is_analytic() and (minus.is_zero() or minus.hi < 0)
    assert plus + minus == p


@settings(max_examples=50, deadline=None)
@given(seeds, windows, windows, st.floats(0, 2 * np.pi))
def test_evaluation_is_multiplicative(seed, w1, w2, angle):
    a, b = poly_from(seed, w1), poly_from(seed + 7, w2)
    t = np.exp(1j * angle)
    np.testing.assert_allclose(evaluate(multiply(a, b), t), evaluate(a, t) @ evaluate(b, t), rtol=1e-12, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(seeds, windows)
def test_grid_values_match_pointwise(seed, win):
    p = poly_from(seed, win)
    vals = values_on_grid(p, 16)
    t = np.exp(2j * np.pi * 3 / 16)
    np.testing.assert_allclose(vals[3], evaluate(p, t), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(seeds, windows, st.sampled_from([1, 2]))
def test_json_round_trip(seed, win, d):
    p = poly_from(seed, win, d)
    assert symbol_from_dict(symbol_to_dict(p)) == p


def test_sup_norm_examples():
    assert sup_norm_estimate(constant(1.0), 8) == 1.0
    assert sup_norm_estimate(monomial(1) + monomial(-1), 256) == pytest.approx(2.0)
    assert sup_norm_estimate(monomial(2), 16) == 1.0
