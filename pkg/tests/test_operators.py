import warnings

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from hardyops import (
    BasisMismatchError,
    H2Window,
    L2Window,
    OperatorMatrix,
    SymbolPair,
    TrigPoly,
    conj_bar,
    constant,
    fast_apply_hankel,
    fast_apply_toeplitz,
    fast_apply_tph,
    hankel_matrix,
    laurent_matrix,
    monomial,
    paired_matrix,
    projection_minus,
    projection_plus,
    reflect,
    shift,
    shift_matrix,
    toeplitz_matrix,
    transposed_paired_matrix,
    zero,
)
from hardyops.operators import FastPathFallback, dense_apply_tph, embed_l2, fold_negative_rows, restrict_h2
from hardyops.trigpoly import values_on_grid

from conftest import rand_pair, rand_poly

seeds = st.integers(0, 2**32 - 1)


def quadrature_section(sym, rows, cols, reflect_arg=False, grid=256):
    """``<M_sym f_k, z^j>`` by trapezoidal quadrature on the circle, an oracle independent of indexing."""
    t = np.exp(2j * np.pi * np.arange(grid) / grid)
    v = values_on_grid(sym, grid)[:, 0, 0]
    sign = -1 if reflect_arg else 1
    out = np.empty((len(rows), len(cols)), dtype=complex)
    for a, j in enumerate(rows):
        for b, k in enumerate(cols):
            out[a, b] = np.mean(v * t ** (sign * k) * t ** (-j))
    return out


# -- worked examples ----------------------------------------------------------------

def test_toeplitz_examples():
    np.testing.assert_array_equal(toeplitz_matrix(constant(1.0), 3).data, np.eye(3))
    np.testing.assert_array_equal(toeplitz_matrix(monomial(1), 3).data, np.eye(3, k=-1))
    A = toeplitz_matrix(TrigPoly(-1, [2, 3, 5]), 3).data
    np.testing.assert_array_equal(A, [[3, 2, 0], [5, 3, 2], [0, 5, 3]])


def test_hankel_examples():
    np.testing.assert_array_equal(hankel_matrix(constant(1.0), 3).data, np.diag([1, 0, 0]))
    assert not np.any(hankel_matrix(monomial(-1), 5).data)
    np.testing.assert_array_equal(hankel_matrix(monomial(2), 3).data, np.fliplr(np.eye(3)))


def test_laurent_and_projection_examples():
    np.testing.assert_array_equal(laurent_matrix(constant(1.0), 3).data, np.eye(7))
    Mz = laurent_matrix(monomial(1), 3).data
    np.testing.assert_array_equal(Mz, np.eye(7, k=-1))
    np.testing.assert_array_equal(laurent_matrix(monomial(-1), 3).data, Mz.conj().T)
    np.testing.assert_array_equal(projection_plus(1).data, np.diag([0, 1, 1]))
    np.testing.assert_array_equal(projection_minus(1).data, np.diag([1, 0, 0]))


def test_paired_examples():
    z = monomial(1)
    np.testing.assert_array_equal(paired_matrix(SymbolPair(z, z), 4).data, laurent_matrix(z, 4).data)
    np.testing.assert_array_equal(paired_matrix(SymbolPair(constant(1.0), zero()), 4).data,
                                  projection_plus(4).data)
    X = paired_matrix(SymbolPair(z, monomial(-1)), 2).data
    M = 2
    col0, colm1 = X[:, M + 0], X[:, M - 1]
    np.testing.assert_array_equal(col0, np.eye(5)[M + 1])
    np.testing.assert_array_equal(colm1, np.eye(5)[M - 2])


def test_fast_apply_examples():
    x = np.array([1.0, 2.0, 3.0])
    np.testing.assert_allclose(fast_apply_toeplitz(constant(1.0), x), x, atol=1e-14)
    np.testing.assert_allclose(fast_apply_toeplitz(monomial(1), np.eye(4)[0]), np.eye(4)[1], atol=1e-14)
    np.testing.assert_allclose(fast_apply_hankel(constant(1.0), x), [1, 0, 0], atol=1e-14)
    np.testing.assert_allclose(fast_apply_hankel(monomial(2), x), [3, 2, 1], atol=1e-14)


# -- independent oracles ------------------------------------------------------------

def test_sections_match_quadrature(rng):
    for _ in range(5):
        p = rand_pair(rng, 6)
        N = 9
        idx = range(N)
        np.testing.assert_allclose(toeplitz_matrix(p.phi, N).data, quadrature_section(p.phi, idx, idx), atol=1e-12)
        np.testing.assert_allclose(hankel_matrix(p.psi, N).data,
                                   quadrature_section(p.psi, idx, idx, reflect_arg=True), atol=1e-12)
        M = 5
        two = range(-M, M + 1)
        np.testing.assert_allclose(laurent_matrix(p.phi, M).data, quadrature_section(p.phi, two, two), atol=1e-12)


def test_toeplitz_matches_scipy(rng):
    p = rand_poly(rng, -4, 4)
    N = 11
    A = scipy.linalg.toeplitz(p.scalar_window(0, N - 1), p.scalar_window(-(N - 1), 0)[::-1])
    np.testing.assert_array_equal(toeplitz_matrix(p, N).data, A)


def test_hankel_matches_scipy(rng):
    p = rand_poly(rng, -2, 9)
    N = 7
    A = scipy.linalg.hankel(p.scalar_window(0, N - 1), p.scalar_window(N - 1, 2 * N - 2))
    np.testing.assert_array_equal(hankel_matrix(p, N).data, A)


def test_paired_is_laurent_times_projections(rng):
    for _ in range(5):
        p = rand_pair(rng, 4)
        M = 6
        ref = laurent_matrix(p.phi, M).data @ projection_plus(M).data + \
            laurent_matrix(p.psi, M).data @ projection_minus(M).data
        np.testing.assert_array_equal(paired_matrix(p, M).data, ref)
        ref = projection_plus(M).data @ laurent_matrix(p.phi, M).data + \
            projection_minus(M).data @ laurent_matrix(p.psi, M).data
        np.testing.assert_array_equal(transposed_paired_matrix(p, M).data, ref)


# -- invariants ---------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(3, 20), st.sampled_from([1, 2]))
def test_brown_halmos_on_guarded_window(seed, N, d):
    p = rand_pair(np.random.default_rng(seed), 6, d)
    S = shift_matrix(N, d).data
    T = toeplitz_matrix(p.phi, N).data
    n = (N - 1) * d
    np.testing.assert_allclose((S.conj().T @ T @ S)[:n, :n], T[:n, :n], atol=1e-13)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(3, 20), st.sampled_from([1, 2]))
def test_hankel_intertwines_shift(seed, N, d):
    p = rand_pair(np.random.default_rng(seed), 6, d)
    S = shift_matrix(N, d).data
    H = hankel_matrix(p.psi, N).data
    n = (N - 1) * d
    np.testing.assert_allclose((S.conj().T @ H)[:n, :n], (H @ S)[:n, :n], atol=1e-13)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 12), st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_constructors_are_linear(seed, N, c):
    rng = np.random.default_rng(seed)
    a, b = rand_poly(rng, -5, 5), rand_poly(rng, -3, 7)
    for build in (toeplitz_matrix, hankel_matrix):
        lhs = build(a + b * c, N).data
        rhs = build(a, N).data + c * build(b, N).data
        np.testing.assert_allclose(lhs, rhs, atol=1e-12 * (1 + abs(c)))


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 10), st.sampled_from([1, 2]))
def test_paired_adjoint_duality(seed, M, d):
    p = rand_pair(np.random.default_rng(seed), 6, d)
    X = paired_matrix(p, M)
    S = transposed_paired_matrix(SymbolPair(conj_bar(p.phi), conj_bar(p.psi)), M)
    np.testing.assert_array_equal(X.adjoint().data, S.data)
    np.testing.assert_array_equal(toeplitz_matrix(p.phi, M).adjoint().data, toeplitz_matrix(conj_bar(p.phi), M).data)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 10))
def test_restriction_identity(seed, M):
    p = rand_pair(np.random.default_rng(seed), 6)
    Sigma = transposed_paired_matrix(p, M)
    np.testing.assert_array_equal(restrict_h2(Sigma).data, toeplitz_matrix(p.phi, M + 1).data)
    folded = fold_negative_rows(Sigma)
    np.testing.assert_array_equal(folded.data, hankel_matrix(shift(reflect(p.psi), -1), M).data)


def test_embed_restrict_round_trip(rng):
    A = toeplitz_matrix(rand_poly(rng, -3, 3), 6)
    np.testing.assert_array_equal(restrict_h2(embed_l2(A)).data, A.data)


# -- fast paths ---------------------------------------------------------------------

@pytest.mark.parametrize("N", [1, 2, 17, 256, 1024])
def test_fast_toeplitz_matches_dense(rng, N):
    phi = rand_poly(rng, -8, 8)
    x = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    dense = toeplitz_matrix(phi, N).data @ x
    assert np.linalg.norm(fast_apply_toeplitz(phi, x) - dense) <= 1e-10 * np.linalg.norm(dense)


@pytest.mark.parametrize("N", [1, 3, 64, 2048])
def test_fast_tph_matches_dense(rng, N):
    p = SymbolPair(rand_poly(rng, -8, 8), rand_poly(rng, -8, 8))
    x = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    dense = (toeplitz_matrix(p.phi, N) + hankel_matrix(p.psi, N)).data @ x
    assert np.linalg.norm(fast_apply_tph(p, x) - dense) <= 1e-10 * np.linalg.norm(dense)
    np.testing.assert_allclose(dense_apply_tph(p, x, chunk=7), dense, rtol=1e-12, atol=1e-12)


def test_fast_hankel_long_symbol(rng):
    # symbol longer than the window on both sides
    psi = rand_poly(rng, -5, 40)
    x = rng.standard_normal(9)
    np.testing.assert_allclose(fast_apply_hankel(psi, x), hankel_matrix(psi, 9).data @ x, atol=1e-12)


def test_block_fast_path_falls_back(rng):
    p = rand_poly(rng, -2, 2, d=2)
    x = rng.standard_normal(10)
    with pytest.warns(FastPathFallback):
        y = fast_apply_toeplitz(p, x)
    np.testing.assert_allclose(y, toeplitz_matrix(p, 5).data @ x)
    with pytest.raises(ValueError):
        fast_apply_toeplitz(p, rng.standard_normal(7))


# -- OperatorMatrix -------------------------------------------------------------------

def test_basis_mismatch():
    A = toeplitz_matrix(constant(1.0), 3)
    X = laurent_matrix(constant(1.0), 1)
    with pytest.raises(BasisMismatchError):
        A + X
    with pytest.raises(BasisMismatchError):
        toeplitz_matrix(constant(1.0), 4) @ A


def test_operator_matrix_validation():
    with pytest.raises(ValueError):
        OperatorMatrix(np.eye(3), H2Window(4))
    with pytest.raises(ValueError):
        OperatorMatrix(np.eye(3), L2Window(1), block_dim=2)
    A = OperatorMatrix(np.eye(3), H2Window(3))
    with pytest.raises(ValueError):
        A.data[0, 0] = 2


def test_block_layout(rng):
    p = rand_poly(rng, -1, 1, d=2)
    A = toeplitz_matrix(p, 4)
    assert A.data.shape == (8, 8)
    np.testing.assert_array_equal(A.blocks()[2, 1], p.coeff(1))
    np.testing.assert_array_equal(A.blocks()[1, 2], p.coeff(-1))


def test_empty_window_rejected():
    with warnings.catch_warnings():
        with pytest.raises(ValueError):
            toeplitz_matrix(constant(1.0), 0)
