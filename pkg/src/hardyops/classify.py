"""Structure detection and symbol recovery for finite operator sections.

Every test returns a :class:`~hardyops.report.ClassReport`.  Residuals are
maximum deviations (blockwise spectral norm when ``block_dim > 1``) over the
part of the section on which the algebraic identity is exact.
"""
from __future__ import annotations

import numpy as np

from .operators import (
    H2Window,
    L2Window,
    OperatorMatrix,
    SymbolPair,
    BasisMismatchError,
    hankel_matrix,
    laurent_matrix,
    projection_minus,
    projection_plus,
    shift_matrix,
    toeplitz_matrix,
)
from .report import (
    AmbiguousDecompositionError,
    ClassReport,
    KernelEmptyError,
    NotShiftInvariantError,
    StructureError,
)
from .trigpoly import TrigPoly, constant, conj_bar, monomial, multiply, sup_norm_estimate, zero

DEFAULT_TOL = 1e-9

TOEPLITZ_NOTE = "Toeplitz symbol is unique; coefficients outside |n| <= N-1 are not seen by the section."
HANKEL_NOTE = ("Hankel symbol is unique up to adding a co-analytic term: coefficients of "
               "negative index are unconstrained and reported as zero.")
PAIRED_NOTE = "Paired symbols are unique; reported on the read-out window of the section."


def _require(A: OperatorMatrix, kind, name: str) -> None:
    if not isinstance(A, OperatorMatrix):
        raise TypeError("%s expects an OperatorMatrix" % name)
    if not isinstance(A.basis, kind):
        raise BasisMismatchError("%s expects a %s matrix, got %r" % (name, kind.__name__, A.basis))


def _bnorm(x: np.ndarray) -> np.ndarray:
    """Entrywise modulus for 1x1 blocks, spectral norm otherwise."""
    if x.shape[-1] == 1:
        return np.abs(x[..., 0, 0])
    return np.linalg.norm(x, ord=2, axis=(-2, -1))


def _maxnorm(x: np.ndarray) -> float:
    if x.size == 0:
        return 0.0
    return float(np.max(_bnorm(x)))


def _blocks(a: np.ndarray, d: int) -> np.ndarray:
    n = a.shape[0] // d
    return a.reshape(n, d, n, d).transpose(0, 2, 1, 3)


def _scale(A: OperatorMatrix) -> float:
    return max(1.0, float(np.max(np.abs(A.data))))


# -- Toeplitz / Hankel ------------------------------------------------------------

def toeplitz_residual(b: np.ndarray) -> float:
    return _maxnorm(b[1:, 1:] - b[:-1, :-1])


def hankel_residual(b: np.ndarray) -> float:
    return _maxnorm(b[1:, :-1] - b[:-1, 1:])


def _read_toeplitz(b: np.ndarray) -> TrigPoly:
    N = b.shape[0]
    neg = b[0, :0:-1] if N > 1 else b[0, :0]
    return TrigPoly(-(N - 1), np.concatenate([neg, b[:, 0]]))


def _read_hankel(b: np.ndarray) -> TrigPoly:
    return TrigPoly(0, np.concatenate([b[0, :], b[1:, -1]]))


def test_toeplitz(A: OperatorMatrix, tol: float = DEFAULT_TOL) -> ClassReport:
    """Diagonal constancy ``A[j+1, k+1] == A[j, k]`` (equivalently ``Tz* A Tz == A``)."""
    _require(A, H2Window, "test_toeplitz")
    if A.n < 2:
        raise ValueError("test_toeplitz needs N >= 2")
    b = A.blocks()
    res = toeplitz_residual(b)
    ok = res <= tol
    return ClassReport(ok, res, 0, SymbolPair(_read_toeplitz(b), zero(A.block_dim)) if ok else None,
                       TOEPLITZ_NOTE)


test_toeplitz.__test__ = False


def test_hankel(A: OperatorMatrix, tol: float = DEFAULT_TOL) -> ClassReport:
    """Anti-diagonal constancy ``A[j+1, k] == A[j, k+1]`` (``Tz* H == H Tz``)."""
    _require(A, H2Window, "test_hankel")
    if A.n < 2:
        raise ValueError("test_hankel needs N >= 2")
    b = A.blocks()
    res = hankel_residual(b)
    ok = res <= tol
    return ClassReport(ok, res, 0, SymbolPair(zero(A.block_dim), _read_hankel(b)) if ok else None,
                       HANKEL_NOTE)


test_hankel.__test__ = False


# -- Toeplitz + Hankel ----------------------------------------------------------

def cross_rule_residual(b: np.ndarray) -> float:
    """``max |a[i-1,j] + a[i+1,j] - a[i,j-1] - a[i,j+1]|`` over ``1 <= i, j <= N-2``."""
    c = b[:-2, 1:-1] + b[2:, 1:-1] - b[1:-1, :-2] - b[1:-1, 2:]
    return _maxnorm(c)


def tph_conditions(A: OperatorMatrix) -> dict:
    """Operator-form residuals of the three Toeplitz+Hankel criteria.

    Computed from products with the shift section, each restricted to the
    entries the truncation leaves exact:

    * ``cond2``: Toeplitz defect of ``A Tz - Tz* A``
    * ``cond3``: Hankel defect of ``Tz* A Tz - A``
    * ``cond4``: ``A Tz + Tz*^2 A Tz - Tz* A - Tz* A Tz^2``
    """
    N, d = A.n, A.block_dim
    S = shift_matrix(N, d).data
    Sh = S.conj().T
    a = A.data
    c2 = _blocks(a @ S - Sh @ a, d)[:N - 1, :N - 1]
    c3 = _blocks(Sh @ a @ S - a, d)[:N - 1, :N - 1]
    c4 = _blocks(a @ S + Sh @ Sh @ a @ S - Sh @ a - Sh @ a @ S @ S, d)[:N - 2, :N - 2]
    return {
        "cond2": toeplitz_residual(c2),
        "cond3": hankel_residual(c3),
        "cond4": _maxnorm(c4),
    }


def test_tph(A: OperatorMatrix, tol: float = DEFAULT_TOL) -> ClassReport:
    """Toeplitz+Hankel test by the finite cross rule, cross-checked by the operator forms."""
    _require(A, H2Window, "test_tph")
    if A.n < 3:
        raise ValueError("test_tph needs N >= 3")
    res = cross_rule_residual(A.blocks())
    details = {"cross_rule": res, **tph_conditions(A)}
    verdicts = [res <= tol] + [details[k] <= tol for k in ("cond2", "cond3", "cond4")]
    details["criteria_agree"] = len(set(verdicts)) == 1
    return ClassReport(res <= tol, res, 1, None, "", details)


test_tph.__test__ = False


def tph_system(N: int) -> np.ndarray:
    """Linear map from ``(t_{-(N-1)}..t_{N-1}, h_0..h_{2N-2})`` to the entries ``t_{j-k} + h_{j+k}``.

    Rows are ordered ``j * N + k``.
    """
    S = np.zeros((N * N, 4 * N - 2))
    j, k = np.divmod(np.arange(N * N), N)
    S[np.arange(N * N), j - k + N - 1] = 1.0
    S[np.arange(N * N), 2 * N - 1 + j + k] = 1.0
    return S


def tph_gauge_basis(N: int) -> np.ndarray:
    """Orthonormal basis of the kernel of :func:`tph_system`, shape ``(4N-2, g)``.

    The all-ones direction (``t = c``, ``h = -c``) is always present; for
    ``N >= 2`` the alternating direction ``t_n = (-1)**n c``,
    ``h_s = -(-1)**s c`` is a second one, since ``(-1)**(j+k)`` is both
    Toeplitz and Hankel.
    """
    n = np.arange(-(N - 1), N)
    s = np.arange(0, 2 * N - 1)
    vecs = [np.concatenate([np.ones(2 * N - 1), -np.ones(2 * N - 1)])]
    if N >= 2:
        vecs.append(np.concatenate([(-1.0) ** np.abs(n), -((-1.0) ** s)]))
    # the two directions overlap when the windows have odd length
    return np.linalg.qr(np.stack(vecs, axis=1))[0]


def tph_coefficients(pair: SymbolPair, N: int) -> np.ndarray:
    """Stack the window of ``pair`` seen by an ``N``-section: shape ``(4N-2, d, d)``."""
    return np.concatenate([pair.phi.window(-(N - 1), N - 1), pair.psi.window(0, 2 * N - 2)])


def decompose_tph(A: OperatorMatrix, tol: float = DEFAULT_TOL) -> ClassReport:
    """Split a Toeplitz+Hankel section into ``T_t + H_h``.

    The coefficient system has a kernel (see :func:`tph_gauge_basis`); the
    returned pair is its minimum-norm solution, computed independently for
    each block entry.
    """
    pre = test_tph(A, tol)
    if not pre.verdict:
        raise StructureError("matrix is not Toeplitz+Hankel (cross-rule residual %.3g)" % pre.residual)
    N, d = A.n, A.block_dim
    S = tph_system(N)
    U, s, Vh = np.linalg.svd(S, full_matrices=False)
    rank = int(np.sum(s > s[0] * max(S.shape) * np.finfo(float).eps))
    gauge_dim = S.shape[1] - rank
    expected = 1 if N == 1 else 2
    if gauge_dim != expected:
        raise AmbiguousDecompositionError("system kernel has dimension %d, expected %d" % (gauge_dim, expected))
    pinv = (Vh[:rank].conj().T / s[:rank]) @ U[:, :rank].conj().T
    b = A.blocks()
    rhs = b.reshape(N * N, d, d)
    coef = np.einsum("uv,vpq->upq", pinv, rhs)
    t, h = coef[:2 * N - 1], coef[2 * N - 1:]
    pair = SymbolPair(TrigPoly(-(N - 1), t), TrigPoly(0, h))
    recon = toeplitz_matrix(pair.phi, N) + hankel_matrix(pair.psi, N)
    res = _maxnorm(_blocks(A.data - recon.data, d))
    ok = res <= tol
    note = ("Recovery is unique modulo the %d-dimensional gauge spanned by (t = c, h = -c)%s; "
            "the minimum-norm representative is reported."
            % (gauge_dim, " and (t_n = (-1)^n c, h_s = -(-1)^s c)" if gauge_dim == 2 else ""))
    details = {"reconstruction": res, "cross_rule": pre.residual, "gauge_dim": gauge_dim}
    return ClassReport(ok, res, pre.guard, pair if ok else None, note, details)


# -- paired operators on L2 ---------------------------------------------------------

def _paired_residuals(b: np.ndarray, M: int, rows: bool) -> float:
    D = b[1:, 1:] - b[:-1, :-1]
    if rows:
        return max(_maxnorm(D[M:, :]), _maxnorm(D[:M - 1, :]))
    return max(_maxnorm(D[:, M:]), _maxnorm(D[:, :M - 1]))


def _read_paired(X: OperatorMatrix, guard: int) -> SymbolPair:
    M = X.basis.M
    if not 0 <= guard <= M:
        raise ValueError("guard must lie in [0, M]")
    b = X.blocks()
    rows = slice(guard, 2 * M + 1 - guard)
    phi = TrigPoly(-M + guard, b[rows, M])
    psi = TrigPoly(-M + guard + 1, b[rows, M - 1])
    return SymbolPair(phi, psi)


def paired_operator_form(X: OperatorMatrix, transposed: bool = False) -> float:
    """Residual of ``X = Mz* X Mz P+ + Mz X Mz* P-`` (or the transposed form) on the interior."""
    M, d = X.basis.M, X.block_dim
    Mz = laurent_matrix(monomial(1, block_dim=d), M).data
    Mzh = Mz.conj().T
    P, Q = projection_plus(M, d).data, projection_minus(M, d).data
    x = X.data
    if transposed:
        R = x - P @ Mzh @ x @ Mz - Q @ Mz @ x @ Mzh
    else:
        R = x - Mzh @ x @ Mz @ P - Mz @ x @ Mzh @ Q
    return _maxnorm(_blocks(R, d)[1:-1, 1:-1])


def test_paired(X: OperatorMatrix, tol: float = DEFAULT_TOL, guard: int = 0) -> ClassReport:
    """Paired-operator test: diagonal constancy separately on columns ``n >= 0`` and ``n <= -2``."""
    _require(X, L2Window, "test_paired")
    M = X.basis.M
    if M < 2:
        raise ValueError("test_paired needs M >= 2")
    res = _paired_residuals(X.blocks(), M, rows=False)
    ok = res <= tol
    details = {"half_planes": res, "operator_form": paired_operator_form(X)}
    return ClassReport(ok, res, guard, _read_paired(X, guard) if ok else None, PAIRED_NOTE, details)


test_paired.__test__ = False


def recover_paired_symbols(X: OperatorMatrix, tol: float = DEFAULT_TOL, guard: int = 0) -> SymbolPair:
    """Read ``phi = X(1)`` and ``psi = z X(zbar)`` off columns ``0`` and ``-1``."""
    rep = test_paired(X, tol, guard)
    if not rep.verdict:
        raise StructureError("not a paired operator (residual %.3g)" % rep.residual)
    return rep.recovered


def test_transposed_paired(X: OperatorMatrix, tol: float = DEFAULT_TOL, guard: int = 0) -> ClassReport:
    """Transposed-paired test: the row-split mirror of :func:`test_paired`.

    Symbols are recovered from the adjoint, which is paired with the
    conjugate symbols.
    """
    _require(X, L2Window, "test_transposed_paired")
    M = X.basis.M
    if M < 2:
        raise ValueError("test_transposed_paired needs M >= 2")
    res = _paired_residuals(X.blocks(), M, rows=True)
    ok = res <= tol
    rec = None
    if ok:
        dual = _read_paired(X.adjoint(), guard)
        rec = SymbolPair(conj_bar(dual.phi), conj_bar(dual.psi))
    details = {"half_planes": res, "operator_form": paired_operator_form(X, transposed=True)}
    return ClassReport(ok, res, guard, rec, PAIRED_NOTE, details)


test_transposed_paired.__test__ = False


# -- Beurling factor of a Hankel kernel ------------------------------------------------

def hankel_kernel_inner(H: OperatorMatrix, tol: float = DEFAULT_TOL) -> TrigPoly:
    """Generator of the (shift-invariant) kernel of a scalar Hankel section.

    With ``k`` the numerical kernel dimension on the ``N``-window, returns the
    kernel element of minimal degree ``N - k``, made monic and then scaled to
    unit sup norm.  The zero matrix gives ``1``.
    """
    _require(H, H2Window, "hankel_kernel_inner")
    if H.block_dim != 1:
        raise ValueError("hankel_kernel_inner is scalar only")
    N = H.n
    a = H.data
    if not np.any(a):
        return constant(1.0)
    U, s, Vh = np.linalg.svd(a)
    smax = s[0]
    r = int(np.sum(s > tol * smax))
    k = N - r
    if k == 0:
        raise KernelEmptyError("Hankel section is injective at N=%d: no Beurling factor at this truncation" % N)
    V = Vh[r:].conj().T
    deg = N - k
    if k == 1:
        c = np.ones(1)
    else:
        c = np.linalg.svd(V[deg + 1:, :])[2][-1].conj()
    v = V @ c
    lead = v[deg]
    if abs(lead) <= tol * np.linalg.norm(v):
        raise NotShiftInvariantError("kernel has no element of exact degree %d" % deg)
    v = v / lead
    v[np.abs(v) <= tol] = 0
    bound = 10 * tol * smax
    for j in range(k):
        w = np.zeros(N, dtype=complex)
        w[j:j + deg + 1] = v[:deg + 1]
        if np.linalg.norm(a @ w) > bound * np.linalg.norm(w):
            raise NotShiftInvariantError("z^%d * theta leaves the kernel" % j)
    theta = TrigPoly(0, v[:deg + 1])
    return theta * (1.0 / sup_norm_estimate(theta, max(64, 4 * deg + 4)))


def noninjective_pipeline(A: OperatorMatrix, tol: float = DEFAULT_TOL) -> ClassReport:
    """Toeplitz + non-injective Hankel recovery through the Beurling factor.

    Steps: ``B = Tz* A Tz - A`` must be Hankel; ``theta`` generates its kernel;
    ``A T_theta`` is Toeplitz with symbol ``phi2``; ``phi = conj(theta) phi2``;
    ``A - T_phi`` is Hankel with symbol ``psi``.
    """
    _require(A, H2Window, "noninjective_pipeline")
    if A.block_dim != 1:
        raise ValueError("noninjective_pipeline is scalar only")
    N = A.n
    if N < 3:
        raise ValueError("noninjective_pipeline needs N >= 3")
    chop = tol * _scale(A)
    S = shift_matrix(N).data
    a = A.data
    B = OperatorMatrix((S.conj().T @ a @ S - a)[:N - 1, :N - 1], H2Window(N - 1))
    hb = test_hankel(B, tol)
    if not hb.verdict:
        raise StructureError("Tz* A Tz - A is not Hankel (residual %.3g): A is not Toeplitz+Hankel" % hb.residual)
    theta = hankel_kernel_inner(B, tol)
    details = {"b_hankel": hb.residual}
    try:
        smaller = hankel_kernel_inner(OperatorMatrix(B.data[:N - 2, :N - 2], H2Window(N - 2)), tol)
        details["kernel_stable"] = smaller.allclose(theta, 1e3 * tol)
    except StructureError:
        details["kernel_stable"] = False
    deg = theta.hi
    m = N - deg
    if m < 2:
        raise StructureError("window N=%d too small for an inner factor of degree %d" % (N, deg))

    # columns j <= N-1-deg of A T_theta are exact on the section
    C = (a @ toeplitz_matrix(theta, N).data)[:, :m]
    tc = test_toeplitz(OperatorMatrix(C[:m, :m], H2Window(m)), tol)
    details["a_t_theta_toeplitz"] = tc.residual
    if not tc.verdict:
        raise StructureError("A T_theta is not Toeplitz (residual %.3g)" % tc.residual)
    phi2 = TrigPoly(-(m - 1), np.concatenate([C[0, :0:-1], C[:, 0]])).chop(chop)
    phi = multiply(conj_bar(theta), phi2).chop(chop)

    R = (a - toeplitz_matrix(phi, N).data)[:m, :m]
    th = test_hankel(OperatorMatrix(R, H2Window(m)), tol)
    details["remainder_hankel"] = th.residual
    if not th.verdict:
        raise StructureError("A - T_phi is not Hankel (residual %.3g)" % th.residual)
    psi = th.recovered.psi.chop(chop)
    recon = toeplitz_matrix(phi, N).data + hankel_matrix(psi, N).data
    res = float(np.max(np.abs((a - recon)[:m, :m])))
    details["reconstruction"] = res
    ok = res <= tol
    note = ("theta is unique up to a unimodular constant (normalized monic, unit sup norm); "
            + HANKEL_NOTE)
    return ClassReport(ok, res, max(1, deg), SymbolPair(phi, psi) if ok else None, note, details,
                       {"theta": theta, "phi2": phi2})


__all__ = [
    "DEFAULT_TOL", "test_toeplitz", "test_hankel", "test_tph", "tph_conditions",
    "cross_rule_residual", "tph_system", "tph_gauge_basis", "tph_coefficients", "decompose_tph",
    "test_paired", "recover_paired_symbols", "test_transposed_paired", "paired_operator_form",
    "hankel_kernel_inner", "noninjective_pipeline",
]
