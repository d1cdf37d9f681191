"""Finite Blaschke products, model spaces and theta-paired operators."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .classify import DEFAULT_TOL, _require
from .operators import H2Window, ModelBasis, OperatorMatrix, SymbolPair, shift_matrix, toeplitz_matrix
from .report import ClassReport, StructureError
from .trigpoly import TrigPoly, conj_bar, multiply, values_on_grid

R_MAX = 0.95
INNER_TOL = 1e-6


@dataclass(frozen=True)
class BlaschkeSpec:
    """``c * prod (z - a_i) / (1 - conj(a_i) z)`` with zeros repeated by multiplicity."""

    zeros: tuple = ()
    const: complex = 1.0
    r_max: float = R_MAX

    def __post_init__(self):
        object.__setattr__(self, "zeros", tuple(complex(a) for a in self.zeros))
        object.__setattr__(self, "const", complex(self.const))
        if abs(abs(self.const) - 1) > 1e-12:
            raise ValueError("unimodular constant has modulus %g" % abs(self.const))
        for a in self.zeros:
            if abs(a) > self.r_max:
                raise ValueError("zero %r lies outside the disc of radius %g" % (a, self.r_max))

    @property
    def degree(self) -> int:
        return len(self.zeros)


@dataclass(frozen=True)
class ThetaPairedSpec:
    theta: BlaschkeSpec | TrigPoly
    phi: TrigPoly
    psi: TrigPoly

    def __post_init__(self):
        if not (self.phi.is_analytic() and self.psi.is_analytic()):
            raise ValueError("theta-paired symbols must be analytic")
        if self.phi.block_dim != 1 or self.psi.block_dim != 1:
            raise ValueError("theta-paired operators are scalar")


def blaschke_coeffs(spec: BlaschkeSpec, N: int) -> TrigPoly:
    """Taylor coefficients ``0..N-1`` of the Blaschke product."""
    if N < spec.degree + 1:
        raise ValueError("N=%d too small for %d zeros" % (N, spec.degree))
    out = np.zeros(N, dtype=complex)
    out[0] = spec.const
    for a in spec.zeros:
        # (z - a) * sum (conj(a) z)^k
        f = np.zeros(N, dtype=complex)
        f[0] = -a
        f[1:] = (1 - abs(a) ** 2) * np.concatenate([[1.0], np.cumprod(np.full(N - 2, np.conj(a)))])
        out = np.convolve(out, f)[:N]
    return TrigPoly(0, out)


def truncation_tail(theta: TrigPoly) -> float:
    """``1 - sum |theta_k|**2``: the energy of an inner function missing from a window."""
    return float(1.0 - np.sum(np.abs(theta.coeffs) ** 2))


def blaschke_tail_bound(spec: BlaschkeSpec, N: int) -> float:
    """``sum_{k >= N} |theta_k|``, which bounds ``|theta - theta_N|`` on the circle.

    The series is expanded until the geometric decay of the largest zero puts
    the remaining terms below double precision.
    """
    r = max((abs(a) for a in spec.zeros), default=0.0)
    if r == 0.0:
        return 0.0
    extra = int(np.ceil(np.log(1e-20) / np.log(r))) + 10 * spec.degree
    full = blaschke_coeffs(spec, N + extra)
    return float(np.sum(np.abs(full.scalar_window(N, N + extra - 1))))


def _resolve(theta, N: int) -> tuple[TrigPoly, int]:
    """Coefficients on the ``N``-window and the degree of an inner function."""
    if isinstance(theta, BlaschkeSpec):
        return blaschke_coeffs(theta, N), theta.degree
    if not isinstance(theta, TrigPoly):
        raise TypeError("theta must be a BlaschkeSpec or TrigPoly")
    if theta.block_dim != 1 or not theta.is_analytic():
        raise ValueError("theta must be a scalar analytic symbol")
    if theta.hi >= N:
        raise ValueError("theta window exceeds N=%d" % N)
    # truncated expansions belong in a BlaschkeSpec, which carries its own tail bound
    dev = float(np.max(np.abs(np.abs(values_on_grid(theta, max(128, 4 * theta.hi + 4))[:, 0, 0]) - 1)))
    if dev > INNER_TOL:
        raise ValueError("theta is not inner (|theta| deviates from 1 by %.3g)" % dev)
    P = np.eye(N) - _range_projection(theta, N)
    return theta, int(round(np.trace(P).real))


def _range_projection(theta: TrigPoly, N: int) -> np.ndarray:
    T = toeplitz_matrix(theta, N).data
    return T @ T.conj().T


def model_projection(theta, N: int) -> OperatorMatrix:
    """Section of the projection onto the model space, ``I - T_theta T_theta*``."""
    th, _ = _resolve(theta, N)
    return OperatorMatrix(np.eye(N) - _range_projection(th, N), H2Window(N))


def range_projection(theta, N: int) -> OperatorMatrix:
    """Section of the projection onto ``theta H2``, ``T_theta T_theta*``."""
    th, _ = _resolve(theta, N)
    return OperatorMatrix(_range_projection(th, N), H2Window(N))


def model_basis(theta, N: int) -> np.ndarray:
    """Orthonormal basis of the model space on the ``N``-window, shape ``(N, deg)``.

    Columns of the projection are orthogonalized in index order, keeping only
    those that add a new direction.  The ``i``-th basis vector is therefore
    real and positive at its pivot index, which makes the basis reproducible.
    """
    th, deg = _resolve(theta, N)
    if deg < 1:
        raise ValueError("constant theta: the model space is trivial")
    P = np.eye(N) - _range_projection(th, N)
    Q = np.zeros((N, 0), dtype=complex)
    for j in range(N):
        v = P[:, j] - Q @ (Q.conj().T @ P[:, j])
        nv = np.linalg.norm(v)
        if nv > 1e-6:
            Q = np.column_stack([Q, v / nv])
        if Q.shape[1] == deg:
            break
    if Q.shape[1] != deg:
        raise ValueError("model projection rank %d != degree %d (increase N)" % (Q.shape[1], deg))
    if np.max(np.abs(P @ Q - Q)) > 1e-6:
        raise ValueError("model projection is not a projection at N=%d (increase N)" % N)
    return Q


def truncated_toeplitz(phi: TrigPoly, theta, N: int) -> OperatorMatrix:
    """Compression of multiplication by ``phi`` to the model space, in :func:`model_basis`."""
    th, deg = _resolve(theta, N)
    Q = model_basis(theta, N)
    A = Q.conj().T @ toeplitz_matrix(phi, N).data @ Q
    return OperatorMatrix(A, ModelBasis(deg, th), 1)


def theta_paired_matrix(spec: ThetaPairedSpec, N: int) -> OperatorMatrix:
    """Section of ``T_phi P_{theta H2} + T_psi P_K``."""
    th, deg = _resolve(spec.theta, N)
    if deg < 1:
        raise ValueError("theta-paired operators need a nonconstant inner function")
    need = deg + max(spec.phi.hi, spec.psi.hi, 0) + 1
    if N < need:
        raise ValueError("N=%d too small; need N >= %d" % (N, need))
    Pr = _range_projection(th, N)
    X = toeplitz_matrix(spec.phi, N).data @ Pr + toeplitz_matrix(spec.psi, N).data @ (np.eye(N) - Pr)
    return OperatorMatrix(X, H2Window(N))


def _divide(num: np.ndarray, den: np.ndarray, tol: float) -> tuple[np.ndarray, float]:
    """Power-series quotient ``num / den`` on the window, with least-squares fallback."""
    N = num.size
    idx = np.arange(N)
    L = np.where(idx[:, None] >= idx[None, :], den[np.clip(idx[:, None] - idx[None, :], 0, N - 1)], 0)
    q = solve_triangular(L, num, lower=True)
    res = float(np.max(np.abs(L @ q - num)))
    if res > tol:
        q = np.linalg.lstsq(L, num, rcond=None)[0]
        res = float(np.max(np.abs(L @ q - num)))
    return q, res


def test_theta_paired(X: OperatorMatrix, theta, tol: float = DEFAULT_TOL, guard: int = 1) -> ClassReport:
    """Theta-paired test: invariance of ``theta H2`` plus the commutator identity.

    ``h0`` is the model-space kernel at the origin, ``1 - conj(theta(0)) theta``;
    ``nu = X h0 / h0`` by power-series division.  Both residuals exclude the
    last ``guard`` rows and columns, where ``X Tz`` is cut off.
    """
    _require(X, H2Window, "test_theta_paired")
    N = X.n
    th, deg = _resolve(theta, N)
    if deg < 1:
        raise ValueError("constant theta: the model space is trivial and the test degenerates")
    if N < deg + 2:
        raise ValueError("N=%d too small for theta of degree %d" % (N, deg))
    x = X.data
    Pr = _range_projection(th, N)
    Pk = np.eye(N) - Pr
    n = N - guard
    inv = float(np.max(np.abs((Pk @ x @ Pr)[:n, :n])))

    tv = th.scalar_window(0, N - 1)
    h0 = Pk @ (np.eye(N)[0] - np.conj(tv[0]) * tv)
    if abs(h0[0]) < tol:
        raise StructureError("division breakdown: h0(0) = %.3g" % abs(h0[0]))
    nu_v, div_res = _divide(x @ h0, h0, tol)
    nu = TrigPoly(0, nu_v).chop(tol * max(1.0, float(np.max(np.abs(x)))))

    S = shift_matrix(N).data
    lhs = x @ S - S @ x
    rhs = (x - toeplitz_matrix(nu, N).data) @ Pr @ S @ Pk
    comm = float(np.max(np.abs((lhs - rhs)[:n, :n])))

    res = max(inv, comm)
    ok = res <= tol
    details = {"invariance": inv, "commutator": comm, "division": div_res,
               "theta_tail": blaschke_tail_bound(theta, N) if isinstance(theta, BlaschkeSpec) else 0.0}
    rec = _read_theta_paired(x, th, deg, nu, guard) if ok else None
    note = "phi and psi are unique for fixed theta."
    return ClassReport(ok, res, guard, rec, note, details, {"nu": nu, "h0": TrigPoly(0, h0)})


test_theta_paired.__test__ = False


def _read_theta_paired(x: np.ndarray, th: TrigPoly, deg: int, nu: TrigPoly, guard: int) -> SymbolPair:
    N = x.shape[0]
    chi = TrigPoly(0, x @ th.scalar_window(0, N - 1))
    hi = N - 1 - deg - guard
    phi = TrigPoly(0, multiply(conj_bar(th), chi).scalar_window(0, max(hi, 0)))
    scale = max(1.0, float(np.max(np.abs(x))))
    return SymbolPair(phi.chop(1e-12 * scale), nu)


def recover_theta_paired_symbols(X: OperatorMatrix, theta, tol: float = DEFAULT_TOL,
                                 guard: int = 1) -> SymbolPair:
    """``phi`` from ``conj(theta) * X theta``, ``psi`` as the ``nu`` of the test."""
    rep = test_theta_paired(X, theta, tol, guard)
    if not rep.verdict:
        raise StructureError("not theta-paired (residual %.3g)" % rep.residual)
    return rep.recovered


__all__ = [
    "R_MAX", "BlaschkeSpec", "ThetaPairedSpec", "blaschke_coeffs", "truncation_tail", "blaschke_tail_bound",
    "model_projection", "range_projection", "model_basis", "truncated_toeplitz",
    "theta_paired_matrix", "test_theta_paired", "recover_theta_paired_symbols",
]
