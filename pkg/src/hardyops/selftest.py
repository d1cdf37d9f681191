"""Seeded invariant checks run by ``hardyops selftest``.

Each group returns ``{"pass": bool, "worst": float, "checks": int}``.  The
``inject_fault`` switch perturbs one interior entry of the Toeplitz+Hankel
fixtures so that only the ``tph`` group fails.
"""
from __future__ import annotations

import numpy as np

from . import classify as C
from . import modelspace as MS
from .operators import (
    SymbolPair,
    fast_apply_tph,
    hankel_matrix,
    paired_matrix,
    toeplitz_matrix,
    transposed_paired_matrix,
)
from .trigpoly import TrigPoly, conj_bar, evaluate, monomial, multiply

FAULT_EPS = 1e-3


def _rand_poly(rng, lo, hi):
    n = hi - lo + 1
    return TrigPoly(lo, rng.standard_normal(n) + 1j * rng.standard_normal(n))


def _rand_pair(rng, deg=4):
    return SymbolPair(_rand_poly(rng, -deg, deg), _rand_poly(rng, -deg, deg))


class _Group:
    def __init__(self):
        self.ok = True
        self.worst = 0.0
        self.checks = 0

    def check(self, value: float, bound: float) -> None:
        self.checks += 1
        self.worst = max(self.worst, float(value))
        self.ok &= bool(value <= bound)

    def require(self, cond: bool) -> None:
        self.checks += 1
        self.ok &= bool(cond)

    def result(self) -> dict:
        return {"pass": self.ok, "worst": self.worst, "checks": self.checks}


def group_trigpoly(rng) -> dict:
    g = _Group()
    for _ in range(10):
        a, b = _rand_poly(rng, -3, 4), _rand_poly(rng, -2, 2)
        g.require(conj_bar(conj_bar(a)) == a)
        g.check(multiply(conj_bar(a), conj_bar(b)).max_diff(conj_bar(multiply(b, a))), 1e-12)
        t = np.exp(2j * np.pi * rng.random())
        lhs, rhs = evaluate(multiply(a, b), t), evaluate(a, t) @ evaluate(b, t)
        g.check(float(np.max(np.abs(lhs - rhs)) / max(1.0, np.max(np.abs(rhs)))), 1e-12)
    return g.result()


def group_operators(rng) -> dict:
    g = _Group()
    for _ in range(10):
        p = _rand_pair(rng)
        X = paired_matrix(p, 12)
        S = transposed_paired_matrix(SymbolPair(conj_bar(p.phi), conj_bar(p.psi)), 12)
        g.check(float(np.max(np.abs(X.adjoint().data - S.data))), 0.0)
    return g.result()


def _tph_fixtures(rng, inject_fault: bool):
    out = []
    for _ in range(10):
        p = _rand_pair(rng)
        A = toeplitz_matrix(p.phi, 16) + hankel_matrix(p.psi, 16)
        if inject_fault:
            a = np.array(A.data)
            a[7, 8] += FAULT_EPS
            A = A.with_data(a)
        out.append((p, A))
    return out


def group_tph(rng, inject_fault: bool = False) -> dict:
    g = _Group()
    for _, A in _tph_fixtures(rng, inject_fault):
        rep = C.test_tph(A)
        g.check(rep.residual, 1e-12)
        g.require(rep.details["criteria_agree"])
    return g.result()


def group_decompose(rng) -> dict:
    g = _Group()
    for p, A in _tph_fixtures(rng, False):
        rep = C.decompose_tph(A)
        g.check(rep.residual, 1e-10)
        N = A.n
        diff = (C.tph_coefficients(rep.recovered, N) - C.tph_coefficients(p, N))[:, 0, 0]
        G = C.tph_gauge_basis(N)
        g.check(float(np.linalg.norm(diff - G @ (G.T @ diff))), 1e-10)
    return g.result()


def group_paired(rng) -> dict:
    g = _Group()
    for _ in range(10):
        p = _rand_pair(rng)
        rep = C.test_paired(paired_matrix(p, 12))
        g.check(rep.residual, 1e-12)
        g.check(max(rep.recovered.phi.max_diff(p.phi), rep.recovered.psi.max_diff(p.psi)), 1e-12)
        rep = C.test_transposed_paired(transposed_paired_matrix(p, 12))
        g.check(max(rep.recovered.phi.max_diff(p.phi), rep.recovered.psi.max_diff(p.psi)), 1e-12)
    return g.result()


def group_pipeline(rng) -> dict:
    g = _Group()
    for a in (1, 2, 3):
        for b in (0, 1, 2):
            A = toeplitz_matrix(monomial(a), 16) + hankel_matrix(monomial(b), 16)
            rep = C.noninjective_pipeline(A)
            g.require(rep.symbols["theta"] == monomial(b + 1))
            g.check(rep.residual, 1e-10)
    return g.result()


def group_modelspace(rng) -> dict:
    g = _Group()
    thetas = [monomial(1), monomial(2), monomial(3), MS.BlaschkeSpec([0.5]), MS.BlaschkeSpec([0.5, -0.3 + 0.4j])]
    for th in thetas:
        P = MS.model_projection(th, 64).data
        deg = th.degree if isinstance(th, MS.BlaschkeSpec) else th.hi
        g.check(abs(np.trace(P).real - deg), 1e-6)
        g.check(float(np.max(np.abs(P @ P - P))), 1e-10)
        phi, psi = _rand_poly(rng, 0, 3), _rand_poly(rng, 0, 3)
        X = MS.theta_paired_matrix(MS.ThetaPairedSpec(th, phi, psi), 64)
        rec = MS.recover_theta_paired_symbols(X, th)
        g.check(max(rec.phi.max_diff(phi), rec.psi.max_diff(psi)), 1e-6)
    return g.result()


def group_fast(rng) -> dict:
    g = _Group()
    for N in (1, 17, 256, 1024):
        p = _rand_pair(rng, 8)
        x = rng.standard_normal(N) + 1j * rng.standard_normal(N)
        dense = (toeplitz_matrix(p.phi, N) + hankel_matrix(p.psi, N)).data @ x
        g.check(float(np.linalg.norm(fast_apply_tph(p, x) - dense) / np.linalg.norm(dense)), 1e-10)
    return g.result()


GROUPS = {
    "trigpoly": group_trigpoly,
    "operators": group_operators,
    "tph": group_tph,
    "decompose": group_decompose,
    "paired": group_paired,
    "pipeline": group_pipeline,
    "modelspace": group_modelspace,
    "fast": group_fast,
}


def run_selftest(seed: int = 0, inject_fault: bool = False) -> dict:
    """Run every group with its own generator derived from ``seed``."""
    groups = {}
    for i, (name, fn) in enumerate(GROUPS.items()):
        rng = np.random.default_rng([seed, i])
        groups[name] = fn(rng, inject_fault) if name == "tph" else fn(rng)
    return {"seed": seed, "inject_fault": inject_fault, "groups": groups,
            "pass": all(g["pass"] for g in groups.values())}
