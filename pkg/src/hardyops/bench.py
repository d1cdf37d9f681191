"""Dense vs FFT timing for Toeplitz+Hankel matrix-vector products."""
from __future__ import annotations

import time

import numpy as np

from .operators import SymbolPair, dense_apply_tph, fast_apply_tph, hankel_matrix, toeplitz_matrix
from .trigpoly import TrigPoly

AGREE_TOL = 1e-10
DENSE_MATRIX_LIMIT = 4096


class BenchmarkError(RuntimeError):
    """Fast and dense products disagree."""


def random_pair(rng: np.random.Generator, lo: int = -8, hi: int = 8) -> SymbolPair:
    n = hi - lo + 1
    phi = TrigPoly(lo, rng.standard_normal(n) + 1j * rng.standard_normal(n))
    psi = TrigPoly(lo, rng.standard_normal(n) + 1j * rng.standard_normal(n))
    return SymbolPair(phi, psi)


def _best(fn, repeat: int) -> float:
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_one(N: int, rng: np.random.Generator, repeat: int = 5) -> dict:
    """Check agreement, then time one dense and one fast product of size ``N``.

    Up to ``DENSE_MATRIX_LIMIT`` the dense path is a prebuilt matrix times a
    vector; beyond it the matrix is streamed row block by row block.
    """
    pair = random_pair(rng)
    x = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    fast = fast_apply_tph(pair, x)
    if N <= DENSE_MATRIX_LIMIT:
        D = (toeplitz_matrix(pair.phi, N) + hankel_matrix(pair.psi, N)).data
        dense_fn = lambda: D @ x  # noqa: E731
    else:
        dense_fn = lambda: dense_apply_tph(pair, x)  # noqa: E731
    dense = dense_fn()
    err = float(np.linalg.norm(fast - dense) / max(np.linalg.norm(dense), np.finfo(float).tiny))
    if err > AGREE_TOL:
        raise BenchmarkError("N=%d: fast and dense differ by %.3g (relative)" % (N, err))
    t_dense = _best(dense_fn, repeat if N <= DENSE_MATRIX_LIMIT else 1)
    t_fast = _best(lambda: fast_apply_tph(pair, x), repeat)
    return {"N": N, "rel_err": err, "dense_s": t_dense, "fast_s": t_fast, "speedup": t_dense / t_fast}


def bench(N_list, seed: int = 0, repeat: int = 5) -> list[dict]:
    rng = np.random.default_rng(seed)
    return [bench_one(int(N), rng, repeat) for N in N_list]


def format_table(rows: list[dict]) -> str:
    lines = ["%8s %12s %12s %10s %10s" % ("N", "dense [s]", "fast [s]", "speedup", "rel err")]
    for r in rows:
        lines.append("%8d %12.3e %12.3e %10.1f %10.1e" % (r["N"], r["dense_s"], r["fast_s"], r["speedup"], r["rel_err"]))
    return "\n".join(lines)
