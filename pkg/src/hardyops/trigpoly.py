"""Matrix-coefficient trigonometric (Laurent) polynomials.

A :class:`TrigPoly` stores the Fourier window ``lo..hi`` of a symbol on the
unit circle as a dense stack of ``d x d`` complex blocks.  Every operator
constructor in the package consumes symbols in this form.
"""
from __future__ import annotations

import numbers

import numpy as np

DEFAULT_ATOL = 1e-12


class TrigPoly:
    """Laurent polynomial ``sum_n c_n z**n`` with ``d x d`` block coefficients.

    Instances are immutable and always canonical: leading and trailing zero
    blocks are trimmed, and the zero polynomial is the single zero block at
    index 0.

    Parameters
    ----------
    lo : int
        Fourier index of the first block.
    coeffs : array_like
        Either a 1-D sequence of scalars (``block_dim == 1``) or an array of
        shape ``(L, d, d)``.
    """

    __slots__ = ("_lo", "_coeffs")

    def __init__(self, lo, coeffs):
        c = np.array(coeffs, dtype=complex)
        if c.ndim == 1:
            c = c.reshape(-1, 1, 1)
        if c.ndim != 3 or c.shape[1] != c.shape[2]:
            raise ValueError("coefficients must be scalars or square blocks, got shape %s" % (c.shape,))
        if c.shape[0] == 0:
            raise ValueError("empty coefficient list")
        if c.shape[1] == 0:
            raise ValueError("block dimension must be positive")
        nz = np.flatnonzero(np.any(c != 0, axis=(1, 2)))
        if nz.size == 0:
            lo, c = 0, np.zeros((1,) + c.shape[1:], dtype=complex)
        else:
            lo, c = int(lo) + int(nz[0]), c[nz[0]:nz[-1] + 1].copy()
        c.setflags(write=False)
        self._lo = lo
        self._coeffs = c

    # -- basic attributes -------------------------------------------------

    @property
    def lo(self) -> int:
        return self._lo

    @property
    def hi(self) -> int:
        return self._lo + self._coeffs.shape[0] - 1

    @property
    def coeffs(self) -> np.ndarray:
        """Read-only array of shape ``(hi - lo + 1, d, d)``."""
        return self._coeffs

    @property
    def block_dim(self) -> int:
        return self._coeffs.shape[1]

    @property
    def degree(self) -> int:
        """Largest absolute Fourier index carried by the window."""
        return max(abs(self.lo), abs(self.hi))

    def is_zero(self) -> bool:
        return not np.any(self._coeffs)

    def is_analytic(self) -> bool:
        return self.is_zero() or self.lo >= 0

    def coeff(self, n: int) -> np.ndarray:
        """Block at Fourier index ``n`` (zero outside the window)."""
        if self.lo <= n <= self.hi:
            return self._coeffs[n - self.lo]
        return np.zeros((self.block_dim, self.block_dim), dtype=complex)

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Coefficients for indices ``lo..hi`` as an array ``(hi-lo+1, d, d)``."""
        d = self.block_dim
        out = np.zeros((max(hi - lo + 1, 0), d, d), dtype=complex)
        a, b = max(lo, self.lo), min(hi, self.hi)
        if a <= b:
            out[a - lo:b - lo + 1] = self._coeffs[a - self.lo:b - self.lo + 1]
        return out

    def scalar_window(self, lo: int, hi: int) -> np.ndarray:
        if self.block_dim != 1:
            raise ValueError("scalar_window requires block_dim 1")
        return self.window(lo, hi)[:, 0, 0]

    # -- algebra ----------------------------------------------------------

    def _check(self, other: "TrigPoly") -> None:
        if not isinstance(other, TrigPoly):
            raise TypeError("expected TrigPoly, got %s" % type(other).__name__)
        if other.block_dim != self.block_dim:
            raise ValueError("block_dim mismatch: %d vs %d" % (self.block_dim, other.block_dim))

    def __add__(self, other):
        if isinstance(other, numbers.Number):
            other = constant(other, self.block_dim)
        self._check(other)
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        return TrigPoly(lo, self.window(lo, hi) + other.window(lo, hi))

    __radd__ = __add__

    def __neg__(self):
        return TrigPoly(self.lo, -self._coeffs)

    def __sub__(self, other):
        if isinstance(other, numbers.Number):
            other = constant(other, self.block_dim)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return TrigPoly(self.lo, self._coeffs * other)
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, numbers.Number):
            return TrigPoly(self.lo, other * self._coeffs)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return (self.lo == other.lo and self._coeffs.shape == other._coeffs.shape
                and bool(np.array_equal(self._coeffs, other._coeffs)))

    def __hash__(self):
        return hash((self.lo, self._coeffs.tobytes()))

    def allclose(self, other: "TrigPoly", atol: float = DEFAULT_ATOL) -> bool:
        """Coefficient-wise comparison over the union window."""
        self._check(other)
        return self.max_diff(other) <= atol

    def max_diff(self, other: "TrigPoly") -> float:
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        return float(np.max(np.abs(self.window(lo, hi) - other.window(lo, hi))))

    def chop(self, atol: float) -> "TrigPoly":
        """Zero every block whose entries are all below ``atol`` in modulus."""
        c = np.array(self._coeffs)
        small = np.all(np.abs(c) <= atol, axis=(1, 2))
        c[small] = 0
        return TrigPoly(self.lo, c)

    def __repr__(self):
        if self.block_dim == 1:
            return "TrigPoly(lo=%d, coeffs=%s)" % (self.lo, np.array2string(self._coeffs[:, 0, 0], precision=6))
        return "TrigPoly(lo=%d, hi=%d, block_dim=%d)" % (self.lo, self.hi, self.block_dim)


# -- constructors ------------------------------------------------------------

def make_trigpoly(lo: int, blocks) -> TrigPoly:
    """Build a canonical :class:`TrigPoly` from a list of blocks starting at ``lo``.

    ``blocks`` may hold scalars (block dimension 1) or square arrays of a
    common size.
    """
    blocks = list(blocks)
    if not blocks:
        raise ValueError("empty block list")
    arrs = [np.atleast_2d(np.asarray(b, dtype=complex)) for b in blocks]
    shapes = {a.shape for a in arrs}
    if len(shapes) != 1:
        raise ValueError("ragged block dimensions: %s" % sorted(shapes))
    (shape,) = shapes
    if shape[0] != shape[1]:
        raise ValueError("blocks must be square, got %s" % (shape,))
    return TrigPoly(lo, np.stack(arrs))


def constant(c, block_dim: int = 1) -> TrigPoly:
    if np.ndim(c) == 0:
        c = c * np.eye(block_dim)
    return TrigPoly(0, np.asarray(c, dtype=complex)[None])


def monomial(k: int, c=1.0, block_dim: int = 1) -> TrigPoly:
    """``c * z**k`` (``c`` scalar or a ``d x d`` block)."""
    return shift(constant(c, block_dim), k)


def zero(block_dim: int = 1) -> TrigPoly:
    return TrigPoly(0, np.zeros((1, block_dim, block_dim)))


# -- operations --------------------------------------------------------------

def multiply(a: TrigPoly, b: TrigPoly) -> TrigPoly:
    """Product of two symbols (block convolution, left factor first)."""
    a._check(b)
    A, B = a.coeffs, b.coeffs
    out = np.zeros((A.shape[0] + B.shape[0] - 1,) + A.shape[1:], dtype=complex)
    if a.block_dim == 1:
        out[:, 0, 0] = np.convolve(A[:, 0, 0], B[:, 0, 0])
    else:
        for i in range(A.shape[0]):
            out[i:i + B.shape[0]] += np.matmul(A[i], B)
    return TrigPoly(a.lo + b.lo, out)


def conj_bar(a: TrigPoly) -> TrigPoly:
    """Pointwise adjoint on the circle: block at ``n`` becomes ``a_{-n}^*``."""
    return TrigPoly(-a.hi, np.conj(a.coeffs[::-1]).transpose(0, 2, 1))


def reflect(a: TrigPoly) -> TrigPoly:
    """``f(z) -> f(conj z)``: block at ``n`` becomes ``a_{-n}`` (no conjugation)."""
    return TrigPoly(-a.hi, a.coeffs[::-1])


def shift(a: TrigPoly, k: int) -> TrigPoly:
    """Multiply by ``z**k``."""
    return TrigPoly(a.lo + int(k), a.coeffs)


def evaluate(a: TrigPoly, t: complex, atol: float = 1e-12) -> np.ndarray:
    """Value of ``a`` at a point ``t`` of the unit circle, as a ``d x d`` block."""
    t = complex(t)
    if abs(abs(t) - 1.0) > atol:
        raise ValueError("evaluation point %r is off the unit circle" % (t,))
    powers = t ** np.arange(a.lo, a.hi + 1)
    return np.tensordot(powers, a.coeffs, axes=(0, 0))


def values_on_grid(a: TrigPoly, grid: int) -> np.ndarray:
    """Values at the ``grid``-th roots of unity, shape ``(grid, d, d)``."""
    ts = np.exp(2j * np.pi * np.arange(grid) / grid)
    powers = ts[:, None] ** np.arange(a.lo, a.hi + 1)[None, :]
    return np.tensordot(powers, a.coeffs, axes=(1, 0))


def split_plus_minus(a: TrigPoly) -> tuple[TrigPoly, TrigPoly]:
    """Split into the analytic part (indices >= 0) and the rest (indices < 0)."""
    d = a.block_dim
    plus = TrigPoly(0, a.window(0, max(a.hi, 0))) if a.hi >= 0 else zero(d)
    minus = TrigPoly(a.lo, a.window(a.lo, -1)) if a.lo < 0 else zero(d)
    return plus, minus


def sup_norm_estimate(a: TrigPoly, grid: int) -> float:
    """Max spectral norm of ``a`` over the ``grid``-th roots of unity.

    This is a lower bound on the sup norm that becomes exact as ``grid`` grows.
    A single term ``c z**k`` has constant modulus and gets the exact value.
    """
    if grid < 2 * (a.hi - a.lo) + 2:
        raise ValueError("grid %d too small for window [%d, %d]" % (grid, a.lo, a.hi))
    if a.lo == a.hi:
        return float(np.linalg.norm(a.coeffs[0], ord=2))
    vals = values_on_grid(a, grid)
    if a.block_dim == 1:
        return float(np.max(np.abs(vals)))
    return float(np.max(np.linalg.norm(vals, ord=2, axis=(1, 2))))
