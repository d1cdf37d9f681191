"""Finite sections of Toeplitz, Hankel, Laurent and paired operators.

Conventions
-----------
* ``H2Window(N)``: basis ``z**0 .. z**(N-1)`` of the Hardy space.
* ``L2Window(M)``: basis ``z**-M .. z**M`` of L2; row/column ``m`` sits at
  array position ``m + M``.
* ``ModelBasis(dim)``: an orthonormal basis of a model space (see
  :mod:`hardyops.modelspace`).

A block symbol of dimension ``d`` turns each scalar position into a ``d x d``
block, so the array side is ``d`` times the basis size.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .trigpoly import TrigPoly, monomial


class BasisMismatchError(ValueError):
    """Raised when operator matrices on different bases are combined."""


class FastPathFallback(UserWarning):
    """Emitted when a fast-apply call falls back to a dense matvec."""


@dataclass(frozen=True)
class H2Window:
    N: int

    @property
    def size(self) -> int:
        return self.N


@dataclass(frozen=True)
class L2Window:
    M: int

    @property
    def size(self) -> int:
        return 2 * self.M + 1


@dataclass(frozen=True)
class ModelBasis:
    dim: int
    theta: TrigPoly | None = field(default=None, compare=False)
    convention: str = "gram-schmidt-index-order/v1"

    @property
    def size(self) -> int:
        return self.dim


@dataclass(frozen=True)
class SymbolPair:
    """Ordered pair ``(phi, psi)``; order matters for paired operators."""

    phi: TrigPoly
    psi: TrigPoly

    def __post_init__(self):
        if self.phi.block_dim != self.psi.block_dim:
            raise ValueError("symbol pair has mismatched block dimensions")

    @property
    def block_dim(self) -> int:
        return self.phi.block_dim


class OperatorMatrix:
    """Dense complex matrix tagged with its basis and block dimension."""

    __slots__ = ("_data", "_basis", "_block_dim")

    def __init__(self, data, basis, block_dim: int = 1):
        a = np.array(data, dtype=complex)
        side = basis.size * block_dim
        if a.shape != (side, side):
            raise ValueError("matrix shape %s does not match basis %r with block_dim %d"
                             % (a.shape, basis, block_dim))
        a.setflags(write=False)
        self._data = a
        self._basis = basis
        self._block_dim = int(block_dim)

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def basis(self):
        return self._basis

    @property
    def block_dim(self) -> int:
        return self._block_dim

    @property
    def n(self) -> int:
        """Number of basis positions (not array rows)."""
        return self._basis.size

    def blocks(self) -> np.ndarray:
        """View as ``(n, n, d, d)`` block array."""
        n, d = self.n, self._block_dim
        return self._data.reshape(n, d, n, d).transpose(0, 2, 1, 3)

    def with_data(self, data) -> "OperatorMatrix":
        return OperatorMatrix(data, self._basis, self._block_dim)

    def _same(self, other) -> None:
        if not isinstance(other, OperatorMatrix):
            raise TypeError("expected OperatorMatrix, got %s" % type(other).__name__)
        if other._basis != self._basis or other._block_dim != self._block_dim:
            raise BasisMismatchError("cannot combine %r (d=%d) with %r (d=%d)"
                                     % (self._basis, self._block_dim, other._basis, other._block_dim))

    def __add__(self, other):
        self._same(other)
        return self.with_data(self._data + other._data)

    def __sub__(self, other):
        self._same(other)
        return self.with_data(self._data - other._data)

    def __neg__(self):
        return self.with_data(-self._data)

    def __mul__(self, c):
        return self.with_data(self._data * c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            self._same(other)
            return self.with_data(self._data @ other._data)
        return self._data @ np.asarray(other)

    def adjoint(self) -> "OperatorMatrix":
        return self.with_data(self._data.conj().T)

    @property
    def H(self) -> "OperatorMatrix":
        return self.adjoint()

    def __repr__(self):
        return "OperatorMatrix(basis=%r, block_dim=%d)" % (self._basis, self._block_dim)


def _from_blocks(blocks: np.ndarray) -> np.ndarray:
    n, _, d, _ = blocks.shape
    return blocks.transpose(0, 2, 1, 3).reshape(n * d, n * d)


def _indexed(sym: TrigPoly, idx: np.ndarray) -> np.ndarray:
    """Blocks ``sym_{idx}`` for an integer index array (zero outside window)."""
    lo, hi = int(idx.min()), int(idx.max())
    table = sym.window(lo, hi)
    return table[idx - lo]


def toeplitz_matrix(phi: TrigPoly, N: int) -> OperatorMatrix:
    """Section of ``T_phi``: block ``(j, k)`` is ``phi_{j-k}``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    j = np.arange(N)
    blocks = _indexed(phi, j[:, None] - j[None, :])
    return OperatorMatrix(_from_blocks(blocks), H2Window(N), phi.block_dim)


def hankel_matrix(psi: TrigPoly, N: int) -> OperatorMatrix:
    """Section of ``H_psi``: block ``(j, k)`` is ``psi_{j+k}``.

    Coefficients of negative index never enter, so symbols differing by a
    co-analytic term give the same matrix.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    j = np.arange(N)
    blocks = _indexed(psi, j[:, None] + j[None, :])
    return OperatorMatrix(_from_blocks(blocks), H2Window(N), psi.block_dim)


def shift_matrix(N: int, block_dim: int = 1) -> OperatorMatrix:
    """The forward shift ``T_z`` on the ``N``-window."""
    return toeplitz_matrix(monomial(1, block_dim=block_dim), N)


def laurent_matrix(phi: TrigPoly, M: int) -> OperatorMatrix:
    """Section of ``M_phi`` on indices ``-M..M``."""
    if M < 1:
        raise ValueError("M must be >= 1")
    m = np.arange(-M, M + 1)
    blocks = _indexed(phi, m[:, None] - m[None, :])
    return OperatorMatrix(_from_blocks(blocks), L2Window(M), phi.block_dim)


def _projection(M: int, keep_nonneg: bool, block_dim: int) -> OperatorMatrix:
    if M < 1:
        raise ValueError("M must be >= 1")
    m = np.arange(-M, M + 1)
    diag = (m >= 0) if keep_nonneg else (m < 0)
    return OperatorMatrix(np.kron(np.diag(diag.astype(float)), np.eye(block_dim)),
                          L2Window(M), block_dim)


def projection_plus(M: int, block_dim: int = 1) -> OperatorMatrix:
    """Szego projection onto indices ``n >= 0``."""
    return _projection(M, True, block_dim)


def projection_minus(M: int, block_dim: int = 1) -> OperatorMatrix:
    return _projection(M, False, block_dim)


def paired_matrix(pair: SymbolPair, M: int) -> OperatorMatrix:
    """Section of ``M_phi P_+ + M_psi P_-``.

    Block ``(m, n)`` is ``phi_{m-n}`` for columns ``n >= 0`` and
    ``psi_{m-n}`` for ``n < 0``.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    m = np.arange(-M, M + 1)
    diff = m[:, None] - m[None, :]
    blocks = np.where((m[None, :] >= 0)[:, :, None, None],
                      _indexed(pair.phi, diff), _indexed(pair.psi, diff))
    return OperatorMatrix(_from_blocks(blocks), L2Window(M), pair.block_dim)


def transposed_paired_matrix(pair: SymbolPair, M: int) -> OperatorMatrix:
    """Section of ``P_+ M_phi + P_- M_psi`` (row split instead of column split)."""
    if M < 1:
        raise ValueError("M must be >= 1")
    m = np.arange(-M, M + 1)
    diff = m[:, None] - m[None, :]
    blocks = np.where((m[:, None] >= 0)[:, :, None, None],
                      _indexed(pair.phi, diff), _indexed(pair.psi, diff))
    return OperatorMatrix(_from_blocks(blocks), L2Window(M), pair.block_dim)


# -- basis conversion -----------------------------------------------------------

def restrict_h2(X: OperatorMatrix) -> OperatorMatrix:
    """Compress an ``L2Window(M)`` matrix to rows and columns ``0..M``."""
    if not isinstance(X.basis, L2Window):
        raise BasisMismatchError("restrict_h2 needs an L2Window matrix")
    M, d = X.basis.M, X.block_dim
    return OperatorMatrix(X.data[M * d:, M * d:], H2Window(M + 1), d)


def embed_l2(A: OperatorMatrix) -> OperatorMatrix:
    """Place an ``H2Window(N)`` matrix into ``L2Window(N-1)``, zero elsewhere."""
    if not isinstance(A.basis, H2Window):
        raise BasisMismatchError("embed_l2 needs an H2Window matrix")
    N, d = A.basis.N, A.block_dim
    if N < 2:
        raise ValueError("embedding needs N >= 2")
    out = np.zeros(((2 * N - 1) * d,) * 2, dtype=complex)
    out[(N - 1) * d:, (N - 1) * d:] = A.data
    return OperatorMatrix(out, L2Window(N - 1), d)


def fold_negative_rows(X: OperatorMatrix) -> OperatorMatrix:
    """Columns ``n >= 0`` and rows ``m < 0`` of an L2 section, with row ``-1-j`` moved to ``j``.

    This is the unitary identification ``zbar**(j+1) -> z**j`` of the
    negative half with the Hardy space.  Applied to ``P_- M_psi`` it yields the
    Hankel section of ``zbar * psi(zbar)``.
    """
    if not isinstance(X.basis, L2Window):
        raise BasisMismatchError("fold_negative_rows needs an L2Window matrix")
    M, d = X.basis.M, X.block_dim
    b = X.blocks()
    folded = b[M - 1::-1, M:M + M]
    return OperatorMatrix(_from_blocks(folded), H2Window(M), d)


# -- fast application -----------------------------------------------------------

def _embed_size(N: int) -> int:
    n = 1
    while n < 2 * N:
        n *= 2
    return n


def _vector_len(x, d: int) -> tuple[np.ndarray, int]:
    x = np.asarray(x, dtype=complex)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("x must be a non-empty vector")
    if x.size % d:
        raise ValueError("vector length %d is not a multiple of block_dim %d" % (x.size, d))
    return x, x.size // d


def _circulant_apply(first_col: np.ndarray, first_row: np.ndarray, x: np.ndarray) -> np.ndarray:
    N = x.size
    L = _embed_size(N)
    c = np.zeros(L, dtype=complex)
    c[:N] = first_col
    c[L - N + 1:] = first_row[1:][::-1]
    y = np.fft.ifft(np.fft.fft(c) * np.fft.fft(x, L))
    return y[:N]


def fast_apply_toeplitz(phi: TrigPoly, x) -> np.ndarray:
    """``toeplitz_matrix(phi, N) @ x`` in ``O(N log N)`` via circulant embedding.

    Block symbols are routed to the dense product with a
    :class:`FastPathFallback` warning.
    """
    x, N = _vector_len(x, phi.block_dim)
    if phi.block_dim > 1:
        warnings.warn("block symbols use the dense Toeplitz product", FastPathFallback, stacklevel=2)
        return toeplitz_matrix(phi, N).data @ x
    col = phi.scalar_window(0, N - 1)
    row = phi.scalar_window(-(N - 1), 0)[::-1]
    return _circulant_apply(col, row, x)


def fast_apply_hankel(psi: TrigPoly, x) -> np.ndarray:
    """``hankel_matrix(psi, N) @ x``: a Toeplitz product on the reversed vector."""
    x, N = _vector_len(x, psi.block_dim)
    if psi.block_dim > 1:
        warnings.warn("block symbols use the dense Hankel product", FastPathFallback, stacklevel=2)
        return hankel_matrix(psi, N).data @ x
    # H[j, k] = psi_{j+k} = T[j, N-1-k] with T[j, m] = psi_{j-m+N-1}
    col = psi.scalar_window(N - 1, 2 * N - 2)
    row = psi.scalar_window(0, N - 1)[::-1]
    return _circulant_apply(col, row, x[::-1])


def fast_apply_tph(pair: SymbolPair, x) -> np.ndarray:
    """``(T_phi + H_psi) x`` on the ``N``-window using both fast paths."""
    return fast_apply_toeplitz(pair.phi, x) + fast_apply_hankel(pair.psi, x)


def dense_apply_tph(pair: SymbolPair, x, chunk: int = 256) -> np.ndarray:
    """Dense ``(T_phi + H_psi) x`` that builds the matrix a block of rows at a time.

    Used as the O(N**2) reference for the fast paths when the full matrix
    would not fit in memory.  Scalar symbols only.
    """
    x = np.asarray(x, dtype=complex)
    N = x.size
    lo_t, hi_t = -(N - 1), N - 1
    t = pair.phi.scalar_window(lo_t, hi_t)
    h = pair.psi.scalar_window(0, 2 * N - 2)
    k = np.arange(N)
    out = np.empty(N, dtype=complex)
    for start in range(0, N, chunk):
        j = np.arange(start, min(start + chunk, N))[:, None]
        rows = t[j - k[None, :] - lo_t] + h[j + k[None, :]]
        out[start:start + rows.shape[0]] = rows @ x
    return out


__all__ = [
    "BasisMismatchError", "FastPathFallback", "H2Window", "L2Window", "ModelBasis",
    "SymbolPair", "OperatorMatrix", "toeplitz_matrix", "hankel_matrix", "shift_matrix",
    "laurent_matrix", "projection_plus", "projection_minus", "paired_matrix",
    "transposed_paired_matrix", "restrict_h2", "embed_l2", "fold_negative_rows",
    "fast_apply_toeplitz", "fast_apply_hankel", "fast_apply_tph", "dense_apply_tph",
]
