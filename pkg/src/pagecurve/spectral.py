"""Eigendecomposition of symmetric tridiagonal matrices and chain mode data.

Everything downstream (exact time evolution, analytic hybridizations) is
built on the eigensystem of the single-particle hopping matrix.  The solver
is LAPACK's tridiagonal machinery (MRRR for full decompositions, bisection +
inverse iteration for index ranges), wrapped to give a fixed eigenvector sign
convention so repeated runs are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.linalg import eigh_tridiagonal

if TYPE_CHECKING:  # pragma: no cover
    from .model import ModelParams

__all__ = [
    "TridiagonalMatrix",
    "SpectralDecomposition",
    "Hybridizations",
    "EigensolverError",
    "eigendecompose",
    "eigendecompose_rows",
    "uniform_chain_modes",
    "contact_density_of_states",
    "system_hybridizations",
]


class EigensolverError(RuntimeError):
    """LAPACK failed to converge on a tridiagonal eigenproblem."""


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Real symmetric tridiagonal matrix stored as diagonal + off-diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self) -> None:
        d = np.asarray(self.diag, dtype=float)
        e = np.asarray(self.offdiag, dtype=float)
        if d.ndim != 1 or e.ndim != 1 or len(e) != max(len(d) - 1, 0):
            raise ValueError(
                f"inconsistent tridiagonal data: diag {d.shape}, offdiag {e.shape}"
            )
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def dimension(self) -> int:
        return len(self.diag)

    def to_dense(self) -> np.ndarray:
        L = self.dimension
        A = np.zeros((L, L))
        A[np.arange(L), np.arange(L)] = self.diag
        if L > 1:
            idx = np.arange(L - 1)
            A[idx, idx + 1] = self.offdiag
            A[idx + 1, idx] = self.offdiag
        return A

    def apply(self, B: np.ndarray) -> np.ndarray:
        """Matrix-vector / matrix-matrix product using the banded structure."""
        out = self.diag.reshape(-1, *([1] * (B.ndim - 1))) * B
        if self.dimension > 1:
            e = self.offdiag.reshape(-1, *([1] * (B.ndim - 1)))
            out[:-1] += e * B[1:]
            out[1:] += e * B[:-1]
        return out


@dataclass(frozen=True)
class SpectralDecomposition:
    """Full eigensystem: ``eigenvalues`` ascending, ``eigenvectors`` columns.

    The sign of every eigenvector is fixed such that its first component
    above noise level is positive.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.eigenvalues)


def _fix_signs(V: np.ndarray) -> np.ndarray:
    """Flip eigenvector signs so the first significant component is > 0."""
    mags = np.abs(V)
    thresh = 1e-12 * mags.max(axis=0, keepdims=True)
    first = np.argmax(mags > thresh, axis=0)
    signs = np.sign(V[first, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def eigendecompose(T: TridiagonalMatrix) -> SpectralDecomposition:
    """Full eigensystem of a symmetric tridiagonal matrix.

    O(L^2) work and memory; handles L up to a few 10^4 (at L = 10^4 the
    eigenvector matrix is ~0.8 GB).  For larger problems where only a few
    rows of the eigenvector matrix are needed, use :func:`eigendecompose_rows`.
    """
    L = T.dimension
    if L == 1:
        return SpectralDecomposition(
            eigenvalues=T.diag.copy(), eigenvectors=np.ones((1, 1))
        )
    try:
        w, V = eigh_tridiagonal(T.diag, T.offdiag)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - hard to trigger
        raise EigensolverError(
            f"tridiagonal eigensolver failed for L={L}: {exc}"
        ) from exc
    return SpectralDecomposition(eigenvalues=w, eigenvectors=_fix_signs(V))


def eigendecompose_rows(
    T: TridiagonalMatrix, rows: np.ndarray, block_size: int = 512
) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues plus selected *rows* of the eigenvector matrix.

    Computes the spectrum in index blocks (bisection + inverse iteration) and
    keeps only ``rows`` of each eigenvector, so memory stays O(L * block +
    L * len(rows)) instead of O(L^2).  Intended for very long chains.

    Returns ``(eigenvalues, R)`` with ``R[i, k] = V[rows[i], k]``.
    """
    L = T.dimension
    rows = np.asarray(rows, dtype=np.intp)
    if L == 1:
        return T.diag.copy(), np.ones((len(rows), 1))
    w_all = np.empty(L)
    R = np.empty((len(rows), L))
    for lo in range(0, L, block_size):
        hi = min(lo + block_size, L) - 1
        try:
            w, V = eigh_tridiagonal(
                T.diag, T.offdiag, select="i", select_range=(lo, hi)
            )
        except np.linalg.LinAlgError as exc:  # pragma: no cover
            raise EigensolverError(
                f"tridiagonal eigensolver failed for L={L}, "
                f"index block [{lo}, {hi}]: {exc}"
            ) from exc
        V = _fix_signs(V)
        w_all[lo : hi + 1] = w
        R[:, lo : hi + 1] = V[rows, :]
    return w_all, R


def uniform_chain_modes(L: int, t: float) -> SpectralDecomposition:
    """Closed-form eigensystem of an open uniform chain with hopping ``t``.

    With the hopping convention ``H = t * sum_i (a_i^dag a_{i+1} + h.c.)``
    the eigenvalues are ``2 t cos(pi k / (L+1))`` for k = 1..L and the
    eigenvector components ``sqrt(2/(L+1)) sin(pi k i / (L+1))``.  Returned
    sorted ascending like :func:`eigendecompose`.
    """
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    if not t > 0:
        raise ValueError(f"t must be > 0, got {t}")
    # k = L..1 gives eigenvalues in ascending order
    k = np.arange(L, 0, -1, dtype=float)
    w = 2.0 * t * np.cos(np.pi * k / (L + 1))
    i = np.arange(1, L + 1, dtype=float)
    V = np.sqrt(2.0 / (L + 1)) * np.sin(np.pi * np.outer(i, k) / (L + 1))
    return SpectralDecomposition(eigenvalues=w, eigenvectors=_fix_signs(V))


def contact_density_of_states(t_env: float) -> float:
    """Band-centre local density of states at the edge site of a
    semi-infinite uniform chain: ``rho = 1 / (pi * t_env)``.

    This is the constant used in the wide flat band treatment of the
    environment; it fixes the mapping between physical time and the
    dimensionless universal time of the analytic curves.
    """
    return 1.0 / (np.pi * t_env)


@dataclass(frozen=True)
class Hybridizations:
    """Per-mode data of the decoupled system chain, indexed by k = 1..M.

    ``omega[k-1]`` is the exact mode energy ``2 t_sys cos(pi k/(M+1))``,
    ``coupling[k-1]`` the boundary matrix element
    ``V_k = g sqrt(2/(M+1)) sin(pi k/(M+1))`` and ``gamma[k-1]`` the golden
    rule level width ``pi * rho * V_k^2`` with the wide-band contact density
    of states.
    """

    k: np.ndarray
    omega: np.ndarray
    coupling: np.ndarray
    gamma: np.ndarray


def system_hybridizations(params: "ModelParams") -> Hybridizations:
    """Mode energies, boundary couplings and level widths of the system chain."""
    M = params.M
    k = np.arange(1, M + 1, dtype=float)
    omega = 2.0 * params.t_sys * np.cos(np.pi * k / (M + 1))
    coupling = params.g * np.sqrt(2.0 / (M + 1)) * np.sin(np.pi * k / (M + 1))
    rho = contact_density_of_states(params.t_env)
    gamma = np.pi * rho * coupling**2
    return Hybridizations(k=k, omega=omega, coupling=coupling, gamma=gamma)
