"""Brute-force many-body reference in the fixed-particle-number sector.

Particle number is conserved, so exact state-vector evolution only needs the
binomial(L, P)-dimensional sector of Fock space.  Basis states are occupation
bitmasks, ordered ascending by mask value; a mask with occupied sites
``i1 < i2 < ... < iP`` represents ``c_{i1}^dag c_{i2}^dag ... c_{iP}^dag |0>``
(site-ascending Jordan-Wigner convention).  Operator applications carry the
parity of the occupied sites below the acted-on site, which is what makes
correlations between non-adjacent sites come out with the right sign.

This module exists to validate every Gaussian-state formula on small
instances; nothing here scales past L ~ 20.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb, inf

import numpy as np
import scipy.sparse as sp

from .model import ModelParams, build_hamiltonian

__all__ = [
    "SectorBasis",
    "SectorState",
    "SectorEvolution",
    "SectorCapError",
    "build_sector_basis",
    "build_sector_hamiltonian",
    "state_from_orbitals",
    "initial_sector_state",
    "evolve_exact",
    "reduced_density_spectrum",
    "reduced_density_entropies",
    "apply_quadratic",
    "expectation_quadratic",
    "variance_quadratic",
    "correlation_matrix",
]

DEFAULT_DIM_CAP = 10**6


class SectorCapError(ValueError):
    """The requested sector exceeds the configured dimension cap."""


@dataclass(frozen=True)
class SectorBasis:
    """Occupation bitmasks of the P-particle sector, ascending, with index."""

    L: int
    P: int
    states: np.ndarray  # int64 masks, sorted ascending
    index: dict[int, int]

    @property
    def dim(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class SectorState:
    """Normalized amplitude vector over a :class:`SectorBasis`."""

    basis: SectorBasis
    amplitudes: np.ndarray


def build_sector_basis(L: int, P: int, dim_cap: int = DEFAULT_DIM_CAP) -> SectorBasis:
    if not (0 <= P <= L):
        raise ValueError(f"need 0 <= P <= L, got P={P}, L={L}")
    dim = comb(L, P)
    if dim > dim_cap:
        raise SectorCapError(f"sector dimension binom({L},{P})={dim} exceeds cap {dim_cap}")
    masks = sorted(
        sum(1 << p for p in occ) for occ in combinations(range(L), P)
    )
    states = np.asarray(masks, dtype=np.int64)
    return SectorBasis(L=L, P=P, states=states, index={m: i for i, m in enumerate(masks)})


def _parity_below(mask: int, site: int) -> int:
    """(-1)^(number of occupied sites with index < site)."""
    return 1 - 2 * (bin(mask & ((1 << site) - 1)).count("1") & 1)


def _apply_cdag_c(mask: int, i: int, j: int) -> tuple[int, int]:
    """c_i^dag c_j |mask> -> (new_mask, sign); sign 0 if annihilated."""
    if not (mask >> j) & 1:
        return 0, 0
    sign = _parity_below(mask, j)
    mask ^= 1 << j
    if (mask >> i) & 1:
        return 0, 0
    sign *= _parity_below(mask, i)
    mask |= 1 << i
    return mask, sign


def build_sector_hamiltonian(
    params: ModelParams,
    P: int,
    dim_cap: int = DEFAULT_DIM_CAP,
    basis: SectorBasis | None = None,
) -> sp.csr_matrix:
    """Sparse sector matrix of the full chain Hamiltonian.

    Row degree is at most L-1 (one entry per hopping bond touching an
    occupied/empty pair); the matrix is real symmetric.
    """
    if basis is None:
        basis = build_sector_basis(params.L, P, dim_cap)
    h = build_hamiltonian(params)
    bonds = [(i, i + 1, h.offdiag[i]) for i in range(params.L - 1)]
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    for a, mask in enumerate(basis.states):
        mask = int(mask)
        for i, j, t in bonds:
            if t == 0.0:
                continue
            # c_i^dag c_j moves a particle j -> i; h.c. handled by symmetry
            new, sign = _apply_cdag_c(mask, i, j)
            if sign:
                b = basis.index[new]
                rows.append(b)
                cols.append(a)
                vals.append(sign * t)
                rows.append(a)
                cols.append(b)
                vals.append(sign * t)
    H = sp.csr_matrix(
        (vals, (rows, cols)), shape=(basis.dim, basis.dim), dtype=float
    )
    H.sum_duplicates()
    return H


def state_from_orbitals(
    orbitals: list[int], L: int, dim_cap: int = DEFAULT_DIM_CAP
) -> SectorState:
    """Product state ``c_{o1}^dag c_{o2}^dag ... |0>`` for 0-based sites.

    The amplitude sign is the parity of the permutation that sorts the
    creation-operator order into ascending sites; swapping two orbitals
    flips it.
    """
    if len(set(orbitals)) != len(orbitals):
        raise ValueError("orbitals must be distinct")
    basis = build_sector_basis(L, len(orbitals), dim_cap)
    # count inversions of the given ordering relative to ascending
    inv = sum(
        1
        for a in range(len(orbitals))
        for b in range(a + 1, len(orbitals))
        if orbitals[a] > orbitals[b]
    )
    mask = sum(1 << o for o in orbitals)
    amps = np.zeros(basis.dim, dtype=complex)
    amps[basis.index[mask]] = -1.0 if inv & 1 else 1.0
    return SectorState(basis=basis, amplitudes=amps)


def initial_sector_state(params: ModelParams, dim_cap: int = DEFAULT_DIM_CAP) -> SectorState:
    """The filled-system quench state: sites 0..M-1 occupied."""
    return state_from_orbitals(list(range(params.M)), params.L, dim_cap)


class SectorEvolution:
    """Exact evolution operator in one sector, diagonalized once.

    Dense diagonalization for dimensions up to ``dense_cap`` (default 4000);
    larger sectors fall back to Krylov stepping (`expm_multiply`).
    """

    def __init__(self, H: sp.spmatrix, dense_cap: int = 4000) -> None:
        self.H = sp.csr_matrix(H)
        self.dim = H.shape[0]
        self.dense = self.dim <= dense_cap
        if self.dense:
            w, U = np.linalg.eigh(self.H.toarray())
            self._w, self._U = w, U
        else:  # pragma: no cover - not exercised by the small-instance suite
            self._w = self._U = None

    def evolve(self, psi0: np.ndarray, t: float) -> np.ndarray:
        if self.dense:
            phases = np.exp(-1j * self._w * t)
            return self._U @ (phases * (self._U.conj().T @ psi0))
        from scipy.sparse.linalg import expm_multiply  # pragma: no cover

        return expm_multiply(-1j * t * self.H, psi0)  # pragma: no cover


def evolve_exact(H: sp.spmatrix, psi0: SectorState, t: float) -> SectorState:
    """``exp(-i H t) |psi0>`` (convenience wrapper around SectorEvolution)."""
    ev = SectorEvolution(H)
    return SectorState(basis=psi0.basis, amplitudes=ev.evolve(psi0.amplitudes, t))


def _sector_sign(sys_bits: int, env_bits: int) -> int:
    """Sign of reordering an ascending product state into (sys ops)(env ops).

    Counts pairs (x in sys, y in env) with y < x; trivial (+1) whenever the
    system sites all precede the environment sites.
    """
    sign = 1
    s = sys_bits
    while s:
        x = s & (-s)
        below = env_bits & (x - 1)
        if bin(below).count("1") & 1:
            sign = -sign
        s ^= x
    return sign


def reduced_density_spectrum(state: SectorState, sys_sites: list[int]) -> np.ndarray:
    """Eigenvalues of the reduced density matrix of ``sys_sites`` (0-based).

    Exploits block-diagonality in the subsystem particle number.  Limited to
    small subsystems (2^|sys| amplitude groups).
    """
    if len(sys_sites) > 16:
        raise SectorCapError(f"subsystem too large: {len(sys_sites)} sites")
    sys_mask = 0
    for s in sys_sites:
        sys_mask |= 1 << s
    groups: dict[int, dict[int, list[tuple[int, complex]]]] = {}
    for mask, amp in zip(state.basis.states, state.amplitudes):
        if amp == 0:
            continue
        mask = int(mask)
        s_bits = mask & sys_mask
        e_bits = mask & ~sys_mask
        a = amp * _sector_sign(s_bits, e_bits)
        groups.setdefault(bin(s_bits).count("1"), {}).setdefault(e_bits, []).append(
            (s_bits, a)
        )
    eigs: list[np.ndarray] = []
    for _, by_env in groups.items():
        labels = sorted({s for entries in by_env.values() for s, _ in entries})
        pos = {s: i for i, s in enumerate(labels)}
        rho = np.zeros((len(labels), len(labels)), dtype=complex)
        for entries in by_env.values():
            v = np.zeros(len(labels), dtype=complex)
            for s_bits, a in entries:
                v[pos[s_bits]] = a
            rho += np.outer(v, v.conj())
        eigs.append(np.linalg.eigvalsh(rho).real)
    lam = np.concatenate(eigs) if eigs else np.array([1.0])
    lam = np.clip(lam, 0.0, None)
    return np.sort(lam)[::-1]


def reduced_density_entropies(
    state: SectorState, sys_sites: list[int], qs: tuple[float, ...] = (2.0, inf)
) -> tuple[float, dict[float, float]]:
    """Von Neumann entropy and Renyi entropies of the reduced state."""
    lam = reduced_density_spectrum(state, sys_sites)
    pos = lam[lam > 1e-300]
    s_vn = float(-(pos * np.log(pos)).sum())
    out: dict[float, float] = {}
    for q in qs:
        if q == inf:
            out[q] = float(-np.log(lam[0]))
        elif abs(q - 1.0) < 1e-12:
            out[q] = s_vn
        else:
            out[q] = float(np.log((pos**q).sum()) / (1.0 - q))
    return s_vn, out


def sector_operator(basis: SectorBasis, A: np.ndarray) -> sp.csr_matrix:
    """Sparse sector matrix of ``sum_ij A_ij c_i^dag c_j`` for symmetric A.

    Useful when the same quadratic operator is applied at many times.
    """
    nz = [
        (i, j, A[i, j]) for i in range(basis.L) for j in range(basis.L) if A[i, j] != 0
    ]
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    for a, mask in enumerate(basis.states):
        mask = int(mask)
        for i, j, val in nz:
            new, sign = _apply_cdag_c(mask, i, j)
            if sign:
                rows.append(basis.index[new])
                cols.append(a)
                vals.append(sign * val)
    Op = sp.csr_matrix((vals, (rows, cols)), shape=(basis.dim, basis.dim))
    Op.sum_duplicates()
    return Op


def apply_quadratic(
    state: SectorState, A: np.ndarray, drop_parity: bool = False
) -> np.ndarray:
    """Amplitudes of ``(sum_ij A_ij c_i^dag c_j) |state>``.

    ``drop_parity`` disables the Jordan-Wigner string (a deliberately
    corrupted sign convention used as a negative control in the
    oracle-check command).
    """
    basis = state.basis
    out = np.zeros_like(state.amplitudes)
    nz = [(i, j, A[i, j]) for i in range(basis.L) for j in range(basis.L) if A[i, j] != 0]
    for a, (mask, amp) in enumerate(zip(basis.states, state.amplitudes)):
        if amp == 0:
            continue
        mask = int(mask)
        for i, j, val in nz:
            new, sign = _apply_cdag_c(mask, i, j)
            if sign:
                if drop_parity:
                    sign = 1
                out[basis.index[new]] += sign * val * amp
    return out


def expectation_quadratic(state: SectorState, A: np.ndarray) -> float:
    """``<sum_ij A_ij c_i^dag c_j>`` for real symmetric A."""
    phi = apply_quadratic(state, A)
    return float(np.vdot(state.amplitudes, phi).real)


def variance_quadratic(state: SectorState, A: np.ndarray) -> float:
    """``<O^2> - <O>^2`` for the quadratic operator with coefficients A."""
    phi = apply_quadratic(state, A)
    mean = float(np.vdot(state.amplitudes, phi).real)
    return float(np.vdot(phi, phi).real) - mean**2


def correlation_matrix(state: SectorState, drop_parity: bool = False) -> np.ndarray:
    """Full one-particle correlation matrix C_ij = <c_i^dag c_j>."""
    basis = state.basis
    L = basis.L
    C = np.zeros((L, L), dtype=complex)
    amps = state.amplitudes
    for a, (mask, amp) in enumerate(zip(basis.states, amps)):
        if amp == 0:
            continue
        mask = int(mask)
        for j in range(L):
            if not (mask >> j) & 1:
                continue
            for i in range(L):
                new, sign = _apply_cdag_c(mask, i, j)
                if sign:
                    if drop_parity:
                        sign = 1
                    C[i, j] += sign * np.conj(amps[basis.index[new]]) * amp
    return C
