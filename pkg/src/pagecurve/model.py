"""Chain geometry, parameter validation and the single-particle Hamiltonian.

The physical setup is a free-fermion chain of ``L = M + N`` sites: the first
``M`` sites form the "system", the remaining ``N`` sites the "environment".
Nearest-neighbour hopping is ``t_sys`` inside the system, ``t_env`` inside the
environment, and the single boundary bond carries the system-environment
coupling ``g``.  At ``t = 0`` the system is completely filled and the
environment empty; the subsequent emptying of the system produces Page-curve
entanglement dynamics.

Sites are labelled 1..L in documentation and error messages (system sites
1..M, environment sites M+1..L).  Arrays are 0-based internally.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spectral import TridiagonalMatrix

__all__ = [
    "ModelParams",
    "InitialOccupation",
    "ParameterError",
    "ScenarioDiagnostics",
    "build_hamiltonian",
    "environment_block",
    "initial_occupation",
    "validate_scenario",
]


class ParameterError(ValueError):
    """Raised when a model parameter violates its constraints."""


@dataclass(frozen=True)
class ModelParams:
    """Complete experimental configuration of the chain.

    All energies are dimensionless multiples of the system hopping; the
    default ``t_sys = 1`` fixes the overall energy scale.
    """

    M: int
    N: int
    g: float
    t_sys: float = 1.0
    t_env: float = 1.0

    def __post_init__(self) -> None:
        if int(self.M) != self.M or self.M < 1:
            raise ParameterError(f"M must be an integer >= 1, got {self.M}")
        if int(self.N) != self.N or self.N < 1:
            raise ParameterError(f"N must be an integer >= 1, got {self.N}")
        if not self.t_sys > 0:
            raise ParameterError(f"t_sys must be > 0, got {self.t_sys}")
        if not self.t_env > 0:
            raise ParameterError(f"t_env must be > 0, got {self.t_env}")
        if self.g < 0:
            raise ParameterError(f"g must be >= 0, got {self.g}")

    @property
    def L(self) -> int:
        """Total single-particle dimension M + N."""
        return self.M + self.N


@dataclass(frozen=True)
class InitialOccupation:
    """Ordered 1-based site labels that are filled at t = 0."""

    occupied: tuple[int, ...]
    L: int

    def __post_init__(self) -> None:
        occ = self.occupied
        if len(set(occ)) != len(occ):
            raise ParameterError("occupied sites contain duplicates")
        if occ and (min(occ) < 1 or max(occ) > self.L):
            raise ParameterError(
                f"occupied sites must lie in 1..{self.L}, got {min(occ)}..{max(occ)}"
            )

    @property
    def rows(self) -> np.ndarray:
        """0-based row indices of the occupied sites."""
        return np.asarray(self.occupied, dtype=np.intp) - 1


def build_hamiltonian(params: ModelParams) -> TridiagonalMatrix:
    """Single-particle hopping matrix of the full chain.

    The matrix has zero diagonal and off-diagonal sequence
    ``(t_sys, ..., t_sys, g, t_env, ..., t_env)`` with M-1 system bonds,
    one boundary bond and N-1 environment bonds.  Entry (i, j) is the
    coefficient of a_i^dagger a_j in the Hamiltonian.
    """
    L = params.L
    off = np.empty(L - 1, dtype=float)
    off[: params.M - 1] = params.t_sys
    off[params.M - 1] = params.g
    off[params.M :] = params.t_env
    return TridiagonalMatrix(diag=np.zeros(L), offdiag=off)


def environment_block(params: ModelParams) -> TridiagonalMatrix:
    """The N x N environment block of the hopping matrix (no boundary bond)."""
    return TridiagonalMatrix(
        diag=np.zeros(params.N),
        offdiag=np.full(max(params.N - 1, 0), params.t_env, dtype=float),
    )


def initial_occupation(params: ModelParams) -> InitialOccupation:
    """System completely filled, environment empty: sites 1..M."""
    return InitialOccupation(occupied=tuple(range(1, params.M + 1)), L=params.L)


@dataclass(frozen=True)
class ScenarioDiagnostics:
    """Finite-size and coupling-regime diagnostics for a planned run.

    ``t_return`` estimates when particles reflected off the far end of the
    environment first re-enter the system: round-trip distance 2N at the
    maximal group velocity 2 t_env of the environment band.
    """

    t_return: float
    t_max: float | None
    reflection_safe: bool | None
    emptying_ratio: float  # N / M^2
    weak_coupling_ratio: float  # g^2 / (t_sys * t_env)
    warnings: tuple[str, ...] = field(default=())


def validate_scenario(params: ModelParams, t_max: float | None = None) -> ScenarioDiagnostics:
    """Report whether a run of length ``t_max`` is finite-size clean.

    Never raises; everything is advisory.  A run is flagged when reflected
    particles can return before ``t_max`` or when ``N`` is too small compared
    to ``M^2`` for the system to empty out.
    """
    t_return = params.N / params.t_env
    emptying = params.N / params.M**2
    weak = params.g**2 / (params.t_sys * params.t_env)

    warnings: list[str] = []
    reflection_safe: bool | None = None
    if t_max is not None:
        reflection_safe = t_max < t_return
        if not reflection_safe:
            warnings.append(
                f"t_max={t_max:g} exceeds the reflection-return estimate "
                f"t_ret~N/t_env={t_return:g}; late-time data will be contaminated"
            )
    if emptying < 1.0:
        warnings.append(
            f"N/M^2={emptying:.3g} < 1: the system will not empty out "
            f"(residual filling ~ M^2/(M+N))"
        )
    if weak >= 1.0:
        warnings.append(
            f"g^2/(t_sys*t_env)={weak:.3g} >= 1: outside the weak-coupling "
            f"regime; analytic universal curves will not apply"
        )
    return ScenarioDiagnostics(
        t_return=t_return,
        t_max=t_max,
        reflection_safe=reflection_safe,
        emptying_ratio=emptying,
        weak_coupling_ratio=weak,
        warnings=tuple(warnings),
    )
