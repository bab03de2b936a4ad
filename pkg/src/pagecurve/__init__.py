"""Exact Page-curve entanglement dynamics of a free-fermion chain.

A filled chain of M sites empties into a large empty environment of N sites
through a single bond.  The package computes the exact time evolution of the
one-particle correlation matrix, every entanglement entropy of the
system/environment cut, the environment energy statistics, and the
weak-coupling analytic universal curves, all validated against a brute-force
Fock-space oracle on small instances.
"""

from .model import (
    InitialOccupation,
    ModelParams,
    ParameterError,
    ScenarioDiagnostics,
    build_hamiltonian,
    environment_block,
    initial_occupation,
    validate_scenario,
)
from .spectral import (
    Hybridizations,
    SpectralDecomposition,
    TridiagonalMatrix,
    contact_density_of_states,
    eigendecompose,
    eigendecompose_rows,
    system_hybridizations,
    uniform_chain_modes,
)
from .evolve import PropagatedFrame, Propagator, evolve_grid, propagate
from .observables import (
    ObservableRecord,
    OccupationSpectrum,
    boundary_current,
    env_energy_mean_and_variance,
    hilbert_bound,
    min_entropy,
    occupation_spectrum,
    particle_number,
    renyi_entropy,
    total_energy_variance_t0,
    von_neumann_entropy,
)
from . import oracle, rlm

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ModelParams",
    "InitialOccupation",
    "ParameterError",
    "ScenarioDiagnostics",
    "build_hamiltonian",
    "environment_block",
    "initial_occupation",
    "validate_scenario",
    "TridiagonalMatrix",
    "SpectralDecomposition",
    "Hybridizations",
    "contact_density_of_states",
    "eigendecompose",
    "eigendecompose_rows",
    "uniform_chain_modes",
    "system_hybridizations",
    "PropagatedFrame",
    "Propagator",
    "propagate",
    "evolve_grid",
    "OccupationSpectrum",
    "ObservableRecord",
    "occupation_spectrum",
    "von_neumann_entropy",
    "renyi_entropy",
    "min_entropy",
    "particle_number",
    "boundary_current",
    "hilbert_bound",
    "env_energy_mean_and_variance",
    "total_energy_variance_t0",
    "oracle",
    "rlm",
]
