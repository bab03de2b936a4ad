"""Weak-coupling analytics: disjoint resonant-level-model universal curves.

For ``g << sqrt(t_sys t_env)`` the system modes decouple into M independent
resonant level models.  In the wide flat band limit each mode occupation
decays exponentially, and for large M the mode sums become integrals over
``k in [0, pi]`` with

    n_k(tau) = exp(-tau sin^2 k),       tau = 4 pi rho g^2 t / M,

where ``rho = 1/(pi t_env)`` is the contact-site density of states of the
environment band centre, i.e. ``tau = 4 g^2 t / (M t_env)``.  Occupation,
entropies and the environment energy variance then collapse onto universal
curves of ``tau`` alone; plotted against the emitted fraction ``1 - m/M``
the coupling drops out entirely.

Frequency convention: the mode energies entering the variance curve are the
exact open-chain values ``omega_k = 2 t_sys cos k`` ("standard", the
default).  A "halved" switch uses ``omega_k = t_sys cos k`` instead, which
is a factor 4 smaller in the variance; full lattice numerics match the
standard convention (see the overlay tests), so that is the default.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import inf
from typing import TYPE_CHECKING, Iterable

import numpy as np
from scipy.integrate import quad
from scipy.special import i0e

if TYPE_CHECKING:  # pragma: no cover
    from .model import ModelParams

__all__ = [
    "CONVENTIONS",
    "UniversalCurve",
    "DisjointnessReport",
    "n_k",
    "m_frac",
    "m_frac_closed_form",
    "entropy_frac",
    "renyi_frac",
    "min_entropy_frac",
    "variance_frac",
    "tau_of_time",
    "time_of_tau",
    "universal_curve",
    "parametric_page_curve",
    "disjointness_report",
]

CONVENTIONS = ("standard", "halved")

_QUAD_OPTS = dict(epsabs=1e-12, epsrel=1e-12, limit=200)
_LN2 = float(np.log(2.0))


def n_k(k: float, tau: float) -> float:
    """Mode occupation exp(-tau sin^2 k) for k in [0, pi], tau >= 0."""
    return float(np.exp(-tau * np.sin(k) ** 2))


def _kink_points(tau: float) -> list[float] | None:
    """k values where n_k crosses 1/2 (integration break points)."""
    if tau <= _LN2:
        return None
    s = np.sqrt(_LN2 / tau)
    k1 = float(np.arcsin(s))
    return [k1, np.pi - k1]


def _band_average(integrand, tau: float, points: list[float] | None = None) -> float:
    val, _err = quad(integrand, 0.0, np.pi, points=points, **_QUAD_OPTS)
    return val / np.pi


def m_frac(tau: float) -> float:
    """Surviving particle fraction m(tau)/M = (1/pi) int_0^pi n_k dk."""
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    return _band_average(lambda k: n_k(k, tau), tau)


def m_frac_closed_form(tau: float) -> float:
    """Bessel identity m(tau)/M = exp(-tau/2) I_0(tau/2) (cross-check)."""
    return float(i0e(tau / 2.0))


def _mode_binary_entropy(n: float) -> float:
    if 0.0 < n < 1.0:
        return -(n * np.log(n) + (1.0 - n) * np.log1p(-n))
    return 0.0


def entropy_frac(tau: float) -> float:
    """Entanglement entropy per site S(tau)/M in nats."""
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    return _band_average(lambda k: _mode_binary_entropy(n_k(k, tau)), tau)


def renyi_frac(tau: float, q: float) -> float:
    """Renyi entropy per site; q -> 1 falls back to the von Neumann curve."""
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    if not q > 0:
        raise ValueError(f"Renyi order must be > 0, got {q}")
    if q == inf:
        return min_entropy_frac(tau)
    if abs(q - 1.0) < 1e-6:
        return entropy_frac(tau)

    def integrand(k: float) -> float:
        n = n_k(k, tau)
        a, b = max(n, 1.0 - n), min(n, 1.0 - n)
        if a <= 0.0:
            return 0.0
        return (q * np.log(a) + np.log1p((b / a) ** q)) / (1.0 - q)

    return _band_average(integrand, tau)


def min_entropy_frac(tau: float) -> float:
    """Min-entropy per site; the integrand has kinks where n_k = 1/2."""
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")

    def integrand(k: float) -> float:
        n = n_k(k, tau)
        return -np.log(max(n, 1.0 - n))

    return _band_average(integrand, tau, points=_kink_points(tau))


def variance_frac(tau: float, convention: str = "standard") -> float:
    """Environment energy variance per site, in units of t_sys^2.

    ``(pref/pi) int_0^pi cos^2 k n_k (1 - n_k) dk`` with pref = 4 for the
    standard mode energies 2 t_sys cos k and pref = 1 for the "halved"
    convention t_sys cos k.
    """
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    pref = 4.0 if convention == "standard" else 1.0

    def integrand(k: float) -> float:
        n = n_k(k, tau)
        return np.cos(k) ** 2 * n * (1.0 - n)

    return pref * _band_average(integrand, tau)


def tau_of_time(t: float, params: "ModelParams") -> float:
    """Dimensionless universal time tau = 4 g^2 t / (M t_env)."""
    return 4.0 * params.g**2 * t / (params.M * params.t_env)


def time_of_tau(tau: float, params: "ModelParams") -> float:
    """Inverse of :func:`tau_of_time`."""
    return tau * params.M * params.t_env / (4.0 * params.g**2)


@dataclass(frozen=True)
class UniversalCurve:
    """Sampled universal curves over a tau grid.

    ``emitted_frac = 1 - m_frac`` is the universal abscissa on which curves
    for different couplings collapse.  ``Sq_frac`` maps each requested Renyi
    order to its per-site curve; ``var_frac`` uses the stored convention.
    """

    tau: np.ndarray
    m_frac: np.ndarray
    emitted_frac: np.ndarray
    S_frac: np.ndarray
    Sq_frac: dict[float, np.ndarray]
    Smin_frac: np.ndarray
    var_frac: np.ndarray
    convention: str = "standard"


def universal_curve(
    taus: Iterable[float],
    qs: Iterable[float] = (2.0,),
    convention: str = "standard",
) -> UniversalCurve:
    """Evaluate all universal curves on a tau grid."""
    tau = np.asarray(list(taus), dtype=float)
    mf = np.array([m_frac(t) for t in tau])
    sf = np.array([entropy_frac(t) for t in tau])
    sq = {
        float(q): np.array([renyi_frac(t, q) for t in tau])
        for q in qs
        if q != inf
    }
    smin = np.array([min_entropy_frac(t) for t in tau])
    vf = np.array([variance_frac(t, convention) for t in tau])
    return UniversalCurve(
        tau=tau,
        m_frac=mf,
        emitted_frac=1.0 - mf,
        S_frac=sf,
        Sq_frac=sq,
        Smin_frac=smin,
        var_frac=vf,
        convention=convention,
    )


def parametric_page_curve(
    taus: Iterable[float],
    qs: Iterable[float] = (2.0,),
    convention: str = "standard",
) -> UniversalCurve:
    """Universal curves parameterized by the emitted fraction.

    Same data as :func:`universal_curve`; the tau grid must be dense enough
    that the emitted fraction (which is strictly increasing in tau) is
    sampled monotonically, ready for direct overlay with lattice numerics.
    """
    curve = universal_curve(taus, qs=qs, convention=convention)
    if np.any(np.diff(curve.emitted_frac) < 0):
        raise ValueError("tau grid must be ascending for a parametric curve")
    return curve


@dataclass(frozen=True)
class DisjointnessReport:
    """Per-mode check of the disjoint-environments condition.

    A mode is counted as violating when the spacing to its spectral
    neighbour is not large compared to its level width
    (``spacing/gamma < threshold``).  The analytic estimate for the fraction
    of such modes near the band edges is ``g^2 / (t_sys t_env)``.
    """

    k: np.ndarray
    spacing: np.ndarray
    gamma: np.ndarray
    ratio: np.ndarray
    threshold: float
    violating_fraction: float
    predicted_edge_fraction: float

    @property
    def violating_modes(self) -> np.ndarray:
        return self.k[self.ratio < self.threshold]


def disjointness_report(params: "ModelParams", threshold: float = 1.0) -> DisjointnessReport:
    """Evaluate |omega_{k+1} - omega_k| / Gamma_k for every system mode."""
    from .spectral import system_hybridizations

    hyb = system_hybridizations(params)
    omega = hyb.omega
    M = params.M
    if M == 1:
        # single level: the distance to the band edge is the natural scale
        spacing = np.array([2.0 * params.t_sys])
    else:
        gaps = np.abs(np.diff(omega))
        spacing = np.minimum(
            np.concatenate([gaps[:1], gaps]), np.concatenate([gaps, gaps[-1:]])
        )
    ratio = np.full(M, np.inf)
    np.divide(spacing, hyb.gamma, out=ratio, where=hyb.gamma > 0)
    violating = float(np.mean(ratio < threshold))
    return DisjointnessReport(
        k=hyb.k,
        spacing=spacing,
        gamma=hyb.gamma,
        ratio=ratio,
        threshold=threshold,
        violating_fraction=violating,
        predicted_edge_fraction=params.g**2 / (params.t_sys * params.t_env),
    )
