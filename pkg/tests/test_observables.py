import numpy as np
import pytest

from pagecurve import (
    ModelParams,
    OccupationSpectrum,
    PropagatedFrame,
    Propagator,
    boundary_current,
    build_hamiltonian,
    eigendecompose,
    environment_block,
    env_energy_mean_and_variance,
    hilbert_bound,
    initial_occupation,
    min_entropy,
    occupation_spectrum,
    particle_number,
    propagate,
    renyi_entropy,
    total_energy_variance_t0,
    von_neumann_entropy,
)
from pagecurve.observables import (
    FrameIntegrityError,
    entanglement_hamiltonian,
    raw_occupations,
)


def full_frame(params, t):
    spec = eigendecompose(build_hamiltonian(params))
    return propagate(spec, initial_occupation(params), t, n_system=params.M)


def spectrum(*nu):
    return OccupationSpectrum(nu=np.asarray(nu, dtype=float))


class TestOccupationSpectrum:
    def test_filled_system_at_t0(self):
        sp = occupation_spectrum(full_frame(ModelParams(M=3, N=4, g=0.5), 0.0))
        np.testing.assert_allclose(sp.nu, np.ones(3), atol=1e-12)

    def test_two_site_half_transfer(self):
        g = 0.8
        fr = full_frame(ModelParams(M=1, N=1, g=g), (np.pi / 4) / g)
        sp = occupation_spectrum(fr)
        assert sp.nu[0] == pytest.approx(0.5, abs=1e-12)

    def test_trace_identity(self):
        fr = full_frame(ModelParams(M=4, N=36, g=0.6, t_env=2.0), 7.7)
        sp = occupation_spectrum(fr)
        assert sp.nu.sum() == pytest.approx(np.linalg.norm(fr.X) ** 2, abs=1e-10)

    def test_sorted_descending_in_unit_interval(self):
        fr = full_frame(ModelParams(M=5, N=45, g=0.5, t_env=4.0), 11.0)
        sp = occupation_spectrum(fr)
        assert np.all(np.diff(sp.nu) <= 0)
        assert sp.nu.min() >= 0.0 and sp.nu.max() <= 1.0

    def test_corrupted_frame_aborts(self):
        bad = PropagatedFrame(time=0.0, X=np.eye(2) * 1.1, Y=None)
        with pytest.raises(FrameIntegrityError):
            occupation_spectrum(bad)

    def test_raw_occupations_within_roundoff(self):
        fr = full_frame(ModelParams(M=6, N=90, g=0.45, t_env=4.0), 23.0)
        raw = raw_occupations(fr)
        assert raw.min() >= -1e-9 and raw.max() <= 1 + 1e-9


class TestEntropies:
    def test_pure_product(self):
        assert von_neumann_entropy(spectrum(1.0, 1.0, 1.0)) == 0.0

    def test_maximally_mixed_mode(self):
        assert von_neumann_entropy(spectrum(0.5)) == pytest.approx(np.log(2), abs=1e-12)

    def test_two_mode_value(self):
        # 2 * (-0.9 ln 0.9 - 0.1 ln 0.1)
        s = von_neumann_entropy(spectrum(0.9, 0.1))
        assert s == pytest.approx(0.650166, abs=5e-7)

    def test_renyi_half_mode(self):
        assert renyi_entropy(spectrum(0.5), 2.0) == pytest.approx(np.log(2), abs=1e-12)

    def test_renyi_pure(self):
        for q in (0.5, 2.0, 7.0):
            assert renyi_entropy(spectrum(1.0), q) == pytest.approx(0.0, abs=1e-12)

    def test_renyi_q2_value(self):
        assert renyi_entropy(spectrum(0.9), 2.0) == pytest.approx(-np.log(0.82), abs=1e-12)

    def test_renyi_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            renyi_entropy(spectrum(0.5), 0.0)
        with pytest.raises(ValueError):
            renyi_entropy(spectrum(0.5), -2.0)

    def test_renyi_continuity_limits(self):
        sp = spectrum(0.93, 0.4, 0.02)
        assert renyi_entropy(sp, 1.0) == pytest.approx(von_neumann_entropy(sp), abs=1e-12)
        assert renyi_entropy(sp, 1.0 + 1e-9) == pytest.approx(
            von_neumann_entropy(sp), abs=1e-6
        )
        assert renyi_entropy(sp, np.inf) == pytest.approx(min_entropy(sp), abs=1e-12)
        assert renyi_entropy(sp, 600.0) == pytest.approx(min_entropy(sp), abs=1e-2)

    def test_min_entropy_values(self):
        assert min_entropy(spectrum(0.5)) == pytest.approx(np.log(2), abs=1e-12)
        assert min_entropy(spectrum(1.0, 0.0)) == 0.0
        assert min_entropy(spectrum(0.75)) == pytest.approx(-np.log(0.75), abs=1e-12)

    def test_monotone_family(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            sp = spectrum(*rng.uniform(0, 1, size=6))
            s_min = min_entropy(sp)
            s2 = renyi_entropy(sp, 2.0)
            s1 = von_neumann_entropy(sp)
            assert s_min <= s2 + 1e-12 <= s1 + 1e-12

    def test_entanglement_hamiltonian_diagnostic(self):
        eps = entanglement_hamiltonian(spectrum(1.0, 0.5, 0.25))
        assert eps[1] == pytest.approx(0.0, abs=1e-12)
        assert eps[2] == pytest.approx(np.log(3), abs=1e-12)
        assert np.isfinite(eps).all()


class TestParticleNumber:
    def test_initial(self):
        assert particle_number(full_frame(ModelParams(M=3, N=3, g=0.5), 0.0)) == pytest.approx(3.0)

    def test_full_rabi_transfer(self):
        g = 0.6
        fr = full_frame(ModelParams(M=1, N=1, g=g), (np.pi / 2) / g)
        assert particle_number(fr) == pytest.approx(0.0, abs=1e-12)

    def test_long_time_average_approaches_equilibrium(self):
        # The infinite-time average of m(t) equals the dephased
        # (diagonal-ensemble) value sum_alpha s_alpha^2 with s_alpha the
        # system weight of eigenmode alpha; that value is O(M^2/(M+N)) and
        # halves when the environment is doubled.
        def dephased(p):
            spec = eigendecompose(build_hamiltonian(p))
            s = (spec.eigenvectors[: p.M, :] ** 2).sum(axis=0)
            return float((s * s).sum()), spec

        p = ModelParams(M=2, N=200, g=0.5, t_env=1.0)
        m_deph, spec = dephased(p)
        occ = initial_occupation(p)
        times = np.linspace(300, 4300, 800)
        ms = [particle_number(propagate(spec, occ, t, n_system=p.M)) for t in times]
        assert np.mean(ms) == pytest.approx(m_deph, rel=0.05)
        # equipartition estimate is right in order and scaling, not prefactor
        estimate = p.M**2 / p.L
        assert estimate < m_deph < 6 * estimate
        m_deph2, _ = dephased(ModelParams(M=2, N=400, g=0.5, t_env=1.0))
        assert m_deph2 == pytest.approx(m_deph / 2, rel=0.10)


class TestBoundaryCurrent:
    def test_constant_series(self):
        np.testing.assert_allclose(boundary_current(np.full(9, 2.5), 0.1), 0.0, atol=1e-14)

    def test_exponential_decay_accuracy(self):
        gamma, dt = 0.3, 0.01
        t = np.arange(0, 1, dt)
        m = 5 * np.exp(-gamma * t)
        cur = boundary_current(m, dt)
        np.testing.assert_allclose(cur[1:-1], -gamma * m[1:-1], atol=5 * dt**2)

    def test_identical_frames_zero_interior(self):
        cur = boundary_current(np.array([1.0, 1.0, 1.0, 2.0]), 1.0)
        assert cur[1] == 0.0

    def test_too_short(self):
        with pytest.raises(ValueError):
            boundary_current(np.array([1.0, 2.0]), 0.5)


class TestHilbertBound:
    def test_half_filling(self):
        assert hilbert_bound(50.0, 100) == pytest.approx(100 * np.log(2), rel=1e-12)

    def test_limits(self):
        assert hilbert_bound(0.0, 10) == 0.0
        assert hilbert_bound(10.0, 10) == 0.0

    def test_quarter_filling(self):
        expect = 100 * (0.25 * np.log(4) + 0.75 * np.log(4 / 3))
        assert hilbert_bound(25.0, 100) == pytest.approx(expect, rel=1e-12)
        assert expect == pytest.approx(56.23, abs=0.01)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            hilbert_bound(-1.0, 10)


class TestEnvEnergy:
    def test_vacuum_environment(self):
        p = ModelParams(M=2, N=5, g=0.5, t_env=2.0)
        mean, var = env_energy_mean_and_variance(full_frame(p, 0.0), environment_block(p))
        assert mean == pytest.approx(0.0, abs=1e-12)
        assert var == pytest.approx(0.0, abs=1e-12)

    def test_single_particle_in_env_eigenmode(self):
        # hand-built frame: one particle occupying one environment eigenmode
        from pagecurve import uniform_chain_modes

        N, t_env = 6, 2.0
        modes = uniform_chain_modes(N, t_env)
        k = 2
        Y = modes.eigenvectors[:, [k]].astype(complex)
        fr = PropagatedFrame(time=0.0, X=np.zeros((1, 1), dtype=complex), Y=Y)
        h_env = environment_block(ModelParams(M=1, N=N, g=0.5, t_env=t_env))
        mean, var = env_energy_mean_and_variance(fr, h_env)
        assert mean == pytest.approx(modes.eigenvalues[k], abs=1e-12)
        assert var == pytest.approx(0.0, abs=1e-10)

    def test_dimension_mismatch(self):
        p = ModelParams(M=2, N=5, g=0.5)
        with pytest.raises(ValueError, match="dimension"):
            env_energy_mean_and_variance(
                full_frame(p, 1.0), environment_block(ModelParams(M=2, N=4, g=0.5))
            )

    def test_system_only_frame_rejected(self):
        p = ModelParams(M=2, N=5, g=0.5)
        fr = Propagator(p).system_frame(1.0)
        with pytest.raises(ValueError, match="environment"):
            env_energy_mean_and_variance(fr, environment_block(p))

    def test_variance_nonnegative_along_run(self):
        p = ModelParams(M=3, N=40, g=0.7, t_env=2.0)
        prop = Propagator(p)
        h_env = environment_block(p)
        for t in np.linspace(0, 60, 13):
            _, var = env_energy_mean_and_variance(prop.frame(t), h_env)
            assert var >= 0.0


class TestTotalEnergyVariance:
    def test_value_is_g_squared(self):
        assert total_energy_variance_t0(ModelParams(M=3, N=7, g=0.5)) == pytest.approx(0.25)
        assert total_energy_variance_t0(ModelParams(M=1, N=1, g=0.7)) == pytest.approx(0.49)

    def test_decoupled(self):
        assert total_energy_variance_t0(ModelParams(M=2, N=2, g=0.0)) == 0.0


class TestPurityAndConstancy:
    def test_entropy_from_both_blocks_agrees(self):
        # global purity: system-block and environment-block entropies match
        p = ModelParams(M=3, N=8, g=0.6, t_env=1.5)
        fr = full_frame(p, 3.1)
        sp_sys = occupation_spectrum(fr)
        C_env = fr.Y @ fr.Y.conj().T
        nu_env = np.clip(np.linalg.eigvalsh(C_env).real, 0.0, 1.0)
        s_env = von_neumann_entropy(OccupationSpectrum(nu=nu_env))
        assert von_neumann_entropy(sp_sys) == pytest.approx(s_env, abs=1e-8)

    def test_decoupled_observables_constant(self):
        p = ModelParams(M=3, N=6, g=0.0, t_env=2.0)
        h_env = environment_block(p)
        for t in (0.0, 5.0, 40.0):
            fr = full_frame(p, t)
            assert von_neumann_entropy(occupation_spectrum(fr)) == pytest.approx(0.0, abs=1e-10)
            assert particle_number(fr) == pytest.approx(3.0, abs=1e-10)
            mean, var = env_energy_mean_and_variance(fr, h_env)
            assert mean == pytest.approx(0.0, abs=1e-10)
            assert var == pytest.approx(0.0, abs=1e-10)

    def test_entropy_below_page_value(self):
        p = ModelParams(M=4, N=80, g=0.5, t_env=4.0)
        prop = Propagator(p)
        for t in np.linspace(0, 120, 25):
            s = von_neumann_entropy(occupation_spectrum(prop.system_frame(t)))
            assert s <= p.M * np.log(2) * (1 + 1e-9)
