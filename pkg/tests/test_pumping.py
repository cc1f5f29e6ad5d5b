"""Tests for the 14-level optical-pumping model.

The coupling oracle is the exact rational table for an F=3 -> F'=3 line:
b(sigma+, m)^2 = (3-m)(m+4)/24 with negative sign, b(pi, m)^2 = m^2/12
with the sign of m, b(sigma-, m)^2 = (3+m)(4-m)/24 positive.  Summing the
three emission branches feeding any excited state gives exactly 1, which
is what makes the renormalized decay trace-preserving.
"""

import math
from fractions import Fraction

import numpy as np
import pytest

from eitconvert import ConvergenceError, SchemeError, StiffnessError, UnitSystem
from eitconvert.atoms import ZEEMAN_M
from eitconvert.pumping import (
    DensityMatrix14,
    PumpConfig,
    build_pump_generator,
    evolve_pumping,
    pump_couplings,
    steady_state,
)

ISO = np.full(7, 1.0 / 7.0)
FIG6_DURATION = UnitSystem().time_in(1.6)


class TestCouplings:
    def test_rational_oracle(self):
        b = pump_couplings()
        for i, m in enumerate(ZEEMAN_M):
            m = int(m)
            sq_r = Fraction((3 - m) * (m + 4), 24)
            sq_l = Fraction((3 + m) * (4 - m), 24)
            sq_pi = Fraction(m * m, 12)
            assert b["sigma+"][i] == pytest.approx(
                -math.sqrt(float(sq_r)), abs=1e-14)
            assert b["sigma-"][i] == pytest.approx(
                math.sqrt(float(sq_l)), abs=1e-14)
            assert abs(b["pi"][i]) == pytest.approx(
                math.sqrt(float(sq_pi)), abs=1e-14)

    def test_pi_transition_vanishes_at_zero(self):
        assert pump_couplings()["pi"][3] == 0.0

    def test_emission_branches_complete(self):
        # every excited state decays through exactly unit total strength
        b = pump_couplings()
        for mp in range(-3, 4):
            total = 0.0
            for name, q in (("sigma+", 1), ("pi", 0), ("sigma-", -1)):
                m = mp - q
                if abs(m) <= 3:
                    total += b[name][m + 3] ** 2
            assert total == pytest.approx(1.0, abs=1e-12)


class TestGenerator:
    def test_trace_free_and_hermiticity_preserving(self):
        gen = build_pump_generator(PumpConfig(Omega_r_pump=1.2,
                                              Omega_pi_pump=0.3,
                                              duration=1.0))
        rng = np.random.default_rng(3)
        for _ in range(5):
            M = (rng.standard_normal((14, 14))
                 + 1j * rng.standard_normal((14, 14)))
            rho = M @ M.conj().T
            rho /= rho.trace()
            d = gen(rho)
            assert abs(d.trace()) < 1e-13
            assert np.max(np.abs(d - d.conj().T)) < 1e-13

    def test_mixed_ground_state_is_dark_without_pump(self):
        gen = build_pump_generator(PumpConfig(duration=1.0))
        rho = DensityMatrix14.from_ground_populations(ISO).rho
        assert np.max(np.abs(gen(rho))) == 0.0

    def test_edge_state_dark_under_its_polarization(self):
        # sigma- cannot push m = -3 down, sigma+ cannot push m = +3 up
        lo = np.zeros(7)
        lo[0] = 1.0
        hi = np.zeros(7)
        hi[6] = 1.0
        gen_l = build_pump_generator(PumpConfig(Omega_l_pump=1.2,
                                                duration=1.0))
        gen_r = build_pump_generator(PumpConfig(Omega_r_pump=1.2,
                                                duration=1.0))
        assert np.max(np.abs(gen_l(
            DensityMatrix14.from_ground_populations(lo).rho))) == 0.0
        assert np.max(np.abs(gen_r(
            DensityMatrix14.from_ground_populations(hi).rho))) == 0.0

    def test_unique_kernel_is_stretched_state(self):
        """SVD null space of the full Liouvillian for a sigma+ pump."""
        gen = build_pump_generator(PumpConfig(Omega_r_pump=1.2,
                                              duration=1.0))
        n = 14
        L = np.zeros((n * n, n * n), dtype=complex)
        for a in range(n):
            for b in range(n):
                basis = np.zeros((n, n), dtype=complex)
                basis[a, b] = 1.0
                L[:, a * n + b] = gen(basis).ravel()
        sv = np.linalg.svd(L, compute_uv=False)
        assert int(np.sum(sv < 1e-10)) == 1
        _, _, vh = np.linalg.svd(L)
        kernel = vh[-1].conj().reshape(n, n)
        kernel = kernel / kernel.trace()
        target = np.zeros((n, n))
        target[6, 6] = 1.0
        assert np.max(np.abs(kernel - target)) < 1e-12


class TestEvolution:
    def test_pure_decay(self):
        rho = np.zeros((14, 14), dtype=complex)
        rho[10, 10] = 1.0
        cfg = PumpConfig(duration=8.0)
        traj = evolve_pumping(cfg, DensityMatrix14(rho=rho))
        assert traj.excited_fraction[-1] == pytest.approx(math.exp(-8.0),
                                                          rel=1e-5)
        total = traj.ground[-1].sum() + traj.excited_fraction[-1]
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_sigma_plus_fig_point(self):
        cfg = PumpConfig(Omega_r_pump=1.2, duration=FIG6_DURATION)
        traj = evolve_pumping(cfg, ISO)
        assert traj.ground[-1][6] > 0.98
        mz = traj.ground @ ZEEMAN_M
        assert np.all(np.diff(mz) >= -1e-12)

    def test_trace_and_positivity_along_trajectory(self):
        cfg = PumpConfig(Omega_r_pump=1.2, duration=FIG6_DURATION)
        traj = evolve_pumping(cfg, ISO)
        trace = traj.ground.sum(axis=1) + traj.excited_fraction
        assert np.max(np.abs(trace - 1.0)) < 1e-9
        assert traj.ground.min() > -1e-10
        assert traj.excited_fraction.min() > -1e-10

    def test_pi_pump_preserves_reflection_symmetry(self):
        cfg = PumpConfig(Omega_pi_pump=1.2, duration=FIG6_DURATION)
        traj = evolve_pumping(cfg, ISO)
        assert np.max(np.abs(traj.ground - traj.ground[:, ::-1])) < 1e-12
        # population gathers at m = 0
        assert np.argmax(traj.ground[-1]) == 3

    def test_unstable_step_rejected(self):
        cfg = PumpConfig(Omega_r_pump=1.2, duration=50.0)
        with pytest.raises(StiffnessError):
            evolve_pumping(cfg, ISO, n_samples=2, dt=5.0)

    def test_csv_round_trip(self, tmp_path):
        from eitconvert import read_csv
        cfg = PumpConfig(Omega_r_pump=1.2, duration=2.0)
        traj = evolve_pumping(cfg, ISO, n_samples=21)
        path = tmp_path / "pump.csv"
        traj.to_csv(path)
        header, cols = read_csv(path)
        assert header[0] == "t"
        assert header[-1] == "excited_fraction"
        assert len(header) == 9
        assert np.allclose(cols["t"], traj.t)
        assert np.allclose(cols["p_m+0"], traj.ground[:, 3])


class TestSteadyState:
    def test_sigma_plus_stretches(self):
        ss = steady_state(PumpConfig(Omega_r_pump=1.2, duration=1.0), ISO)
        assert ss.p[6] > 0.99

    def test_pi_concentrates_symmetrically(self):
        ss = steady_state(PumpConfig(Omega_pi_pump=1.2, duration=1.0), ISO)
        assert np.argmax(ss.p) == 3
        assert np.max(np.abs(ss.p - ss.p[::-1])) < 1e-9

    def test_zero_pump_returns_input(self):
        start = np.array([0.3, 0.0, 0.1, 0.2, 0.1, 0.0, 0.3])
        ss = steady_state(PumpConfig(duration=1.0), start)
        assert np.max(np.abs(ss.p - start)) < 1e-12

    def test_budget_exhaustion_raises(self):
        with pytest.raises(ConvergenceError):
            steady_state(PumpConfig(Omega_r_pump=1.2, duration=1.0), ISO,
                         tol=1e-16, max_time=3.0)


class TestValidation:
    def test_config_guards(self):
        with pytest.raises(SchemeError):
            PumpConfig(Omega_r_pump=-0.1, duration=1.0)
        with pytest.raises(SchemeError):
            PumpConfig(duration=0.0)
        with pytest.raises(SchemeError):
            PumpConfig(duration=1.0, Gamma=0.0)

    def test_density_matrix_guards(self):
        with pytest.raises(SchemeError):
            DensityMatrix14(rho=np.zeros((7, 7)))
        with pytest.raises(SchemeError):
            DensityMatrix14.from_ground_populations(np.ones(3))
        bad = np.zeros((14, 14), dtype=complex)
        bad[0, 0] = 0.5
        DensityMatrix14(rho=bad).validate(trace_tol=0.6)
        with pytest.raises(SchemeError):
            DensityMatrix14(rho=bad).validate()

    def test_initial_trace_checked(self):
        rho = np.zeros((14, 14), dtype=complex)
        rho[0, 0] = 0.7
        with pytest.raises(SchemeError):
            evolve_pumping(PumpConfig(duration=1.0), DensityMatrix14(rho=rho))
