"""Zeeman optical pumping on the F=3 -> F'=3 line.

Fourteen levels: seven ground states |g,m> and seven excited states |e,m>
with m = -3..3.  Pump fields of the three polarizations drive |g,m> ->
|e,m+q> (q = +1, 0, -1 for sigma+, pi, sigma-) with Rabi frequency
Omega_q b_{q,m}, where b is the coupling coefficient of the line.  Decay
is a Lindblad dissipator built from the same coefficients, renormalized so
every excited state relaxes back into the F=3 manifold at the full rate
Gamma; the three emission channels then branch proportionally to b^2 and
the evolution preserves trace and positivity by construction.

The m = 0 pi transition vanishes on an F -> F' = F line, which is what
makes pi pumping pile population up at m = 0 and sigma+ pumping push it to
the m = +3 edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arrayio import write_csv
from .atoms import ZEEMAN_M, PopulationDistribution
from .cg import clebsch_gordan
from .errors import ConvergenceError, SchemeError, StiffnessError

__all__ = [
    "PumpConfig",
    "DensityMatrix14",
    "PumpTrajectory",
    "pump_couplings",
    "build_pump_generator",
    "evolve_pumping",
    "steady_state",
]

_N_G = 7
_N = 14
_POLARIZATIONS = {"sigma+": 1, "pi": 0, "sigma-": -1}


def pump_couplings() -> dict:
    """Coupling coefficients b_{q,m} = <3,m;1,q|3,m+q> per polarization.

    Arrays are indexed by m = -3..3 (ground-state label); entries whose
    target m+q falls outside the manifold are zero.
    """
    out = {}
    for name, q in _POLARIZATIONS.items():
        b = np.zeros(_N_G)
        for i, m in enumerate(ZEEMAN_M):
            if abs(m + q) <= 3:
                b[i] = clebsch_gordan(3, m, 1, q, 3, m + q)
        out[name] = b
    return out


@dataclass(frozen=True)
class PumpConfig:
    """Pump strengths (in units of Gamma), run length, and decay rate."""

    Omega_r_pump: float = 0.0
    Omega_pi_pump: float = 0.0
    Omega_l_pump: float = 0.0
    duration: float = 10.0
    Gamma: float = 1.0
    gamma_gg: float = 0.0

    def __post_init__(self):
        for name in ("Omega_r_pump", "Omega_pi_pump", "Omega_l_pump"):
            if getattr(self, name) < 0:
                raise SchemeError(f"{name} must be nonnegative")
        if not self.duration > 0:
            raise SchemeError("duration must be positive")
        if not self.Gamma > 0:
            raise SchemeError("Gamma must be positive")
        if self.gamma_gg < 0:
            raise SchemeError("gamma_gg must be nonnegative")

    @property
    def rabi(self) -> dict:
        """Absolute Rabi frequencies keyed by polarization name."""
        return {
            "sigma+": self.Omega_r_pump * self.Gamma,
            "pi": self.Omega_pi_pump * self.Gamma,
            "sigma-": self.Omega_l_pump * self.Gamma,
        }


@dataclass(frozen=True)
class DensityMatrix14:
    """State of the 14-level system with its sanity checks.

    Basis order: |g,-3>..|g,3>, |e,-3>..|e,3>.
    """

    rho: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        if rho.shape != (_N, _N):
            raise SchemeError(f"expected a 14x14 matrix, got {rho.shape}")
        object.__setattr__(self, "rho", rho)

    @classmethod
    def from_ground_populations(cls, populations) -> "DensityMatrix14":
        if isinstance(populations, PopulationDistribution):
            populations = populations.p
        p = np.asarray(populations, dtype=float)
        if p.shape != (_N_G,):
            raise SchemeError(f"expected 7 ground populations, got {p.shape}")
        rho = np.zeros((_N, _N), dtype=complex)
        rho[np.arange(_N_G), np.arange(_N_G)] = p
        return cls(rho=rho)

    @property
    def ground_populations(self) -> np.ndarray:
        return self.rho.diagonal().real[:_N_G].copy()

    @property
    def excited_populations(self) -> np.ndarray:
        return self.rho.diagonal().real[_N_G:].copy()

    @property
    def trace(self) -> float:
        return float(self.rho.trace().real)

    def validate(self, trace_tol: float = 1e-9, herm_tol: float = 1e-12,
                 pop_floor: float = -1e-12) -> None:
        if abs(self.trace - 1.0) > trace_tol:
            raise SchemeError(f"trace {self.trace} deviates from 1 "
                              f"beyond {trace_tol}")
        if np.max(np.abs(self.rho - self.rho.conj().T)) > herm_tol:
            raise SchemeError("matrix is not Hermitian")
        if self.rho.diagonal().real.min() < pop_floor:
            raise SchemeError("negative population beyond the numeric floor")


def _lowering_operators(Gamma: float) -> list[np.ndarray]:
    """sqrt(Gamma)-scaled emission operators, one per polarization."""
    ops = []
    for name, q in _POLARIZATIONS.items():
        b = pump_couplings()[name]
        A = np.zeros((_N, _N))
        for i, m in enumerate(ZEEMAN_M):
            if abs(m + q) <= 3:
                A[i, _N_G + i + q] = b[i]
        ops.append(math.sqrt(Gamma) * A)
    return ops


def build_pump_generator(config: PumpConfig):
    """Right-hand side drho/dt for the pumped 14-level system.

    Returns a closure rho -> -i[H, rho] + sum_k (A_k rho A_k^+
    - {A_k^+ A_k, rho} / 2) with the pump Hamiltonian in the rotating
    frame at resonance and the renormalized decay channels; an optional
    pure dephasing gamma_gg acts on ground-ground coherences.
    """
    couplings = pump_couplings()
    H = np.zeros((_N, _N), dtype=complex)
    for name, q in _POLARIZATIONS.items():
        Om = config.rabi[name]
        if Om == 0.0:
            continue
        b = couplings[name]
        for i, m in enumerate(ZEEMAN_M):
            if abs(m + q) <= 3:
                H[_N_G + i + q, i] += -0.5 * Om * b[i]
    H = H + H.conj().T

    lowering = _lowering_operators(config.Gamma)
    # sum A^+A is Gamma times the excited projector; precompute half of it
    half_aa = 0.5 * sum(A.conj().T @ A for A in lowering)
    gamma_gg = config.gamma_gg

    def generator(rho: np.ndarray) -> np.ndarray:
        out = -1j * (H @ rho - rho @ H)
        out -= half_aa @ rho + rho @ half_aa
        for A in lowering:
            out += A @ rho @ A.conj().T
        if gamma_gg > 0.0:
            gg = rho[:_N_G, :_N_G]
            damp = gamma_gg * (gg - np.diag(gg.diagonal()))
            out[:_N_G, :_N_G] -= damp
        return out

    return generator


@dataclass(frozen=True)
class PumpTrajectory:
    """Uniformly sampled populations along a pumping run."""

    t: np.ndarray
    ground: np.ndarray          # (n_samples, 7)
    excited_fraction: np.ndarray
    config: PumpConfig = field(repr=False, default=None)

    @property
    def final(self) -> PopulationDistribution:
        p = self.ground[-1]
        return PopulationDistribution(p=p / p.sum())

    def distribution_at(self, index: int) -> PopulationDistribution:
        p = self.ground[index]
        return PopulationDistribution(p=p / p.sum())

    def to_csv(self, path) -> None:
        cols = [self.t]
        header = ["t"]
        for i, m in enumerate(ZEEMAN_M):
            header.append(f"p_m{m:+d}")
            cols.append(self.ground[:, i])
        header.append("excited_fraction")
        cols.append(self.excited_fraction)
        write_csv(path, header, cols)


def _rk4_step(generator, rho: np.ndarray, dt: float) -> np.ndarray:
    k1 = generator(rho)
    k2 = generator(rho + 0.5 * dt * k1)
    k3 = generator(rho + 0.5 * dt * k2)
    k4 = generator(rho + dt * k3)
    return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _max_rate(config: PumpConfig) -> float:
    return max(config.Gamma, *(abs(v) for v in config.rabi.values()), 1e-30)


def evolve_pumping(config: PumpConfig, initial,
                   n_samples: int = 201,
                   dt: float | None = None) -> PumpTrajectory:
    """Integrate the pumped system over config.duration.

    initial may be a PopulationDistribution, a 7-array of ground
    populations, or a DensityMatrix14.  Samples are taken on a uniform
    grid of n_samples points including both endpoints.  A trace drift
    beyond 1e-6 aborts with StiffnessError, since the generator conserves
    trace exactly and any drift is integration error.
    """
    if isinstance(initial, DensityMatrix14):
        state = initial
    else:
        state = DensityMatrix14.from_ground_populations(initial)
    if abs(state.trace - 1.0) > 1e-9:
        raise SchemeError("initial state must have unit trace")
    if n_samples < 2:
        raise SchemeError("n_samples must be at least 2")

    generator = build_pump_generator(config)
    if dt is None:
        dt = 0.05 / _max_rate(config)
    t_samples = np.linspace(0.0, config.duration, n_samples)
    ground = np.empty((n_samples, _N_G))
    excited = np.empty(n_samples)

    rho = state.rho.copy()
    ground[0] = rho.diagonal().real[:_N_G]
    excited[0] = rho.diagonal().real[_N_G:].sum()
    t_now = 0.0
    for k in range(1, n_samples):
        t_target = t_samples[k]
        n_sub = max(1, math.ceil((t_target - t_now) / dt - 1e-12))
        h = (t_target - t_now) / n_sub
        for _ in range(n_sub):
            rho = _rk4_step(generator, rho, h)
        t_now = t_target
        tr = rho.trace().real
        if not abs(tr - 1.0) <= 1e-6:
            # written so a NaN trace (diverged step) also lands here
            raise StiffnessError(
                f"trace drifted to {tr:.8f} by t = {t_now:.3f}; "
                f"reduce dt (currently {dt:.3e})")
        ground[k] = rho.diagonal().real[:_N_G]
        excited[k] = rho.diagonal().real[_N_G:].sum()

    return PumpTrajectory(t=t_samples, ground=ground,
                          excited_fraction=excited, config=config)


def steady_state(config: PumpConfig, initial,
                 tol: float = 1e-8,
                 max_time: float | None = None) -> PopulationDistribution:
    """Pump until the ground populations stop changing.

    Convergence: the maximum ground-population change over one unit of
    Gamma^-1 falls below tol.  Raises ConvergenceError when max_time
    (default 2000 Gamma^-1) passes first.
    """
    if isinstance(initial, DensityMatrix14):
        rho = initial.rho.copy()
    else:
        rho = DensityMatrix14.from_ground_populations(initial).rho.copy()
    if max_time is None:
        max_time = 2000.0 / config.Gamma

    generator = build_pump_generator(config)
    dt = 0.05 / _max_rate(config)
    window = 1.0 / config.Gamma
    n_sub = max(1, math.ceil(window / dt))
    h = window / n_sub

    t_now = 0.0
    p_prev = rho.diagonal().real[:_N_G].copy()
    while t_now < max_time:
        for _ in range(n_sub):
            rho = _rk4_step(generator, rho, h)
        t_now += window
        p_now = rho.diagonal().real[:_N_G]
        if np.max(np.abs(p_now - p_prev)) < tol:
            p = np.maximum(p_now, 0.0)
            return PopulationDistribution(p=p / p.sum())
        p_prev = p_now.copy()
    raise ConvergenceError(
        f"pumping did not settle within {max_time:g} time units "
        f"(last change {np.max(np.abs(p_now - p_prev)):.2e})")
