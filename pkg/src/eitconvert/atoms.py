"""Atomic structure for memory-based optical conversion.

A conversion scheme is a set of independent Lambda subsystems sharing two
classical control fields.  Subsystem j couples a ground state |g_j> to an
excited state through the probe transition (Clebsch-Gordan factor a_p,j,
coupling constant g_p) and through the write control (a_w,j, Rabi frequency
Omega_w); a second excited state provides the converted transition (a_c,j,
g_c) and the read control (a_r,j, Omega_r).  Only the CG ratios
R_j^p = a_p,j/a_w,j and R_j^c = a_c,j/a_r,j and the effective optical depths
a^2 * alpha enter the propagation physics; bare coupling constants are
eliminated via g^2 N = alpha * Gamma * c / (2 L).

The shipped concrete scheme is the cesium D1 polarization converter: ground
|F=3,m>, spin |F=4,m>, excited |F'=4,m+-1>.  A sigma+ probe from |3,m> and a
sigma+ write control from |4,m> share |F'=4,m+1>; the sigma- read control and
sigma- converted field share |F'=4,m-1>.  Swapping polarizations converts in
the opposite direction.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .cg import clebsch_gordan
from .errors import DegenerateSchemeError, SchemeError

__all__ = [
    "Direction",
    "CGTable",
    "PopulationDistribution",
    "ConversionScheme",
    "build_cesium_d1_scheme",
    "single_lambda_scheme",
    "effective_depth_factor",
    "coherence_mismatch",
]

ZEEMAN_M = np.arange(-3, 4)


class Direction(enum.Enum):
    """Polarization conversion direction."""

    PLUS_TO_MINUS = "plus_to_minus"
    MINUS_TO_PLUS = "minus_to_plus"

    @classmethod
    def parse(cls, text) -> "Direction":
        if isinstance(text, Direction):
            return text
        aliases = {
            "plus_to_minus": cls.PLUS_TO_MINUS,
            "minus_to_plus": cls.MINUS_TO_PLUS,
            "sigma+->sigma-": cls.PLUS_TO_MINUS,
            "sigma-->sigma+": cls.MINUS_TO_PLUS,
            "+-": cls.PLUS_TO_MINUS,
            "-+": cls.MINUS_TO_PLUS,
        }
        try:
            return aliases[str(text).strip().lower()]
        except KeyError:
            raise SchemeError(f"unknown conversion direction {text!r}") from None


def _ratio_plus(j: int) -> float:
    # signed probe/write CG ratio for the sigma+ branch, |3,j> -> |4,j>
    return -math.sqrt((4 + j) / (4 - j))


def _ratio_minus(j: int) -> float:
    return math.sqrt((4 - j) / (4 + j))


@dataclass(frozen=True)
class CGTable:
    """Cesium D1 Clebsch-Gordan data per ground Zeeman index j = -3..3.

    a_plus/a_minus are absolute probe-branch coefficients (F=3 -> F'=4,
    normalized so the stretched sigma+ transition from m=3 is exactly 1);
    r_plus/r_minus are the signed probe/control ratios in the convention of
    the standard cesium conversion table (constant normalization absorbed
    into the control Rabi frequency).
    """

    j: np.ndarray
    a_plus: np.ndarray
    a_minus: np.ndarray
    r_plus: np.ndarray
    r_minus: np.ndarray

    @classmethod
    def cesium_d1(cls) -> "CGTable":
        j = ZEEMAN_M.copy()
        a_plus = np.array([clebsch_gordan(3, m, 1, +1, 4, m + 1) for m in j])
        a_minus = np.array([clebsch_gordan(3, m, 1, -1, 4, m - 1) for m in j])
        r_plus = np.array([_ratio_plus(m) for m in j])
        r_minus = np.array([_ratio_minus(m) for m in j])

        # Cross-check the hardcoded ratio table against the generator: the
        # generator ratio a_p/a_w for F=4 -> F'=4 controls must equal the
        # table value times one global constant (same for every j and both
        # polarizations), here sqrt(5/7).
        for m, r_tab, q, aj in zip(
            np.concatenate([j, j]),
            np.concatenate([r_plus, r_minus]),
            [+1] * 7 + [-1] * 7,
            np.concatenate([a_plus, a_minus]),
        ):
            a_ctrl = clebsch_gordan(4, m, 1, q, 4, m + q)
            r_gen = aj / a_ctrl
            if abs(r_gen / r_tab - math.sqrt(5.0 / 7.0)) > 1e-12:
                raise SchemeError(
                    f"CG generator disagrees with the ratio table at m={m}, q={q}"
                )

        table = cls(j=j, a_plus=a_plus, a_minus=a_minus,
                    r_plus=r_plus, r_minus=r_minus)
        table.validate()
        return table

    def validate(self) -> None:
        if np.max(np.abs(self.r_plus * self.r_minus + 1.0)) > 1e-12:
            raise SchemeError("ratio table violates R_j^- * R_j^+ = -1")
        if np.max(np.abs(np.abs(self.r_minus[::-1]) - np.abs(self.r_plus))) > 1e-12:
            raise SchemeError("ratio table violates |R_{-j}^-| = |R_j^+|")


@dataclass(frozen=True)
class PopulationDistribution:
    """Ground-state populations over m = -3..3 (must sum to 1)."""

    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.shape != (7,):
            raise SchemeError(f"expected 7 populations, got shape {p.shape}")
        if np.any(p < -1e-12):
            raise SchemeError("populations must be nonnegative")
        if abs(p.sum() - 1.0) > 1e-9:
            raise SchemeError(f"populations must sum to 1, got {p.sum():.12g}")
        p = np.clip(p, 0.0, None)
        p = p / p.sum()
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @classmethod
    def isotropic(cls) -> "PopulationDistribution":
        return cls(np.full(7, 1.0 / 7.0))

    @classmethod
    def single_state(cls, m: int) -> "PopulationDistribution":
        if m not in range(-3, 4):
            raise SchemeError(f"m must be in -3..3, got {m}")
        p = np.zeros(7)
        p[m + 3] = 1.0
        return cls(p)

    @classmethod
    def from_json(cls, text: str) -> "PopulationDistribution":
        data = json.loads(text)
        if not isinstance(data, list):
            raise SchemeError("population JSON must be an array of 7 numbers")
        return cls(np.asarray(data, dtype=float))

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.p - self.p[::-1])) <= tol)

    def mean_m(self) -> float:
        return float(np.dot(ZEEMAN_M, self.p))


@dataclass(frozen=True)
class ConversionScheme:
    """Array-of-subsystems description of one conversion configuration.

    All rates are in units of Gamma_w and the medium length is normalized to
    length = 1; c = inf selects the retarded-frame convention where vacuum
    transit time drops out.
    """

    j: np.ndarray
    p: np.ndarray
    a_p: np.ndarray
    a_w: np.ndarray
    a_c: np.ndarray
    a_r: np.ndarray
    alpha_p: float
    alpha_c: float
    Gamma_w: float = 1.0
    Gamma_r: float = 1.0
    gamma_sg: float = 0.0
    length: float = 1.0
    c: float = math.inf
    label: str = ""

    def __post_init__(self):
        arrays = {}
        n = None
        for name in ("j", "p", "a_p", "a_w", "a_c", "a_r"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim != 1:
                raise SchemeError(f"{name} must be one-dimensional")
            if n is None:
                n = arr.size
            elif arr.size != n:
                raise SchemeError("subsystem arrays must share one length")
            arr = arr.copy()
            arr.setflags(write=False)
            arrays[name] = arr
        for name, arr in arrays.items():
            object.__setattr__(self, name, arr)
        if n == 0:
            raise DegenerateSchemeError("scheme has no subsystems")
        if np.any(self.p < -1e-12):
            raise SchemeError("populations must be nonnegative")
        if abs(self.p.sum() - 1.0) > 1e-9:
            raise SchemeError("populations must sum to 1")
        populated = self.p > 0
        if np.any(populated & (self.a_w == 0.0)) or np.any(populated & (self.a_r == 0.0)):
            raise SchemeError("populated subsystem with vanishing control CG "
                              "(probe/control ratio undefined)")
        for val, name in ((self.alpha_p, "alpha_p"), (self.alpha_c, "alpha_c"),
                          (self.Gamma_w, "Gamma_w"), (self.Gamma_r, "Gamma_r")):
            if not val > 0:
                raise SchemeError(f"{name} must be positive")
        if self.gamma_sg < 0:
            raise SchemeError("gamma_sg must be nonnegative")
        if not self.length > 0:
            raise SchemeError("length must be positive")

    # -- derived per-subsystem quantities ------------------------------

    @property
    def R_p(self) -> np.ndarray:
        """Probe/write CG ratio per subsystem (0 where unpopulated and undefined)."""
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(self.a_w != 0.0, self.a_p / self.a_w, 0.0)
        return r

    @property
    def R_c(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(self.a_r != 0.0, self.a_c / self.a_r, 0.0)
        return r

    @property
    def n_subsystems(self) -> int:
        return int(self.j.size)

    # -- transformations -----------------------------------------------

    def with_populations(self, populations) -> "ConversionScheme":
        if isinstance(populations, PopulationDistribution):
            populations = populations.p
        return replace(self, p=np.asarray(populations, dtype=float))

    def with_original_readout(self) -> "ConversionScheme":
        """Companion scheme whose read/converted channel is the write channel.

        Retrieval through this scheme returns the stored excitation into the
        original probe mode; it provides the reference energy for relative
        conversion efficiencies.
        """
        return replace(self, a_c=self.a_p.copy(), a_r=self.a_w.copy(),
                       alpha_c=self.alpha_p, Gamma_r=self.Gamma_w,
                       label=(self.label + "+original-readout").lstrip("+"))

    # -- serialization ----------------------------------------------------

    def to_json(self) -> str:
        payload = {
            "label": self.label,
            "alpha_p": self.alpha_p,
            "alpha_c": self.alpha_c,
            "Gamma_w": self.Gamma_w,
            "Gamma_r": self.Gamma_r,
            "gamma_sg": self.gamma_sg,
            "length": self.length,
            "c": "inf" if math.isinf(self.c) else self.c,
            "subsystems": [
                {
                    "j": float(self.j[i]),
                    "p": float(self.p[i]),
                    "a_p": float(self.a_p[i]),
                    "a_w": float(self.a_w[i]),
                    "a_c": float(self.a_c[i]),
                    "a_r": float(self.a_r[i]),
                    "R_p": float(self.R_p[i]),
                    "R_c": float(self.R_c[i]),
                }
                for i in range(self.n_subsystems)
            ],
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ConversionScheme":
        data = json.loads(text)
        subs = data["subsystems"]
        c = data.get("c", "inf")
        return cls(
            j=np.array([s["j"] for s in subs]),
            p=np.array([s["p"] for s in subs]),
            a_p=np.array([s["a_p"] for s in subs]),
            a_w=np.array([s["a_w"] for s in subs]),
            a_c=np.array([s["a_c"] for s in subs]),
            a_r=np.array([s["a_r"] for s in subs]),
            alpha_p=data["alpha_p"],
            alpha_c=data["alpha_c"],
            Gamma_w=data.get("Gamma_w", 1.0),
            Gamma_r=data.get("Gamma_r", 1.0),
            gamma_sg=data.get("gamma_sg", 0.0),
            length=data.get("length", 1.0),
            c=math.inf if c == "inf" else float(c),
            label=data.get("label", ""),
        )


def build_cesium_d1_scheme(
    direction,
    populations,
    alpha_p: float,
    alpha_c: float,
    Gamma_w: float = 1.0,
    Gamma_r: float = 1.0,
    gamma_sg: float = 0.0,
) -> ConversionScheme:
    """Cesium D1 polarization-conversion scheme over the seven F=3 states.

    direction PLUS_TO_MINUS stores a sigma+ probe and retrieves sigma-;
    MINUS_TO_PLUS is the mirror image.  alpha_p/alpha_c scale the optical
    depths of the probe and converted branches (the effective depth of a
    single subsystem is a^2 * alpha).
    """
    direction = Direction.parse(direction)
    if isinstance(populations, PopulationDistribution):
        pop = populations
    else:
        pop = PopulationDistribution(np.asarray(populations, dtype=float))

    table = CGTable.cesium_d1()
    if direction is Direction.PLUS_TO_MINUS:
        a_p, r_p = table.a_plus, table.r_plus
        a_c, r_c = table.a_minus, table.r_minus
    else:
        a_p, r_p = table.a_minus, table.r_minus
        a_c, r_c = table.a_plus, table.r_plus

    return ConversionScheme(
        j=table.j.astype(float),
        p=pop.p,
        a_p=a_p,
        a_w=a_p / r_p,
        a_c=a_c,
        a_r=a_c / r_c,
        alpha_p=alpha_p,
        alpha_c=alpha_c,
        Gamma_w=Gamma_w,
        Gamma_r=Gamma_r,
        gamma_sg=gamma_sg,
        label=f"cesium-d1-{direction.value}",
    )


def single_lambda_scheme(
    D_p: float,
    D_c: float,
    Gamma_w: float = 1.0,
    Gamma_r: float = 1.0,
    gamma_sg: float = 0.0,
    R_p: float = 1.0,
    R_c: float = 1.0,
) -> ConversionScheme:
    """One populated Lambda subsystem with unit CG values.

    D_p and D_c are the effective optical depths of the probe and converted
    branches; the CG ratios default to 1 so the control-ratio knob is just
    Omega_r/Omega_w.
    """
    return ConversionScheme(
        j=np.array([0.0]),
        p=np.array([1.0]),
        a_p=np.array([1.0]),
        a_w=np.array([1.0 / R_p]),
        a_c=np.array([1.0]),
        a_r=np.array([1.0 / R_c]),
        alpha_p=float(D_p),
        alpha_c=float(D_c),
        Gamma_w=Gamma_w,
        Gamma_r=Gamma_r,
        gamma_sg=gamma_sg,
        label="single-lambda",
    )


def effective_depth_factor(scheme: ConversionScheme, branch: str = "probe") -> float:
    """Population-weighted CG-squared factor sum_j p_j a_j^2 for one branch.

    Multiplied by alpha it gives the operative optical depth of the medium
    for that branch.
    """
    if branch == "probe":
        a = scheme.a_p
    elif branch == "converted":
        a = scheme.a_c
    else:
        raise SchemeError(f"branch must be 'probe' or 'converted', got {branch!r}")
    return float(math.fsum(scheme.p * a * a))


def coherence_mismatch(scheme: ConversionScheme) -> float:
    """Population-overlap factor xi_2 between write and read CG-ratio patterns.

    xi_2 = |sum_j p_j R_j^p R_j^c|^2 / (sum_j p_j (R_j^p)^2 * sum_j p_j (R_j^c)^2),
    bounded by 1 (Cauchy-Schwarz) with equality when the stored spin-wave
    pattern matches the read-out mode.  Sums use compensated summation so
    near-cancelling patterns stay accurate.
    """
    rp, rc, p = scheme.R_p, scheme.R_c, scheme.p
    num = math.fsum(p * rp * rc)
    den_p = math.fsum(p * rp * rp)
    den_c = math.fsum(p * rc * rc)
    if den_p <= 0.0 or den_c <= 0.0:
        raise DegenerateSchemeError(
            "all population rests on subsystems with vanishing CG ratios")
    return num * num / (den_p * den_c)
