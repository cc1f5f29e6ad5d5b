"""Closed-form theory of the write/store/read conversion protocol.

All fields are Rabi-scaled (a field E appears only as g*E), so coupling
constants and atom number enter exclusively through the optical depths:
g^2 N = alpha * Gamma * c / (2 L).  Angular frequencies are measured in units
of Gamma_w, times in 1/Gamma_w, lengths in units of the medium length L.

The probe pulse is Gaussian, E(0,t) = E0 exp(-2 ln2 (t/T_p)^2) with intensity
FWHM T_p and spectral intensity FWHM Delta_omega_0 = 4 ln2 / T_p.  The write
control is cut at t_w = kappa * T_p after the pulse peak enters the medium;
eta = T_d / T_p is the delay-time ratio of the write channel.

Two broadening conventions appear in the literature-style simple forms:
beta_r_simple drops a 1/beta_w^2 factor inside the read-broadening term
(valid at large optical depth).  read_channel keeps it; everything built on
ReadChannelParams (spectra, bandwidths, total efficiencies) is therefore
internally consistent with Parseval energy ratios.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .atoms import ConversionScheme, coherence_mismatch
from .errors import ValidityWarning

__all__ = [
    "LN2",
    "WriteChannelParams",
    "ReadChannelParams",
    "StoredCoherenceProfile",
    "ConvertedSpectrum",
    "EfficiencyReport",
    "pulse_bandwidth",
    "control_for_eta",
    "write_channel",
    "read_channel",
    "beta_w_simple",
    "beta_r_simple",
    "xi1_simple",
    "stored_coherence_profile",
    "converted_spectrum",
    "converted_bandwidth",
    "total_efficiency",
    "relative_efficiency_single",
    "relative_efficiency_multi",
]

LN2 = math.log(2.0)
_16LN2 = 16.0 * LN2


def pulse_bandwidth(T_p: float) -> float:
    """Spectral intensity FWHM of the Gaussian probe, Delta_omega_0 = 4 ln2 / T_p."""
    return 4.0 * LN2 / T_p


def _channel_sums(scheme: ConversionScheme, channel: str):
    """Population-weighted ratio sums for one channel.

    Returns (S2, S4) with S2 = sum_j p_j R_j^2 (group-delay sum) and
    S4 = sum_j p_j R_j^4 / a_j^2 (bandwidth sum), plus the smallest
    nonvanishing |a_ctrl| CG over populated subsystems for validity checks.
    """
    if channel == "write":
        R, a_weak, a_ctrl = scheme.R_p, scheme.a_p, scheme.a_w
    else:
        R, a_weak, a_ctrl = scheme.R_c, scheme.a_c, scheme.a_r
    mask = scheme.p > 0
    p, R, a_weak = scheme.p[mask], R[mask], a_weak[mask]
    S2 = math.fsum(p * R * R)
    S4 = math.fsum(p * R**4 / a_weak**2)
    a_ctrl_min = float(np.min(np.abs(a_ctrl[mask]))) if mask.any() else 0.0
    return S2, S4, a_ctrl_min


@dataclass(frozen=True)
class WriteChannelParams:
    """Write-channel slow-light and storage quantities."""

    Omega_w: complex
    T_p: float
    kappa: float
    t_w: float                 # control cutoff time after pulse-peak entry
    v_w: float                 # group velocity
    T_d: float                 # group delay through the medium
    eta: float                 # T_d / T_p
    L_w: float                 # compressed pulse length v_w * T_p
    z_mid: float               # stored-pulse center v_w * t_w
    delta_omega_w: float       # EIT transparency bandwidth (intensity FWHM)
    beta_w_mid: float          # broadening factor at the stored-pulse center
    flags: tuple = ()

    def beta_w(self, z: float) -> float:
        """Broadening factor sqrt(1 + (4 ln2/(T_p delta_omega_w))^2 z/L)."""
        if math.isinf(self.delta_omega_w):
            return 1.0
        x = 4.0 * LN2 / (self.T_p * self.delta_omega_w)
        return math.sqrt(1.0 + x * x * z)


@dataclass(frozen=True)
class ReadChannelParams:
    """Read-channel group velocity, bandwidth and exit broadening."""

    Omega_r: complex
    v_r: float
    T_d_read: float
    delta_omega_r: float
    beta_r_L: float            # broadening factor of the converted spectrum at z = L
    flags: tuple = ()


def control_for_eta(scheme: ConversionScheme, eta: float, T_p: float,
                    channel: str = "write") -> float:
    """Rabi frequency giving a group delay of eta * T_p in the chosen channel."""
    if eta <= 0 or T_p <= 0:
        raise ValueError("eta and T_p must be positive")
    S2, _, _ = _channel_sums(scheme, channel)
    alpha = scheme.alpha_p if channel == "write" else scheme.alpha_c
    Gamma = scheme.Gamma_w if channel == "write" else scheme.Gamma_r
    if S2 <= 0:
        raise ValueError("channel has no populated subsystems")
    return math.sqrt(alpha * Gamma * S2 / (eta * T_p))


def write_channel(scheme: ConversionScheme, Omega_w: complex, T_p: float,
                  kappa: float) -> WriteChannelParams:
    """Slow-light parameters of the write channel for a Gaussian probe.

    Implements the population-weighted group velocity and transparency
    bandwidth
        1/v_w  = 1/c + (alpha_p Gamma_w / L |Omega_w|^2) sum_j p_j (R_j^p)^2
        1/dw^2 = (alpha_p Gamma_w^2 / ln2 |Omega_w|^4) sum_j p_j (R_j^p)^4 / a_p,j^2
    and evaluates the pulse-broadening factor at the stored-pulse center
    z_mid = v_w t_w.
    """
    if T_p <= 0:
        raise ValueError("T_p must be positive")
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    absW2 = abs(Omega_w) ** 2
    if absW2 == 0:
        raise ValueError("Omega_w must be nonzero")

    S2, S4, a_ctrl_min = _channel_sums(scheme, "write")
    L = scheme.length
    inv_c = 0.0 if math.isinf(scheme.c) else 1.0 / scheme.c

    T_d = scheme.alpha_p * scheme.Gamma_w * S2 / absW2
    inv_vw = inv_c + T_d / L
    v_w = 1.0 / inv_vw if inv_vw > 0 else math.inf

    bw_inv_sq = scheme.alpha_p * scheme.Gamma_w**2 * S4 / (LN2 * absW2 * absW2)
    delta_omega_w = 1.0 / math.sqrt(bw_inv_sq) if bw_inv_sq > 0 else math.inf

    t_w = kappa * T_p
    L_w = v_w * T_p
    z_mid = v_w * t_w
    eta = T_d / T_p

    flags = []
    if T_p * delta_omega_w <= 1.0:
        flags.append("pulse-bandwidth: T_p * delta_omega_w <= 1")
    domega0 = pulse_bandwidth(T_p)
    adiab = min(scheme.Gamma_w, (a_ctrl_min * abs(Omega_w)) ** 2 / scheme.Gamma_w)
    if domega0 >= adiab:
        flags.append("adiabaticity: pulse bandwidth not small against the "
                     "EIT linewidth scale")
    for f in flags:
        warnings.warn(f, ValidityWarning, stacklevel=2)

    beta_mid = 1.0
    if not math.isinf(z_mid) and not math.isinf(delta_omega_w):
        x = 4.0 * LN2 / (T_p * delta_omega_w)
        beta_mid = math.sqrt(1.0 + x * x * z_mid / L)

    return WriteChannelParams(
        Omega_w=Omega_w, T_p=T_p, kappa=kappa, t_w=t_w, v_w=v_w, T_d=T_d,
        eta=eta, L_w=L_w, z_mid=z_mid, delta_omega_w=delta_omega_w,
        beta_w_mid=beta_mid, flags=tuple(flags),
    )


def read_channel(scheme: ConversionScheme, Omega_r: complex,
                 write: WriteChannelParams) -> ReadChannelParams:
    """Read-channel quantities and the converted-spectrum broadening at z = L.

    beta_r(L)^2 = 1 + (4 ln2 / (delta_omega_r beta_w T_p))^2 v_r^2 (L - z_mid)
                      / (v_w^2 L),
    evaluated with the write-channel mid-point broadening beta_w; the product
    (v_r/delta_omega_r)^2 is independent of Omega_r, so beta_r is a property
    of the channel, not of the read power.
    """
    absR2 = abs(Omega_r) ** 2
    if absR2 == 0:
        raise ValueError("Omega_r must be nonzero")
    S2, S4, _ = _channel_sums(scheme, "read")
    L = scheme.length
    inv_c = 0.0 if math.isinf(scheme.c) else 1.0 / scheme.c

    T_d_read = scheme.alpha_c * scheme.Gamma_r * S2 / absR2
    inv_vr = inv_c + T_d_read / L
    v_r = 1.0 / inv_vr if inv_vr > 0 else math.inf

    bw_inv_sq = scheme.alpha_c * scheme.Gamma_r**2 * S4 / (LN2 * absR2 * absR2)
    delta_omega_r = 1.0 / math.sqrt(bw_inv_sq) if bw_inv_sq > 0 else math.inf

    if write.z_mid >= L:
        raise ValueError("write cutoff places the stored pulse beyond the medium "
                         f"(z_mid = {write.z_mid:.3g} >= L = {L:.3g})")

    if math.isinf(delta_omega_r):
        beta_r = 1.0
    else:
        x = 4.0 * LN2 / (delta_omega_r * write.beta_w_mid * write.T_p)
        beta_r = math.sqrt(
            1.0 + x * x * v_r**2 * (L - write.z_mid) / (write.v_w**2 * L))

    return ReadChannelParams(
        Omega_r=Omega_r, v_r=v_r, T_d_read=T_d_read,
        delta_omega_r=delta_omega_r, beta_r_L=beta_r,
    )


# ---------------------------------------------------------------------------
# simple closed forms in terms of (eta, kappa, D)
# ---------------------------------------------------------------------------

def _check_validity(eta: float, kappa: float) -> None:
    if kappa < 1.1:
        warnings.warn("kappa < 1.1: control cut clips the trailing pulse edge",
                      ValidityWarning, stacklevel=3)
    if eta < 2.5:
        warnings.warn("eta < 2.5: pulse not well compressed into the medium",
                      ValidityWarning, stacklevel=3)


def beta_w_simple(eta: float, kappa: float, D_p: float) -> float:
    """Write broadening factor sqrt(1 + 16 ln2 eta kappa / D_p)."""
    if D_p <= 0:
        raise ValueError("D_p must be positive")
    if eta <= 0 or kappa <= 0:
        raise ValueError("eta and kappa must be positive")
    _check_validity(eta, kappa)
    return math.sqrt(1.0 + _16LN2 * eta * kappa / D_p)


def beta_r_simple(eta: float, kappa: float, D_c: float) -> float:
    """Read broadening factor sqrt(1 + 16 ln2 eta (eta - kappa) / D_c).

    Large-depth form: the 1/beta_w^2 correction kept by read_channel is
    dropped here.
    """
    if D_c <= 0:
        raise ValueError("D_c must be positive")
    if eta <= kappa:
        raise ValueError("eta must exceed kappa (stored pulse inside the medium)")
    _check_validity(eta, kappa)
    return math.sqrt(1.0 + _16LN2 * eta * (eta - kappa) / D_c)


def xi1_simple(eta: float, kappa: float, D_p: float, D_c: float) -> float:
    """Finite-bandwidth efficiency 1/(beta_w beta_r) in the simple convention."""
    return 1.0 / (beta_w_simple(eta, kappa, D_p) * beta_r_simple(eta, kappa, D_c))


# ---------------------------------------------------------------------------
# stored coherence and converted field, Gaussian approximations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StoredCoherenceProfile:
    """Gaussian spin-wave descriptor per subsystem after the write cut.

    sigma_j(z) = amplitude_j * exp(-2 ln2 (z - center)^2 / fwhm^2); fwhm is
    the spatial intensity FWHM L_w * beta_w.
    """

    amplitude: np.ndarray      # complex, per subsystem
    center: float
    fwhm: float

    def evaluate(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        envelope = np.exp(-2.0 * LN2 * ((z - self.center) / self.fwhm) ** 2)
        return self.amplitude[:, None] * envelope[None, :]


def stored_coherence_profile(scheme: ConversionScheme,
                             write: WriteChannelParams,
                             E0: complex = 1.0) -> StoredCoherenceProfile:
    """Analytic stored ground-state coherence at the write cutoff.

    amplitude_j = -E0 p_j R_j^p / (Omega_w beta_w), centered at z_mid = v_w t_w
    with spatial FWHM L_w beta_w.  Fields are Rabi-scaled, so g_p does not
    appear explicitly.
    """
    if write.L_w >= scheme.length:
        warnings.warn("compressed pulse length L_w >= L: the pulse does not fit "
                      "inside the medium", ValidityWarning, stacklevel=2)
    amp = -E0 * scheme.p * scheme.R_p / (write.Omega_w * write.beta_w_mid)
    return StoredCoherenceProfile(
        amplitude=amp.astype(complex),
        center=write.z_mid,
        fwhm=write.L_w * write.beta_w_mid,
    )


@dataclass(frozen=True)
class ConvertedSpectrum:
    """Gaussian model of the converted field at the medium exit.

    E_c(L, omega) = C exp(i omega t0 - S omega^2), with t0 the arrival time
    of the converted pulse (measured from the read turn-on) and S the
    quadratic spectral width parameter.
    """

    C: complex
    t0: float
    S: float
    input_energy: float        # integral |E_p(0,t)|^2 dt of the Gaussian probe
    energy_unit_ratio: float   # (g_p/g_c)^2 = alpha_p Gamma_w / (alpha_c Gamma_r)

    def spectrum(self, omega) -> np.ndarray:
        omega = np.asarray(omega, dtype=float)
        return self.C * np.exp(1j * omega * self.t0 - self.S * omega**2)

    def time_waveform(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return (self.C / math.sqrt(2.0 * self.S)
                * np.exp(-((t - self.t0) ** 2) / (4.0 * self.S)))

    @property
    def peak_amplitude(self) -> float:
        return abs(self.C) / math.sqrt(2.0 * self.S)

    @property
    def temporal_fwhm(self) -> float:
        """Intensity FWHM of the converted pulse."""
        return 2.0 * math.sqrt(2.0 * self.S * LN2)

    @property
    def spectral_fwhm(self) -> float:
        return 2.0 * math.sqrt(LN2 / (2.0 * self.S))

    @property
    def energy(self) -> float:
        """Converted energy in input-field units (Parseval over the Gaussian)."""
        scaled = abs(self.C) ** 2 * math.sqrt(2.0 * math.pi) / (2.0 * math.sqrt(self.S))
        return self.energy_unit_ratio * scaled

    @property
    def efficiency(self) -> float:
        return self.energy / self.input_energy


def converted_spectrum(scheme: ConversionScheme, write: WriteChannelParams,
                       read: ReadChannelParams,
                       E0: complex = 1.0) -> ConvertedSpectrum:
    """Converted-field spectrum from the Gaussian spin wave.

    Amplitude prefactor (alpha_c Gamma_r / 2 L) E0 L_w sum_j p_j R_j^c R_j^p
    / (sqrt(ln2) Omega_r* Omega_w); spectral width S = (L_w beta_w)^2
    beta_r^2 / (8 ln2 v_r^2).  Integrating |spectrum|^2 reproduces
    xi_1 * xi_2 times the input pulse energy.
    """
    mix = math.fsum(scheme.p * scheme.R_p * scheme.R_c)
    C = (scheme.alpha_c * scheme.Gamma_r / (2.0 * scheme.length)
         * E0 * write.L_w * mix
         / (math.sqrt(LN2) * np.conj(read.Omega_r) * write.Omega_w))
    S = ((write.L_w * write.beta_w_mid) ** 2 * read.beta_r_L ** 2
         / (8.0 * LN2 * read.v_r ** 2))
    t0 = (scheme.length - write.z_mid) / read.v_r
    input_energy = abs(E0) ** 2 * write.T_p * math.sqrt(math.pi / (4.0 * LN2))
    unit_ratio = (scheme.alpha_p * scheme.Gamma_w) / (scheme.alpha_c * scheme.Gamma_r)
    return ConvertedSpectrum(C=complex(C), t0=t0, S=S,
                             input_energy=input_energy,
                             energy_unit_ratio=unit_ratio)


def converted_bandwidth(scheme: ConversionScheme, write: WriteChannelParams,
                        read: ReadChannelParams,
                        Delta_omega_0: float | None = None) -> float:
    """Spectral intensity FWHM of the converted field.

    Delta_omega_c = |Omega_r/Omega_w|^2 * (g_p^2 sum p R_p^2)/(g_c^2 sum p R_c^2)
                    * Delta_omega_0 / (beta_w beta_r),
    i.e. the read control compresses or stretches the output bandwidth by the
    ratio of control intensities.
    """
    if Delta_omega_0 is None:
        Delta_omega_0 = pulse_bandwidth(write.T_p)
    S2w, _, _ = _channel_sums(scheme, "write")
    S2r, _, _ = _channel_sums(scheme, "read")
    ratio = (abs(read.Omega_r) / abs(write.Omega_w)) ** 2
    g_ratio = (scheme.alpha_p * scheme.Gamma_w) / (scheme.alpha_c * scheme.Gamma_r)
    return (ratio * g_ratio * (S2w / S2r) * Delta_omega_0
            / (write.beta_w_mid * read.beta_r_L))


# ---------------------------------------------------------------------------
# efficiencies
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EfficiencyReport:
    """Conversion-efficiency decomposition xi_total = xi_1 * xi_2."""

    xi1: float
    xi2: float
    xi_total: float
    xi_relative: float
    delta_omega_c: float
    eta: float
    kappa: float
    beta_w: float
    beta_r: float

    def to_dict(self) -> dict:
        return {
            "xi1": self.xi1,
            "xi2": self.xi2,
            "xi_total": self.xi_total,
            "xi_relative": self.xi_relative,
            "delta_omega_c": self.delta_omega_c,
            "eta": self.eta,
            "kappa": self.kappa,
            "beta_w": self.beta_w,
            "beta_r": self.beta_r,
        }


def total_efficiency(scheme: ConversionScheme, write: WriteChannelParams,
                     read: ReadChannelParams) -> EfficiencyReport:
    """Energy conversion efficiency xi_total = xi_1 xi_2 with xi_1 = 1/(beta_w beta_r).

    Uses the read_channel broadening (beta_w-consistent); the large-depth
    simple chain is available via xi1_simple.
    """
    xi2 = coherence_mismatch(scheme)
    xi1 = 1.0 / (write.beta_w_mid * read.beta_r_L)
    xi_rel = relative_efficiency_multi(scheme, write.eta, write.kappa)
    return EfficiencyReport(
        xi1=xi1, xi2=xi2, xi_total=xi1 * xi2, xi_relative=xi_rel,
        delta_omega_c=converted_bandwidth(scheme, write, read),
        eta=write.eta, kappa=write.kappa,
        beta_w=write.beta_w_mid, beta_r=read.beta_r_L,
    )


def relative_efficiency_single(eta: float, kappa: float, D_p: float,
                               D_c: float) -> float:
    """Conversion efficiency relative to same-channel retrieval, single subsystem.

    xi_R = sqrt((1 + X/D_p) / (1 + X/D_c)) with
    X = 16 ln2 (1 - kappa/eta) eta^2 / beta_w^2; the write-channel cost
    cancels, leaving only the read-out bandwidth mismatch between the two
    channels.
    """
    if D_p <= 0 or D_c <= 0:
        raise ValueError("optical depths must be positive")
    if eta <= kappa:
        raise ValueError("eta must exceed kappa")
    _check_validity(eta, kappa)
    bw2 = 1.0 + _16LN2 * eta * kappa / D_p
    X = _16LN2 * eta * (eta - kappa) / bw2
    return math.sqrt((1.0 + X / D_p) / (1.0 + X / D_c))


def relative_efficiency_multi(scheme: ConversionScheme, eta: float,
                              kappa: float) -> float:
    """Relative conversion efficiency with population-weighted CG sums.

    xi_R = xi_2 * sqrt((1 + X Q_w/P_w^2) / (1 + X Q_r/P_r^2)) with
    P = sum_j p_j R_j^2, Q = sum_j p_j R_j^4/(a_j^2 alpha), and
    X = 16 ln2 eta (eta - kappa) / beta_w^2.  Reduces exactly to the
    single-subsystem form when one state is populated, and to xi_2 alone
    whenever the two channels share the same bandwidth sums (for instance
    for populations symmetric under m -> -m with alpha_p = alpha_c).
    """
    if eta <= kappa:
        raise ValueError("eta must exceed kappa")
    _check_validity(eta, kappa)
    xi2 = coherence_mismatch(scheme)
    S2w, S4w, _ = _channel_sums(scheme, "write")
    S2r, S4r, _ = _channel_sums(scheme, "read")
    qw = S4w / (scheme.alpha_p * S2w * S2w)
    qr = S4r / (scheme.alpha_c * S2r * S2r)
    bw2 = 1.0 + _16LN2 * eta * kappa * qw
    X = _16LN2 * eta * (eta - kappa) / bw2
    return xi2 * math.sqrt((1.0 + X * qw) / (1.0 + X * qr))
