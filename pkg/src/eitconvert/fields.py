"""Shared containers for sampled fields and coherences.

Both the frequency-domain propagator and the time-domain solver produce the
same two shapes of data: a ground-state coherence sampled over z at one
instant, and a field envelope sampled over (z, t).  They are kept here so
records from either engine can be exported and compared uniformly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .arrayio import write_arrays, write_csv

__all__ = ["CoherenceField", "FieldGrid"]


@dataclass(frozen=True)
class CoherenceField:
    """Ground-state coherence sigma_j(z) of every subsystem at time t.

    sigma has shape (n_subsystems, n_z); row order follows the scheme's
    subsystem index array.
    """

    z: np.ndarray
    sigma: np.ndarray
    t: float
    j: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.sigma.ndim != 2 or self.sigma.shape[1] != self.z.size:
            raise ValueError("sigma must have shape (n_subsystems, n_z)")

    @property
    def n_subsystems(self) -> int:
        return self.sigma.shape[0]

    def excitation_density(self, populations: np.ndarray) -> np.ndarray:
        """Population-normalized excitation density sum_j |sigma_j|^2 / p_j.

        Subsystems with zero population carry no coherence and are skipped.
        """
        out = np.zeros(self.z.size)
        for pj, row in zip(populations, self.sigma):
            if pj > 0:
                out += np.abs(row) ** 2 / pj
        return out

    def to_csv(self, path) -> None:
        labels = (self.j if self.j is not None
                  else np.arange(self.n_subsystems))
        header = ["z"]
        cols = [self.z]
        for lab, row in zip(labels, self.sigma):
            tag = f"m{int(lab)}" if float(lab) == int(lab) else f"j{lab}"
            header.append(f"sigma_{tag}")
            cols.append(row)
        write_csv(path, header, cols)

    def to_binary(self, path) -> None:
        write_arrays(path, {"z": self.z, "sigma": self.sigma,
                            "t": np.array([self.t])})


@dataclass(frozen=True)
class FieldGrid:
    """Complex field envelope sampled on a (z, t) grid; values[i, k] = E(z_i, t_k)."""

    z: np.ndarray
    t: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.z.size, self.t.size):
            raise ValueError(
                f"values shape {self.values.shape} does not match "
                f"(n_z={self.z.size}, n_t={self.t.size})")

    def at_exit(self) -> np.ndarray:
        return self.values[-1]

    def at_entry(self) -> np.ndarray:
        return self.values[0]

    def to_csv(self, path, where: str = "exit") -> None:
        """Waveform CSV (t, Re, Im) at the entry or exit face."""
        wave = self.at_exit() if where == "exit" else self.at_entry()
        write_csv(path, ["t", "re", "im"], [self.t, wave.real, wave.imag])

    def to_binary(self, path) -> None:
        write_arrays(path, {"z": self.z, "t": self.t, "values": self.values})
