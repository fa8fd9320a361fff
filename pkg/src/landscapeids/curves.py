"""Sampled counting curves E -> value, shared by the spectral and landscape
sides. Curves are step functions; evaluation between grid points takes the
value at the largest sampled energy not exceeding the argument."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

CURVE_KINDS = ("ids", "landscape", "ensemble_mean")


@dataclass
class CountingCurve:
    energies: np.ndarray
    values: np.ndarray
    kind: str
    stderr: np.ndarray = None

    def __post_init__(self):
        self.energies = np.asarray(self.energies, dtype=np.float64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.energies.ndim != 1 or self.energies.shape != self.values.shape:
            raise ValueError("energies and values must be 1-d arrays of equal length")
        if np.any(np.diff(self.energies) <= 0):
            raise ValueError("energies must be strictly ascending")
        if self.kind not in CURVE_KINDS:
            raise ValueError("unknown curve kind %r" % (self.kind,))
        if self.stderr is not None:
            self.stderr = np.asarray(self.stderr, dtype=np.float64)

    def __len__(self):
        return int(self.energies.size)

    def value_at(self, energy) -> float:
        """Step evaluation; 0 to the left of the sampled grid."""
        i = int(np.searchsorted(self.energies, energy, side="right")) - 1
        return 0.0 if i < 0 else float(self.values[i])

    def is_nondecreasing(self) -> bool:
        return bool(np.all(np.diff(self.values) >= -1e-15))


def log_energy_grid(e_min, e_max, points) -> np.ndarray:
    if not (0 < e_min < e_max):
        raise ValueError("need 0 < e_min < e_max")
    if points < 2:
        raise ValueError("need at least 2 grid points")
    return np.geomspace(e_min, e_max, int(points))
