from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class OverlapSet:
    """
    Overlaps c_j = <v(t - jT), u(t)> for j = -j_max ... j_max.

    Args:
        lags: the lags j, ascending.
        values: the real coefficients c_j, aligned with ``lags``.
        j_max: truncation lag.
        tail_bound: extrapolated mass of the omitted lags |j| > j_max.
        out_of_band: energy of u outside the span of the receiver modes.
    """

    lags: tuple[int, ...]
    values: tuple[float, ...]
    j_max: int
    tail_bound: float
    out_of_band: float = 0.0

    def __post_init__(self):
        if len(self.lags) != len(self.values):
            raise ValueError("lags and values differ in length")
        if tuple(self.lags) != tuple(range(-self.j_max, self.j_max + 1)):
            raise ValueError("lags must run over -j_max ... j_max")

    @classmethod
    def matched(cls, j_max: int = 64) -> OverlapSet:
        """Perfect Tx-Rx mode match: c_j = delta_j0."""
        lags = tuple(range(-j_max, j_max + 1))
        values = tuple(1.0 if j == 0 else 0.0 for j in lags)
        return cls(lags, values, j_max, tail_bound=0.0, out_of_band=0.0)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    @property
    def coefficients(self) -> dict[int, float]:
        return dict(zip(self.lags, self.values))

    def __getitem__(self, j: int) -> float:
        if abs(j) > self.j_max:
            raise KeyError(j)
        return self.values[j + self.j_max]

    def __repr__(self) -> str:
        return (
            f"<OverlapSet(j_max={self.j_max}, c0={self[0]:.9f}, "
            f"tail_bound={self.tail_bound:.3e})>"
        )
