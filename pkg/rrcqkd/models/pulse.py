from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

SAMPLING_MODES = ("center", "average", "left")


@dataclass(frozen=True)
class RrcPulse:
    """Ideal receiver mode v(t): root-raised cosine with roll-off ``rolloff``."""

    rolloff: float
    symbol_period: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.rolloff <= 1.0:
            raise ValueError(f"roll-off must lie in [0, 1], got {self.rolloff}")
        if not self.symbol_period > 0.0:
            raise ValueError(f"symbol period must be positive, got {self.symbol_period}")

    @property
    def singular_time(self) -> float | None:
        """Offset T/(4 rolloff) where the closed form is 0/0, None for rolloff 0."""
        if self.rolloff == 0.0:
            return None
        return self.symbol_period / (4.0 * self.rolloff)


@dataclass(frozen=True)
class SpectralProfile:
    """Raised-cosine power spectrum |V(f)|^2 of an :class:`RrcPulse`."""

    rolloff: float
    symbol_period: float = 1.0

    def __post_init__(self):
        RrcPulse(self.rolloff, self.symbol_period)

    @classmethod
    def of(cls, pulse: RrcPulse) -> SpectralProfile:
        return cls(pulse.rolloff, pulse.symbol_period)

    @property
    def pulse(self) -> RrcPulse:
        return RrcPulse(self.rolloff, self.symbol_period)

    @property
    def passband_edge(self) -> float:
        return (1.0 - self.rolloff) / (2.0 * self.symbol_period)

    @property
    def stopband_edge(self) -> float:
        return (1.0 + self.rolloff) / (2.0 * self.symbol_period)


@dataclass(frozen=True)
class TapGrid:
    """Uniform sample-and-hold grid of ``total_taps`` intervals centred on t = 0."""

    samples_per_symbol: int
    total_taps: int
    symbol_period: float = 1.0

    def __post_init__(self):
        if self.samples_per_symbol < 1:
            raise ValueError(f"samples per symbol must be >= 1, got {self.samples_per_symbol}")
        if self.total_taps < 1:
            raise ValueError(f"total taps must be >= 1, got {self.total_taps}")
        if not self.symbol_period > 0.0:
            raise ValueError(f"symbol period must be positive, got {self.symbol_period}")

    @property
    def sample_spacing(self) -> float:
        return self.symbol_period / self.samples_per_symbol

    @property
    def support_width(self) -> float:
        return self.total_taps * self.sample_spacing

    @cached_property
    def centers(self) -> np.ndarray:
        """Interval centres t_k = (k - (N-1)/2) * spacing."""
        k = np.arange(self.total_taps, dtype=float)
        return (k - (self.total_taps - 1) / 2.0) * self.sample_spacing

    @property
    def edges(self) -> np.ndarray:
        """The N+1 interval boundaries; interval k is [edges[k], edges[k+1])."""
        half = self.sample_spacing / 2.0
        return np.append(self.centers - half, self.centers[-1] + half)


@dataclass(frozen=True)
class TapProfile:
    values: tuple[float, ...]
    grid: TapGrid

    def __post_init__(self):
        if len(self.values) != self.grid.total_taps:
            raise ValueError(
                f"expected {self.grid.total_taps} tap values, got {len(self.values)}"
            )

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def is_symmetric(self, atol: float = 0.0) -> bool:
        values = self.array
        return bool(np.allclose(values, values[::-1], rtol=0.0, atol=atol))


@dataclass(frozen=True)
class ApproxPulse:
    """Transmitted pulse u(t): the tap profile scaled by ``norm`` to unit energy."""

    taps: TapProfile
    norm: float

    @property
    def grid(self) -> TapGrid:
        return self.taps.grid

    @property
    def amplitudes(self) -> np.ndarray:
        return self.norm * self.taps.array

    @property
    def energy(self) -> float:
        return float(self.grid.sample_spacing * np.sum(self.amplitudes**2))

    def __call__(self, t):
        """Evaluate u(t); zero outside the tap support."""
        t = np.asarray(t, dtype=float)
        edges = self.grid.edges
        index = np.searchsorted(edges, t, side="right") - 1
        inside = (index >= 0) & (index < self.grid.total_taps)
        out = np.zeros_like(t)
        out[inside] = self.amplitudes[index[inside]]
        return out


@dataclass(frozen=True)
class TapConfig:
    """Everything needed to turn a roll-off into an overlap set."""

    samples_per_symbol: int = 3
    total_taps: int = 21
    sampling: str = "center"
    matched: bool = False
    j_max: int = 64
    tail_tol: float = 1e-8
    quadrature_order: int = 16

    def __post_init__(self):
        if self.sampling not in SAMPLING_MODES:
            raise ValueError(f"sampling must be one of {SAMPLING_MODES}, got {self.sampling!r}")
        if self.quadrature_order < 1:
            raise ValueError("quadrature order must be >= 1")
        TapGrid(self.samples_per_symbol, self.total_taps)

    def grid(self, symbol_period: float = 1.0) -> TapGrid:
        return TapGrid(self.samples_per_symbol, self.total_taps, symbol_period)
