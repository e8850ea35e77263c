from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from rrcqkd.errors import UnphysicalStateError

PHYSICAL_TOL = 1e-12


def transmissivity_from_distance(distance_km: float, alpha_db_per_km: float = 0.2) -> float:
    """Fibre transmissivity 10^(-alpha L / 10)."""
    if distance_km < 0.0:
        raise ValueError(f"distance must be >= 0 km, got {distance_km}")
    if alpha_db_per_km < 0.0:
        raise ValueError(f"attenuation must be >= 0 dB/km, got {alpha_db_per_km}")
    return 10.0 ** (-alpha_db_per_km * distance_km / 10.0)


@dataclass(frozen=True)
class ChannelParams:
    """Lossy channel with excess noise ``excess_noise`` (photons, channel output)."""

    transmissivity: float
    excess_noise: float = 0.0
    attenuation_db_per_km: float = 0.2
    distance_km: float | None = None

    def __post_init__(self):
        if not 0.0 < self.transmissivity <= 1.0:
            raise ValueError(f"transmissivity must lie in (0, 1], got {self.transmissivity}")
        if self.excess_noise < 0.0:
            raise ValueError(f"excess noise must be >= 0, got {self.excess_noise}")
        if self.distance_km is not None:
            expected = transmissivity_from_distance(self.distance_km, self.attenuation_db_per_km)
            if not math.isclose(expected, self.transmissivity, rel_tol=1e-12):
                raise ValueError("transmissivity disagrees with distance and attenuation")

    @classmethod
    def from_distance(
        cls, distance_km: float, excess_noise: float = 0.0, attenuation_db_per_km: float = 0.2
    ) -> ChannelParams:
        return cls(
            transmissivity=transmissivity_from_distance(distance_km, attenuation_db_per_km),
            excess_noise=excess_noise,
            attenuation_db_per_km=attenuation_db_per_km,
            distance_km=distance_km,
        )


@dataclass(frozen=True)
class ModulationParams:
    mean_photons: float

    def __post_init__(self):
        if not self.mean_photons > 0.0:
            raise ValueError(f"mean photon number must be positive, got {self.mean_photons}")


@dataclass(frozen=True)
class CovarianceBlocks:
    """
    Two-mode covariance [[a I, c Z], [c Z, b I]] in shot-noise units.

    ``det`` is a*b - c**2. It is stored rather than recomputed because the
    subtraction cancels catastrophically for strong modulation.
    """

    a: float
    b: float
    c: float
    det: float

    def __post_init__(self):
        if self.a < 1.0 - PHYSICAL_TOL or self.b < 1.0 - PHYSICAL_TOL:
            raise UnphysicalStateError(
                f"quadrature variances below vacuum: a={self.a!r}, b={self.b!r}"
            )
        if self.det < 1.0 - PHYSICAL_TOL * max(1.0, self.a * self.b):
            raise UnphysicalStateError(f"ab - c^2 = {self.det!r} < 1")

    @classmethod
    def from_blocks(cls, a: float, b: float, c: float) -> CovarianceBlocks:
        return cls(a, b, c, a * b - c * c)


@dataclass(frozen=True)
class KeyRateBreakdown:
    """Per-symbol key rate terms; ``raw_skr`` keeps the unclamped value."""

    mutual_info: float
    holevo: float
    raw_skr: float
    skr: float
    kse: float
    transmissivity_eff: float
    excess_noise_eff: float
    matched_energy: float = 1.0
    isi_factor: float = 0.0

    def as_record(self) -> dict:
        return asdict(self)
