from __future__ import annotations

from dataclasses import dataclass, field

from rrcqkd.models.channel import KeyRateBreakdown

BOUNDARY_OPTIMUM = "boundary optimum"
NEAR_DEGENERATE = "near-degenerate optimum"
NO_POSITIVE_KEY = "no positive key"
NOT_CONVERGED = "not converged"


@dataclass(frozen=True)
class SearchBounds:
    nbar_range: tuple[float, float] = (0.01, 1e3)
    rho_range: tuple[float, float] = (0.01, 1.0)
    coarse_grid: int = 40
    refine_tol: float = 1e-4

    def __post_init__(self):
        nbar_lo, nbar_hi = self.nbar_range
        rho_lo, rho_hi = self.rho_range
        if not 0.0 < nbar_lo < nbar_hi:
            raise ValueError(f"need 0 < nbar_lo < nbar_hi, got {self.nbar_range}")
        if not 0.0 <= rho_lo < rho_hi <= 1.0:
            raise ValueError(f"need 0 <= rho_lo < rho_hi <= 1, got {self.rho_range}")
        if self.coarse_grid < 8:
            raise ValueError(f"coarse grid needs at least 8 points, got {self.coarse_grid}")
        if not self.refine_tol > 0.0:
            raise ValueError("refinement tolerance must be positive")


@dataclass(frozen=True)
class NbarOptimum:
    """Best signal strength at a fixed roll-off."""

    nbar: float
    skr: float
    breakdown: KeyRateBreakdown | None
    flags: frozenset[str] = frozenset()

    @property
    def positive(self) -> bool:
        return NO_POSITIVE_KEY not in self.flags


@dataclass(frozen=True)
class OptimumReport:
    """
    Joint (nbar, rho) optimum of the key spectral efficiency.

    ``grid`` holds one record per coarse roll-off: rho, nbar_opt, skr_opt, kse_opt.
    """

    rho_opt: float
    nbar_opt: float
    skr_opt: float
    kse_opt: float
    grid: tuple[dict, ...] = ()
    flags: frozenset[str] = field(default_factory=frozenset)

    def as_record(self) -> dict:
        return {
            "rho_opt": self.rho_opt,
            "nbar_opt": self.nbar_opt,
            "skr_opt": self.skr_opt,
            "kse_opt": self.kse_opt,
            "flags": ";".join(sorted(self.flags)) or "none",
        }


@dataclass(frozen=True)
class SweepConfig:
    """Resolved parameters of a table or sweep run."""

    distances_km: tuple[float, ...]
    excess_noise_list: tuple[float, ...] = (0.0,)
    rolloff: float | str = "optimize"
    sps_list: tuple[int, ...] = (3,)
    total_taps: int = 21
    alpha_db_per_km: float = 0.2
    beta: float = 1.0
    output_format: str = "csv"
    output_path: str | None = None

    def __post_init__(self):
        for name in ("distances_km", "excess_noise_list", "sps_list"):
            if not getattr(self, name):
                raise ValueError(f"{name} must not be empty")
        if any(d < 0.0 for d in self.distances_km):
            raise ValueError("distances must be >= 0 km")
        if any(n < 0.0 for n in self.excess_noise_list):
            raise ValueError("excess noise must be >= 0")
        if any(s < 1 for s in self.sps_list):
            raise ValueError("samples per symbol must be >= 1")
        if self.total_taps < 1:
            raise ValueError("total taps must be >= 1")
        if self.rolloff != "optimize" and not 0.0 <= float(self.rolloff) <= 1.0:
            raise ValueError(f"roll-off must lie in [0, 1] or be 'optimize', got {self.rolloff}")
        if not 0.0 < self.beta <= 1.0:
            raise ValueError(f"reconciliation efficiency must lie in (0, 1], got {self.beta}")
        if self.output_format not in ("csv", "json"):
            raise ValueError(f"unknown output format {self.output_format!r}")
