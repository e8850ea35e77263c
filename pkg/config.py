import os
import logging

# Logging setup
logging.basicConfig(
    level=os.environ.get("LOG_LEVEL", "INFO").upper(),
    format="%(asctime)s %(levelname)s %(name)s: %(message)s",
)
logger = logging.getLogger(__name__)


class Config:
    """Base configuration: every default the commands resolve against."""

    LOG_LEVEL = os.environ.get("LOG_LEVEL", "INFO").upper()

    # Pulse shaping: 3 samples per symbol, 21 taps in total
    ROLLOFF = 0.25
    SPS = 3
    TAPS = 21
    SAMPLING = "center"

    # Overlap quadrature and ISI truncation
    J_MAX = 64
    TAIL_TOL = 1e-8
    QUADRATURE_ORDER = 16

    # Channel and key rate
    NBAR = 12.0
    DISTANCE_KM = 20.0
    TAU = None
    ALPHA_DB_PER_KM = 0.2
    EXCESS_NOISE = 0.0
    BETA = 1.0
    DETECTION = "heterodyne"
    MATCHED = False

    # Search
    NBAR_MIN = 0.01
    NBAR_MAX = 1e3
    RHO_MIN = 0.01
    RHO_MAX = 1.0
    COARSE_GRID = 40
    REFINE_TOL = 1e-4
    WORKERS = 1

    # Tables and sweeps
    SPS_LIST = (2, 3, 4, 6, 8)
    DISTANCES_KM = (20.0, 50.0, 100.0)
    SWEEP_DISTANCES_KM = tuple(float(d) for d in range(0, 301, 5))
    EXCESS_NOISE_LIST = (1e-2, 1e-3, 1e-4)

    # Surface grid
    SURFACE_NBAR_MIN = 0.1
    SURFACE_NBAR_MAX = 300.0
    SURFACE_NBAR_POINTS = 60
    SURFACE_RHO_MIN = 0.01
    SURFACE_RHO_MAX = 1.0
    SURFACE_RHO_POINTS = 50

    # Pulse profile export
    PROFILE_POINTS_PER_SYMBOL = 40

    # Output
    FORMAT = "csv"
    OUT = None


class DevelopmentConfig(Config):
    """Development-specific settings."""

    LOG_LEVEL = "DEBUG"


class TestingConfig(Config):
    """Testing-specific settings: coarser grids keep the suite quick."""

    LOG_LEVEL = "WARNING"
    COARSE_GRID = 16
    SURFACE_NBAR_POINTS = 12
    SURFACE_RHO_POINTS = 8


class ProductionConfig(Config):
    """Production-specific settings."""


CONFIGS = {
    "development": DevelopmentConfig,
    "dev": DevelopmentConfig,
    "testing": TestingConfig,
    "production": ProductionConfig,
    "prod": ProductionConfig,
}

def get_config(name=None):
    """Config class for ``name`` (default: the ENVIRONMENT variable)."""
    name = (name or os.environ.get("ENVIRONMENT", "prod")).lower()
    try:
        return CONFIGS[name]
    except KeyError:
        logger.warning("Unknown ENVIRONMENT %r, falling back to production", name)
        return ProductionConfig
