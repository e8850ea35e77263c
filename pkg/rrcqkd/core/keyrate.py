"""
Asymptotic Gaussian-modulated CV QKD key rate: collective attacks, reverse
reconciliation, heterodyne detection, all excess noise attributed to Eve.

Shot-noise units throughout: vacuum quadrature variance 1, a mean photon
number n maps to variance 2n + 1, and n_n excess photons at the channel
output add variance 2 n_n.
"""

import logging
import math

from scipy.special import xlogy

from rrcqkd.core.overlap import isi_factor, matched_energy
from rrcqkd.errors import UnphysicalStateError
from rrcqkd.models import ChannelParams, CovarianceBlocks, KeyRateBreakdown, ModulationParams, OverlapSet
from rrcqkd.models.channel import transmissivity_from_distance  # noqa: F401  (re-exported)

logger = logging.getLogger(__name__)

EIGENVALUE_TOL = 1e-9
DETECTION_MODES = ("heterodyne", "homodyne")


def g_entropy(nu: float) -> float:
    """Von Neumann entropy (bits) of a thermal mode with symplectic eigenvalue ``nu``."""
    if nu < 1.0 - EIGENVALUE_TOL:
        raise UnphysicalStateError(f"unphysical symplectic eigenvalue {nu!r}")
    nu = max(nu, 1.0)
    plus, minus = (nu + 1.0) / 2.0, (nu - 1.0) / 2.0
    return float(xlogy(plus, plus) - xlogy(minus, minus)) / math.log(2.0)


def _check(nbar, tau_eff, n_eff):
    ModulationParams(nbar)
    if not 0.0 < tau_eff <= 1.0:
        raise ValueError(f"effective transmissivity must lie in (0, 1], got {tau_eff}")
    if n_eff < 0.0:
        raise ValueError(f"effective excess noise must be >= 0, got {n_eff}")


def covariance(nbar: float, tau_eff: float, n_eff: float) -> CovarianceBlocks:
    """Entanglement-based covariance blocks after a lossy, noisy channel."""
    _check(nbar, tau_eff, n_eff)
    V = 2.0 * nbar + 1.0
    b = tau_eff * 2.0 * nbar + 1.0 + 2.0 * n_eff
    c = math.sqrt(tau_eff * 4.0 * nbar * (nbar + 1.0))
    # ab - c^2 expanded so nothing cancels.
    det = V * (1.0 - tau_eff + 2.0 * n_eff) + tau_eff
    return CovarianceBlocks(a=V, b=b, c=c, det=det)


def symplectic_eigenvalues(blocks: CovarianceBlocks) -> tuple[float, float]:
    """(nu_1, nu_2) of the two-mode state, nu_1 >= nu_2."""
    diff = blocks.a - blocks.b
    delta = diff * diff + 2.0 * blocks.det
    nu1_sq = 0.5 * (delta + abs(diff) * math.sqrt(diff * diff + 4.0 * blocks.det))
    nu1 = math.sqrt(nu1_sq)
    return nu1, blocks.det / nu1


def conditional_eigenvalue(blocks: CovarianceBlocks, detection: str = "heterodyne") -> float:
    """nu_3: Alice's mode conditioned on Bob's measurement outcome."""
    if detection == "heterodyne":
        return (blocks.det + blocks.a) / (blocks.b + 1.0)
    if detection == "homodyne":
        return math.sqrt(blocks.a * blocks.det / blocks.b)
    raise ValueError(f"detection must be one of {DETECTION_MODES}, got {detection!r}")


def mutual_information(
    nbar: float, tau_eff: float, n_eff: float, detection: str = "heterodyne"
) -> float:
    """Shannon rate I_AB per symbol (bits)."""
    _check(nbar, tau_eff, n_eff)
    if detection == "heterodyne":
        return math.log1p(tau_eff * nbar / (1.0 + n_eff)) / math.log(2.0)
    if detection == "homodyne":
        return 0.5 * math.log1p(2.0 * tau_eff * nbar / (1.0 + 2.0 * n_eff)) / math.log(2.0)
    raise ValueError(f"detection must be one of {DETECTION_MODES}, got {detection!r}")


def holevo_bound(nbar: float, tau_eff: float, n_eff: float, detection: str = "heterodyne") -> float:
    """chi_BE = g(nu_1) + g(nu_2) - g(nu_3)."""
    blocks = covariance(nbar, tau_eff, n_eff)
    nu1, nu2 = symplectic_eigenvalues(blocks)
    nu3 = conditional_eigenvalue(blocks, detection)
    chi = g_entropy(nu1) + g_entropy(nu2) - g_entropy(nu3)
    logger.debug("nu=(%s, %s, %s) chi=%s", nu1, nu2, nu3, chi)
    return chi


def kse(skr: float, rolloff: float) -> float:
    """Key spectral efficiency (bits/s/Hz): SKR over the (1 + rolloff) bandwidth."""
    if not 0.0 <= rolloff <= 1.0:
        raise ValueError(f"roll-off must lie in [0, 1], got {rolloff}")
    return skr / (1.0 + rolloff)


def key_rate(
    nbar: float,
    tau: float,
    n_n: float,
    beta: float = 1.0,
    rolloff: float = 0.0,
    detection: str = "heterodyne",
) -> KeyRateBreakdown:
    """
    K(nbar; tau, n_n) = max(0, beta * I_AB - chi_BE).

    ``rolloff`` only feeds the ``kse`` field of the result.
    """
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"reconciliation efficiency must lie in (0, 1], got {beta}")
    info = mutual_information(nbar, tau, n_n, detection)
    chi = holevo_bound(nbar, tau, n_n, detection)
    raw = beta * info - chi
    skr = max(0.0, raw)
    return KeyRateBreakdown(
        mutual_info=info,
        holevo=chi,
        raw_skr=raw,
        skr=skr,
        kse=kse(skr, rolloff),
        transmissivity_eff=tau,
        excess_noise_eff=n_n,
    )


def effective_skr(
    nbar: float,
    channel: ChannelParams,
    overlap: OverlapSet,
    beta: float = 1.0,
    rolloff: float = 0.0,
    detection: str = "heterodyne",
) -> KeyRateBreakdown:
    """
    Key rate under Tx-Rx mode mismatch.

    The detected energy shrinks by |c_0|^2 and the neighbouring symbols add
    tau * nbar * sum_{j != 0} c_j^2 photons of excess noise. The ISI term uses
    the bare channel tau, not tau * |c_0|^2.
    """
    energy = matched_energy(overlap)
    leakage = isi_factor(overlap)
    tau_eff = channel.transmissivity * energy
    n_eff = channel.excess_noise + channel.transmissivity * nbar * leakage
    breakdown = key_rate(nbar, tau_eff, n_eff, beta, rolloff, detection)
    return KeyRateBreakdown(
        mutual_info=breakdown.mutual_info,
        holevo=breakdown.holevo,
        raw_skr=breakdown.raw_skr,
        skr=breakdown.skr,
        kse=breakdown.kse,
        transmissivity_eff=tau_eff,
        excess_noise_eff=n_eff,
        matched_energy=energy,
        isi_factor=leakage,
    )
