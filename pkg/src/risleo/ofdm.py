"""OFDM grid bookkeeping and the Doppler-to-SINR coupling.

A moving satellite leaves a residual carrier frequency offset (CFO) after
whatever compensation the panel applies.  Normalised by the subcarrier
spacing, that offset attenuates the useful subcarrier by sinc^2 and spills
the lost power onto the neighbours as inter-carrier interference.  The
functions here turn a Doppler shift into a post-ICI SINR, a rate, and an
outage indicator; all of them accept scalars or arrays.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)

COMPENSATION_NONE = "none"
COMPENSATION_INDIRECT = "indirect"
COMPENSATION_DIRECT = "direct"
COMPENSATION_KINDS = (COMPENSATION_NONE, COMPENSATION_INDIRECT, COMPENSATION_DIRECT)


@dataclass(frozen=True)
class OfdmGrid:
    """Subcarrier layout of the downlink waveform."""

    n_subcarriers: int = 4096
    bandwidth_hz: float = 245.76e6

    def __post_init__(self) -> None:
        if not isinstance(self.n_subcarriers, int) or self.n_subcarriers < 1:
            raise ValueError(f"n_subcarriers must be a positive integer, got {self.n_subcarriers}")
        if self.bandwidth_hz <= 0.0:
            raise ValueError(f"bandwidth_hz must be positive, got {self.bandwidth_hz}")

    @property
    def subcarrier_spacing_hz(self) -> float:
        return self.bandwidth_hz / self.n_subcarriers


@dataclass(frozen=True)
class CompensationMode:
    """How the panel treats the Doppler phase ramp.

    none      - the panel does nothing about Doppler; the full shift leaks
                into the CFO and the phases are left untouched.
    indirect  - the panel co-phases for signal strength only; the Doppler
                shift still leaks in full.
    direct    - the panel additionally tracks the phase ramp, leaving a
                configurable residual fraction of the shift.
    """

    kind: str = COMPENSATION_DIRECT
    direct_residual_factor: float = 0.01

    def __post_init__(self) -> None:
        if self.kind not in COMPENSATION_KINDS:
            raise ValueError(f"kind must be one of {COMPENSATION_KINDS}, got {self.kind!r}")
        if not 0.0 <= self.direct_residual_factor <= 1.0:
            raise ValueError(
                f"direct_residual_factor must lie in [0, 1], got {self.direct_residual_factor}"
            )


@dataclass(frozen=True)
class OutageSpec:
    """Rate threshold defining an outage, in bits per channel use."""

    rate_threshold_bpcu: float = 1.0

    def __post_init__(self) -> None:
        if self.rate_threshold_bpcu < 0.0:
            raise ValueError(
                f"rate_threshold_bpcu must be non-negative, got {self.rate_threshold_bpcu}"
            )


def residual_cfo(f_d_hz: float, grid: OfdmGrid, mode: CompensationMode) -> float:
    """Normalised CFO left over after the configured compensation."""
    if f_d_hz < 0.0:
        raise ValueError(f"f_d_hz must be non-negative, got {f_d_hz}")
    ratio = f_d_hz / grid.subcarrier_spacing_hz
    if mode.kind == COMPENSATION_DIRECT:
        return mode.direct_residual_factor * ratio
    return ratio


def wrap_cfo(epsilon):
    """Wrap a normalised CFO into [-0.5, 0.5].

    Integer subcarrier offsets are assumed corrected by the receiver's
    coarse synchroniser; they are removed here and logged.
    """
    eps = np.asarray(epsilon, dtype=float)
    integer_part = np.round(eps)
    n_shifted = int(np.count_nonzero(np.abs(integer_part) >= 1.0))
    if n_shifted:
        log.warning(
            "wrap_cfo: removed integer subcarrier offsets from %d value(s); "
            "coarse synchronisation is assumed",
            n_shifted,
        )
    wrapped = eps - integer_part
    if np.ndim(epsilon) == 0:
        return float(wrapped)
    return wrapped


def ici_sinr(snr_linear, epsilon):
    """Post-ICI SINR for a single-tap channel with normalised CFO epsilon.

    The useful subcarrier keeps sinc^2(eps) of the signal power; the rest
    reappears as interference:

        SINR = S sinc^2(eps) / (1 + S (1 - sinc^2(eps)))
    """
    snr = np.asarray(snr_linear, dtype=float)
    if np.any(snr < 0.0):
        raise ValueError("snr_linear must be non-negative")
    attenuation = np.sinc(wrap_cfo(epsilon)) ** 2
    sinr = snr * attenuation / (1.0 + snr * (1.0 - attenuation))
    if np.ndim(snr_linear) == 0 and np.ndim(epsilon) == 0:
        return float(sinr)
    return sinr


def achievable_rate_bpcu(sinr_linear):
    """Shannon rate log2(1 + SINR) in bits per channel use."""
    sinr = np.asarray(sinr_linear, dtype=float)
    if np.any(sinr < 0.0):
        raise ValueError("sinr_linear must be non-negative")
    rate = np.log2(1.0 + sinr)
    if np.ndim(sinr_linear) == 0:
        return float(rate)
    return rate


def outage_indicator(rate_bpcu, spec: OutageSpec):
    """True where the achievable rate falls strictly below the threshold."""
    rate = np.asarray(rate_bpcu, dtype=float)
    below = rate < spec.rate_threshold_bpcu
    if np.ndim(rate_bpcu) == 0:
        return bool(below)
    return below
