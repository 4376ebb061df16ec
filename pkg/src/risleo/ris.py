"""Reflecting-panel state and the cascaded effective channel.

Conventions: the transmit array has M antennas, the panel N elements.
``h_direct`` (M,) is the transmitter-to-user channel, ``h_sat_ris`` (N, M) the
transmitter-to-panel channel, ``h_ris_user`` (N,) the panel-to-user channel.
For a unit-norm beam ``w`` the effective scalar channel is

    g = h_direct^H w + sum_n conj(h_ris_user[n]) * a_n * exp(j*theta_n) * (h_sat_ris @ w)[n]

Panels are either passive (amplitudes fixed at 1) or active
(amplify-then-reflect, injecting thermal noise that scales with the squared
amplitudes and the panel-to-user channel).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .common import BOLTZMANN_J_PER_K, SNR_FLOOR_DB, linear_to_db
from .channel import LinkBudget

_TWO_PI = 2.0 * math.pi

PASSIVE = "passive"
ACTIVE = "active"


@dataclass(frozen=True)
class RisPanel:
    """Static description of a reflecting panel.

    ``n_elements`` may be zero (panel absent; every cascade term vanishes).
    ``phase_bits`` = 0 means continuous phases, otherwise phases live on the
    uniform grid with 2**phase_bits points. Passive panels have unit maximum
    amplitude by definition; active panels may amplify and carry a noise
    temperature for the injected amplifier noise.
    """

    n_elements: int
    mode: str = PASSIVE
    phase_bits: int = 0
    max_amplitude: float = 1.0
    ris_noise_temperature_k: float = 0.0

    def __post_init__(self) -> None:
        if not isinstance(self.n_elements, (int, np.integer)) or self.n_elements < 0:
            raise ValueError(f"n_elements must be an integer >= 0, got {self.n_elements}")
        if self.mode not in (PASSIVE, ACTIVE):
            raise ValueError(f"mode must be 'passive' or 'active', got {self.mode!r}")
        if not isinstance(self.phase_bits, (int, np.integer)) or self.phase_bits < 0:
            raise ValueError(f"phase_bits must be an integer >= 0, got {self.phase_bits}")
        if self.mode == PASSIVE and self.max_amplitude != 1.0:
            raise ValueError("passive panels have max_amplitude fixed at 1.0")
        if self.max_amplitude <= 0.0:
            raise ValueError(f"max_amplitude must be > 0, got {self.max_amplitude}")
        if self.ris_noise_temperature_k < 0.0:
            raise ValueError(
                f"ris_noise_temperature_k must be >= 0, got {self.ris_noise_temperature_k}"
            )


@dataclass
class RisState:
    """Per-element phases (wrapped to [0, 2*pi)) and nonnegative amplitudes."""

    phases_rad: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        self.phases_rad = np.asarray(self.phases_rad, dtype=float) % _TWO_PI
        self.amplitudes = np.asarray(self.amplitudes, dtype=float)
        if self.phases_rad.shape != self.amplitudes.shape or self.phases_rad.ndim != 1:
            raise ValueError(
                "phases_rad and amplitudes must be 1-D arrays of equal length, got "
                f"{self.phases_rad.shape} and {self.amplitudes.shape}"
            )
        if np.any(self.amplitudes < 0.0):
            raise ValueError("amplitudes must be >= 0")

    @property
    def n_elements(self) -> int:
        return self.phases_rad.size

    def quantized(self, phase_bits: int) -> "RisState":
        return RisState(quantize_phases(self.phases_rad, phase_bits), self.amplitudes.copy())


def full_amplitude_state(panel: RisPanel, phases_rad: np.ndarray | None = None) -> RisState:
    """State with every element at the panel's maximum amplitude."""
    n = panel.n_elements
    phases = np.zeros(n) if phases_rad is None else np.asarray(phases_rad, dtype=float)
    return RisState(phases, np.full(n, panel.max_amplitude, dtype=float))


@dataclass
class CascadedChannel:
    """One realization of the three links making up the cascade."""

    h_direct: np.ndarray    # (M,)
    h_sat_ris: np.ndarray   # (N, M)
    h_ris_user: np.ndarray  # (N,)

    def __post_init__(self) -> None:
        self.h_direct = np.asarray(self.h_direct, dtype=complex)
        self.h_sat_ris = np.asarray(self.h_sat_ris, dtype=complex)
        self.h_ris_user = np.asarray(self.h_ris_user, dtype=complex)
        if self.h_direct.ndim != 1:
            raise ValueError(f"h_direct must be 1-D, got shape {self.h_direct.shape}")
        if self.h_sat_ris.ndim != 2:
            raise ValueError(f"h_sat_ris must be 2-D, got shape {self.h_sat_ris.shape}")
        if self.h_ris_user.ndim != 1:
            raise ValueError(f"h_ris_user must be 1-D, got shape {self.h_ris_user.shape}")
        n, m = self.h_sat_ris.shape
        if self.h_direct.size != m:
            raise ValueError(
                f"h_direct has {self.h_direct.size} antennas but h_sat_ris has {m} columns"
            )
        if self.h_ris_user.size != n:
            raise ValueError(
                f"h_ris_user has {self.h_ris_user.size} elements but h_sat_ris has {n} rows"
            )

    @property
    def n_elements(self) -> int:
        return self.h_sat_ris.shape[0]

    @property
    def n_antennas(self) -> int:
        return self.h_sat_ris.shape[1]


def _check_unit_norm(w: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=complex)
    if w.ndim != 1:
        raise ValueError(f"w must be a 1-D beam vector, got shape {w.shape}")
    norm = float(np.linalg.norm(w))
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"w must be unit-norm (|‖w‖-1| <= 1e-9), got norm {norm!r}")
    return w


def effective_channel(ch: CascadedChannel, state: RisState, w: np.ndarray) -> complex:
    """Scalar effective channel seen by the user for a given beam and panel state."""
    w = _check_unit_norm(w)
    if w.size != ch.n_antennas:
        raise ValueError(f"w has {w.size} entries, channel expects {ch.n_antennas}")
    if state.n_elements != ch.n_elements:
        raise ValueError(
            f"state has {state.n_elements} elements, channel expects {ch.n_elements}"
        )
    direct = complex(np.vdot(ch.h_direct, w))
    incident = ch.h_sat_ris @ w
    reflected = np.conj(ch.h_ris_user) * state.amplitudes * np.exp(1j * state.phases_rad)
    return direct + complex(np.sum(reflected * incident))


def quantize_phases(phases_rad: np.ndarray, phase_bits: int) -> np.ndarray:
    """Snap phases to the nearest point of the 2**phase_bits uniform grid.

    Midpoint ties resolve toward the lower grid index. ``phase_bits`` = 0
    returns the (wrapped) phases unchanged: continuous operation.
    """
    if phase_bits < 0:
        raise ValueError(f"phase_bits must be >= 0, got {phase_bits}")
    phases = np.asarray(phases_rad, dtype=float) % _TWO_PI
    if phase_bits == 0:
        return phases
    levels = 1 << phase_bits
    step = _TWO_PI / levels
    idx = np.ceil(phases / step - 0.5).astype(np.int64) % levels
    return idx * step


def received_snr_db(
    g: complex,
    budget: LinkBudget,
    panel: RisPanel | None = None,
    state: RisState | None = None,
    ch: CascadedChannel | None = None,
) -> float:
    """Received SNR in dB for an effective channel under a link budget.

    Passive panels: SNR = P |g|^2 / sigma^2 with sigma^2 = k T B from the
    budget. Active panels additionally amplify their own thermal noise, which
    reaches the user through the panel-to-user channel:
    denominator += sigma_v^2 * sum_n a_n^2 |h_ris_user[n]|^2.

    ``g`` = 0 maps to the serialized floor sentinel (-400 dB) rather than -inf.
    """
    p_lin = 10.0 ** (budget.tx_power_dbw / 10.0)
    noise = BOLTZMANN_J_PER_K * budget.noise_temperature_k * budget.bandwidth_hz
    denom = noise
    if panel is not None and panel.mode == ACTIVE:
        if state is None or ch is None:
            raise ValueError("active panels need both state and ch to account for RIS noise")
        sigma_v2 = BOLTZMANN_J_PER_K * panel.ris_noise_temperature_k * budget.bandwidth_hz
        denom = noise + sigma_v2 * float(
            np.sum(state.amplitudes**2 * np.abs(ch.h_ris_user) ** 2)
        )
    snr_linear = p_lin * abs(g) ** 2 / denom
    return linear_to_db(snr_linear, floor_db=SNR_FLOOR_DB)
