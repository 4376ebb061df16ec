"""Channel models for satellite downlinks.

Covers the large-scale side (free-space path loss, environment-conditioned
LOS probability, thermal noise) and the small-scale side (shadowed-Rician and
Rayleigh fading). Fading is frequency-flat per subchannel and i.i.d. across
subchannels, antennas, and reflecting elements; frequency selectivity across
a wideband grid is handled by drawing independent realizations per subcarrier.
"""

from __future__ import annotations

import csv
import functools
import math
from dataclasses import dataclass
from enum import Enum
from importlib import resources

import numpy as np

from .common import BOLTZMANN_J_PER_K

_TWO_PI = 2.0 * math.pi


class Environment(str, Enum):
    """Terminal surroundings used to condition the LOS probability table."""

    DENSE_URBAN = "dense_urban"
    URBAN = "urban"
    SUBURBAN_RURAL = "suburban_rural"


@dataclass(frozen=True)
class ShadowedRicianParams:
    """Parameters of the shadowed-Rician fading model.

    The channel is ``h = A * exp(j*phi) + Z`` with ``A`` Nakagami-m distributed
    (spread ``omega``), ``phi`` uniform, and ``Z`` circularly-symmetric complex
    Gaussian with per-dimension variance ``b``. Mean power is ``2*b + omega``.
    """

    b: float
    m: float
    omega: float

    def __post_init__(self) -> None:
        if self.b <= 0.0:
            raise ValueError(f"b must be > 0, got {self.b}")
        if self.m <= 0.0:
            raise ValueError(f"m must be > 0, got {self.m}")
        if self.omega < 0.0:
            raise ValueError(f"omega must be >= 0, got {self.omega}")

    @property
    def mean_power(self) -> float:
        return 2.0 * self.b + self.omega


@dataclass(frozen=True)
class LinkBudget:
    """Transmit-side and receive-side budget for one link."""

    tx_power_dbw: float
    bandwidth_hz: float
    tx_antenna_gain_dbi: float = 24.0
    rx_antenna_gain_dbi: float = 0.0
    noise_temperature_k: float = 500.0

    def __post_init__(self) -> None:
        if self.bandwidth_hz <= 0.0:
            raise ValueError(f"bandwidth_hz must be > 0, got {self.bandwidth_hz}")
        if self.noise_temperature_k <= 0.0:
            raise ValueError(
                f"noise_temperature_k must be > 0, got {self.noise_temperature_k}"
            )


class LosTable:
    """Environment-conditioned LOS probability on a 10..90 deg elevation grid.

    The table is data, not code: it ships as a plain-text CSV with columns
    ``environment,elevation_deg,p_los`` so the numbers stay auditable and
    swappable without touching code.
    """

    def __init__(self, table: dict[str, tuple[np.ndarray, np.ndarray]]) -> None:
        if not table:
            raise ValueError("LOS table must not be empty")
        for env, (elevs, probs) in table.items():
            if elevs.shape != probs.shape or elevs.size < 2:
                raise ValueError(f"LOS table for {env!r} is malformed")
            if np.any(np.diff(elevs) <= 0.0):
                raise ValueError(f"LOS table elevations for {env!r} must increase")
            if np.any(np.diff(probs) < 0.0):
                raise ValueError(
                    f"LOS probabilities for {env!r} must be non-decreasing in elevation"
                )
            if np.any((probs < 0.0) | (probs > 1.0)):
                raise ValueError(f"LOS probabilities for {env!r} must lie in [0, 1]")
        self._table = table

    @classmethod
    def from_rows(cls, rows: list[tuple[str, float, float]]) -> "LosTable":
        grouped: dict[str, list[tuple[float, float]]] = {}
        for env, elev, p in rows:
            grouped.setdefault(env, []).append((elev, p))
        table = {}
        for env, pairs in grouped.items():
            pairs.sort()
            elevs = np.array([e for e, _ in pairs], dtype=float)
            probs = np.array([p for _, p in pairs], dtype=float)
            table[env] = (elevs, probs)
        return cls(table)

    @classmethod
    def from_file(cls, path) -> "LosTable":
        rows = []
        with open(path, "r", encoding="utf-8") as fh:
            filtered = (line for line in fh if not line.lstrip().startswith("#"))
            reader = csv.DictReader(filtered)
            missing = {"environment", "elevation_deg", "p_los"} - set(reader.fieldnames or ())
            if missing:
                raise ValueError(f"LOS table is missing columns: {', '.join(sorted(missing))}")
            for rec in reader:
                rows.append(
                    (rec["environment"], float(rec["elevation_deg"]), float(rec["p_los"]))
                )
        return cls.from_rows(rows)

    @property
    def environments(self) -> list[str]:
        return sorted(self._table)

    def probability(self, environment: Environment | str, elevation_deg: float) -> float:
        env = Environment(environment).value
        elevs, probs = self._table[env]
        if elevation_deg < elevs[0] or elevation_deg > elevs[-1]:
            raise ValueError(
                f"elevation_deg must lie in [{elevs[0]:g}, {elevs[-1]:g}] for the LOS "
                f"table, got {elevation_deg}"
            )
        return float(np.interp(elevation_deg, elevs, probs))


@functools.lru_cache(maxsize=1)
def load_default_los_table() -> LosTable:
    ref = resources.files("risleo.data").joinpath("los_table_tr38811.csv")
    with resources.as_file(ref) as path:
        return LosTable.from_file(path)


@functools.lru_cache(maxsize=1)
def load_fading_presets() -> dict[str, ShadowedRicianParams]:
    """Named shadowed-Rician presets shipped as a data file, keyed by name."""
    ref = resources.files("risleo.data").joinpath("fading_presets.csv")
    presets: dict[str, ShadowedRicianParams] = {}
    with resources.as_file(ref) as path:
        with open(path, "r", encoding="utf-8") as fh:
            filtered = (line for line in fh if not line.lstrip().startswith("#"))
            for rec in csv.DictReader(filtered):
                presets[rec["preset"]] = ShadowedRicianParams(
                    b=float(rec["b"]), m=float(rec["m"]), omega=float(rec["omega"])
                )
    if not presets:
        raise ValueError("fading preset file is empty")
    return presets


def los_probability(
    environment: Environment | str,
    elevation_deg: float,
    table: LosTable | None = None,
) -> float:
    """LOS probability by linear interpolation on the shipped elevation grid."""
    tbl = table if table is not None else load_default_los_table()
    return tbl.probability(environment, elevation_deg)


def fspl_db(carrier_hz: float, distance_km: float) -> float:
    """Free-space path loss, dB: 92.45 + 20*log10(f_GHz) + 20*log10(d_km)."""
    if carrier_hz <= 0.0:
        raise ValueError(f"carrier_hz must be > 0, got {carrier_hz}")
    if distance_km <= 0.0:
        raise ValueError(f"distance_km must be > 0, got {distance_km}")
    f_ghz = carrier_hz / 1e9
    return 92.45 + 20.0 * math.log10(f_ghz) + 20.0 * math.log10(distance_km)


def noise_power_dbw(budget: LinkBudget, bandwidth_hz: float = None) -> float:
    """Thermal noise power 10*log10(k*T*B); defaults to the budget's bandwidth."""
    if bandwidth_hz is None:
        bandwidth_hz = budget.bandwidth_hz
    if bandwidth_hz <= 0.0:
        raise ValueError(f"bandwidth_hz must be > 0, got {bandwidth_hz}")
    return 10.0 * math.log10(
        BOLTZMANN_J_PER_K * budget.noise_temperature_k * bandwidth_hz
    )


def sample_shadowed_rician(
    params: ShadowedRicianParams,
    rng: np.random.Generator,
    size: int | tuple[int, ...] | None = None,
):
    """Draw complex shadowed-Rician fading coefficients.

    The LOS amplitude is Nakagami-m (``A = sqrt(Gamma(m, omega/m))``, so
    ``E[A^2] = omega``) with a uniform phase, on top of a CSCG scattered
    component with per-dimension variance ``b``.
    """
    los_amp = np.sqrt(rng.gamma(shape=params.m, scale=params.omega / params.m, size=size))
    los_phase = rng.uniform(0.0, _TWO_PI, size=size)
    scatter = math.sqrt(params.b) * (
        rng.standard_normal(size) + 1j * rng.standard_normal(size)
    )
    return los_amp * np.exp(1j * los_phase) + scatter


def sample_rayleigh(
    mean_power: float,
    rng: np.random.Generator,
    size: int | tuple[int, ...] | None = None,
):
    """Draw CSCG (Rayleigh-envelope) coefficients with E|h|^2 = mean_power."""
    if mean_power < 0.0:
        raise ValueError(f"mean_power must be >= 0, got {mean_power}")
    scale = math.sqrt(mean_power / 2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))
