"""Deterministic, parallel Monte Carlo driver.

Two study types share one scenario schema:

* ``outage_vs_elements``: outage probability of the co-phased panel link
  versus the element count, per elevation angle and rate threshold.
* ``snr_vs_elements``: mean received SNR versus the element count for the
  distributed AO scheme and the three benchmark beamformers, on paired
  channel realizations.

Determinism contract: every trial draws from its own substream keyed by
(master_seed, draw_group, trial_index), the element sweep consumes prefixes
of the widest draw, and elevation/threshold sweeps reuse the same draws.
Trials are processed in fixed-size blocks whose partial sums are reduced in
block order, so results are bit-identical for any worker count.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from statistics import NormalDist
from typing import Optional

import numpy as np

from .beamforming import (
    SCHEME_AO,
    SCHEME_TX_RIS_MRT,
    SCHEME_TX_SU_MRT,
    SCHEME_WITHOUT_RIS,
    ao_optimize,
    tx_ris_mrt,
    tx_su_mrt,
    without_ris,
)
from .channel import (
    Environment,
    LinkBudget,
    LosTable,
    fspl_db,
    load_fading_presets,
    los_probability,
    noise_power_dbw,
    sample_rayleigh,
    sample_shadowed_rician,
)
from .common import db_to_linear, linear_to_db
from .geometry import OrbitSpec, max_doppler_hz, slant_range_km
from .ofdm import (
    COMPENSATION_NONE,
    CompensationMode,
    OfdmGrid,
    ici_sinr,
    residual_cfo,
)
from .ris import CascadedChannel, RisPanel, quantize_phases

STUDY_OUTAGE = "outage_vs_elements"
STUDY_SNR = "snr_vs_elements"
STUDIES = (STUDY_OUTAGE, STUDY_SNR)

FADING_PRESET_NONE = "none"

# trials are grouped into blocks of this size; partial results are reduced
# in block order so the worker count never changes the output
TRIAL_BLOCK = 512

# all sweep axes (N, elevation, threshold) share one draw group, which is
# what makes the sweeps paired: same fading, different configuration
DRAW_GROUP_SHARED = 0

SNR_SCHEME_ORDER = (SCHEME_AO, SCHEME_TX_RIS_MRT, SCHEME_TX_SU_MRT, SCHEME_WITHOUT_RIS)


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete, validated description of one simulation run."""

    name: str
    study: str
    carrier_hz: float
    bandwidth_hz: float
    altitude_km: float
    elevation_deg: tuple
    n_elements: tuple
    trials: int
    master_seed: int
    tx_antennas: int = 1
    tx_power_dbw: float = 10.0
    tx_gain_dbi: float = 24.0
    rx_gain_dbi: float = 0.0
    noise_temperature_k: float = 500.0
    environment: str = "dense_urban"
    fading_preset: str = "average"
    ris_mode: str = "passive"
    phase_bits: int = 0
    n_subcarriers: int = 4096
    compensation_kind: str = "direct"
    direct_residual_factor: float = 0.01
    rate_thresholds_bpcu: tuple = (1.0,)
    subcarrier_samples: int = 8
    direct_link_enabled: bool = False
    nlos_clutter_loss_db: float = 0.0
    cascade_element_gain_db: float = 0.0
    disable_path_loss: bool = False
    los_table_path: str = ""

    def __post_init__(self):
        object.__setattr__(self, "elevation_deg", tuple(float(e) for e in self.elevation_deg))
        object.__setattr__(self, "n_elements", tuple(int(n) for n in self.n_elements))
        object.__setattr__(
            self, "rate_thresholds_bpcu", tuple(float(r) for r in self.rate_thresholds_bpcu)
        )
        if self.study not in STUDIES:
            raise ValueError(f"study must be one of {STUDIES}, got {self.study!r}")
        if self.carrier_hz <= 0.0:
            raise ValueError(f"carrier_hz must be positive, got {self.carrier_hz}")
        OrbitSpec(self.altitude_km)  # bounds check
        OfdmGrid(self.n_subcarriers, self.bandwidth_hz)
        CompensationMode(self.compensation_kind, self.direct_residual_factor)
        if not self.elevation_deg:
            raise ValueError("elevation_deg must list at least one angle")
        for e in self.elevation_deg:
            if not 0.0 <= e <= 90.0:
                raise ValueError(f"elevation_deg entries must lie in [0, 90], got {e}")
        if not self.n_elements:
            raise ValueError("n_elements must list at least one element count")
        if any(n < 0 for n in self.n_elements):
            raise ValueError("n_elements entries must be non-negative")
        if any(b <= a for a, b in zip(self.n_elements, self.n_elements[1:])):
            raise ValueError(f"n_elements must be strictly increasing, got {self.n_elements}")
        if not self.rate_thresholds_bpcu:
            raise ValueError("rate_thresholds_bpcu must list at least one threshold")
        if any(r < 0.0 for r in self.rate_thresholds_bpcu):
            raise ValueError("rate_thresholds_bpcu entries must be non-negative")
        if any(b <= a for a, b in zip(self.rate_thresholds_bpcu, self.rate_thresholds_bpcu[1:])):
            raise ValueError(
                f"rate_thresholds_bpcu must be strictly increasing, got {self.rate_thresholds_bpcu}"
            )
        if self.trials < 1:
            raise ValueError(f"trials must be a positive integer, got {self.trials}")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}")
        if self.tx_antennas < 1:
            raise ValueError(f"tx_antennas must be at least 1, got {self.tx_antennas}")
        if self.noise_temperature_k <= 0.0:
            raise ValueError(f"noise_temperature_k must be positive, got {self.noise_temperature_k}")
        if not 1 <= self.subcarrier_samples <= self.n_subcarriers:
            raise ValueError(
                "subcarrier_samples must lie in [1, n_subcarriers], "
                f"got {self.subcarrier_samples}"
            )
        if self.phase_bits < 0:
            raise ValueError(f"phase_bits must be non-negative, got {self.phase_bits}")
        if self.nlos_clutter_loss_db < 0.0:
            raise ValueError(
                f"nlos_clutter_loss_db must be non-negative, got {self.nlos_clutter_loss_db}"
            )
        Environment(self.environment)
        presets = set(load_fading_presets()) | {FADING_PRESET_NONE}
        if self.fading_preset not in presets:
            raise ValueError(
                f"fading_preset must be one of {sorted(presets)}, got {self.fading_preset!r}"
            )
        if self.ris_mode not in ("passive", "active"):
            raise ValueError(f"ris_mode must be 'passive' or 'active', got {self.ris_mode!r}")
        if self.study == STUDY_OUTAGE:
            if self.tx_antennas != 1:
                raise ValueError("outage_vs_elements supports a single transmit antenna only")
            if self.ris_mode != "passive":
                raise ValueError("outage_vs_elements supports passive panels only")
        if self.los_table_path:
            try:
                LosTable.from_file(self.los_table_path)
            except OSError as exc:
                raise ValueError(f"los_table_path: cannot read {self.los_table_path!r}: {exc}")
            except ValueError as exc:
                raise ValueError(f"los_table_path: {exc}")


@dataclass(frozen=True)
class SweepPoint:
    """One output row: a (scheme, N, elevation, threshold) combination."""

    scheme_label: str
    n_elements: int
    elevation_deg: float
    f_d_hz: float
    r_th_bpcu: Optional[float]
    trials: int
    outage_count: Optional[int]
    outage_prob: Optional[float]
    ci_low: Optional[float]
    ci_high: Optional[float]
    mean_snr_db: float


@dataclass(frozen=True)
class MonteCarloResult:
    scenario_name: str
    study: str
    master_seed: int
    scenario_hash: str
    points: tuple


def scenario_hash(cfg: ScenarioConfig) -> str:
    """SHA-256 over the canonical JSON form of the scenario."""
    payload = json.dumps(dataclasses.asdict(cfg), sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()


def make_link_budget(cfg: ScenarioConfig) -> LinkBudget:
    return LinkBudget(
        tx_power_dbw=cfg.tx_power_dbw,
        bandwidth_hz=cfg.bandwidth_hz,
        tx_antenna_gain_dbi=cfg.tx_gain_dbi,
        rx_antenna_gain_dbi=cfg.rx_gain_dbi,
        noise_temperature_k=cfg.noise_temperature_k,
    )


def confidence_interval(successes: int, trials: int, level: float = 0.95):
    """Wilson score interval for a binomial proportion.

    Chosen over the normal approximation because outage targets reach
    regions where counts are tiny and the normal interval escapes [0, 1].
    """
    if trials <= 0:
        raise ValueError(f"trials must be positive, got {trials}")
    if not 0 <= successes <= trials:
        raise ValueError(f"successes must lie in [0, trials], got {successes}/{trials}")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {level}")
    z = NormalDist().inv_cdf(0.5 + level / 2.0)
    n = float(trials)
    p = successes / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2.0 * n)) / denom
    half = (z / denom) * math.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n))
    # the bound is exact at the degenerate counts; don't let rounding move it
    low = 0.0 if successes == 0 else max(0.0, center - half)
    high = 1.0 if successes == trials else min(1.0, center + half)
    return (low, high)


def _trial_rng(master_seed: int, draw_group: int, trial_index: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=(draw_group, trial_index))
    return np.random.default_rng(seq)


def _n_blocks(trials: int) -> int:
    return (trials + TRIAL_BLOCK - 1) // TRIAL_BLOCK


def _map_blocks(worker, n_blocks: int, workers: int):
    """Run block workers and return their results in block-index order."""
    if workers <= 1:
        return [worker(b) for b in range(n_blocks)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, range(n_blocks)))


def _per_elevation_terms(cfg: ScenarioConfig):
    """Per-elevation linear SNR base (unit channel gain) and residual CFO."""
    orbit = OrbitSpec(cfg.altitude_km)
    grid = OfdmGrid(cfg.n_subcarriers, cfg.bandwidth_hz)
    mode = CompensationMode(cfg.compensation_kind, cfg.direct_residual_factor)
    noise_db = noise_power_dbw(make_link_budget(cfg))
    base = np.empty(len(cfg.elevation_deg))
    eps = np.empty(len(cfg.elevation_deg))
    doppler = np.empty(len(cfg.elevation_deg))
    for i, elev in enumerate(cfg.elevation_deg):
        f_d = max_doppler_hz(orbit, cfg.carrier_hz, elev)
        doppler[i] = f_d
        eps[i] = residual_cfo(f_d, grid, mode)
        if cfg.disable_path_loss:
            gain_db = 0.0
        else:
            distance = slant_range_km(orbit, elev)
            gain_db = -fspl_db(cfg.carrier_hz, distance) + cfg.tx_gain_dbi + cfg.rx_gain_dbi
        base[i] = db_to_linear(cfg.tx_power_dbw + gain_db - noise_db)
    return base, eps, doppler


def _outage_block(cfg: ScenarioConfig, block_index: int):
    """Outage counts and SNR sums for one block of trials.

    Signal model: satellite -> panel entries are shadowed-Rician per
    element and subcarrier sample, panel -> user entries are unit-power
    Rayleigh, and the single-antenna beam is trivial.  The composite
    per-element terms are accumulated as prefix sums so every N in the
    sweep is evaluated on the same draw.
    """
    start = block_index * TRIAL_BLOCK
    stop = min(start + TRIAL_BLOCK, cfg.trials)
    n_list = cfg.n_elements
    nmax = n_list[-1]
    n_cols = np.array(n_list)
    S = cfg.subcarrier_samples
    E = len(cfg.elevation_deg)
    K = len(n_list)
    thresholds = np.array(cfg.rate_thresholds_bpcu)

    presets = load_fading_presets()
    preset = None if cfg.fading_preset == FADING_PRESET_NONE else presets[cfg.fading_preset]
    base, eps, _ = _per_elevation_terms(cfg)
    cascade = db_to_linear(cfg.cascade_element_gain_db / 2.0)  # amplitude scale
    cophase = cfg.compensation_kind != COMPENSATION_NONE

    counts = np.zeros((E, K, thresholds.size), dtype=np.int64)
    snr_sums = np.zeros((E, K))
    zeros_col = np.zeros((S, 1))

    for t in range(start, stop):
        if preset is None:
            terms = np.full((S, nmax), cascade, dtype=complex)
            h_direct = (
                np.ones(S, dtype=complex) if cfg.direct_link_enabled else np.zeros(S, dtype=complex)
            )
        else:
            rng = _trial_rng(cfg.master_seed, DRAW_GROUP_SHARED, t)
            h_sat_ris = sample_shadowed_rician(preset, rng, size=(S, nmax))
            h_ris_user = sample_rayleigh(1.0, rng, size=(S, nmax))
            if cfg.direct_link_enabled:
                h_direct = sample_shadowed_rician(preset, rng, size=S)
            else:
                h_direct = np.zeros(S, dtype=complex)
            terms = np.conj(h_ris_user) * h_sat_ris * cascade

        if not cophase:
            cum = np.cumsum(terms, axis=1)
            g = h_direct[:, None] + np.concatenate([zeros_col.astype(complex), cum], axis=1)[:, n_cols]
            gain_sq = np.abs(g) ** 2
        elif cfg.phase_bits > 0:
            ref = np.angle(h_direct)[:, None] if cfg.direct_link_enabled else 0.0
            aligned = np.mod(ref - np.angle(terms), 2.0 * np.pi)
            rotated = terms * np.exp(1j * quantize_phases(aligned, cfg.phase_bits))
            cum = np.cumsum(rotated, axis=1)
            g = h_direct[:, None] + np.concatenate([zeros_col.astype(complex), cum], axis=1)[:, n_cols]
            gain_sq = np.abs(g) ** 2
        else:
            cum = np.cumsum(np.abs(terms), axis=1)
            gain = np.abs(h_direct)[:, None] + np.concatenate([zeros_col, cum], axis=1)[:, n_cols]
            gain_sq = gain**2

        for e in range(E):
            snr = base[e] * gain_sq  # (S, K)
            rate = np.log2(1.0 + ici_sinr(snr, eps[e]))
            counts[e] += np.sum(rate[:, :, None] < thresholds[None, None, :], axis=0)
            snr_sums[e] += snr.sum(axis=0)

    return counts, snr_sums, stop - start


def run_outage_sweep(cfg: ScenarioConfig, workers: int = 1) -> MonteCarloResult:
    if cfg.study != STUDY_OUTAGE:
        raise ValueError(f"run_outage_sweep requires study={STUDY_OUTAGE!r}, got {cfg.study!r}")
    parts = _map_blocks(partial(_outage_block, cfg), _n_blocks(cfg.trials), workers)

    E, K, R = len(cfg.elevation_deg), len(cfg.n_elements), len(cfg.rate_thresholds_bpcu)
    counts = np.zeros((E, K, R), dtype=np.int64)
    snr_sums = np.zeros((E, K))
    total = 0
    for part_counts, part_sums, part_trials in parts:  # block order, see module docstring
        counts += part_counts
        snr_sums += part_sums
        total += part_trials

    _, _, doppler = _per_elevation_terms(cfg)
    units = total * cfg.subcarrier_samples
    points = []
    for k, n in enumerate(cfg.n_elements):
        for e, elev in enumerate(cfg.elevation_deg):
            mean_snr = linear_to_db(float(snr_sums[e, k]) / units)
            for r, r_th in enumerate(cfg.rate_thresholds_bpcu):
                count = int(counts[e, k, r])
                low, high = confidence_interval(count, units)
                points.append(
                    SweepPoint(
                        scheme_label=SCHEME_AO,
                        n_elements=n,
                        elevation_deg=elev,
                        f_d_hz=float(doppler[e]),
                        r_th_bpcu=r_th,
                        trials=units,
                        outage_count=count,
                        outage_prob=count / units,
                        ci_low=low,
                        ci_high=high,
                        mean_snr_db=mean_snr,
                    )
                )
    return _finish(cfg, points)


def _snr_block(cfg: ScenarioConfig, block_index: int):
    """Mean-SNR sums for one block of trials, all four schemes paired.

    Signal model: the direct satellite -> user link mixes LOS and NLOS
    states by the environment's LOS probability, with an extra clutter
    loss in the NLOS state; the satellite -> panel link is pure LOS and
    therefore rank-one, the outer product of random-phase steering
    vectors with unit-modulus entries; the panel -> user link is
    shadowed-Rician with a per-element gain budget.  The element sweep
    consumes prefixes of the widest draw.
    """
    start = block_index * TRIAL_BLOCK
    stop = min(start + TRIAL_BLOCK, cfg.trials)
    n_list = cfg.n_elements
    nmax = n_list[-1]
    M = cfg.tx_antennas
    E = len(cfg.elevation_deg)
    K = len(n_list)

    presets = load_fading_presets()
    preset = None if cfg.fading_preset == FADING_PRESET_NONE else presets[cfg.fading_preset]
    budget = make_link_budget(cfg)
    orbit = OrbitSpec(cfg.altitude_km)
    cascade = db_to_linear(cfg.cascade_element_gain_db / 2.0)

    table = LosTable.from_file(cfg.los_table_path) if cfg.los_table_path else None
    los_p = np.empty(E)
    amp_los = np.empty(E)
    amp_nlos = np.empty(E)
    for e, elev in enumerate(cfg.elevation_deg):
        los_p[e] = los_probability(cfg.environment, elev, table=table)
        if cfg.disable_path_loss:
            path_db = 0.0
        else:
            distance = slant_range_km(orbit, elev)
            path_db = -fspl_db(cfg.carrier_hz, distance) + cfg.tx_gain_dbi + cfg.rx_gain_dbi
        amp_los[e] = db_to_linear(path_db / 2.0)
        amp_nlos[e] = db_to_linear((path_db - cfg.nlos_clutter_loss_db) / 2.0)

    panels = [
        RisPanel(n, mode=cfg.ris_mode, phase_bits=cfg.phase_bits) for n in n_list
    ]
    sums = np.zeros((E, len(SNR_SCHEME_ORDER), K))

    for t in range(start, stop):
        if preset is None:
            u = 0.0  # always LOS
            hd_small = np.ones(M, dtype=complex) if cfg.direct_link_enabled else np.zeros(M, dtype=complex)
            h_sat_ris = np.ones((nmax, M), dtype=complex)
            hru_small = np.ones(nmax, dtype=complex)
        else:
            rng = _trial_rng(cfg.master_seed, DRAW_GROUP_SHARED, t)
            u = rng.random()
            if cfg.direct_link_enabled:
                hd_small = sample_shadowed_rician(preset, rng, size=M)
            else:
                hd_small = np.zeros(M, dtype=complex)
            steer_panel = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, size=nmax))
            steer_tx = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, size=M))
            h_sat_ris = steer_panel[:, None] * np.conj(steer_tx)[None, :]
            hru_small = sample_shadowed_rician(preset, rng, size=nmax)

        h_ris_user = hru_small * cascade
        for e in range(E):
            amp = amp_los[e] if u < los_p[e] else amp_nlos[e]
            h_direct = hd_small * amp
            for k in range(K):
                n = n_list[k]
                ch = CascadedChannel(h_direct, h_sat_ris[:n], h_ris_user[:n])
                solutions = (
                    ao_optimize(ch, panels[k], budget),
                    tx_ris_mrt(ch, panels[k], budget),
                    tx_su_mrt(ch, panels[k], budget),
                    without_ris(ch, budget),
                )
                for s, sol in enumerate(solutions):
                    sums[e, s, k] += db_to_linear(sol.snr_db)

    return sums, stop - start


def run_snr_case_study(cfg: ScenarioConfig, workers: int = 1) -> MonteCarloResult:
    if cfg.study != STUDY_SNR:
        raise ValueError(f"run_snr_case_study requires study={STUDY_SNR!r}, got {cfg.study!r}")
    parts = _map_blocks(partial(_snr_block, cfg), _n_blocks(cfg.trials), workers)

    E, K = len(cfg.elevation_deg), len(cfg.n_elements)
    sums = np.zeros((E, len(SNR_SCHEME_ORDER), K))
    total = 0
    for part_sums, part_trials in parts:  # block order, see module docstring
        sums += part_sums
        total += part_trials

    _, _, doppler = _per_elevation_terms(cfg)
    points = []
    for s, scheme in enumerate(SNR_SCHEME_ORDER):
        for k, n in enumerate(cfg.n_elements):
            for e, elev in enumerate(cfg.elevation_deg):
                points.append(
                    SweepPoint(
                        scheme_label=scheme,
                        n_elements=n,
                        elevation_deg=elev,
                        f_d_hz=float(doppler[e]),
                        r_th_bpcu=None,
                        trials=total,
                        outage_count=None,
                        outage_prob=None,
                        ci_low=None,
                        ci_high=None,
                        mean_snr_db=linear_to_db(float(sums[e, s, k]) / total),
                    )
                )
    return _finish(cfg, points)


def _finish(cfg: ScenarioConfig, points) -> MonteCarloResult:
    points.sort(
        key=lambda p: (
            p.scheme_label,
            p.n_elements,
            p.elevation_deg,
            p.r_th_bpcu if p.r_th_bpcu is not None else -1.0,
        )
    )
    return MonteCarloResult(
        scenario_name=cfg.name,
        study=cfg.study,
        master_seed=cfg.master_seed,
        scenario_hash=scenario_hash(cfg),
        points=tuple(points),
    )


def run_scenario(cfg: ScenarioConfig, workers: int = 1) -> MonteCarloResult:
    """Dispatch a validated scenario to the matching study runner."""
    if cfg.study == STUDY_OUTAGE:
        return run_outage_sweep(cfg, workers=workers)
    return run_snr_case_study(cfg, workers=workers)
