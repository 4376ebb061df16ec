"""Transmit beam and panel-phase optimization.

Four schemes share one solution container:

- ``ao_distributed``  alternating optimization with closed-form sub-steps,
                      run from both closed-form starting beams by default so
                      it never falls below a benchmark on the same draw
- ``tx_ris_mrt``      beam matched to the transmitter-to-panel link (principal
                      right singular vector), panel co-phased afterwards
- ``tx_su_mrt``       beam matched to the direct link, panel co-phased afterwards
- ``without_ris``     beam matched to the direct link, panel off

Both alternating sub-steps are conditional argmaxima of |g| (the noise terms
do not depend on the beam or the phases), so the SNR trace is non-decreasing
by construction. For quantized panels the alternation runs on continuous
phases and the returned state is the best grid-snapped candidate observed,
each paired with its matched beam; this keeps the returned value within
floating-point noise of an exhaustive grid search when restarted from every
grid point, while plain end-of-run rounding can lose a coarse-grid step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .common import SNR_FLOOR_DB, linear_to_db
from .channel import LinkBudget
from .ris import (
    ACTIVE,
    CascadedChannel,
    RisPanel,
    RisState,
    effective_channel,
    quantize_phases,
    received_snr_db,
)

_TWO_PI = 2.0 * math.pi

SCHEME_AO = "ao_distributed"
SCHEME_TX_RIS_MRT = "tx_ris_mrt"
SCHEME_TX_SU_MRT = "tx_su_mrt"
SCHEME_WITHOUT_RIS = "without_ris"
SCHEME_LABELS = (SCHEME_AO, SCHEME_TX_RIS_MRT, SCHEME_TX_SU_MRT, SCHEME_WITHOUT_RIS)

INIT_BEST_OF_MRT = "best_of_mrt"
INIT_FROM_TX_RIS_MRT = "from_tx_ris_mrt"
INIT_FROM_TX_SU_MRT = "from_tx_su_mrt"
INIT_RANDOM = "random"
_INITS = (INIT_BEST_OF_MRT, INIT_FROM_TX_RIS_MRT, INIT_FROM_TX_SU_MRT, INIT_RANDOM)

# Exhaustive phase search refuses beyond 2**24 candidates.
BRUTE_FORCE_MAX_GRID_BITS = 24


@dataclass(frozen=True)
class AoConfig:
    """Alternating-optimization controls.

    The default initialization follows the alternation from both closed-form
    beams (transmitter-to-panel matched and direct-link matched) and keeps
    the better trajectory, which guarantees the returned SNR dominates every
    benchmark scheme on the same realization. The single-start modes exist
    for studying one trajectory in isolation.
    """

    max_iterations: int = 50
    convergence_tol: float = 1e-6  # relative change of the linear SNR
    init: str = INIT_BEST_OF_MRT

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.convergence_tol <= 0.0:
            raise ValueError(f"convergence_tol must be > 0, got {self.convergence_tol}")
        if self.init not in _INITS:
            raise ValueError(f"init must be one of {_INITS}, got {self.init!r}")


@dataclass
class BeamformerSolution:
    """Beam, panel state, and SNR bookkeeping for one scheme on one realization."""

    w: np.ndarray
    ris: RisState
    snr_trace_db: list[float]
    scheme_label: str
    snr_db: float
    converged: bool = True
    used_fallback: bool = False


def _unit_or_none(v: np.ndarray) -> np.ndarray | None:
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        return None
    return v / norm


def _first_basis_beam(m: int) -> np.ndarray:
    w = np.zeros(m, dtype=complex)
    w[0] = 1.0
    return w


def _principal_right_singular_beam(h_sat_ris: np.ndarray) -> np.ndarray | None:
    """Unit beam maximizing ||h_sat_ris @ w||, or None for an empty/zero link.

    Solved on the M x M Gram matrix rather than by a full SVD; the panel
    dimension N can be in the hundreds while M stays small.
    """
    if h_sat_ris.size == 0 or not np.any(h_sat_ris):
        return None
    gram = h_sat_ris.conj().T @ h_sat_ris
    _, eigvecs = np.linalg.eigh(gram)
    beam = eigvecs[:, -1]
    return beam / np.linalg.norm(beam)


def _composite_tx_vector(
    ch: CascadedChannel, amplitudes: np.ndarray, phases: np.ndarray
) -> np.ndarray:
    """Vector c with g = c^H w: direct link plus the phase-configured cascade."""
    weights = ch.h_ris_user * amplitudes * np.exp(-1j * phases)
    return ch.h_direct + np.conj(ch.h_sat_ris.T) @ weights


def aligned_phases(
    ch: CascadedChannel, amplitudes: np.ndarray, w: np.ndarray
) -> tuple[np.ndarray, float]:
    """Co-phasing step: align every cascade term with the direct term.

    Returns the phases and the resulting |g|. With a vanishing direct term the
    common reference falls back to phase zero, so the cascade terms still add
    coherently.
    """
    direct = complex(np.vdot(ch.h_direct, w))
    incident = ch.h_sat_ris @ w
    ref = math.atan2(direct.imag, direct.real) if direct != 0 else 0.0
    term = np.conj(ch.h_ris_user) * incident
    phases = (ref - np.angle(term)) % _TWO_PI
    gain = abs(direct) + float(np.sum(amplitudes * np.abs(term)))
    return phases, gain


def _snr_denominator(budget: LinkBudget, panel: RisPanel | None, amplitudes, ch) -> float:
    from .common import BOLTZMANN_J_PER_K

    noise = BOLTZMANN_J_PER_K * budget.noise_temperature_k * budget.bandwidth_hz
    if panel is not None and panel.mode == ACTIVE:
        sigma_v2 = BOLTZMANN_J_PER_K * panel.ris_noise_temperature_k * budget.bandwidth_hz
        noise += sigma_v2 * float(np.sum(amplitudes**2 * np.abs(ch.h_ris_user) ** 2))
    return noise


def _tx_ris_beam(ch: CascadedChannel) -> np.ndarray:
    w = _principal_right_singular_beam(ch.h_sat_ris)
    if w is None:
        w = _unit_or_none(ch.h_direct)
    if w is None:
        w = _first_basis_beam(ch.n_antennas)
    return w


def _tx_su_beam(ch: CascadedChannel) -> np.ndarray:
    w = _unit_or_none(ch.h_direct)
    if w is None:
        w = _principal_right_singular_beam(ch.h_sat_ris)
    if w is None:
        w = _first_basis_beam(ch.n_antennas)
    return w


def _ao_from(
    ch: CascadedChannel,
    panel: RisPanel,
    budget: LinkBudget,
    config: AoConfig,
    amps: np.ndarray,
    theta: np.ndarray,
) -> BeamformerSolution:
    """One alternation trajectory from the given initial phases."""
    m = ch.n_antennas
    bits = panel.phase_bits
    p_lin = 10.0 ** (budget.tx_power_dbw / 10.0)
    denom = _snr_denominator(budget, panel, amps, ch)

    def snr_db_of(gain: float) -> float:
        return linear_to_db(p_lin * gain * gain / denom, floor_db=SNR_FLOOR_DB)

    best_q: tuple[float, np.ndarray, np.ndarray] | None = None

    def consider_quantized(theta_now: np.ndarray) -> None:
        # Pair the grid-snapped phases with their own matched beam; keep the best.
        nonlocal best_q
        tq = quantize_phases(theta_now, bits)
        cq = _composite_tx_vector(ch, amps, tq)
        gain_q = float(np.linalg.norm(cq))
        if best_q is None or gain_q > best_q[0]:
            wq = cq / gain_q if gain_q > 0.0 else _first_basis_beam(m)
            best_q = (gain_q, wq, tq)

    trace_db: list[float] = []
    w = _first_basis_beam(m)
    gain_prev: float | None = None
    gain = 0.0
    converged = False
    for _ in range(config.max_iterations):
        if bits > 0:
            consider_quantized(theta)
        c = _composite_tx_vector(ch, amps, theta)  # step (i): matched beam
        w_new = _unit_or_none(c)
        if w_new is None:
            w_new = _first_basis_beam(m)
        theta_new, gain_new = aligned_phases(ch, amps, w_new)  # step (ii)
        if gain_prev is not None and gain_new < gain_prev:
            # Mathematically impossible (both steps are argmaxima); only
            # floating-point noise lands here. Keep the previous iterate.
            converged = True
            break
        w, theta, gain = w_new, theta_new, gain_new
        trace_db.append(snr_db_of(gain))
        if gain_prev is not None:
            if gain_prev == 0.0:
                if gain == 0.0:
                    converged = True
                    break
            elif abs(gain * gain - gain_prev * gain_prev) / (gain_prev * gain_prev) < (
                config.convergence_tol
            ):
                converged = True
                break
        gain_prev = gain

    if bits > 0:
        consider_quantized(theta)
        assert best_q is not None
        gain_q, w_final, theta_final = best_q
        return BeamformerSolution(
            w=w_final,
            ris=RisState(theta_final, amps),
            snr_trace_db=trace_db,
            scheme_label=SCHEME_AO,
            snr_db=snr_db_of(gain_q),
            converged=converged,
        )
    return BeamformerSolution(
        w=w,
        ris=RisState(theta, amps),
        snr_trace_db=trace_db,
        scheme_label=SCHEME_AO,
        snr_db=snr_db_of(gain),
        converged=converged,
    )


def ao_optimize(
    ch: CascadedChannel,
    panel: RisPanel,
    budget: LinkBudget,
    config: AoConfig | None = None,
    rng: np.random.Generator | None = None,
    initial_phases: np.ndarray | None = None,
) -> BeamformerSolution:
    """Alternate beam matching and panel co-phasing until the SNR settles.

    Step (i) sets the beam to the matched filter of the composite transmit
    channel for the current phases; step (ii) re-aligns every cascade term
    with the direct term for the current beam. Each step is a conditional
    argmax, so the recorded SNR trace never decreases. Non-convergence within
    ``max_iterations`` returns the best iterate with ``converged=False``.

    The default initialization runs the alternation from both closed-form
    beams and returns the better trajectory; a single trajectory from either
    beam (or a random start) can be requested through ``AoConfig.init``.
    ``initial_phases`` overrides the configured initialization; it exists so
    callers can restart the alternation from chosen points (e.g. every point
    of a quantization grid).
    """
    config = config if config is not None else AoConfig()
    n, m = ch.n_elements, ch.n_antennas
    if panel.n_elements != n:
        raise ValueError(f"panel has {panel.n_elements} elements, channel {n}")
    amps = np.full(n, panel.max_amplitude, dtype=float)

    if initial_phases is not None:
        theta0 = np.asarray(initial_phases, dtype=float) % _TWO_PI
        if theta0.shape != (n,):
            raise ValueError(f"initial_phases must have shape ({n},), got {theta0.shape}")
        starts = [theta0]
    elif config.init == INIT_RANDOM:
        if rng is None:
            raise ValueError("init='random' requires an rng")
        starts = [rng.uniform(0.0, _TWO_PI, size=n)]
    elif config.init == INIT_FROM_TX_SU_MRT:
        starts = [aligned_phases(ch, amps, _tx_su_beam(ch))[0]]
    elif config.init == INIT_FROM_TX_RIS_MRT:
        starts = [aligned_phases(ch, amps, _tx_ris_beam(ch))[0]]
    else:  # best_of_mrt (default)
        starts = [aligned_phases(ch, amps, _tx_ris_beam(ch))[0]]
        if np.any(ch.h_direct):
            su_start = aligned_phases(ch, amps, _tx_su_beam(ch))[0]
            if not np.array_equal(su_start, starts[0]):
                starts.append(su_start)

    best: BeamformerSolution | None = None
    for theta0 in starts:
        sol = _ao_from(ch, panel, budget, config, amps, theta0)
        if best is None or sol.snr_db > best.snr_db:
            best = sol
    return best


def _benchmark_solution(
    ch: CascadedChannel,
    panel: RisPanel,
    budget: LinkBudget,
    w: np.ndarray,
    label: str,
    used_fallback: bool,
) -> BeamformerSolution:
    amps = np.full(ch.n_elements, panel.max_amplitude, dtype=float)
    theta, _ = aligned_phases(ch, amps, w)
    if panel.phase_bits > 0:
        theta = quantize_phases(theta, panel.phase_bits)
    state = RisState(theta, amps)
    g = effective_channel(ch, state, w)
    snr = received_snr_db(g, budget, panel=panel, state=state, ch=ch)
    return BeamformerSolution(
        w=w,
        ris=state,
        snr_trace_db=[snr],
        scheme_label=label,
        snr_db=snr,
        converged=True,
        used_fallback=used_fallback,
    )


def tx_ris_mrt(ch: CascadedChannel, panel: RisPanel, budget: LinkBudget) -> BeamformerSolution:
    """Beam matched to the transmitter-to-panel link, panel co-phased afterwards."""
    fallback = _principal_right_singular_beam(ch.h_sat_ris) is None
    return _benchmark_solution(ch, panel, budget, _tx_ris_beam(ch), SCHEME_TX_RIS_MRT, fallback)


def tx_su_mrt(ch: CascadedChannel, panel: RisPanel, budget: LinkBudget) -> BeamformerSolution:
    """Beam matched to the direct link, panel co-phased afterwards.

    A vanishing direct link falls back to the transmitter-to-panel beam and
    flags the solution.
    """
    fallback = _unit_or_none(ch.h_direct) is None
    return _benchmark_solution(ch, panel, budget, _tx_su_beam(ch), SCHEME_TX_SU_MRT, fallback)


def without_ris(ch: CascadedChannel, budget: LinkBudget) -> BeamformerSolution:
    """Direct-link matched filter with the panel switched off (zero amplitudes)."""
    n = ch.n_elements
    w = _unit_or_none(ch.h_direct)
    fallback = w is None
    if w is None:
        w = _first_basis_beam(ch.n_antennas)
    state = RisState(np.zeros(n), np.zeros(n))
    g = effective_channel(ch, state, w)
    snr = received_snr_db(g, budget)
    return BeamformerSolution(
        w=w,
        ris=state,
        snr_trace_db=[snr],
        scheme_label=SCHEME_WITHOUT_RIS,
        snr_db=snr,
        converged=True,
        used_fallback=fallback,
    )


def brute_force_phases(
    ch: CascadedChannel, w: np.ndarray, phase_bits: int, panel: RisPanel
) -> RisState:
    """Exhaustively maximize |g| over the full phase grid for a fixed beam.

    Guarded: refuses when n_elements * phase_bits exceeds 24 (the 2**24
    candidate budget). Ties resolve to the lowest candidate index, element 0
    being the fastest-cycling digit.
    """
    w = np.asarray(w, dtype=complex)
    norm = float(np.linalg.norm(w))
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"w must be unit-norm, got norm {norm!r}")
    if phase_bits < 1:
        raise ValueError("phase_bits must be >= 1 for an exhaustive grid search")
    n = ch.n_elements
    if n * phase_bits > BRUTE_FORCE_MAX_GRID_BITS:
        raise ValueError(
            f"grid of 2**{n * phase_bits} candidates exceeds the 2**"
            f"{BRUTE_FORCE_MAX_GRID_BITS} search budget; refusing"
        )
    amps = np.full(n, panel.max_amplitude, dtype=float)
    levels = 1 << phase_bits
    grid = _TWO_PI * np.arange(levels) / levels
    phase_table = np.exp(1j * grid)

    direct = complex(np.vdot(ch.h_direct, w))
    terms = np.conj(ch.h_ris_user) * amps * (ch.h_sat_ris @ w)  # (N,)

    total = levels**n
    radices = levels ** np.arange(n, dtype=np.int64)
    best_val = -1.0
    best_idx = 0
    chunk = 1 << 16
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = (idx[:, None] // radices[None, :]) % levels  # (R, N)
        vals = np.abs(direct + phase_table[digits] @ terms)
        k = int(np.argmax(vals))
        if float(vals[k]) > best_val:
            best_val = float(vals[k])
            best_idx = int(idx[k])
    best_digits = (best_idx // radices) % levels
    return RisState(grid[best_digits], amps)
