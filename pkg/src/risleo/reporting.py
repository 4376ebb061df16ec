"""Result serialization: the fixed-schema results.csv and its run manifest.

The CSV column set is part of the tool's public contract and never varies
with the study type; columns that do not apply to a row are left empty.
Floats are written with 9 significant digits, probabilities in scientific
notation, and rows in a fixed (scheme, N, elevation, threshold) order, so
identical runs serialize to identical bytes.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from pathlib import Path

from . import __version__
from .engine import MonteCarloResult, ScenarioConfig

CSV_COLUMNS = (
    "scheme",
    "n_elements",
    "elevation_deg",
    "f_d_hz",
    "r_th_bpcu",
    "trials",
    "outage_count",
    "outage_prob",
    "ci_low",
    "ci_high",
    "mean_snr_db",
    "seed",
)

RESULTS_CSV = "results.csv"
MANIFEST_JSON = "manifest.json"


def _num(value) -> str:
    if value is None:
        return ""
    return f"{value:.9g}"


def _prob(value) -> str:
    if value is None:
        return ""
    return f"{value:.9e}"


def _count(value) -> str:
    if value is None:
        return ""
    return str(int(value))


def result_to_csv_text(result: MonteCarloResult) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for p in result.points:
        lines.append(
            ",".join(
                (
                    p.scheme_label,
                    str(p.n_elements),
                    _num(p.elevation_deg),
                    _num(p.f_d_hz),
                    _num(p.r_th_bpcu),
                    str(p.trials),
                    _count(p.outage_count),
                    _prob(p.outage_prob),
                    _prob(p.ci_low),
                    _prob(p.ci_high),
                    _num(p.mean_snr_db),
                    str(result.master_seed),
                )
            )
        )
    return "\n".join(lines) + "\n"


def build_manifest(
    result: MonteCarloResult,
    cfg: ScenarioConfig,
    csv_sha256: str,
    workers: int,
    started_utc: str,
    finished_utc: str,
) -> dict:
    return {
        "tool": "risleo",
        "version": __version__,
        "scenario_name": result.scenario_name,
        "scenario_hash": result.scenario_hash,
        "master_seed": result.master_seed,
        "workers": workers,
        "started_utc": started_utc,
        "finished_utc": finished_utc,
        "results_csv_sha256": csv_sha256,
        "scenario": dataclasses.asdict(cfg),
    }


def write_results(
    result: MonteCarloResult,
    cfg: ScenarioConfig,
    out_dir,
    workers: int,
    started_utc: str,
    finished_utc: str,
):
    """Write results.csv and manifest.json; returns their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_text = result_to_csv_text(result)
    csv_path = out / RESULTS_CSV
    csv_path.write_text(csv_text)
    digest = hashlib.sha256(csv_text.encode()).hexdigest()
    manifest = build_manifest(result, cfg, digest, workers, started_utc, finished_utc)
    manifest_path = out / MANIFEST_JSON
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return csv_path, manifest_path
