"""Scenario file ingestion: YAML parsing, schema validation, diagnostics.

A scenario file is a flat YAML mapping mirroring the engine's
ScenarioConfig.  Validation is strict: unknown keys are rejected, every
diagnostic names the offending field, and nothing is simulated until the
whole document passes.
"""

from __future__ import annotations

import numbers
from pathlib import Path

import yaml

from .engine import ScenarioConfig

# keys that accept either a scalar or a list of scalars
_SCALAR_OR_LIST = ("elevation_deg", "rate_thresholds_bpcu")

_REQUIRED = (
    "name",
    "study",
    "carrier_hz",
    "bandwidth_hz",
    "altitude_km",
    "elevation_deg",
    "n_elements",
    "trials",
    "master_seed",
)

_STRING_KEYS = ("name", "study", "environment", "fading_preset", "ris_mode", "compensation_kind")
_BOOL_KEYS = ("direct_link_enabled", "disable_path_loss")
_INT_KEYS = ("trials", "master_seed", "tx_antennas", "phase_bits", "n_subcarriers", "subcarrier_samples")
_FLOAT_KEYS = (
    "carrier_hz",
    "bandwidth_hz",
    "altitude_km",
    "tx_power_dbw",
    "tx_gain_dbi",
    "rx_gain_dbi",
    "noise_temperature_k",
    "direct_residual_factor",
    "nlos_clutter_loss_db",
    "cascade_element_gain_db",
    "subcarrier_spacing_hz",
)
_LIST_KEYS = ("elevation_deg", "n_elements", "rate_thresholds_bpcu")
_PATH_KEYS = ("los_table",)

_KNOWN_KEYS = frozenset(_STRING_KEYS + _BOOL_KEYS + _INT_KEYS + _FLOAT_KEYS + _LIST_KEYS + _PATH_KEYS)


class ScenarioValidationError(ValueError):
    """Schema or physics-range failure; carries one diagnostic per problem."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


def _is_number(value) -> bool:
    return isinstance(value, numbers.Real) and not isinstance(value, bool)


def _is_int(value) -> bool:
    return isinstance(value, numbers.Integral) and not isinstance(value, bool)


def _check_types(doc: dict) -> list:
    problems = []
    for key in sorted(set(doc) - _KNOWN_KEYS):
        problems.append(f"{key}: unknown key")
    for key in _REQUIRED:
        if key not in doc:
            problems.append(f"{key}: missing required key")
    for key in _STRING_KEYS:
        if key in doc and not isinstance(doc[key], str):
            problems.append(f"{key}: must be a string, got {type(doc[key]).__name__}")
    for key in _BOOL_KEYS:
        if key in doc and not isinstance(doc[key], bool):
            problems.append(f"{key}: must be a boolean, got {type(doc[key]).__name__}")
    for key in _INT_KEYS:
        if key in doc and not _is_int(doc[key]):
            problems.append(f"{key}: must be an integer, got {doc[key]!r}")
    for key in _FLOAT_KEYS:
        if key in doc and not _is_number(doc[key]):
            problems.append(f"{key}: must be a number, got {doc[key]!r}")
    for key in _PATH_KEYS:
        if key in doc and not isinstance(doc[key], str):
            problems.append(f"{key}: must be a path string, got {type(doc[key]).__name__}")

    if "n_elements" in doc:
        value = doc["n_elements"]
        if not isinstance(value, list) or not value or not all(_is_int(v) for v in value):
            problems.append("n_elements: must be a non-empty list of integers")
    for key in _SCALAR_OR_LIST:
        if key not in doc:
            continue
        value = doc[key]
        if _is_number(value):
            continue
        if not isinstance(value, list) or not value or not all(_is_number(v) for v in value):
            problems.append(f"{key}: must be a number or a non-empty list of numbers")
    return problems


def _normalize(doc: dict, base_dir: Path) -> dict:
    out = dict(doc)
    for key in _SCALAR_OR_LIST:
        if key in out and _is_number(out[key]):
            out[key] = [out[key]]
    if "los_table" in out:
        out["los_table_path"] = str((base_dir / out.pop("los_table")).resolve())
    declared = out.pop("subcarrier_spacing_hz", None)
    return out, declared


def validate_document(doc, base_dir: Path):
    """Validate a parsed scenario mapping.

    Returns (config, diagnostics): config is None whenever diagnostics is
    non-empty.
    """
    if not isinstance(doc, dict):
        return None, ["scenario file must contain a single key-value mapping"]
    problems = _check_types(doc)
    if problems:
        return None, problems

    normalized, declared_spacing = _normalize(doc, base_dir)
    try:
        cfg = ScenarioConfig(**normalized)
    except (ValueError, FileNotFoundError) as exc:
        return None, [str(exc)]

    if declared_spacing is not None:
        actual = cfg.bandwidth_hz / cfg.n_subcarriers
        if not abs(actual - declared_spacing) <= 1e-9 * max(abs(actual), 1.0):
            return None, [
                "subcarrier_spacing_hz: declared "
                f"{declared_spacing!r} but bandwidth_hz/n_subcarriers gives {actual!r}"
            ]
    return cfg, []


def load_scenario(path) -> ScenarioConfig:
    """Load and validate a scenario file.

    Raises OSError for unreadable files, ScenarioValidationError for
    schema or range violations (with one message per problem).
    """
    path = Path(path)
    text = path.read_text()
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioValidationError([f"not valid YAML: {exc}"]) from exc
    cfg, diagnostics = validate_document(doc, path.parent)
    if diagnostics:
        raise ScenarioValidationError(diagnostics)
    return cfg


def shipped_scenario_path(name: str) -> Path:
    """Path to one of the scenario files installed with the package."""
    from importlib.resources import files

    return Path(str(files("risleo") / "data" / "scenarios" / f"{name}.yaml"))
