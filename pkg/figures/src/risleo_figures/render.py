"""Figure construction: parse results.csv, group series, draw, save SVG.

Rendering is a pure function of the CSV contents and the figure spec.
Matplotlib's embedded creation date is suppressed and its SVG id hash
salt is pinned, so re-rendering the same inputs produces identical bytes.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

KIND_SNR = "snr_vs_n"
KIND_OP = "op_vs_n"
KINDS = (KIND_SNR, KIND_OP)

# scheme identifiers in the CSV -> legend names
SCHEME_NAMES = {
    "ao_distributed": "Distributed algorithm",
    "tx_ris_mrt": "TX-RIS MRT",
    "tx_su_mrt": "TX-SU MRT",
    "without_ris": "Without RIS",
}
_SCHEME_ORDER = {s: i for i, s in enumerate(SCHEME_NAMES)}

_REQUIRED_COLUMNS = {
    KIND_SNR: ("scheme", "n_elements", "elevation_deg", "mean_snr_db"),
    KIND_OP: ("n_elements", "elevation_deg", "r_th_bpcu", "outage_prob"),
}

_MARKERS = ("o", "s", "^", "d", "v", "*", "<", ">")
_HASH_SALT = "risleo-figures"


class FigureValidationError(ValueError):
    """Input CSV does not satisfy the figure kind's requirements."""


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: input CSVs, figure kind, output path, axis bounds."""

    inputs: tuple[str, ...]
    kind: str
    output: str
    x_min: float | None = None
    x_max: float | None = None
    y_min: float | None = None
    y_max: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        inputs = tuple(str(p) for p in self.inputs)
        if not inputs:
            raise ValueError("at least one input CSV is required")
        object.__setattr__(self, "inputs", inputs)


def _read_rows(path: str, required: tuple[str, ...]) -> list[dict]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or ()
        missing = [c for c in required if c not in header]
        if missing:
            raise FigureValidationError(
                f"{path}: missing columns: {', '.join(missing)}"
            )
        rows = list(reader)
    if not rows:
        raise FigureValidationError(f"{path}: no data rows")
    return rows


def _parse(row: dict, column: str, path: str, cast=float):
    text = row[column]
    try:
        return cast(text)
    except (TypeError, ValueError):
        raise FigureValidationError(
            f"{path}: column {column} has a non-numeric value {text!r}"
        ) from None


def _snr_series(spec: FigureSpec) -> dict:
    series: dict[tuple, list] = {}
    for path in spec.inputs:
        for row in _read_rows(path, _REQUIRED_COLUMNS[KIND_SNR]):
            if not row["mean_snr_db"]:
                continue
            key = (row["scheme"], _parse(row, "elevation_deg", path))
            point = (_parse(row, "n_elements", path, int), _parse(row, "mean_snr_db", path))
            series.setdefault(key, []).append(point)
    return series


def _op_series(spec: FigureSpec) -> dict:
    series: dict[tuple, list] = {}
    for path in spec.inputs:
        for row in _read_rows(path, _REQUIRED_COLUMNS[KIND_OP]):
            if not row["outage_prob"] or not row["r_th_bpcu"]:
                continue
            key = (_parse(row, "elevation_deg", path), _parse(row, "r_th_bpcu", path))
            point = (_parse(row, "n_elements", path, int), _parse(row, "outage_prob", path))
            series.setdefault(key, []).append(point)
    return series


def build_figure(spec: FigureSpec):
    """Parse and draw without saving; returns the matplotlib (figure, axes).

    All validation happens here, so a failing spec never touches the
    output path.
    """
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    try:
        if spec.kind == KIND_SNR:
            _draw_snr(ax, spec)
        else:
            _draw_op(ax, spec)
    except Exception:
        plt.close(fig)
        raise
    ax.set_xlabel("Number of RIS elements N")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    if spec.x_min is not None or spec.x_max is not None:
        ax.set_xlim(left=spec.x_min, right=spec.x_max)
    if spec.y_min is not None or spec.y_max is not None:
        ax.set_ylim(bottom=spec.y_min, top=spec.y_max)
    fig.tight_layout()
    return fig, ax


def _draw_snr(ax, spec: FigureSpec) -> None:
    series = _snr_series(spec)
    if not series:
        raise FigureValidationError("no rows have a mean SNR value")
    elevations = {elev for _, elev in series}
    order = sorted(series, key=lambda k: (_SCHEME_ORDER.get(k[0], len(_SCHEME_ORDER)), k))
    for i, key in enumerate(order):
        scheme, elev = key
        label = SCHEME_NAMES.get(scheme, scheme)
        if len(elevations) > 1:
            label = f"{label}, {elev:g} deg"
        points = sorted(series[key])
        ax.plot(
            [n for n, _ in points],
            [v for _, v in points],
            marker=_MARKERS[i % len(_MARKERS)],
            markersize=4,
            label=label,
        )
    ax.set_ylabel("Mean received SNR (dB)")


def _draw_op(ax, spec: FigureSpec) -> None:
    series = _op_series(spec)
    if not series:
        raise FigureValidationError("no rows have an outage probability value")
    thresholds = {r_th for _, r_th in series}
    lowest, highest = 1.0, 0.0
    drew_any = False
    for i, key in enumerate(sorted(series)):
        elev, r_th = key
        # zero-probability points cannot sit on a log axis
        points = [(n, p) for n, p in sorted(series[key]) if p > 0.0]
        if not points:
            continue
        label = f"{elev:g} deg"
        if len(thresholds) > 1:
            label = f"{label}, {r_th:g} bpcu"
        ax.plot(
            [n for n, _ in points],
            [p for _, p in points],
            marker=_MARKERS[i % len(_MARKERS)],
            markersize=4,
            label=label,
        )
        lowest = min(lowest, min(p for _, p in points))
        highest = max(highest, max(p for _, p in points))
        drew_any = True
    if not drew_any:
        raise FigureValidationError("every outage probability is zero")
    ax.set_yscale("log")
    # always span the deep-outage decades, whatever the data covers
    ax.set_ylim(min(1e-4, lowest), max(1.0, 2.0 * highest))
    ax.set_ylabel("Outage probability")


def render(spec: FigureSpec) -> Path:
    """Draw the figure and write it as an SVG; returns the output path."""
    fig, _ = build_figure(spec)
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    try:
        with plt.rc_context({"svg.hashsalt": _HASH_SALT}):
            fig.savefig(out, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    return out
