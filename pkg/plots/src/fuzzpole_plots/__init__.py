"""Offline learning-curve figures from training run directories.

Consumes only the documented artifacts: a run directory (or a directory
of per-seed run directories) containing ``eval_log.csv`` files with
columns ``update_idx, mean_return, ep_return_0..``. Renders one curve
per seed plus a cross-seed mean, with a reference line at the maximum
return of 500.

Rendering is a pure function of the CSV contents; embedded timestamps
are suppressed so identical inputs give byte-identical images.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__version__ = "0.1.0"

MAX_RETURN = 500.0


class CsvFormatError(RuntimeError):
    """eval_log.csv is missing, truncated or malformed."""


@dataclass
class CurveSeries:
    label: str
    x: np.ndarray  # update indices, strictly increasing
    y: np.ndarray  # mean returns, within [0, 500]


def load_eval_series(path: Path, label: str) -> CurveSeries:
    """Parse one eval_log.csv, validating it row by row."""
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise CsvFormatError(f"{path}: cannot read ({exc})") from exc
    if not lines:
        raise CsvFormatError(f"{path}: empty file")
    header = lines[0].split(",")
    if header[:2] != ["update_idx", "mean_return"]:
        raise CsvFormatError(f"{path}: unexpected header {lines[0]!r}")
    n_cols = len(header)

    xs: list[float] = []
    ys: list[float] = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != n_cols:
            raise CsvFormatError(
                f"{path}:{lineno}: expected {n_cols} columns, got {len(cells)} (truncated row?)"
            )
        try:
            values = [float(c) for c in cells]
        except ValueError:
            raise CsvFormatError(f"{path}:{lineno}: non-numeric cell in {line!r}")
        if xs and values[0] <= xs[-1]:
            raise CsvFormatError(f"{path}:{lineno}: update_idx not strictly increasing")
        if not 0.0 <= values[1] <= MAX_RETURN:
            raise CsvFormatError(
                f"{path}:{lineno}: mean_return {values[1]} outside [0, {MAX_RETURN:g}]"
            )
        xs.append(values[0])
        ys.append(values[1])
    if not xs:
        raise CsvFormatError(f"{path}: no data rows")
    return CurveSeries(label, np.array(xs), np.array(ys))


def discover_series(runs_dir: Path) -> list[CurveSeries]:
    """Find eval logs under a run directory or a directory of run dirs."""
    runs_dir = Path(runs_dir)
    direct = runs_dir / "eval_log.csv"
    if direct.exists():
        return [load_eval_series(direct, runs_dir.name)]
    candidates = sorted(
        (d for d in runs_dir.iterdir() if (d / "eval_log.csv").exists()),
        key=lambda d: (0, int(d.name)) if d.name.isdigit() else (1, d.name),
    ) if runs_dir.is_dir() else []
    if not candidates:
        raise CsvFormatError(f"{runs_dir}: no eval_log.csv found")
    return [load_eval_series(d / "eval_log.csv", d.name) for d in candidates]


def moving_average(y: np.ndarray, window: int) -> np.ndarray:
    """Trailing moving average; keeps length (shorter head windows)."""
    out = np.empty_like(y)
    for i in range(len(y)):
        out[i] = y[max(0, i - window + 1) : i + 1].mean()
    return out


def cross_seed_mean(series: list[CurveSeries]) -> CurveSeries | None:
    """Average seeds on their common update grid; None for a single seed."""
    if len(series) < 2:
        return None
    common = series[0].x
    for s in series[1:]:
        common = np.intersect1d(common, s.x)
    if common.size == 0:
        return None
    rows = []
    for s in series:
        idx = np.searchsorted(s.x, common)
        rows.append(s.y[idx])
    return CurveSeries("mean", common, np.mean(rows, axis=0))


def render_learning_curves(
    runs_dir: str | Path,
    out_image: str | Path,
    smooth: int | None = None,
) -> tuple[plt.Figure, plt.Axes]:
    """Render per-seed evaluation curves plus their cross-seed mean."""
    series = discover_series(Path(runs_dir))
    if smooth is not None and smooth > 1:
        series = [CurveSeries(s.label, s.x, moving_average(s.y, smooth)) for s in series]
    mean_curve = cross_seed_mean(series)

    fig, ax = plt.subplots(figsize=(8, 4.5))
    for s in series:
        ax.plot(s.x, s.y, linewidth=1.2, alpha=0.85, label=f"seed {s.label}")
    if mean_curve is not None:
        ax.plot(mean_curve.x, mean_curve.y, color="black", linewidth=2.0, label="mean")
    ax.axhline(MAX_RETURN, color="gray", linestyle="--", linewidth=0.8)
    ax.set_xlabel("minibatch updates")
    ax.set_ylabel("mean return over deterministic episodes")
    ax.set_ylim(0.0, MAX_RETURN)
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()

    out_image = Path(out_image)
    metadata = {"Date": None} if out_image.suffix.lower() == ".svg" else {}
    fig.savefig(out_image, dpi=120, metadata=metadata)
    return fig, ax


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot_curves",
        description="Render evaluation learning curves from run directories.",
    )
    parser.add_argument("runs_dir")
    parser.add_argument("-o", "--out", default="fig.png")
    parser.add_argument("--smooth", type=int, default=None, help="moving-average window (updates)")
    args = parser.parse_args(argv)
    try:
        fig, _ = render_learning_curves(args.runs_dir, args.out, smooth=args.smooth)
        plt.close(fig)
    except CsvFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
