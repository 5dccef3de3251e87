"""Render figure manifests produced by ``tpa-flip figures`` into PNG files.

The manifest names, per figure, the CSV file, x/y columns, display
transform (optional squaring and a scale factor), line style, label and
panel of every curve, plus per-panel axis labels and reference lines. This
module draws exactly that table data; it never recomputes any physics, so
byte-identical CSV inputs always yield identical plotted point sets.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
import warnings

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

__all__ = ["RenderError", "load_manifest", "render"]

LINE_STYLES = {"solid": "-", "dashed": "--", "dashdot": "-.", "dotted": ":"}
PANEL_SIZE = (6.0, 4.0)  # inches per panel; fixed output geometry
DPI = 130


class RenderError(ValueError):
    """Manifest or CSV input is unusable; the message names the file."""


def load_manifest(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise RenderError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise RenderError(f"manifest {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("version") != 1:
        raise RenderError(f"manifest {path}: expected an object with version 1")
    figures = doc.get("figures")
    if not isinstance(figures, list):
        raise RenderError(f"manifest {path}: 'figures' must be a list")
    for fig in figures:
        for key in ("id", "curves", "panels"):
            if key not in fig:
                raise RenderError(f"manifest {path}: figure entry lacks '{key}'")
    return doc


def _load_csv_columns(path: str) -> dict:
    if not os.path.exists(path):
        raise RenderError(f"csv file not found: {path}")
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise RenderError(f"csv file is empty: {path}") from None
            columns = {name: [] for name in header}
            for lineno, row in enumerate(reader, start=2):
                if len(row) != len(header):
                    raise RenderError(
                        f"malformed csv {path}: line {lineno} has {len(row)} "
                        f"cells, header has {len(header)}"
                    )
                for name, cell in zip(header, row):
                    if cell == "":
                        columns[name].append(math.nan)
                        continue
                    try:
                        columns[name].append(float(cell))
                    except ValueError:
                        raise RenderError(
                            f"malformed csv {path}: line {lineno}, column "
                            f"'{name}': not a number: {cell!r}"
                        ) from None
    except OSError as exc:
        raise RenderError(f"cannot read csv {path}: {exc}") from exc
    return columns


def _curve_points(base_dir: str, curve: dict, cache: dict):
    csv_name = curve.get("csv")
    if not isinstance(csv_name, str):
        raise RenderError(f"curve entry lacks a 'csv' path: {curve!r}")
    path = os.path.join(base_dir, csv_name)
    if path not in cache:
        cache[path] = _load_csv_columns(path)
    columns = cache[path]
    x_name = curve.get("x", "delta_s")
    y_name = curve.get("y")
    for name in (x_name, y_name):
        if name not in columns:
            raise RenderError(f"csv {path}: missing column '{name}'")
    x = columns[x_name]
    y = columns[y_name]
    if curve.get("square"):
        y = [v * v for v in y]
    scale = curve.get("scale", 1.0)
    if scale != 1.0:
        y = [v * scale for v in y]
    return x, y


def _points_digest(x, y) -> str:
    blob = ",".join(repr(v) for v in x) + "|" + ",".join(repr(v) for v in y)
    return hashlib.sha256(blob.encode()).hexdigest()


def render(manifest_path: str, out_dir: str) -> list:
    """Render every figure of the manifest; returns one summary per figure.

    A summary holds the written path, the plotted curves (panel, label,
    point count and a digest of the exact point set) and the reference
    lines drawn, so callers can audit the output against the manifest.
    """
    doc = load_manifest(manifest_path)
    base_dir = os.path.dirname(os.path.abspath(manifest_path))
    figures = doc["figures"]
    if not figures:
        warnings.warn(f"manifest {manifest_path} lists no figures; nothing to render")
        return []
    os.makedirs(out_dir, exist_ok=True)

    summaries = []
    for fig_spec in figures:
        fig_id = fig_spec["id"]
        panels = fig_spec["panels"]
        panel_keys = [p["key"] for p in panels]
        ncols = min(2, len(panels))
        nrows = math.ceil(len(panels) / ncols)
        fig, axes = plt.subplots(
            nrows,
            ncols,
            figsize=(PANEL_SIZE[0] * ncols, PANEL_SIZE[1] * nrows),
            squeeze=False,
        )
        axis_of = {key: axes[i // ncols][i % ncols] for i, key in enumerate(panel_keys)}
        for i in range(len(panel_keys), nrows * ncols):
            axes[i // ncols][i % ncols].axis("off")

        cache: dict = {}
        curves_summary = []
        try:
            for curve in fig_spec["curves"]:
                panel = curve.get("panel", panel_keys[0])
                if panel not in axis_of:
                    raise RenderError(
                        f"manifest {manifest_path}: curve {curve.get('label')!r} "
                        f"references unknown panel {panel!r}"
                    )
                x, y = _curve_points(base_dir, curve, cache)
                style = LINE_STYLES.get(curve.get("style", "solid"), "-")
                axis_of[panel].plot(x, y, style, label=curve.get("label"), linewidth=1.2)
                curves_summary.append(
                    {
                        "panel": panel,
                        "label": curve.get("label"),
                        "points": len(x),
                        "digest": _points_digest(x, y),
                    }
                )
        except RenderError:
            plt.close(fig)
            raise

        reference_lines = []
        for panel_spec in panels:
            ax = axis_of[panel_spec["key"]]
            for value in panel_spec.get("reference_lines", ()):
                ax.axhline(value, color="black", linewidth=2.0)
                reference_lines.append({"panel": panel_spec["key"], "value": value})
            ax.set_xlabel(panel_spec.get("x_label", ""))
            ax.set_ylabel(panel_spec.get("y_label", ""))
            if len(panels) > 1:
                ax.set_title(f"({panel_spec['key']})", fontsize=10)
            ax.legend(fontsize=8)

        if fig_spec.get("title"):
            fig.suptitle(fig_spec["title"])
        fig.tight_layout()
        png_path = os.path.join(out_dir, f"fig{fig_id}.png")
        fig.savefig(png_path, dpi=DPI)
        plt.close(fig)
        summaries.append(
            {
                "figure_id": fig_id,
                "png": png_path,
                "curves": curves_summary,
                "reference_lines": reference_lines,
            }
        )
    return summaries
