"""Command-line front end: ``tpa-flip rate|scan|figures|verify``.

Configuration is a single JSON document (schema version 1):

    {
      "version": 1,
      "levels": [{"nu": 1.0, "gamma": 0.05, "c_re": 1.0, "c_im": 0.0}],
      "bandwidth": 4.0,
      "flips": [1.0],                                  # rate runs
      "grid": {"min": 0.0, "max": 2.0, "points": 500}, # scan runs
      "quadrature": {"rel_tol": 1e-10, "abs_tol": 1e-14,
                     "max_subdivisions": 1000000},     # optional
      "unit_scale": 1.0,                               # optional
      "output": "out.csv"                              # optional
    }

Unknown keys are rejected. ``unit_scale`` multiplies every frequency-like
value once at load time, so configurations written in units of a resonance
offset or of the bandwidth stay literal. Scan CSV files share one fixed
header, ``delta_s,A_1,B_1,...,amp_re,amp_im,rate_rel,g``; floats are written
as their shortest round-trip decimal and the ``g`` cell is left empty when
the unflipped baseline rate is zero.

Exit codes: 0 success, 2 configuration error, 3 numerical-tolerance failure,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .closed_forms import (
    LevelAmplitude,
    level_amplitude,
    total_rate,
)
from .quadrature import (
    QuadratureSettings,
    ToleranceNotReachedError,
    overlap_integral,
)
from .scans import FIGURE_IDS, ScanGrid, figure_dataset, scan
from .spectral import InputSpectrum, IntermediateLevel, LevelStructure

__all__ = ["RunConfig", "ConfigError", "main", "entry"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_TOLERANCE = 3
EXIT_IO = 4

VERIFY_DEFAULT_CASES = 200
VERIFY_TOLERANCE = 1e-8


class ConfigError(ValueError):
    """Configuration file failed validation."""


def _reject_unknown(mapping: dict, allowed: set, where: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")


def _number(mapping: dict, key: str, where: str, default=None, required=False):
    if key not in mapping:
        if required:
            raise ConfigError(f"missing required key '{key}' in {where}")
        return default
    value = mapping[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration. Frequencies are stored as written in the
    file; :meth:`levels`, :meth:`spectrum` and friends apply ``unit_scale``."""

    level_params: tuple  # of (nu, gamma, c_re, c_im)
    bandwidth: float
    flips: tuple | None
    grid: tuple | None  # (min, max, points)
    quadrature: QuadratureSettings
    unit_scale: float
    output: str | None

    @classmethod
    def from_dict(cls, doc: dict) -> "RunConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config root must be a JSON object")
        _reject_unknown(
            doc,
            {"version", "levels", "bandwidth", "flips", "grid", "quadrature", "unit_scale", "output"},
            "config",
        )
        version = doc.get("version")
        if version != 1:
            raise ConfigError(f"unsupported config version {version!r}, expected 1")

        raw_levels = doc.get("levels")
        if not isinstance(raw_levels, list) or not raw_levels:
            raise ConfigError("'levels' must be a non-empty list")
        level_params = []
        for i, entry in enumerate(raw_levels):
            where = f"levels[{i}]"
            if not isinstance(entry, dict):
                raise ConfigError(f"{where} must be an object")
            _reject_unknown(entry, {"nu", "gamma", "c_re", "c_im"}, where)
            nu = _number(entry, "nu", where, required=True)
            gamma = _number(entry, "gamma", where, required=True)
            c_re = _number(entry, "c_re", where, default=1.0)
            c_im = _number(entry, "c_im", where, default=0.0)
            if not math.isfinite(gamma) or gamma <= 0.0:
                raise ConfigError(f"{where}.gamma must be > 0, got {gamma!r}")
            level_params.append((nu, gamma, c_re, c_im))

        bandwidth = _number(doc, "bandwidth", "config", required=True)
        if bandwidth <= 0.0:
            raise ConfigError(f"bandwidth must be > 0, got {bandwidth!r}")

        unit_scale = _number(doc, "unit_scale", "config", default=1.0)
        if unit_scale <= 0.0:
            raise ConfigError(f"unit_scale must be > 0, got {unit_scale!r}")

        flips = None
        if "flips" in doc:
            raw = doc["flips"]
            if not isinstance(raw, list):
                raise ConfigError("'flips' must be a list of numbers")
            flips = []
            for i, f in enumerate(raw):
                if isinstance(f, bool) or not isinstance(f, (int, float)):
                    raise ConfigError(f"flips[{i}] must be a number, got {f!r}")
                flips.append(float(f))
            half = bandwidth / 2.0
            for i, f in enumerate(flips):
                if not 0.0 < f <= half:
                    raise ConfigError(
                        f"flips[{i}] = {f!r} outside (0, bandwidth/2] = (0, {half!r}]"
                    )
            if sorted(set(flips)) != flips:
                raise ConfigError("flips must be strictly increasing without duplicates")
            flips = tuple(flips)

        grid = None
        if "grid" in doc:
            raw = doc["grid"]
            if not isinstance(raw, dict):
                raise ConfigError("'grid' must be an object")
            _reject_unknown(raw, {"min", "max", "points"}, "grid")
            gmin = _number(raw, "min", "grid", required=True)
            gmax = _number(raw, "max", "grid", required=True)
            pts = raw.get("points")
            if isinstance(pts, bool) or not isinstance(pts, int):
                raise ConfigError(f"grid.points must be an integer, got {pts!r}")
            try:
                ScanGrid(gmin, gmax, pts)
            except ValueError as exc:
                raise ConfigError(f"grid: {exc}") from exc
            if gmax > bandwidth / 2.0:
                raise ConfigError(
                    f"grid.max = {gmax!r} exceeds bandwidth/2 = {bandwidth / 2.0!r}"
                )
            grid = (gmin, gmax, pts)

        settings = QuadratureSettings()
        if "quadrature" in doc:
            raw = doc["quadrature"]
            if not isinstance(raw, dict):
                raise ConfigError("'quadrature' must be an object")
            _reject_unknown(raw, {"rel_tol", "abs_tol", "max_subdivisions"}, "quadrature")
            rel = _number(raw, "rel_tol", "quadrature", default=settings.rel_tol)
            absr = _number(raw, "abs_tol", "quadrature", default=settings.abs_tol)
            subs = raw.get("max_subdivisions", settings.max_subdivisions)
            if isinstance(subs, bool) or not isinstance(subs, int):
                raise ConfigError("quadrature.max_subdivisions must be an integer")
            try:
                settings = QuadratureSettings(rel, absr, subs)
            except ValueError as exc:
                raise ConfigError(f"quadrature: {exc}") from exc

        output = doc.get("output")
        if output is not None and not isinstance(output, str):
            raise ConfigError(f"output must be a string path, got {output!r}")

        return cls(tuple(level_params), bandwidth, flips, grid, settings, unit_scale, output)

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        doc = {
            "version": 1,
            "levels": [
                {"nu": nu, "gamma": gamma, "c_re": c_re, "c_im": c_im}
                for nu, gamma, c_re, c_im in self.level_params
            ],
            "bandwidth": self.bandwidth,
            "unit_scale": self.unit_scale,
        }
        if self.flips is not None:
            doc["flips"] = list(self.flips)
        if self.grid is not None:
            doc["grid"] = {"min": self.grid[0], "max": self.grid[1], "points": self.grid[2]}
        doc["quadrature"] = {
            "rel_tol": self.quadrature.rel_tol,
            "abs_tol": self.quadrature.abs_tol,
            "max_subdivisions": self.quadrature.max_subdivisions,
        }
        if self.output is not None:
            doc["output"] = self.output
        return doc

    # -- scaled views -------------------------------------------------------

    def levels(self) -> LevelStructure:
        s = self.unit_scale
        try:
            return LevelStructure(
                IntermediateLevel(nu * s, gamma * s, complex(c_re, c_im))
                for nu, gamma, c_re, c_im in self.level_params
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def scaled_bandwidth(self) -> float:
        return self.bandwidth * self.unit_scale

    def spectrum(self) -> InputSpectrum:
        flips = self.flips or ()
        s = self.unit_scale
        try:
            return InputSpectrum(self.bandwidth * s, tuple(f * s for f in flips))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def scan_grid(self) -> ScanGrid:
        if self.grid is None:
            raise ConfigError("this command needs a 'grid' section in the config")
        s = self.unit_scale
        return ScanGrid(self.grid[0] * s, self.grid[1] * s, self.grid[2])


# ---------------------------------------------------------------------------
# CSV / manifest serialisation
# ---------------------------------------------------------------------------

def format_float(x) -> str:
    """Shortest decimal that round-trips to the same float."""
    return repr(float(x))


def write_table(path: str, columns: dict) -> None:
    """RFC-4180-style CSV, LF endings; a None column writes empty cells."""
    names = list(columns)
    length = None
    for name in names:
        col = columns[name]
        if col is not None:
            length = len(col)
            break
    if length is None:
        raise ValueError("cannot write a table with no data columns")
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(",".join(names) + "\n")
            for i in range(length):
                cells = []
                for name in names:
                    col = columns[name]
                    if col is None:
                        cells.append("")
                    else:
                        cells.append(format_float(col[i]))
                fh.write(",".join(cells) + "\n")
    except OSError as exc:
        raise IOError(f"cannot write {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _single_row(config: RunConfig, method: str):
    levels = config.levels()
    spectrum = config.spectrum()
    bandwidth = spectrum.bandwidth

    if method == "analytic":
        pairs = [level_amplitude(lvl, spectrum) for lvl in levels]
        result = total_rate(levels, spectrum)
        amplitude = result.amplitude
        rate = result.relative_rate
    else:
        root_b = math.sqrt(bandwidth)
        pairs = []
        for lvl in levels:
            unit = IntermediateLevel(lvl.nu, lvl.gamma, 1.0)
            est = overlap_integral(LevelStructure([unit]), spectrum, config.quadrature)
            half_amp = est.value * root_b / 2.0
            pairs.append(LevelAmplitude(half_amp.real, half_amp.imag))
        est = overlap_integral(levels, spectrum, config.quadrature)
        amplitude = est.value * root_b
        rate = amplitude.real**2 + amplitude.imag**2

    baseline = total_rate(levels, InputSpectrum(bandwidth)).relative_rate
    g = rate / baseline if baseline > 0.0 else None

    columns = {}
    if config.flips is not None and len(config.flips) == 1:
        delta = config.flips[0] * config.unit_scale
        columns["delta_s"] = [delta]
    elif not config.flips:
        columns["delta_s"] = [0.0]
    else:
        columns["delta_s"] = None  # no single flip frequency to report
    for m, pair in enumerate(pairs):
        columns[f"A_{m + 1}"] = [pair.resonant]
        columns[f"B_{m + 1}"] = [pair.off_resonant]
    columns["amp_re"] = [amplitude.real]
    columns["amp_im"] = [amplitude.imag]
    columns["rate_rel"] = [rate]
    columns["g"] = None if g is None else [g]
    return columns, amplitude, rate, g, pairs


def cmd_rate(config: RunConfig, method: str, out: str | None) -> int:
    columns, amplitude, rate, g, pairs = _single_row(config, method)
    sign = "+" if amplitude.imag >= 0 else "-"
    print(f"relative_rate = {format_float(rate)}")
    print(f"amplitude     = {format_float(amplitude.real)} {sign} {format_float(abs(amplitude.imag))}j")
    if g is not None:
        print(f"g             = {format_float(g)}")
    else:
        print("g             = undefined (unflipped rate is zero)")
    for m, pair in enumerate(pairs):
        print(
            f"level {m + 1}: A = {format_float(pair.resonant)}, "
            f"B = {format_float(pair.off_resonant)}"
        )
    path = out or config.output
    if path:
        write_table(path, columns)
        print(f"wrote {path}")
    return EXIT_OK


def cmd_scan(config: RunConfig, out: str | None) -> int:
    levels = config.levels()
    result = scan(levels, config.scaled_bandwidth(), config.scan_grid())
    path = out or config.output
    if not path:
        raise ConfigError("scan needs an output path ('output' in config or --out)")
    write_table(path, result.columns())
    print(f"wrote {path} ({result.delta_s.size} rows)")
    return EXIT_OK


def cmd_figures(figure_ids, out_dir: str, points: int = 2001) -> int:
    import os

    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise IOError(f"cannot create {out_dir}: {exc}") from exc
    for fid in figure_ids:
        data = figure_dataset(fid, points=points)
        curve_entries = []
        for table_name, columns in data.tables.items():
            csv_name = f"fig{fid}_{table_name}.csv"
            write_table(os.path.join(out_dir, csv_name), columns)
        for curve in data.curves:
            curve_entries.append(
                {
                    "csv": f"fig{fid}_{curve.table}.csv",
                    "x": curve.x_column,
                    "y": curve.y_column,
                    "label": curve.label,
                    "style": curve.style,
                    "panel": curve.panel,
                    "square": curve.square,
                    "scale": curve.scale,
                }
            )
        manifest = {
            "version": 1,
            "figures": [
                {
                    "id": fid,
                    "title": data.title,
                    "parameters": data.parameters,
                    "panels": [
                        {
                            "key": p.key,
                            "x_label": p.x_label,
                            "y_label": p.y_label,
                            "reference_lines": list(p.reference_lines),
                        }
                        for p in data.panels
                    ],
                    "curves": curve_entries,
                }
            ],
        }
        manifest_path = os.path.join(out_dir, f"fig{fid}_manifest.json")
        try:
            with open(manifest_path, "w", encoding="utf-8") as fh:
                json.dump(manifest, fh, indent=2)
                fh.write("\n")
        except OSError as exc:
            raise IOError(f"cannot write {manifest_path}: {exc}") from exc
        print(f"figure {fid}: {len(data.tables)} csv file(s) + manifest in {out_dir}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify: closed forms against the quadrature oracle
# ---------------------------------------------------------------------------

def random_cases(n_cases: int, seed: int = 20240915):
    """Deterministic random structures spanning the supported regimes.

    Resonance offsets up to 0.6 b (also outside the band), linewidths from
    1e-4 b to 0.2 b, one to three levels, complex couplings, flip anywhere
    in [0, b/2] including the endpoints (0 means no flip).
    """
    rng = np.random.default_rng(seed)
    cases = []
    for _ in range(n_cases):
        b = float(rng.uniform(0.5, 20.0))
        n_levels = int(rng.integers(1, 4))
        levels = []
        for _ in range(n_levels):
            nu = float(rng.uniform(0.0, 0.6) * b * rng.choice([-1.0, 1.0]))
            gamma = float(b * 10 ** rng.uniform(-4, math.log10(0.2)))
            c = complex(float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2)))
            levels.append(IntermediateLevel(nu, gamma, c))
        pick = rng.uniform()
        if pick < 0.1:
            flips = ()  # the delta_s = 0 end of the range
        elif pick < 0.2:
            flips = (b / 2.0,)
        else:
            d = float(rng.uniform(0.0, 0.5)) * b
            flips = (d,) if d > 0.0 else ()
        cases.append((LevelStructure(levels), InputSpectrum(b, flips)))
    return cases


def verify_oracle(
    n_cases: int = VERIFY_DEFAULT_CASES,
    settings: QuadratureSettings | None = None,
    seed: int = 20240915,
    perturb: float = 0.0,
):
    """Compare the closed-form amplitude with ``overlap * sqrt(b)`` case by case.

    Returns (max_deviation, flagged, failures): a deviation beyond the
    acceptance tolerance but within the integrator's own error estimate is
    flagged, one beyond both is a failure.
    """
    if settings is None:
        settings = QuadratureSettings()
    flagged = []
    failures = []
    max_dev = 0.0
    for index, (levels, spectrum) in enumerate(random_cases(n_cases, seed)):
        analytic = total_rate(levels, spectrum).amplitude + perturb
        est = overlap_integral(levels, spectrum, settings)
        numeric = est.value * math.sqrt(spectrum.bandwidth)
        deviation = abs(analytic - numeric)
        allowance = VERIFY_TOLERANCE * max(1.0, abs(analytic))
        max_dev = max(max_dev, deviation)
        if deviation > allowance:
            record = (index, deviation, est.error * math.sqrt(spectrum.bandwidth))
            if deviation <= record[2]:
                flagged.append(record)
            else:
                failures.append(record)
    return max_dev, flagged, failures


def cmd_verify(
    config: RunConfig | None,
    n_cases: int,
    seed: int,
    rel_tol: float | None,
    perturb: float,
) -> int:
    settings = config.quadrature if config else QuadratureSettings()
    if rel_tol is not None:
        settings = QuadratureSettings(rel_tol, settings.abs_tol, settings.max_subdivisions)

    if config is not None:
        # Sweep the configured structure over a built-in set of flip states.
        levels = config.levels()
        b = config.scaled_bandwidth()
        max_dev = 0.0
        flagged = []
        failures = []
        flip_sets = [()] + [(f * b,) for f in (0.1, 0.25, 0.5)] + [(0.2 * b, 0.4 * b)]
        for index, flips in enumerate(flip_sets):
            spectrum = InputSpectrum(b, flips)
            analytic = total_rate(levels, spectrum).amplitude + perturb
            est = overlap_integral(levels, spectrum, settings)
            numeric = est.value * math.sqrt(b)
            deviation = abs(analytic - numeric)
            max_dev = max(max_dev, deviation)
            if deviation > VERIFY_TOLERANCE * max(1.0, abs(analytic)):
                record = (index, deviation, est.error * math.sqrt(b))
                (flagged if deviation <= record[2] else failures).append(record)
        n_run = len(flip_sets)
    else:
        max_dev, flagged, failures = verify_oracle(n_cases, settings, seed, perturb)
        n_run = n_cases

    print(f"verified {n_run} case(s); max |analytic - quadrature| = {max_dev:.3e}")
    for index, deviation, estimate in flagged:
        print(
            f"  flagged case {index}: deviation {deviation:.3e} exceeds the "
            f"acceptance tolerance but is within the error estimate {estimate:.3e}"
        )
    for index, deviation, estimate in failures:
        print(
            f"  FAILED case {index}: deviation {deviation:.3e} beyond both the "
            f"acceptance tolerance and the error estimate {estimate:.3e}"
        )
    if failures:
        return EXIT_TOLERANCE
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _parse_grid_flag(text: str) -> tuple:
    try:
        lo, hi, pts = text.split(":")
        return float(lo), float(hi), int(pts)
    except ValueError as exc:
        raise ConfigError(f"--grid expects min:max:points, got {text!r}") from exc


def _parse_figure_ids(text: str):
    try:
        ids = [int(token) for token in text.split(",") if token.strip()]
    except ValueError as exc:
        raise ConfigError(f"--figures expects comma-separated integers, got {text!r}") from exc
    if not ids:
        raise ConfigError("--figures got an empty list")
    for fid in ids:
        if fid not in FIGURE_IDS:
            raise ConfigError(f"unknown figure id {fid}; valid ids are {FIGURE_IDS}")
    return ids


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tpa-flip",
        description="Two-photon absorption rates for phase-flipped broadband entangled photons",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_rate = sub.add_parser("rate", help="single rate evaluation")
    p_rate.add_argument("--config", required=True)
    p_rate.add_argument("--method", choices=("analytic", "quadrature"), default="analytic")
    p_rate.add_argument("--out", default=None)

    p_scan = sub.add_parser("scan", help="sweep the flip frequency over a grid")
    p_scan.add_argument("--config", required=True)
    p_scan.add_argument("--out", default=None)
    p_scan.add_argument("--grid", default=None, help="min:max:points, overrides the config grid")

    p_fig = sub.add_parser("figures", help="emit the standard figure datasets")
    p_fig.add_argument("--figures", default="1,2,3,4,5,6", help="comma-separated figure ids")
    p_fig.add_argument("--out", required=True, help="output directory")
    p_fig.add_argument("--points", type=int, default=2001)

    p_ver = sub.add_parser("verify", help="closed forms vs quadrature oracle")
    p_ver.add_argument("--config", default=None)
    p_ver.add_argument("--cases", type=int, default=VERIFY_DEFAULT_CASES)
    p_ver.add_argument("--seed", type=int, default=20240915)
    p_ver.add_argument("--rel-tol", type=float, default=None)
    p_ver.add_argument(
        "--perturb",
        type=float,
        default=0.0,
        help="add a constant to the analytic amplitude (negative control for self-tests)",
    )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "rate":
            config = RunConfig.from_file(args.config)
            return cmd_rate(config, args.method, args.out)
        if args.command == "scan":
            config = RunConfig.from_file(args.config)
            if args.grid is not None:
                gmin, gmax, pts = _parse_grid_flag(args.grid)
                doc = config.to_dict()
                doc["grid"] = {"min": gmin, "max": gmax, "points": pts}
                config = RunConfig.from_dict(doc)
            return cmd_scan(config, args.out)
        if args.command == "figures":
            ids = _parse_figure_ids(args.figures)
            return cmd_figures(ids, args.out, points=args.points)
        if args.command == "verify":
            config = RunConfig.from_file(args.config) if args.config else None
            return cmd_verify(config, args.cases, args.seed, args.rel_tol, args.perturb)
        parser.error(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ToleranceNotReachedError as exc:
        print(f"numerical tolerance failure: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except IOError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
