"""Flip-frequency sweeps, peak refinement and the bundled figure datasets.

A scan evaluates the closed forms on a uniform grid of single-flip
frequencies and returns plain arrays in grid order, so repeated runs are
bit-identical. Peak search combines a coarse scan with golden-section
refinement of the bracketing triple, which keeps the search on the same
oracle-validated code path as everything else (no derivatives involved).

``figure_dataset`` packages the parameter sets behind the six standard
plots of this model (single-level amplitude anatomy, squared contributions,
enhancement curves, bandwidth comparison of the resonant enhancement, and
two-level interference) as tables plus curve/panel descriptions that the
command line serialises into CSV files and a JSON manifest.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .closed_forms import (
    flip_amplitude_arrays,
    g_res_broadband_derived,
    total_rate_at_flip,
)
from .spectral import IntermediateLevel, LevelStructure

__all__ = [
    "ScanGrid",
    "ScanResult",
    "PeakReport",
    "FlatLandscapeWarning",
    "FigureCurve",
    "FigurePanel",
    "FigureData",
    "scan",
    "find_peak",
    "figure_dataset",
    "FIGURE_IDS",
]

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
FIGURE_IDS = (1, 2, 3, 4, 5, 6)


class FlatLandscapeWarning(UserWarning):
    """The coarse scan saw an essentially constant rate landscape."""


@dataclass(frozen=True)
class ScanGrid:
    """Uniform grid of flip frequencies, ``points >= 2`` and within [0, b/2]."""

    delta_min: float
    delta_max: float
    points: int

    def __post_init__(self):
        if not (math.isfinite(self.delta_min) and math.isfinite(self.delta_max)):
            raise ValueError("grid bounds must be finite")
        if not 0.0 <= self.delta_min < self.delta_max:
            raise ValueError(
                f"need 0 <= delta_min < delta_max, got [{self.delta_min!r}, {self.delta_max!r}]"
            )
        if self.points < 2:
            raise ValueError(f"points must be >= 2, got {self.points!r}")

    def values(self) -> np.ndarray:
        return np.linspace(self.delta_min, self.delta_max, self.points)


@dataclass(frozen=True)
class ScanResult:
    """Scan table: one row per grid point, columns in a fixed order.

    ``g`` is None when the unflipped baseline rate is exactly zero
    (destructive interference), in which case only raw rates are reported.
    """

    delta_s: np.ndarray
    resonant: np.ndarray
    off_resonant: np.ndarray
    amplitude: np.ndarray
    relative_rate: np.ndarray
    g: np.ndarray | None

    @property
    def n_levels(self) -> int:
        return self.resonant.shape[1]

    def columns(self) -> dict:
        """Fixed column schema: delta_s, A_m/B_m per level, amplitude, rate, g."""
        cols = {"delta_s": self.delta_s}
        for m in range(self.n_levels):
            cols[f"A_{m + 1}"] = self.resonant[:, m]
            cols[f"B_{m + 1}"] = self.off_resonant[:, m]
        cols["amp_re"] = self.amplitude.real
        cols["amp_im"] = self.amplitude.imag
        cols["rate_rel"] = self.relative_rate
        cols["g"] = self.g
        return cols


@dataclass(frozen=True)
class PeakReport:
    """Refined maximiser of the rate landscape over a search interval."""

    delta_s: float
    value: float
    tolerance: float
    is_enhancement: bool  # value is an enhancement factor, not a raw rate


def scan(levels: LevelStructure, bandwidth: float, grid: ScanGrid) -> ScanResult:
    """Evaluate the closed forms on the grid; deterministic row order."""
    if grid.delta_max > bandwidth / 2.0:
        raise ValueError(
            f"grid reaches {grid.delta_max!r}, beyond bandwidth/2 = {bandwidth / 2.0!r}"
        )
    deltas = grid.values()
    n = len(levels)
    resonant = np.empty((grid.points, n))
    off_resonant = np.empty((grid.points, n))
    amplitude = np.zeros(grid.points, dtype=complex)
    for m, lvl in enumerate(levels):
        a, b = flip_amplitude_arrays(lvl, bandwidth, deltas)
        resonant[:, m] = a
        off_resonant[:, m] = b
        amplitude += 2.0 * lvl.coupling * (a + 1j * b)
    rate = amplitude.real**2 + amplitude.imag**2
    baseline = total_rate_at_flip(levels, bandwidth, 0.0).relative_rate
    g = rate / baseline if baseline > 0.0 else None
    return ScanResult(deltas, resonant, off_resonant, amplitude, rate, g)


def _golden_section_max(f, lo: float, hi: float, tol: float) -> float:
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = f(x1)
    return 0.5 * (lo + hi)


def find_peak(
    levels: LevelStructure,
    bandwidth: float,
    search_interval: tuple,
    coarse_points: int = 512,
    tol: float | None = None,
) -> PeakReport:
    """Locate the rate maximum inside ``search_interval``.

    A coarse scan (at least 512 points) brackets the maximum, then
    golden-section refinement narrows the abscissa to ``tol`` (default
    1e-6 of the bandwidth). Reports the enhancement factor at the peak when
    the unflipped baseline is positive, the raw rate otherwise. Note that
    ``delta_s = 0`` and ``bandwidth/2`` are the trivial unflipped states
    (enhancement exactly 1), so searches for genuine enhancement peaks
    normally use an interior interval.
    """
    lo, hi = float(search_interval[0]), float(search_interval[1])
    if not 0.0 <= lo < hi <= bandwidth / 2.0:
        raise ValueError(f"search interval {search_interval!r} outside [0, bandwidth/2]")
    if tol is None:
        tol = 1e-6 * bandwidth
    coarse_points = max(coarse_points, 512)

    def rate_at(d: float) -> float:
        return total_rate_at_flip(levels, bandwidth, d).relative_rate

    grid = np.linspace(lo, hi, coarse_points)
    rates = np.array([rate_at(d) for d in grid])
    top, bottom = rates.max(), rates.min()
    if top - bottom <= 1e-9 * max(top, 1e-300):
        warnings.warn(
            f"rate landscape is flat over [{lo!r}, {hi!r}] "
            f"(max {top:.6e}, min {bottom:.6e})",
            FlatLandscapeWarning,
            stacklevel=2,
        )
    i = int(rates.argmax())
    bracket_lo = float(grid[max(i - 1, 0)])
    bracket_hi = float(grid[min(i + 1, coarse_points - 1)])
    best = float(_golden_section_max(rate_at, bracket_lo, bracket_hi, tol))
    if rate_at(best) < rates[i]:
        best = float(grid[i])

    baseline = total_rate_at_flip(levels, bandwidth, 0.0).relative_rate
    if baseline > 0.0:
        return PeakReport(best, rate_at(best) / baseline, tol, True)
    return PeakReport(best, rate_at(best), tol, False)


# ---------------------------------------------------------------------------
# Figure datasets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FigureCurve:
    """One plotted curve: a column of a named table, with display transforms.

    ``square`` and ``scale`` express caption-stated normalisations such as
    plotting A^2 / (4 pi^2); the renderer applies them verbatim and does no
    other arithmetic.
    """

    table: str
    y_column: str
    label: str
    style: str
    panel: str
    x_column: str = "delta_s"
    square: bool = False
    scale: float = 1.0


@dataclass(frozen=True)
class FigurePanel:
    key: str
    x_label: str
    y_label: str
    reference_lines: tuple = ()


@dataclass(frozen=True)
class FigureData:
    figure_id: int
    title: str
    parameters: dict
    tables: dict
    curves: tuple
    panels: tuple


def _scan_table(levels, bandwidth, points) -> dict:
    result = scan(levels, bandwidth, ScanGrid(0.0, bandwidth / 2.0, points))
    return result.columns()


def _single_level_tables(gammas, bandwidth, points) -> dict:
    tables = {}
    for name, gamma in gammas:
        levels = LevelStructure([IntermediateLevel(1.0, gamma, 1.0)])
        tables[name] = _scan_table(levels, bandwidth, points)
    return tables


_GAMMA_SETS = (("narrow", 1.0 / 20.0), ("medium", 1.0 / 10.0), ("broad", 1.0 / 3.0))
_GAMMA_LABELS = {"narrow": "gamma = nu0/20", "medium": "gamma = nu0/10", "broad": "gamma = nu0/3"}
_GAMMA_STYLES = {"narrow": "solid", "medium": "dashed", "broad": "dashdot"}


def _figure_1(points: int) -> FigureData:
    # Amplitude anatomy of one level at nu = b/4 for three linewidths.
    tables = _single_level_tables(_GAMMA_SETS, 4.0, points)
    curves = []
    for name, _ in _GAMMA_SETS:
        curves.append(FigureCurve(name, "A_1", _GAMMA_LABELS[name], _GAMMA_STYLES[name], "a"))
        curves.append(FigureCurve(name, "B_1", _GAMMA_LABELS[name], _GAMMA_STYLES[name], "b"))
    panels = (
        FigurePanel("a", "flip frequency delta_s / nu0", "resonant amplitude A"),
        FigurePanel("b", "flip frequency delta_s / nu0", "off-resonant amplitude B"),
    )
    return FigureData(
        1,
        "Resonant and off-resonant amplitudes vs flip frequency",
        {"nu0": 1.0, "bandwidth": 4.0, "gammas": dict(_GAMMA_SETS), "coupling": 1.0},
        tables,
        tuple(curves),
        panels,
    )


def _figure_2(points: int) -> FigureData:
    # Squared contributions, normalised by (2 pi)^2, one panel per linewidth.
    tables = _single_level_tables(_GAMMA_SETS, 4.0, points)
    norm = 1.0 / (4.0 * math.pi**2)
    curves = []
    panels = []
    for panel, name in (("a", "broad"), ("b", "medium"), ("c", "narrow")):
        curves.append(
            FigureCurve(name, "A_1", "A^2 / 4pi^2", "dashed", panel, square=True, scale=norm)
        )
        curves.append(
            FigureCurve(name, "B_1", "B^2 / 4pi^2", "solid", panel, square=True, scale=norm)
        )
        panels.append(
            FigurePanel(panel, "flip frequency delta_s / nu0", f"({_GAMMA_LABELS[name]})")
        )
    return FigureData(
        2,
        "Squared rate contributions vs flip frequency",
        {
            "nu0": 1.0,
            "bandwidth": 4.0,
            "gammas": dict(_GAMMA_SETS),
            "normalization": "1/(4 pi^2)",
        },
        tables,
        tuple(curves),
        tuple(panels),
    )


def _figure_3(points: int) -> FigureData:
    tables = _single_level_tables(_GAMMA_SETS, 4.0, points)
    curves = [
        FigureCurve(name, "g", _GAMMA_LABELS[name], _GAMMA_STYLES[name], "a")
        for name, _ in _GAMMA_SETS
    ]
    panels = (
        FigurePanel("a", "flip frequency delta_s / nu0", "enhancement g", reference_lines=(1.0,)),
    )
    return FigureData(
        3,
        "Enhancement factor vs flip frequency",
        {"nu0": 1.0, "bandwidth": 4.0, "gammas": dict(_GAMMA_SETS)},
        tables,
        tuple(curves),
        panels,
    )


def _figure_4(points: int) -> FigureData:
    # Resonant enhancement vs inverse linewidth, broadband limit and three
    # finite bandwidths. Logarithmic ratio axis covering both thresholds.
    ratios = np.geomspace(1.0, 50.0, max(points, 200))
    tables = {"broadband": {"ratio": ratios, "g_res": np.array([g_res_broadband_derived(r) for r in ratios])}}
    bandwidths = {"band8": 8.0, "band6": 6.0, "band4": 4.0}
    for name, b in bandwidths.items():
        g = np.empty_like(ratios)
        for i, r in enumerate(ratios):
            lvl = IntermediateLevel(1.0, 1.0 / r, 1.0)
            struct = LevelStructure([lvl])
            g[i] = (
                total_rate_at_flip(struct, b, 1.0).relative_rate
                / total_rate_at_flip(struct, b, 0.0).relative_rate
            )
        tables[name] = {"ratio": ratios, "g_res": g}
    curves = (
        FigureCurve("broadband", "g_res", "broadband limit", "solid", "a", x_column="ratio"),
        FigureCurve("band8", "g_res", "b = 8 nu0", "dashed", "a", x_column="ratio"),
        FigureCurve("band6", "g_res", "b = 6 nu0", "dashdot", "a", x_column="ratio"),
        FigureCurve("band4", "g_res", "b = 4 nu0", "dotted", "a", x_column="ratio"),
    )
    panels = (
        FigurePanel("a", "inverse linewidth nu0/gamma0", "resonant enhancement g_res", (1.0,)),
    )
    return FigureData(
        4,
        "Resonant enhancement vs inverse linewidth",
        {
            "nu0": 1.0,
            "ratio_range": [1.0, 50.0],
            "sampling": "logarithmic",
            "bandwidths": bandwidths,
            "broadband_formula": "derived wide-band limit of the amplitude pair",
        },
        tables,
        curves,
        panels,
    )


def _two_level_structure(nu2: float, destructive: bool) -> LevelStructure:
    c2 = -1.0 if destructive else 1.0
    return LevelStructure(
        [IntermediateLevel(1.0, 0.05, 1.0), IntermediateLevel(nu2, 0.05, c2)]
    )


def _figure_5(points: int) -> FigureData:
    # Interference anatomy for nu2 = 3 nu1. The bandwidth is not pinned by
    # the layout of the plot, so use 8 nu1: both resonances sit inside the
    # flip range with margin. amp_re/2 of the constructive (destructive)
    # table is A1 + A2 (A1 - A2), and likewise amp_im/2 for B.
    bandwidth = 8.0
    tables = {
        "constructive": _scan_table(_two_level_structure(3.0, False), bandwidth, points),
        "destructive": _scan_table(_two_level_structure(3.0, True), bandwidth, points),
    }
    curves = (
        FigureCurve("constructive", "A_1", "A_1", "solid", "a"),
        FigureCurve("constructive", "A_2", "A_2", "dashed", "a"),
        FigureCurve("constructive", "B_1", "B_1", "solid", "b"),
        FigureCurve("constructive", "B_2", "B_2", "dashed", "b"),
        FigureCurve("constructive", "amp_re", "A_1 + A_2", "solid", "c", scale=0.5),
        FigureCurve("destructive", "amp_re", "A_1 - A_2", "dashed", "c", scale=0.5),
        FigureCurve("constructive", "amp_im", "B_1 + B_2", "solid", "d", scale=0.5),
        FigureCurve("destructive", "amp_im", "B_1 - B_2", "dashed", "d", scale=0.5),
    )
    panels = (
        FigurePanel("a", "delta_s / nu1", "resonant amplitudes"),
        FigurePanel("b", "delta_s / nu1", "off-resonant amplitudes"),
        FigurePanel("c", "delta_s / nu1", "resonant interference"),
        FigurePanel("d", "delta_s / nu1", "off-resonant interference"),
    )
    return FigureData(
        5,
        "Two-level interference anatomy",
        {"nu1": 1.0, "nu2": 3.0, "gamma": 0.05, "bandwidth": bandwidth},
        tables,
        curves,
        panels,
    )


def _figure_6(points: int) -> FigureData:
    bandwidth = 8.0
    tables = {
        "constructive_far": _scan_table(_two_level_structure(3.0, False), bandwidth, points),
        "destructive_far": _scan_table(_two_level_structure(3.0, True), bandwidth, points),
        "constructive_near": _scan_table(_two_level_structure(1.5, False), bandwidth, points),
        "destructive_near": _scan_table(_two_level_structure(1.5, True), bandwidth, points),
    }
    curves = (
        FigureCurve("constructive_far", "rate_rel", "constructive", "solid", "a"),
        FigureCurve("destructive_far", "rate_rel", "destructive", "dashed", "a"),
        FigureCurve("constructive_near", "rate_rel", "constructive", "solid", "b"),
        FigureCurve("destructive_near", "rate_rel", "destructive", "dashed", "b"),
    )
    panels = (
        FigurePanel("a", "delta_s / nu1", "relative rate (nu2 = 3 nu1)"),
        FigurePanel("b", "delta_s / nu1", "relative rate (nu2 = 1.5 nu1)"),
    )
    return FigureData(
        6,
        "Interference of two levels: constructive vs destructive rates",
        {"nu1": 1.0, "nu2": [3.0, 1.5], "gamma": 0.05, "bandwidth": bandwidth},
        tables,
        curves,
        panels,
    )


def figure_dataset(figure_id: int, points: int = 2001) -> FigureData:
    """Build the dataset behind one of the six standard figures."""
    builders = {1: _figure_1, 2: _figure_2, 3: _figure_3, 4: _figure_4, 5: _figure_5, 6: _figure_6}
    if figure_id not in builders:
        raise ValueError(f"unknown figure id {figure_id!r}; valid ids are {FIGURE_IDS}")
    return builders[figure_id](points)
