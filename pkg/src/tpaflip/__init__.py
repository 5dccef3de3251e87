"""Two-photon absorption of broadband entangled photons with spectral phase flips.

The library models the absorption rate of an energy-time-entangled photon
pair whose sum frequency sits on the two-photon resonance, as a function of
where a hard pi phase flip is placed in the single-photon spectrum. The
material enters through Lorentzian intermediate levels; everything reduces
to closed-form overlap amplitudes that an independent adaptive-quadrature
oracle cross-checks.
"""

from .closed_forms import (
    DegenerateBaselineError,
    LevelAmplitude,
    RateResult,
    enhancement,
    flip_amplitudes,
    g_res_broadband_approx,
    g_res_broadband_derived,
    g_res_broadband_exact,
    level_amplitude,
    off_resonant_amplitude,
    resonant_amplitude,
    resonant_enhancement,
    resonant_ratio,
    total_rate,
    total_rate_at_flip,
)
from .quadrature import (
    OverlapEstimate,
    QuadratureSettings,
    RateEstimate,
    ToleranceNotReachedError,
    overlap_integral,
    overlap_semianalytic,
    rate_via_quadrature,
)
from .scans import (
    FIGURE_IDS,
    FigureData,
    FlatLandscapeWarning,
    PeakReport,
    ScanGrid,
    ScanResult,
    figure_dataset,
    find_peak,
    scan,
)
from .spectral import (
    InputSpectrum,
    IntermediateLevel,
    LevelStructure,
    input_amplitude,
    response_amplitude,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateBaselineError",
    "FIGURE_IDS",
    "FigureData",
    "FlatLandscapeWarning",
    "InputSpectrum",
    "IntermediateLevel",
    "LevelAmplitude",
    "LevelStructure",
    "OverlapEstimate",
    "PeakReport",
    "QuadratureSettings",
    "RateEstimate",
    "RateResult",
    "ScanGrid",
    "ScanResult",
    "ToleranceNotReachedError",
    "enhancement",
    "figure_dataset",
    "find_peak",
    "flip_amplitudes",
    "g_res_broadband_approx",
    "g_res_broadband_derived",
    "g_res_broadband_exact",
    "input_amplitude",
    "level_amplitude",
    "off_resonant_amplitude",
    "overlap_integral",
    "overlap_semianalytic",
    "rate_via_quadrature",
    "resonant_amplitude",
    "resonant_enhancement",
    "resonant_ratio",
    "response_amplitude",
    "scan",
    "total_rate",
    "total_rate_at_flip",
]
