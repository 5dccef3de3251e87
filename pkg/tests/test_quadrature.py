import math

import numpy as np
import pytest

from tpaflip import (
    InputSpectrum,
    IntermediateLevel,
    LevelStructure,
    QuadratureSettings,
    ToleranceNotReachedError,
    flip_amplitudes,
    overlap_integral,
    overlap_semianalytic,
    rate_via_quadrature,
    total_rate,
    total_rate_at_flip,
)


def single(nu=1.0, gamma=0.05, c=1.0):
    return LevelStructure([IntermediateLevel(nu, gamma, c)])


def closed_amplitude(levels, spectrum):
    return total_rate(levels, spectrum).amplitude


def random_structures(n, seed=7):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        b = float(rng.uniform(0.5, 20.0))
        levels = []
        for _ in range(int(rng.integers(1, 4))):
            nu = float(rng.uniform(-0.6, 0.6)) * b
            gamma = float(b * 10 ** rng.uniform(-4, math.log10(0.2)))
            c = complex(float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2)))
            levels.append(IntermediateLevel(nu, gamma, c))
        n_flips = int(rng.integers(0, 4))
        flips = np.sort(rng.uniform(1e-3, 0.499, size=n_flips)) * b
        yield LevelStructure(levels), InputSpectrum(b, [float(f) for f in flips])


# -- settings ------------------------------------------------------------

def test_settings_validation():
    with pytest.raises(ValueError):
        QuadratureSettings(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSettings(abs_tol=-1e-3)
    with pytest.raises(ValueError):
        QuadratureSettings(max_subdivisions=0)
    defaults = QuadratureSettings()
    assert defaults.rel_tol == 1e-10
    assert defaults.abs_tol == 1e-14
    assert defaults.max_subdivisions == 1_000_000


# -- oracle vs closed forms ----------------------------------------------

def test_contract_with_the_closed_forms():
    spectrum = InputSpectrum(4.0)
    levels = single()
    est = overlap_integral(levels, spectrum)
    amp = est.value * math.sqrt(spectrum.bandwidth)
    assert abs(amp - closed_amplitude(levels, spectrum)) <= 1e-8 * abs(amp)


def test_oracle_equivalence_on_random_structures():
    for levels, spectrum in random_structures(40):
        analytic = closed_amplitude(levels, spectrum)
        est = overlap_integral(levels, spectrum)
        numeric = est.value * math.sqrt(spectrum.bandwidth)
        assert abs(analytic - numeric) <= 1e-8 * max(1.0, abs(analytic))


def test_error_estimate_covers_the_true_deviation():
    for levels, spectrum in random_structures(30, seed=11):
        analytic = closed_amplitude(levels, spectrum)
        est = overlap_integral(levels, spectrum)
        deviation = abs(est.value - analytic / math.sqrt(spectrum.bandwidth))
        assert deviation <= max(est.error, 1e-15 * abs(analytic))


def test_zero_coupling_gives_zero_overlap():
    levels = single(1.0, 0.05, 0.0)
    est = overlap_integral(levels, InputSpectrum(4.0, [1.0]))
    assert est.value == 0.0


def test_cancelling_pair_gives_zero_rate():
    levels = LevelStructure(
        [IntermediateLevel(1.0, 0.05, 1.0), IntermediateLevel(1.0, 0.05, -1.0)]
    )
    spectrum = InputSpectrum(4.0, [0.8])
    est = rate_via_quadrature(levels, spectrum)
    assert est.value <= QuadratureSettings().abs_tol * spectrum.bandwidth


def test_half_band_flip_is_a_pure_sign_flip():
    base = overlap_integral(single(), InputSpectrum(4.0))
    flipped = overlap_integral(single(), InputSpectrum(4.0, [2.0]))
    assert abs(flipped.value + base.value) <= base.error + flipped.error + 1e-13


def test_rate_via_quadrature_matches_analytic():
    levels = single()
    spectrum = InputSpectrum(4.0, [1.0])
    est = rate_via_quadrature(levels, spectrum)
    want = total_rate(levels, spectrum).relative_rate
    assert est.value == pytest.approx(want, rel=1e-8)


def test_resonant_flip_beats_no_flip_for_narrow_lines():
    levels = single(1.0, 0.05)
    flipped = rate_via_quadrature(levels, InputSpectrum(4.0, [1.0]))
    base = rate_via_quadrature(levels, InputSpectrum(4.0))
    assert flipped.value / base.value > 1.0


# -- failure signalling ---------------------------------------------------

def test_budget_below_mandatory_panels_raises():
    settings = QuadratureSettings(rel_tol=1e-12, abs_tol=0.0, max_subdivisions=4)
    with pytest.raises(ToleranceNotReachedError):
        overlap_integral(single(1.0, 1e-5), InputSpectrum(4.0, [0.5]), settings)


def test_budget_exhaustion_raises_with_achieved_estimate():
    levels = single(1.0, 1e-6)
    settings = QuadratureSettings(rel_tol=1e-13, abs_tol=0.0, max_subdivisions=7)
    with pytest.raises(ToleranceNotReachedError) as err:
        overlap_integral(levels, InputSpectrum(4.0, [0.5]), settings)
    assert math.isfinite(err.value.achieved_error)
    assert err.value.achieved_error > 0.0


# -- refinement and breakpoint behaviour ----------------------------------

def test_refinement_monotonicity():
    # halving rel_tol never worsens the result while the deviation is still
    # refinement-limited; once it falls to the convergence floor it is
    # dominated by rounding luck and only the floor is asserted
    levels = single(1.0, 1e-3)
    spectrum = InputSpectrum(4.0, [0.7])
    truth = closed_amplitude(levels, spectrum) / math.sqrt(spectrum.bandwidth)
    floor = 1e-9 * max(1.0, abs(truth))
    deviations = []
    rel = 1e-3
    for _ in range(10):
        est = overlap_integral(levels, spectrum, QuadratureSettings(rel_tol=rel))
        deviations.append(max(abs(est.value - truth), floor))
        rel /= 2.0
    assert deviations[-1] == floor  # the sequence does converge
    for coarse, fine in zip(deviations[:-1], deviations[1:]):
        assert fine <= coarse


def test_redundant_breakpoints_stay_within_the_error_estimate():
    levels = single(1.0, 0.01)
    spectrum = InputSpectrum(4.0, [0.9])
    plain = overlap_integral(levels, spectrum)
    padded = overlap_integral(
        levels, spectrum, extra_breakpoints=(0.123, -1.5, 1.7171)
    )
    assert abs(plain.value - padded.value) <= plain.error + padded.error


# -- semi-analytic route ---------------------------------------------------

def test_semianalytic_matches_closed_forms_exactly():
    for levels, spectrum in random_structures(25, seed=3):
        semi = overlap_semianalytic(levels, spectrum) * math.sqrt(spectrum.bandwidth)
        analytic = closed_amplitude(levels, spectrum)
        assert abs(semi - analytic) <= 1e-10 * max(1.0, abs(analytic))


def test_semianalytic_validates_numeric_mode_for_narrow_lines():
    # linewidth six orders below the bandwidth: the adaptive route still
    # agrees with the exact antiderivative route
    levels = single(1.0, 4e-6)
    spectrum = InputSpectrum(4.0, [0.5])
    semi = overlap_semianalytic(levels, spectrum)
    numeric = overlap_integral(levels, spectrum)
    assert abs(semi - numeric.value) <= max(numeric.error, 1e-10)


def test_numeric_mode_fails_loudly_beyond_its_regime():
    # below gamma/b ~ 1e-6 the adaptive rule gives up rather than degrade
    # silently; the antiderivative route keeps matching the closed forms
    levels = single(1.0, 1e-7)
    spectrum = InputSpectrum(4.0, [0.5])
    with pytest.raises(ToleranceNotReachedError):
        overlap_integral(levels, spectrum)
    semi = overlap_semianalytic(levels, spectrum) * math.sqrt(spectrum.bandwidth)
    analytic = closed_amplitude(levels, spectrum)
    assert abs(semi - analytic) <= 1e-10 * abs(analytic)


def test_zero_linewidth_limit_recovers_the_full_resonant_weight():
    # as gamma shrinks the unflipped resonant amplitude converges to 2 pi
    # with an error linear in gamma; this stands in for the idealised
    # delta-like response, which is not representable directly
    b = 1e4
    errors = []
    for gamma in (0.1, 0.01, 0.001):
        est = overlap_integral(single(1.0, gamma), InputSpectrum(b))
        amp = est.value * math.sqrt(b) / 2.0
        errors.append(abs(amp.real - 2.0 * math.pi))
    assert errors[1] <= errors[0] / 10.0 * 1.05
    assert errors[2] <= errors[1] / 10.0 * 1.05
