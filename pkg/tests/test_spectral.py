import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tpaflip import (
    InputSpectrum,
    IntermediateLevel,
    LevelStructure,
    input_amplitude,
    response_amplitude,
)

finite = st.floats(allow_nan=False, allow_infinity=False, min_value=-50.0, max_value=50.0)
positive = st.floats(min_value=1e-3, max_value=10.0, allow_nan=False, allow_infinity=False)


def single(nu=1.0, gamma=0.05, c=1.0):
    return LevelStructure([IntermediateLevel(nu, gamma, c)])


# -- construction / validation ------------------------------------------------

def test_gamma_must_be_positive():
    with pytest.raises(ValueError, match="gamma"):
        IntermediateLevel(1.0, 0.0)
    with pytest.raises(ValueError, match="gamma"):
        IntermediateLevel(1.0, -0.1)


def test_nonfinite_rejected():
    with pytest.raises(ValueError):
        IntermediateLevel(math.nan, 0.1)
    with pytest.raises(ValueError):
        IntermediateLevel(1.0, math.inf)
    with pytest.raises(ValueError):
        InputSpectrum(math.nan)


def test_zero_coupling_is_allowed():
    lvl = IntermediateLevel(1.0, 0.1, 0.0)
    assert lvl.coupling == 0.0


def test_level_structure_rejects_empty():
    with pytest.raises(ValueError, match="at least one"):
        LevelStructure([])


def test_bandwidth_must_be_positive():
    with pytest.raises(ValueError, match="bandwidth"):
        InputSpectrum(0.0)
    with pytest.raises(ValueError, match="bandwidth"):
        InputSpectrum(-4.0)


def test_flip_domain_is_half_open_at_zero_closed_at_half_band():
    with pytest.raises(ValueError, match="flips"):
        InputSpectrum(4.0, [0.0])
    with pytest.raises(ValueError, match="flips"):
        InputSpectrum(4.0, [2.5])
    with pytest.raises(ValueError, match="flips"):
        InputSpectrum(4.0, [-1.0])
    assert InputSpectrum(4.0, [2.0]).flips == (2.0,)  # b/2 itself is legal


def test_flips_must_strictly_increase():
    with pytest.raises(ValueError, match="increasing"):
        InputSpectrum(4.0, [1.0, 1.0])
    with pytest.raises(ValueError, match="increasing"):
        InputSpectrum(4.0, [1.5, 1.0])


# -- response evaluation ------------------------------------------------------

def test_response_at_band_centre():
    # one level at nu=1 with gamma=0.05: both Lorentz terms coincide at
    # omega=0, so the sum is 4/(0.05 - 1j).
    got = response_amplitude(single(), 0.0)
    expected = 4.0 / complex(0.05, -1.0)
    assert got == expected


def test_response_on_resonance():
    got = response_amplitude(single(), 1.0)
    expected = 2.0 * (1.0 / complex(0.05, -2.0) + 1.0 / 0.05)
    assert got == expected
    # resonant Lorentzian peak 1/gamma dominates the real part
    assert got.real == pytest.approx(40.024984384759525, rel=1e-14)


@given(omega=finite, nu=finite, gamma=positive)
@settings(max_examples=150, deadline=None)
def test_response_is_even_in_omega(omega, nu, gamma):
    levels = single(nu, gamma, 0.7 - 0.2j)
    assert response_amplitude(levels, omega) == response_amplitude(levels, -omega)


def test_response_linearity_in_levels():
    l1 = IntermediateLevel(0.8, 0.03, 1.5)
    l2 = IntermediateLevel(-2.1, 0.4, -0.3 + 1.1j)
    both = response_amplitude(LevelStructure([l1, l2]), 0.37)
    parts = response_amplitude(LevelStructure([l1]), 0.37) + response_amplitude(
        LevelStructure([l2]), 0.37
    )
    assert abs(both - parts) <= 4 * math.ulp(abs(both))


def test_response_conjugates_under_nu_negation():
    # Negating the offset mirrors the level, which conjugates the response
    # for real coupling: the resonant (real) part is invariant, the
    # off-resonant (imaginary) part flips sign.
    for omega in (0.0, 0.3, 1.0, -2.7):
        plus = response_amplitude(single(1.0, 0.05), omega)
        minus = response_amplitude(single(-1.0, 0.05), omega)
        assert minus == plus.conjugate()


def test_response_vectorised_matches_scalar():
    levels = single(1.0, 0.05, 1.0 - 0.5j)
    w = np.array([-1.5, 0.0, 0.2, 1.0])
    vec = response_amplitude(levels, w)
    assert vec.shape == w.shape
    for i, wi in enumerate(w):
        assert vec[i] == response_amplitude(levels, float(wi))


# -- input wavefunction -------------------------------------------------------

def test_input_signs_around_a_single_flip():
    spec = InputSpectrum(4.0, [1.0])
    assert input_amplitude(spec, 0.5) == -0.5
    assert input_amplitude(spec, 1.5) == 0.5
    assert input_amplitude(spec, 1.0) == -0.5  # boundary belongs to the inner segment


def test_input_zero_outside_band():
    spec = InputSpectrum(4.0)
    assert input_amplitude(spec, 3.0) == 0.0
    assert input_amplitude(spec, -3.0) == 0.0
    assert input_amplitude(spec, 2.0) == 0.0  # half-open band edge


def test_unflipped_state_is_positive():
    spec = InputSpectrum(4.0)
    assert input_amplitude(spec, 0.0) == 0.5


def test_flip_at_half_band_flips_everything():
    spec = InputSpectrum(4.0, [2.0])
    base = InputSpectrum(4.0)
    for w in (0.0, 0.5, 1.3, 1.999):
        assert input_amplitude(spec, w) == -input_amplitude(base, w)


def test_multi_flip_sign_alternates_from_outside_in():
    spec = InputSpectrum(10.0, [1.0, 2.0, 3.0])
    root = math.sqrt(10.0)
    assert input_amplitude(spec, 4.0) * root == 1.0
    assert input_amplitude(spec, 2.5) * root == -1.0
    assert input_amplitude(spec, 1.5) * root == 1.0
    assert input_amplitude(spec, 0.5) * root == -1.0


@given(
    omega=st.floats(min_value=-6.0, max_value=6.0, allow_nan=False),
    flip=st.floats(min_value=0.01, max_value=1.99, allow_nan=False),
)
@settings(max_examples=150, deadline=None)
def test_input_is_even(omega, flip):
    spec = InputSpectrum(4.0, [flip])
    assert input_amplitude(spec, omega) == input_amplitude(spec, -omega)


def test_input_normalisation_piecewise():
    # |Phi|^2 integrates the sign away: each segment contributes width / b.
    for flips in [(), (1.0,), (0.4, 1.1, 1.7)]:
        spec = InputSpectrum(4.0, flips)
        edges = [0.0, *flips, 2.0]
        total = sum(
            (hi - lo) * input_amplitude(spec, (lo + hi) / 2.0) ** 2 * 2.0
            for lo, hi in zip(edges[:-1], edges[1:])
        )
        assert total == pytest.approx(1.0, rel=1e-14)


def test_input_vectorised_matches_scalar():
    spec = InputSpectrum(4.0, [0.7, 1.6])
    w = np.linspace(-2.5, 2.5, 41)
    vec = input_amplitude(spec, w)
    for i, wi in enumerate(w):
        assert vec[i] == input_amplitude(spec, float(wi))


def test_scaled_views():
    levels = single(1.0, 0.05).scaled(10.0)
    assert levels[0].nu == 10.0 and levels[0].gamma == 0.5
    spec = InputSpectrum(4.0, [1.0]).scaled(0.5)
    assert spec.bandwidth == 2.0 and spec.flips == (0.5,)
