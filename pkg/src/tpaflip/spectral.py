"""Spectral building blocks of the absorption model.

Everything lives on a single frequency-difference axis: the detuning of one
photon from the average photon frequency (half the two-photon resonance).
Two wavefunctions matter:

* the material response, a sum of complex Lorentz line pairs, one pair per
  intermediate level, mirrored at +nu and -nu by bosonic symmetry, and
* the input spectrum, a symmetric top-hat of bandwidth ``b`` and height
  ``1/sqrt(b)`` whose sign flips each time ``|omega|`` crosses one of the
  configured flip frequencies (the outermost segment is positive).

All frequencies share one arbitrary unit. The physics downstream is
scale invariant, so the unit never needs to be fixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

__all__ = [
    "IntermediateLevel",
    "LevelStructure",
    "InputSpectrum",
    "response_amplitude",
    "input_amplitude",
]

ArrayLike = Union[float, np.ndarray]


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class IntermediateLevel:
    """One intermediate resonance: offset ``nu``, linewidth ``gamma``, coupling.

    ``gamma`` must be strictly positive; a zero linewidth is not representable
    and can only be approached (see the convergence tests). ``nu`` may carry
    either sign. ``coupling`` is a dimensionless complex weight; zero is
    allowed and simply removes the level's response.
    """

    nu: float
    gamma: float
    coupling: complex = 1.0 + 0.0j

    def __post_init__(self):
        object.__setattr__(self, "nu", _require_finite("nu", self.nu))
        gamma = _require_finite("gamma", self.gamma)
        if gamma <= 0.0:
            raise ValueError(f"gamma must be > 0, got {gamma!r}")
        object.__setattr__(self, "gamma", gamma)
        c = complex(self.coupling)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise ValueError(f"coupling must be finite, got {c!r}")
        object.__setattr__(self, "coupling", c)

    def scaled(self, factor: float) -> "IntermediateLevel":
        """Return the level with all frequencies multiplied by ``factor``."""
        return IntermediateLevel(self.nu * factor, self.gamma * factor, self.coupling)


@dataclass(frozen=True)
class LevelStructure:
    """Ordered, non-empty collection of intermediate levels."""

    levels: tuple

    def __init__(self, levels: Iterable[IntermediateLevel]):
        levels = tuple(levels)
        if not levels:
            raise ValueError("a level structure needs at least one level")
        for i, lvl in enumerate(levels):
            if not isinstance(lvl, IntermediateLevel):
                raise TypeError(f"levels[{i}] is not an IntermediateLevel: {lvl!r}")
        object.__setattr__(self, "levels", levels)

    def __iter__(self) -> Iterator[IntermediateLevel]:
        return iter(self.levels)

    def __len__(self) -> int:
        return len(self.levels)

    def __getitem__(self, index):
        return self.levels[index]

    def scaled(self, factor: float) -> "LevelStructure":
        return LevelStructure(lvl.scaled(factor) for lvl in self.levels)


@dataclass(frozen=True)
class InputSpectrum:
    """Phase-flipped top-hat input of bandwidth ``bandwidth``.

    ``flips`` holds the strictly increasing flip frequencies, each in
    ``(0, bandwidth/2]``. The empty tuple is the unflipped state. A flip at
    exactly ``bandwidth/2`` flips the sign of the whole band, which is the
    same physical state as no flip up to a global phase.
    """

    bandwidth: float
    flips: tuple = ()

    def __init__(self, bandwidth: float, flips: Sequence[float] = ()):
        bandwidth = _require_finite("bandwidth", bandwidth)
        if bandwidth <= 0.0:
            raise ValueError(f"bandwidth must be > 0, got {bandwidth!r}")
        half = bandwidth / 2.0
        clean = []
        for i, f in enumerate(flips):
            f = _require_finite(f"flips[{i}]", f)
            if not 0.0 < f <= half:
                raise ValueError(
                    f"flips[{i}] = {f!r} outside (0, bandwidth/2] = (0, {half!r}]"
                )
            if clean and f <= clean[-1]:
                raise ValueError(
                    f"flips must be strictly increasing, got {f!r} after {clean[-1]!r}"
                )
            clean.append(f)
        object.__setattr__(self, "bandwidth", bandwidth)
        object.__setattr__(self, "flips", tuple(clean))

    @property
    def half_bandwidth(self) -> float:
        return self.bandwidth / 2.0

    def sign_at(self, omega: ArrayLike) -> ArrayLike:
        """Sign of the wavefunction, +-1 inside the band and 0 outside.

        The sign at ``|omega|`` is ``(-1)**k`` with ``k`` the number of flip
        frequencies at or above ``|omega|``; boundary values belong to the
        inner segment, and the band edge itself evaluates to 0.
        """
        a = np.abs(np.asarray(omega, dtype=float))
        flips = np.asarray(self.flips, dtype=float)
        above = len(flips) - np.searchsorted(flips, a, side="left")
        sign = np.where(above % 2 == 0, 1.0, -1.0)
        sign = np.where(a >= self.half_bandwidth, 0.0, sign)
        if np.isscalar(omega) or np.ndim(omega) == 0:
            return float(sign)
        return sign

    def scaled(self, factor: float) -> "InputSpectrum":
        return InputSpectrum(self.bandwidth * factor, tuple(f * factor for f in self.flips))


def response_amplitude(levels: LevelStructure, omega: ArrayLike) -> ArrayLike:
    """Material response on the frequency-difference axis (units 1/frequency).

    Each level contributes a mirrored pair of complex Lorentz lines,

        2 * C * ( 1/(gamma - i(nu + omega)) + 1/(gamma - i(nu - omega)) ).

    The real part carries the resonant (absorptive) response, the imaginary
    part the wider, antisymmetric off-resonant response. The sum is even in
    ``omega`` exactly, because swapping the sign of ``omega`` swaps the two
    terms of each pair.
    """
    if np.isscalar(omega) or np.ndim(omega) == 0:
        w = float(omega)
        total = 0.0 + 0.0j
        for lvl in levels:
            g, nu, c = lvl.gamma, lvl.nu, lvl.coupling
            total += 2.0 * c * (1.0 / complex(g, -(nu + w)) + 1.0 / complex(g, -(nu - w)))
        return total
    w = np.asarray(omega, dtype=float)
    total = np.zeros(w.shape, dtype=complex)
    for lvl in levels:
        g, nu, c = lvl.gamma, lvl.nu, lvl.coupling
        total += 2.0 * c * (1.0 / (g - 1j * (nu + w)) + 1.0 / (g - 1j * (nu - w)))
    return total


def input_amplitude(spectrum: InputSpectrum, omega: ArrayLike) -> ArrayLike:
    """Input wavefunction (units 1/sqrt(frequency)); zero outside the band."""
    return spectrum.sign_at(omega) / math.sqrt(spectrum.bandwidth)
