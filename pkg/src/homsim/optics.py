"""Two-mode complex amplitudes and the 50/50 beam-splitter algebra.

Amplitudes are dimensionless; |E|^2 is an intensity in units of I0 = 1.
The splitter uses the symmetric convention (1/sqrt(2)) [[1, i], [i, 1]],
with a relative path phase applied to the idler arm beforehand.  Spatial
propagation factors are absorbed into that phase; only relative phases
matter anywhere in this package.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

ComplexAmp = complex

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class FieldPair:
    """Input amplitudes at the two splitter ports (signal, idler)."""

    e_s: complex
    e_i: complex

    def total_intensity(self) -> float:
        return abs(self.e_s) ** 2 + abs(self.e_i) ** 2


@dataclass(frozen=True)
class OutputFields:
    """Amplitudes at the two detector ports."""

    e_a: complex
    e_b: complex

    def total_intensity(self) -> float:
        return abs(self.e_a) ** 2 + abs(self.e_b) ** 2


def phase_element(pair: FieldPair, phi: float) -> FieldPair:
    """Multiply the idler amplitude by e^{i phi}; the signal is untouched."""
    if not math.isfinite(phi):
        raise ValueError(f"phase must be finite, got {phi!r}")
    return FieldPair(pair.e_s, pair.e_i * cmath.exp(1j * phi))


def beam_split(pair: FieldPair) -> OutputFields:
    """Apply the 50/50 splitter: e_a = (e_s + i e_i)/sqrt2, e_b = (i e_s + e_i)/sqrt2."""
    return OutputFields(
        (pair.e_s + 1j * pair.e_i) * _INV_SQRT2,
        (1j * pair.e_s + pair.e_i) * _INV_SQRT2,
    )


def port_intensities(out: OutputFields) -> tuple[float, float]:
    """Detector intensities (|e_a|^2, |e_b|^2)."""
    return abs(out.e_a) ** 2, abs(out.e_b) ** 2


def closed_form_intensities(theta, g, i0=1.0):
    """Port intensities for equal-amplitude inputs with relative phase ``theta``.

    i_a = i0 (1 - sin(theta) g) and i_b = 2 i0 - i_a, so energy is conserved
    by construction.  ``g`` in [0, 1] scales the fringe visibility; at g = 1
    this equals the matrix path through ``phase_element`` + ``beam_split``.
    Scalars and numpy arrays are both accepted.
    """
    g_arr = np.asarray(g, dtype=float)
    if np.any(g_arr < 0.0) or np.any(g_arr > 1.0):
        raise ValueError("visibility g must lie in [0, 1]")
    i0_arr = np.asarray(i0, dtype=float)
    if np.any(i0_arr <= 0.0):
        raise ValueError("i0 must be positive")
    i_a = i0_arr * (1.0 - g_arr * np.sin(theta))
    i_b = 2.0 * i0_arr - i_a
    if np.ndim(i_a) == 0:
        return float(i_a), float(i_b)
    return i_a, i_b
