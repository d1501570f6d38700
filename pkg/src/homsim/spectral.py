"""Gaussian detuning spectra: densities, visibility envelopes, grids, filters.

Detunings are measured from the distribution center in units where the
spectral width ``delta`` (a standard deviation) is typically 1.  Ensemble
averages over the spectrum are discretized either on a symmetric uniform
grid weighted by the Gaussian density, or by seeded Monte-Carlo draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

GAUSSIAN_PEAK_ONE = "gaussian_peak_one"
UNITY = "unity"

_ENVELOPE_KINDS = (GAUSSIAN_PEAK_ONE, UNITY)
_GRID_SCHEMES = ("grid", "monte_carlo")


class EmptyGridError(ValueError):
    """A spectral filter removed every node from a detuning grid."""


@dataclass(frozen=True)
class SpectralProfile:
    """Gaussian photon distribution with width ``delta`` (standard deviation).

    ``span_halfwidth`` is the half-range of the detuning grid in units of
    ``delta``; the default covers [-2 delta, +2 delta].  ``f0`` is the center
    frequency, kept for bookkeeping only (all math runs in detuning
    coordinates).
    """

    f0: float = 0.0
    delta: float = 1.0
    span_halfwidth: float = 2.0

    def __post_init__(self):
        if not (self.delta > 0.0):
            raise ValueError(f"spectral width delta must be > 0, got {self.delta}")
        if not (self.span_halfwidth > 0.0):
            raise ValueError(
                f"span_halfwidth must be > 0, got {self.span_halfwidth}"
            )


@dataclass(frozen=True)
class Envelope:
    """Per-detuning fringe-visibility envelope G(delta_f).

    ``gaussian_peak_one`` is exp(-delta_f^2 / (2 delta^2)): even, peak 1 at
    zero detuning.  ``unity`` is the flat oracle mode.  ``exponent_p`` is the
    power applied to G inside coincidence integrands (1 or 2); callers apply
    it, `envelope_value` does not.
    """

    kind: str = GAUSSIAN_PEAK_ONE
    exponent_p: int = 1

    def __post_init__(self):
        if self.kind not in _ENVELOPE_KINDS:
            raise ValueError(f"unknown envelope kind {self.kind!r}")
        if self.exponent_p not in (1, 2):
            raise ValueError(f"envelope exponent must be 1 or 2, got {self.exponent_p}")


@dataclass(frozen=True, eq=False)
class DetuningGrid:
    """Quadrature nodes over detuning: values ``delta_f`` with weights summing to 1."""

    delta_f: np.ndarray
    weight: np.ndarray
    scheme: str = "grid"
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "delta_f", np.asarray(self.delta_f, dtype=float))
        object.__setattr__(self, "weight", np.asarray(self.weight, dtype=float))
        if self.delta_f.shape != self.weight.shape or self.delta_f.ndim != 1:
            raise ValueError("delta_f and weight must be 1-D arrays of equal length")
        if np.any(self.weight < 0.0):
            raise ValueError("grid weights must be nonnegative")

    @property
    def n(self) -> int:
        return self.delta_f.size

    def nodes(self) -> list[tuple[float, float]]:
        return list(zip(self.delta_f.tolist(), self.weight.tolist()))


def gaussian_density(delta_f, delta: float):
    """Normal probability density with standard deviation ``delta`` at ``delta_f``."""
    if not (delta > 0.0):
        raise ValueError(f"spectral width delta must be > 0, got {delta}")
    x = np.asarray(delta_f, dtype=float)
    out = np.exp(-(x * x) / (2.0 * delta * delta)) / (delta * math.sqrt(2.0 * math.pi))
    return float(out) if np.ndim(delta_f) == 0 else out


def envelope_value(env: Envelope, delta_f, delta: float):
    """Visibility G(delta_f) in [0, 1] (before any exponent is applied)."""
    if not (delta > 0.0):
        raise ValueError(f"spectral width delta must be > 0, got {delta}")
    x = np.asarray(delta_f, dtype=float)
    if env.kind == UNITY:
        out = np.ones_like(x)
    else:
        out = np.exp(-(x * x) / (2.0 * delta * delta))
    return float(out) if np.ndim(delta_f) == 0 else out


def build_grid(
    profile: SpectralProfile,
    n: int,
    scheme: str = "grid",
    seed: int | None = None,
) -> DetuningGrid:
    """Discretize the spectral ensemble with ``n`` nodes.

    ``grid``: uniformly spaced nodes over [-span, +span] (span =
    span_halfwidth * delta), mirror-symmetric about 0 bit-for-bit, with
    weights proportional to the Gaussian density and renormalized to sum 1.

    ``monte_carlo``: ``n`` i.i.d. Gaussian(0, delta^2) draws, redrawing any
    that fall outside the span, equal weights 1/n, reproducible from ``seed``.
    """
    if n < 2:
        raise ValueError(f"grid needs at least 2 nodes, got {n}")
    if scheme not in _GRID_SCHEMES:
        raise ValueError(f"unknown grid scheme {scheme!r}")
    half = profile.span_halfwidth * profile.delta
    if scheme == "grid":
        # Build from signed integer/half-integer offsets so delta_f -> -delta_f
        # is an exact bijection on the node set.
        offsets = np.arange(n, dtype=float) - 0.5 * (n - 1)
        x = offsets * (half / (0.5 * (n - 1)))
        w = gaussian_density(x, profile.delta)
        w = w / w.sum()
        return DetuningGrid(x, w, scheme="grid", seed=None)
    if seed is None:
        raise ValueError("monte_carlo grids require a seed")
    rng = np.random.default_rng(seed)
    draws = np.empty(0, dtype=float)
    while draws.size < n:
        batch = rng.normal(0.0, profile.delta, size=max(n, 1024))
        batch = batch[np.abs(batch) <= half]
        draws = np.concatenate([draws, batch])
    x = draws[:n].copy()
    w = np.full(n, 1.0 / n)
    return DetuningGrid(x, w, scheme="monte_carlo", seed=seed)


def filter_grid(grid: DetuningGrid, half_span: float) -> DetuningGrid:
    """Drop nodes with |delta_f| > half_span and renormalize the survivors."""
    if not (half_span > 0.0):
        raise ValueError(f"filter half_span must be > 0, got {half_span}")
    keep = np.abs(grid.delta_f) <= half_span
    if not np.any(keep):
        raise EmptyGridError(
            f"filter at half_span={half_span} removed every node"
        )
    if np.all(keep):
        return grid
    x = grid.delta_f[keep]
    w = grid.weight[keep]
    return DetuningGrid(x, w / w.sum(), scheme=grid.scheme, seed=grid.seed)
