"""Per-pair phase ensembles for the two source models.

Two sources are modeled.  The classical source is a pair of independent
lasers: each photon pair carries a detuning difference delta_f_is and the
interference phase is phi + zeta_j - delta_f_is * tau.  The downconversion
(SPDC) source emits symmetrically detuned pairs (+delta_f, -delta_f) with an
intrinsic phase phi_prime, giving phi_prime + zeta_j - 2 delta_f * tau.

SPDC pairs additionally carry detuning-swap randomness: which photon of the
pair got +delta_f is random, which both flips the detuning sign in the phase
and exchanges the two output ports.  A sample's ``sign`` records that branch;
consumers must exchange the port intensities for sign = -1.  In exact-half
mode both branches are emitted deterministically at half weight, which makes
the branch-averaged port intensities flat without Monte-Carlo noise.

zeta_j is the pair's initial phase difference.  Its uniform spread over
[-a, +a] models dephasing; the spread is realized by deterministic midpoint
quadrature by default (Monte-Carlo draws are available for realism studies).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import DetuningGrid, EmptyGridError, Envelope, envelope_value

ZETA_KINDS = ("fixed", "uniform")
SWAP_MODES = ("exact_half", "bernoulli", "off")


@dataclass(frozen=True)
class ZetaModel:
    """Initial phase difference: a fixed value, or Uniform[-a, +a] dephasing.

    For the uniform kind ``value`` is the half-width a (0 <= a <= pi) and
    ``nodes``/``scheme`` control how the spread is discretized.
    """

    kind: str = "fixed"
    value: float = 0.0
    nodes: int = 129
    scheme: str = "grid"

    def __post_init__(self):
        if self.kind not in ZETA_KINDS:
            raise ValueError(f"unknown zeta kind {self.kind!r}")
        if self.kind == "uniform" and not (0.0 <= self.value <= math.pi):
            raise ValueError(
                f"uniform zeta half-width must lie in [0, pi], got {self.value}"
            )
        if self.scheme not in ("grid", "monte_carlo"):
            raise ValueError(f"unknown zeta scheme {self.scheme!r}")
        if self.nodes < 1:
            raise ValueError("zeta nodes must be >= 1")

    def realize(self, seed: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Return (values, weights) for the zeta ensemble.

        A zero-width uniform model collapses to the single fixed node so the
        two parameterizations produce identical sample lists.
        """
        if self.kind == "fixed" or self.value == 0.0:
            return np.array([self.value]), np.array([1.0])
        a = self.value
        m = self.nodes
        if self.scheme == "grid":
            vals = -a + (np.arange(m, dtype=float) + 0.5) * (2.0 * a / m)
        else:
            if seed is None:
                raise ValueError("monte_carlo zeta sampling requires a seed")
            vals = np.random.default_rng(seed).uniform(-a, a, size=m)
        return vals, np.full(m, 1.0 / m)


@dataclass(frozen=True)
class ClassicalSource:
    """Two independent lasers with controllable path phase ``phi``."""

    phi: float = 0.0
    zeta: ZetaModel = ZetaModel()
    delta_s: float = 1.0
    delta_i: float = 1.0

    def __post_init__(self):
        if not (self.delta_s > 0.0 and self.delta_i > 0.0):
            raise ValueError("laser widths delta_s, delta_i must be > 0")

    @property
    def delta_is(self) -> float:
        """Width of the detuning-difference distribution delta_f_is."""
        return math.hypot(self.delta_s, self.delta_i)


@dataclass(frozen=True)
class SpdcSource:
    """Downconversion pair source with intrinsic phase ``phi_prime`` (+-pi/2 physically)."""

    phi_prime: float = math.pi / 2
    zeta: ZetaModel = ZetaModel()
    delta: float = 1.0
    swap: str = "exact_half"
    swap_seed: int | None = None

    def __post_init__(self):
        if not (self.delta > 0.0):
            raise ValueError("pair-distribution width delta must be > 0")
        if self.swap not in SWAP_MODES:
            raise ValueError(f"unknown swap mode {self.swap!r}")


@dataclass(frozen=True)
class PhaseSample:
    """One ensemble member: total phase, visibility, weight, and swap branch."""

    theta: float
    g: float
    weight: float
    sign: int


def classical_phase(
    src: ClassicalSource, delta_f_is: float, zeta_j: float, tau: float
) -> float:
    """Interference phase phi + zeta_j - delta_f_is * tau."""
    return src.phi + zeta_j - delta_f_is * tau


def spdc_phase(
    src: SpdcSource, delta_f: float, zeta_j: float, tau: float, sign: int
) -> float:
    """Interference phase phi_prime + zeta_j - sign * 2 delta_f * tau.

    ``sign`` = -1 flips the pair detuning (delta_f -> -delta_f), the swap
    branch; the corresponding output-port exchange is applied downstream.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    return src.phi_prime + zeta_j - sign * 2.0 * delta_f * tau


@dataclass(frozen=True, eq=False)
class EnsembleTable:
    """Vectorized ensemble: theta(tau) = const_phase - tau_coeff * tau.

    Arrays are shaped (n_nodes, n_sub) where the sub-axis runs over
    (zeta draw, swap branch) combinations; ``g`` and ``delta_f`` are
    per-node.  Weights sum to 1 over the whole table.
    """

    delta_f: np.ndarray
    node_weight: np.ndarray
    const_phase: np.ndarray
    tau_coeff: np.ndarray
    g: np.ndarray
    weight: np.ndarray
    sign: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.delta_f.size

    def theta(self, tau: float) -> np.ndarray:
        return self.const_phase - self.tau_coeff * tau


def _classical_nodes(
    src: ClassicalSource,
    grid: DetuningGrid | tuple[DetuningGrid, DetuningGrid],
) -> tuple[np.ndarray, np.ndarray]:
    """Detuning-difference nodes and weights for the classical source.

    A single grid is taken to discretize delta_f_is directly (width
    sqrt(delta_s^2 + delta_i^2)); a (signal, idler) grid pair is expanded
    into the full product ensemble with delta_f_is = delta_f_i - delta_f_s.
    """
    if isinstance(grid, tuple):
        gs, gi = grid
        df = (gi.delta_f[None, :] - gs.delta_f[:, None]).ravel()
        w = (gs.weight[:, None] * gi.weight[None, :]).ravel()
        return df, w
    return grid.delta_f, grid.weight


def build_table(
    src: ClassicalSource | SpdcSource,
    grid: DetuningGrid | tuple[DetuningGrid, DetuningGrid],
    env: Envelope,
    zeta_seed: int | None = None,
) -> EnsembleTable:
    """Assemble the vectorized phase ensemble for either source model."""
    zeta_vals, zeta_w = src.zeta.realize(zeta_seed)
    nz = zeta_vals.size

    if isinstance(src, ClassicalSource):
        df, node_w = _classical_nodes(src, grid)
        if df.size == 0:
            raise EmptyGridError("classical ensemble has no detuning nodes")
        base = src.phi
        coeff_node = df
        g = envelope_value(env, df, src.delta_is)
        signs_branch = np.array([1.0])
        branch_w = np.array([1.0])
    else:
        if isinstance(grid, tuple):
            raise ValueError("SPDC sources take a single detuning grid")
        df, node_w = grid.delta_f, grid.weight
        if df.size == 0:
            raise EmptyGridError("SPDC ensemble has no detuning nodes")
        base = src.phi_prime
        coeff_node = 2.0 * df
        g = envelope_value(env, df, src.delta)
        if src.swap == "exact_half":
            signs_branch = np.array([1.0, -1.0])
            branch_w = np.array([0.5, 0.5])
        else:
            signs_branch = np.array([1.0])
            branch_w = np.array([1.0])

    nb = signs_branch.size
    nk = df.size
    sign = np.broadcast_to(
        np.tile(signs_branch, nz)[None, :], (nk, nz * nb)
    ).copy()
    if isinstance(src, SpdcSource) and src.swap == "bernoulli":
        if src.swap_seed is None:
            raise ValueError("bernoulli swap requires swap_seed")
        rng = np.random.default_rng(src.swap_seed)
        sign = rng.integers(0, 2, size=(nk, nz)).astype(float) * 2.0 - 1.0

    const = base + np.repeat(zeta_vals, nb)[None, :]
    const = np.broadcast_to(const, (nk, nz * nb)).copy()
    coeff = sign * coeff_node[:, None]
    sub_w = (zeta_w[:, None] * branch_w[None, :]).ravel()
    weight = node_w[:, None] * sub_w[None, :]
    return EnsembleTable(
        delta_f=df,
        node_weight=node_w,
        const_phase=const,
        tau_coeff=coeff,
        g=np.asarray(g, dtype=float),
        weight=weight,
        sign=sign,
    )


def sample_ensemble(
    src: ClassicalSource | SpdcSource,
    grid: DetuningGrid | tuple[DetuningGrid, DetuningGrid],
    env: Envelope,
    tau: float,
    zeta_seed: int | None = None,
) -> list[PhaseSample]:
    """Emit one PhaseSample per (detuning node, zeta draw, swap branch) at ``tau``."""
    table = build_table(src, grid, env, zeta_seed=zeta_seed)
    theta = table.theta(tau)
    g_full = np.broadcast_to(table.g[:, None], theta.shape)
    return [
        PhaseSample(theta=float(t), g=float(gv), weight=float(w), sign=int(s))
        for t, gv, w, s in zip(
            theta.ravel(), g_full.ravel(), table.weight.ravel(), table.sign.ravel()
        )
    ]
