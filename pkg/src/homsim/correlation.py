"""Ensemble engine: coincidence maps, mean intensities, normalized dips, g2.

Per sample the port intensities are i_a = 1 - s g sin(theta), i_b = 2 - i_a
(s is the swap branch: s = -1 exchanges the ports).  The coincidence
integrand is either cos^2(theta) g^p ("paper" form) or the literal intensity
product 1 - sin^2(theta) g^2 ("product" form); the two coincide at g = 1.

The normalized dip curve is

    r_hat(tau) = sum w * integrand / sum w * g^p

which pins the incoherent far wing to exactly 1/2 and an ideal dip to 0.
g2 uses the standard definition <i_a i_b> / (<i_a> <i_b>) with the exact
per-sample product; degenerate denominators are reported as flagged gaps
(NaN + mask), never raised.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .sources import ClassicalSource, EnsembleTable, SpdcSource, ZetaModel, build_table
from .spectral import DetuningGrid, Envelope

INTEGRAND_FORMS = ("paper", "product")

G2_GAP_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class TauGrid:
    """Ordered delay times, in units of the inverse spectral width."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError("tau grid must be a nonempty 1-D array")
        if not np.all(np.isfinite(vals)):
            raise ValueError("tau values must be finite")
        if vals.size > 1 and not np.all(np.diff(vals) > 0.0):
            raise ValueError("tau values must be strictly increasing")

    @classmethod
    def linspace(cls, start: float, stop: float, num: int) -> "TauGrid":
        return cls(np.linspace(start, stop, num))

    @property
    def n(self) -> int:
        return self.values.size

    def has_zero(self) -> bool:
        return bool(np.any(self.values == 0.0))


@dataclass(frozen=True, eq=False)
class CorrelationResult:
    """Curves and (tau, delta_f) maps produced by `evaluate`.

    ``g2`` holds NaN wherever a port mean vanished; ``g2_defined`` flags the
    valid entries.
    """

    tau: np.ndarray
    delta_f: np.ndarray
    r_map: np.ndarray
    ia_map: np.ndarray
    ib_map: np.ndarray
    ia_mean: np.ndarray
    ib_mean: np.ndarray
    r_hat: np.ndarray
    g2: np.ndarray
    g2_defined: np.ndarray

    @property
    def visibility(self) -> np.ndarray:
        """V(tau) = (ib_mean - ia_mean) / 2, the fringe amplitude of the means."""
        return 0.5 * (self.ib_mean - self.ia_mean)


def coincidence_integrand(theta, g, form: str = "paper", p: int = 1):
    """Coincidence-rate integrand at phase ``theta`` and visibility ``g``."""
    if form not in INTEGRAND_FORMS:
        raise ValueError(f"unknown integrand form {form!r}")
    if p not in (1, 2):
        raise ValueError(f"exponent p must be 1 or 2, got {p}")
    g_arr = np.asarray(g, dtype=float)
    if np.any(g_arr < 0.0) or np.any(g_arr > 1.0):
        raise ValueError("visibility g must lie in [0, 1]")
    if form == "paper":
        out = np.cos(theta) ** 2 * g_arr**p
    else:
        out = 1.0 - np.sin(theta) ** 2 * g_arr * g_arr
    return float(out) if np.ndim(theta) == 0 and np.ndim(g) == 0 else out


def thread_count(threads: int | None = None) -> int:
    """Resolve the worker count; HOMSIM_THREADS caps it (0 = auto, unset = serial)."""
    if threads is None:
        env = os.environ.get("HOMSIM_THREADS")
        if env is None:
            return 1
        threads = int(env)
    if threads == 0:
        threads = os.cpu_count() or 1
    return max(1, threads)


def _evaluate_table(
    table: EnsembleTable,
    taus: TauGrid,
    form: str,
    p: int,
    threads: int | None = None,
) -> CorrelationResult:
    nt = taus.n
    nk = table.n_nodes
    w = table.weight
    node_tot = w.sum(axis=1)
    g_node = table.g
    gp_node = g_node**p
    r_hat_den = float((w * gp_node[:, None]).sum())

    r_map = np.empty((nt, nk))
    ia_map = np.empty((nt, nk))
    ib_map = np.empty((nt, nk))
    ia_mean = np.empty(nt)
    ib_mean = np.empty(nt)
    r_hat = np.empty(nt)
    g2 = np.empty(nt)
    g2_defined = np.empty(nt, dtype=bool)

    def fill(i: int) -> None:
        theta = table.const_phase - table.tau_coeff * taus.values[i]
        s = np.sin(theta)
        cross = table.sign * (g_node[:, None] * s)
        ia = 1.0 - cross
        ib = 2.0 - ia
        if form == "paper":
            c = np.cos(theta)
            integ = (c * c) * gp_node[:, None]
        else:
            integ = 1.0 - (s * s) * (g_node * g_node)[:, None]
        wi = w * ia
        wb = w * ib
        r_map[i] = (w * integ).sum(axis=1) / node_tot
        ia_map[i] = wi.sum(axis=1) / node_tot
        ib_map[i] = wb.sum(axis=1) / node_tot
        ia_mean[i] = wi.sum()
        ib_mean[i] = wb.sum()
        r_hat[i] = (w * integ).sum() / r_hat_den
        den = ia_mean[i] * ib_mean[i]
        if ia_mean[i] <= G2_GAP_EPS or ib_mean[i] <= G2_GAP_EPS:
            g2[i] = np.nan
            g2_defined[i] = False
        else:
            g2[i] = (wi * ib).sum() / den
            g2_defined[i] = True

    nworkers = thread_count(threads)
    if nworkers == 1:
        for i in range(nt):
            fill(i)
    else:
        # Rows are independent slots, so scheduling cannot change results.
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            list(pool.map(fill, range(nt)))

    return CorrelationResult(
        tau=taus.values.copy(),
        delta_f=table.delta_f.copy(),
        r_map=r_map,
        ia_map=ia_map,
        ib_map=ib_map,
        ia_mean=ia_mean,
        ib_mean=ib_mean,
        r_hat=r_hat,
        g2=g2,
        g2_defined=g2_defined,
    )


def evaluate(
    src: ClassicalSource | SpdcSource,
    grid: DetuningGrid | tuple[DetuningGrid, DetuningGrid],
    env: Envelope,
    taus: TauGrid,
    form: str = "paper",
    zeta_seed: int | None = None,
    threads: int | None = None,
) -> CorrelationResult:
    """Run the weighted ensemble over all delays."""
    if form not in INTEGRAND_FORMS:
        raise ValueError(f"unknown integrand form {form!r}")
    table = build_table(src, grid, env, zeta_seed=zeta_seed)
    return _evaluate_table(table, taus, form, env.exponent_p, threads=threads)


def classical_baseline(
    src: ClassicalSource,
    grid: DetuningGrid | tuple[DetuningGrid, DetuningGrid],
    env: Envelope,
    taus: TauGrid,
    form: str = "paper",
    zeta_seed: int | None = None,
) -> CorrelationResult:
    """Two-laser reference curves (same engine, classical phase model)."""
    if not isinstance(src, ClassicalSource):
        raise TypeError("classical_baseline expects a ClassicalSource")
    return evaluate(src, grid, env, taus, form=form, zeta_seed=zeta_seed)


def dephasing_sweep(
    src: SpdcSource,
    zeta_halfwidths,
    grid: DetuningGrid,
    env: Envelope,
    taus: TauGrid,
    form: str = "paper",
    zeta_seed: int | None = None,
) -> list[tuple[float, CorrelationResult]]:
    """Evaluate once per uniform-zeta half-width in ``zeta_halfwidths``."""
    out = []
    for a in zeta_halfwidths:
        a = float(a)
        if not (0.0 <= a <= np.pi):
            raise ValueError(f"zeta half-width must lie in [0, pi], got {a}")
        zeta = ZetaModel(
            kind="uniform", value=a, nodes=src.zeta.nodes, scheme=src.zeta.scheme
        )
        swept = SpdcSource(
            phi_prime=src.phi_prime,
            zeta=zeta,
            delta=src.delta,
            swap=src.swap,
            swap_seed=src.swap_seed,
        )
        out.append((a, evaluate(swept, grid, env, taus, form=form, zeta_seed=zeta_seed)))
    return out
