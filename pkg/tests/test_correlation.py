"""Ensemble engine: anchors, conservation, swap symmetry, derived oracles.

Derived expectations are computed by independent quadrature (scipy) before
being compared against the grid-ensemble engine:

  * dip shape      E[sin^2(2 x tau)]      -> (1 - exp(-8 tau^2)) / 2
  * dephasing      E[sin^2 zeta], U[-a,a] -> 1/2 - sin(2a) / (4a)
  * filtered V     truncated-Gaussian-weighted cosine transform
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.optimize import brentq

from homsim.correlation import (
    TauGrid,
    classical_baseline,
    coincidence_integrand,
    dephasing_sweep,
    evaluate,
)
from homsim.sources import ClassicalSource, SpdcSource, ZetaModel
from homsim.spectral import Envelope, SpectralProfile, build_grid, filter_grid

UNITY = Envelope(kind="unity")
GAUSS = Envelope()


def ideal_grid(n=201, span=4.0):
    return build_grid(SpectralProfile(delta=1.0, span_halfwidth=span), n)


def dip_oracle(tau):
    """Gaussian expectation of sin^2(2 x tau), cross-checked by quadrature."""
    closed = (1.0 - np.exp(-8.0 * np.asarray(tau, dtype=float) ** 2)) / 2.0
    return closed


def test_dip_oracle_agrees_with_quadrature():
    for t in (0.0, 0.25, 1.0, 2.5):
        num, _ = quad(
            lambda x, t=t: math.exp(-x * x / 2) / math.sqrt(2 * math.pi) * math.sin(2 * x * t) ** 2,
            -40,
            40,
            limit=400,
        )
        assert dip_oracle(t) == pytest.approx(num, abs=1e-10)


def zeta_oracle(a: float) -> float:
    """E[sin^2 zeta] over Uniform[-a, a]."""
    if a == 0.0:
        return 0.0
    return 0.5 - math.sin(2 * a) / (4 * a)


def test_zeta_oracle_agrees_with_quadrature():
    for a in (math.pi / 8, math.pi / 4, 3 * math.pi / 8, math.pi / 2, math.pi):
        num, _ = quad(lambda z: math.sin(z) ** 2, -a, a)
        assert zeta_oracle(a) == pytest.approx(num / (2 * a), abs=1e-12)
    # frozen literal from the oracle
    assert zeta_oracle(math.pi / 4) == pytest.approx(0.18169, abs=1e-5)


def test_integrand_examples():
    assert coincidence_integrand(0.0, 1.0, "paper", 1) == pytest.approx(1.0)
    assert coincidence_integrand(math.pi / 2, 1.0, "paper", 1) == pytest.approx(0.0, abs=1e-30)
    assert coincidence_integrand(math.pi / 2, 1.0, "product") == pytest.approx(0.0, abs=1e-15)
    assert coincidence_integrand(math.pi / 2, 0.5, "paper", 1) == pytest.approx(0.0, abs=1e-30)
    assert coincidence_integrand(math.pi / 2, 0.5, "product") == pytest.approx(0.75, abs=1e-15)


def test_integrand_forms_coincide_at_full_visibility():
    thetas = np.linspace(-math.pi, math.pi, 101)
    a = coincidence_integrand(thetas, 1.0, "paper", 2)
    b = coincidence_integrand(thetas, 1.0, "product")
    np.testing.assert_allclose(a, b, atol=1e-14)


def test_integrand_validation():
    with pytest.raises(ValueError):
        coincidence_integrand(0.0, 1.0, "exotic")
    with pytest.raises(ValueError):
        coincidence_integrand(0.0, 1.0, "paper", 3)
    with pytest.raises(ValueError):
        coincidence_integrand(0.0, 1.5, "paper")


def test_tau_grid_validation():
    with pytest.raises(ValueError):
        TauGrid(np.array([1.0, 0.5]))
    with pytest.raises(ValueError):
        TauGrid(np.array([0.0, np.inf]))
    grid = TauGrid.linspace(0.0, 3.0, 241)
    assert grid.has_zero()


def test_ideal_dip_anchors():
    res = evaluate(SpdcSource(), ideal_grid(), UNITY, TauGrid(np.array([0.0, 0.25, 5.0])))
    assert res.r_hat[0] <= 1e-9
    assert res.r_hat[1] == pytest.approx(0.196735, abs=1e-3)  # frozen from dip_oracle(0.25)
    assert dip_oracle(0.25) == pytest.approx(0.196735, abs=1e-6)
    assert res.r_hat[2] == pytest.approx(0.5, abs=1e-3)


def test_dip_curve_matches_oracle():
    taus = TauGrid.linspace(0.0, 3.0, 241)
    res = evaluate(SpdcSource(), ideal_grid(2001), UNITY, taus)
    np.testing.assert_allclose(res.r_hat, dip_oracle(taus.values), atol=1e-3)


def test_map_conservation():
    res = evaluate(SpdcSource(swap="off"), ideal_grid(), GAUSS, TauGrid.linspace(-3, 3, 61))
    np.testing.assert_allclose(res.ia_map + res.ib_map, 2.0, atol=1e-12, rtol=0)


def test_swap_mean_flatness():
    res = evaluate(SpdcSource(swap="exact_half"), ideal_grid(), GAUSS, TauGrid.linspace(0, 3, 121))
    assert np.abs(res.ia_mean - 1.0).max() <= 1e-12
    assert np.abs(res.ib_mean - 1.0).max() <= 1e-12


def test_swap_mean_flatness_with_zeta_spread_on_symmetric_grid():
    src = SpdcSource(zeta=ZetaModel(kind="uniform", value=0.6, nodes=33))
    res = evaluate(src, ideal_grid(101), GAUSS, TauGrid.linspace(0, 2, 41))
    assert np.abs(res.ia_mean - 1.0).max() <= 1e-12


def test_g2_coincides_with_r_hat_under_randomness():
    res = evaluate(SpdcSource(), ideal_grid(), UNITY, TauGrid.linspace(0, 3, 241))
    assert np.all(res.g2_defined)
    assert np.abs(res.g2 - res.r_hat).max() <= 1e-9


def test_no_swap_intensity_asymmetry():
    grid = ideal_grid()
    taus = TauGrid.linspace(0, 3, 121)
    res = evaluate(SpdcSource(swap="off"), grid, GAUSS, taus)
    g = np.exp(-grid.delta_f**2 / 2)
    v = np.array([(grid.weight * g * np.cos(2 * grid.delta_f * t)).sum() for t in taus.values])
    np.testing.assert_allclose(res.ia_mean, 1.0 - v, atol=1e-12, rtol=0)
    np.testing.assert_allclose(res.ib_mean, 1.0 + v, atol=1e-12, rtol=0)
    np.testing.assert_allclose(res.visibility, v, atol=1e-12, rtol=0)


def test_phi_prime_sign_swaps_ports_only():
    grid = ideal_grid()
    taus = TauGrid.linspace(-2, 2, 81)
    plus = evaluate(SpdcSource(phi_prime=math.pi / 2, swap="off"), grid, GAUSS, taus)
    minus = evaluate(SpdcSource(phi_prime=-math.pi / 2, swap="off"), grid, GAUSS, taus)
    assert np.abs(plus.ia_map - minus.ib_map).max() <= 1e-12
    assert np.abs(plus.ib_map - minus.ia_map).max() <= 1e-12
    assert np.abs(plus.r_map - minus.r_map).max() <= 1e-12


# -- filtered-spectrum visibility oracle --------------------------------------


def _truncated_visibility_oracle(half_span: float):
    """Continuous V(tau) for the filtered spectrum, via adaptive quadrature."""
    den, _ = quad(lambda x: math.exp(-x * x / 2), -half_span, half_span)

    def v(t: float) -> float:
        num, _ = quad(
            lambda x, t=t: math.exp(-x * x) * math.cos(2 * x * t),
            -half_span,
            half_span,
            limit=400,
        )
        return num / den

    def dv(t: float) -> float:
        num, _ = quad(
            lambda x, t=t: -2 * x * math.exp(-x * x) * math.sin(2 * x * t),
            -half_span,
            half_span,
            limit=400,
        )
        return num / den

    return v, dv


def _oracle_extrema(dv, lo=1e-3, hi=6.0, samples=1200):
    ts = np.linspace(lo, hi, samples)
    ds = np.array([dv(t) for t in ts])
    roots = []
    for i in range(samples - 1):
        if ds[i] == 0.0 or ds[i] * ds[i + 1] < 0:
            roots.append(brentq(dv, ts[i], ts[i + 1]))
    return roots


def test_filtered_visibility_wiggles_match_oracle():
    base = build_grid(SpectralProfile(delta=1.0, span_halfwidth=2.0), 2001)
    cut = filter_grid(base, 1.0)
    taus = TauGrid.linspace(0.0, 6.0, 1201)
    res = evaluate(SpdcSource(swap="off"), cut, GAUSS, taus)
    v_engine = res.visibility

    # at least one sign change of V on (0, 6]
    signs = np.sign(v_engine[1:])
    assert np.any(signs[:-1] * signs[1:] < 0)

    v_oracle, dv_oracle = _truncated_visibility_oracle(1.0)
    extrema = _oracle_extrema(dv_oracle)
    assert len(extrema) >= 3
    for t_star in extrema[:3]:
        v_star = v_oracle(t_star)
        i = int(np.argmin(np.abs(taus.values - t_star)))
        assert v_engine[i] == pytest.approx(v_star, abs=1e-3)


def test_full_span_first_sign_change_is_later_and_smaller():
    taus = TauGrid.linspace(0.0, 6.0, 1201)
    base = build_grid(SpectralProfile(delta=1.0, span_halfwidth=2.0), 2001)
    full = evaluate(SpdcSource(swap="off"), base, GAUSS, taus)
    cut = evaluate(SpdcSource(swap="off"), filter_grid(base, 1.0), GAUSS, taus)

    def first_sign_change(v):
        s = np.sign(v)
        idx = np.flatnonzero(s[1:-1] * s[2:] < 0)
        return None if idx.size == 0 else taus.values[idx[0] + 1]

    t_cut = first_sign_change(cut.visibility)
    t_full = first_sign_change(full.visibility)
    assert t_cut is not None
    if t_full is not None:
        assert t_full > t_cut
    # post-flip oscillation amplitude is far weaker for the full span
    assert np.max(np.abs(full.visibility[taus.values > 2.0])) < np.max(
        np.abs(cut.visibility[taus.values > 2.0])
    )


# -- dephasing ----------------------------------------------------------------


def test_dephasing_sweep_matches_uniform_oracle():
    halfwidths = [0.0, math.pi / 8, math.pi / 4, 3 * math.pi / 8, math.pi / 2, math.pi]
    sweep = dephasing_sweep(
        SpdcSource(), halfwidths, ideal_grid(), GAUSS, TauGrid(np.array([0.0, 1.0]))
    )
    for a, res in sweep:
        assert res.r_hat[0] == pytest.approx(zeta_oracle(a), abs=1e-3)


def test_dephasing_monotone_then_classical_bound():
    halfwidths = np.linspace(0.0, math.pi / 2, 9)
    sweep = dephasing_sweep(
        SpdcSource(), halfwidths, ideal_grid(101), GAUSS, TauGrid(np.array([0.0]))
    )
    zeros = np.array([res.r_hat[0] for _, res in sweep])
    assert np.all(np.diff(zeros) >= -1e-12)
    assert zeros[-1] == pytest.approx(0.5, abs=1e-3)
    # the uniform spread returns to exactly 1/2 at a = pi
    (_, res_pi), = dephasing_sweep(
        SpdcSource(), [math.pi], ideal_grid(101), GAUSS, TauGrid(np.array([0.0]))
    )
    assert res_pi.r_hat[0] == pytest.approx(0.5, abs=1e-3)


def test_dephasing_rejects_out_of_range_halfwidth():
    with pytest.raises(ValueError):
        dephasing_sweep(SpdcSource(), [4.0], ideal_grid(11), GAUSS, TauGrid(np.array([0.0])))


# -- classical baseline -------------------------------------------------------


def classical_grid(src, span=4.0, n=201):
    return build_grid(SpectralProfile(delta=src.delta_is, span_halfwidth=span), n)


def test_classical_anchors():
    taus = TauGrid(np.array([0.0, 0.5, 1.0, 2.0, 3.0]))
    src = ClassicalSource(phi=0.0)
    res = classical_baseline(src, classical_grid(src), GAUSS, taus)
    assert res.r_hat[0] == pytest.approx(1.0, abs=1e-9)
    assert np.all(np.diff(res.r_hat) < 0)
    assert res.r_hat[-1] == pytest.approx(0.5, abs=1e-3)

    src = ClassicalSource(phi=math.pi / 2)
    res = classical_baseline(src, classical_grid(src), GAUSS, taus)
    assert res.r_hat[0] <= 1e-9


def test_classical_full_dephasing_is_flat_half():
    src = ClassicalSource(phi=0.4, zeta=ZetaModel(kind="uniform", value=math.pi, nodes=129))
    res = classical_baseline(src, classical_grid(src), GAUSS, TauGrid.linspace(0, 3, 61))
    np.testing.assert_allclose(res.r_hat, 0.5, atol=1e-3)


def test_classical_unity_dip_matches_difference_width_oracle():
    src = ClassicalSource(phi=0.0)
    taus = TauGrid.linspace(0.0, 2.0, 81)
    res = classical_baseline(src, classical_grid(src, n=1001), UNITY, taus)
    want = 0.5 * (1.0 + np.exp(-4.0 * taus.values**2))
    np.testing.assert_allclose(res.r_hat, want, atol=2e-4)


def test_classical_baseline_type_check():
    with pytest.raises(TypeError):
        classical_baseline(SpdcSource(), ideal_grid(11), GAUSS, TauGrid(np.array([0.0])))


# -- g2 gaps and bounds -------------------------------------------------------


def test_g2_gap_flagged_not_raised():
    # swap-off unity envelope: port A empties at tau = 0 -> 0/0 gap.
    src = ClassicalSource(phi=math.pi / 2)
    res = classical_baseline(src, classical_grid(src), UNITY, TauGrid(np.array([0.0, 1.0])))
    assert not res.g2_defined[0]
    assert np.isnan(res.g2[0])
    assert res.g2_defined[1]


def test_r_hat_bounds_paper_form():
    configs = [
        (SpdcSource(), UNITY),
        (SpdcSource(swap="off"), GAUSS),
        (SpdcSource(zeta=ZetaModel(kind="uniform", value=1.0, nodes=17)), GAUSS),
        (SpdcSource(), Envelope(exponent_p=2)),
    ]
    taus = TauGrid.linspace(-3, 3, 61)
    for src, env in configs:
        res = evaluate(src, ideal_grid(101), env, taus)
        assert np.all(res.r_hat >= 0.0)
        assert np.all(res.r_hat <= 1.0 + 1e-12)
        defined = res.g2[res.g2_defined]
        assert np.all(defined >= 0.0)


def test_threaded_evaluation_matches_serial_bitwise():
    src = SpdcSource(zeta=ZetaModel(kind="uniform", value=0.3, nodes=9))
    grid = ideal_grid(101)
    taus = TauGrid.linspace(-2, 2, 97)
    serial = evaluate(src, grid, GAUSS, taus, threads=1)
    threaded = evaluate(src, grid, GAUSS, taus, threads=4)
    for name in ("r_map", "ia_map", "ib_map", "ia_mean", "ib_mean", "r_hat"):
        assert np.array_equal(getattr(serial, name), getattr(threaded, name))
    assert np.array_equal(serial.g2[serial.g2_defined], threaded.g2[threaded.g2_defined])


def test_threads_env_variable(monkeypatch):
    src = SpdcSource()
    grid = ideal_grid(51)
    taus = TauGrid.linspace(0, 1, 11)
    base = evaluate(src, grid, UNITY, taus)
    monkeypatch.setenv("HOMSIM_THREADS", "3")
    env_run = evaluate(src, grid, UNITY, taus)
    assert np.array_equal(base.r_hat, env_run.r_hat)
