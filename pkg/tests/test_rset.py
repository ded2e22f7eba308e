import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tmqft.correlators import gamma_of_delta
from tmqft.cylinder_qft import CylinderConfig, ZeroModeState
from tmqft.errors import DomainError, HorizonError
from tmqft.geometry import SpacetimePoint, WarpConfig
from tmqft.rset import (
    RsetChart,
    cylinder_rset,
    f_beta,
    f_beta_asymptote,
    f_beta_series,
    rset_cylinder_chart,
    rset_zeta,
)
from tmqft.series import SeriesControl, SeriesReport


def _f_oracle(beta, dps=50):
    """Direct sum in multiprecision, stopped far below double precision."""
    with mpmath.workdps(dps):
        b = mpmath.mpf(beta)
        c = 4 * mpmath.pi**2 * b
        s = mpmath.nsum(lambda n: n * mpmath.exp(-c * n) / (1 - mpmath.exp(-c * n)), [1, mpmath.inf])
        return float(1 / (48 * mpmath.pi) - b / (4 * mpmath.pi) + b * b * mpmath.pi / 12 - 2 * mpmath.pi * b * b * s)


# F(beta)


def test_f_beta_example():
    assert f_beta(10.0) == pytest.approx(25.3907955204, abs=1e-10)
    assert f_beta(10.0) == pytest.approx(_f_oracle(10.0), rel=1e-15)
    with pytest.raises(DomainError):
        f_beta(0.0)
    with pytest.raises(DomainError):
        f_beta(-1.0)


@settings(max_examples=100, deadline=None)
@given(beta=st.floats(0.05, 200.0))
def test_f_beta_matches_oracle(beta):
    assert f_beta(beta) == pytest.approx(_f_oracle(beta), rel=1e-13, abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(beta=st.floats(0.5, 50.0))
def test_f_beta_large_beta_form(beta):
    closed = math.pi * beta * beta / 12 - beta / (4 * math.pi) + 1 / (48 * math.pi)
    diff = closed - f_beta(beta)
    # the sum is positive, so F sits below its closed part, by at most ~ beta^2 e^{-4 pi^2 beta}
    assert diff >= -1e-15 * closed
    assert diff <= 2 * math.pi * beta * beta * 2 * math.exp(-4 * math.pi**2 * beta) + 1e-13 * closed


@settings(max_examples=100, deadline=None)
@given(beta=st.floats(0.5, 50.0))
def test_f_beta_truncation_independence(beta):
    a = f_beta(beta)
    b = f_beta(beta, SeriesControl(n_max=800, tail_tol=1e-30))
    assert abs(a - b) < 1e-14 * max(1.0, abs(a))


def test_f_beta_small_beta_flagged():
    rep = SeriesReport()
    val = f_beta(0.01, report=rep)
    assert any("strong-warp" in n for n in rep.notes)
    assert val == pytest.approx(_f_oracle(0.01), abs=1e-15)
    assert rep.converged


def test_f_beta_delta_map():
    delta = 0.01
    beta = WarpConfig.from_delta(delta).beta
    assert beta == pytest.approx(100.499, abs=1e-3)
    ref = math.pi / (12 * delta**2) - 1 / (4 * math.pi * delta)
    assert f_beta(beta) == pytest.approx(ref, rel=1.1e-2)


# small-delta forms


def test_asymptote_values():
    assert f_beta_asymptote(0.01) == pytest.approx(math.pi / 12e-4 - 1 / (0.04 * math.pi), rel=1e-15)
    assert f_beta_asymptote(0.01) == pytest.approx(2610.036, abs=1e-3)
    with pytest.raises(DomainError):
        f_beta_asymptote(0.0)
    with pytest.warns(UserWarning):
        f_beta_asymptote(0.2)


def test_asymptote_scaling():
    for d in (1e-3, 1e-4, 1e-5):
        assert f_beta_asymptote(d) * d * d == pytest.approx(math.pi / 12, rel=2 * d)


def test_asymptote_vs_exact_order_one_at_0p1():
    diff = f_beta(WarpConfig.from_delta(0.1).beta) - f_beta_asymptote(0.1)
    assert 0.1 < abs(diff) < 10


@pytest.mark.parametrize("order,power", [(0, -1), (1, 0), (2, 1)])
def test_series_orders(order, power):
    # the residual after keeping delta^-2 .. delta^(order-2) scales like delta^(order-1)
    deltas = np.geomspace(1e-3, 3e-2, 6)
    res = [abs(f_beta(WarpConfig.from_delta(d).beta) - f_beta_series(d, order)) for d in deltas]
    slope = np.polyfit(np.log(deltas), np.log(res), 1)[0]
    assert slope == pytest.approx(power, abs=0.15)


def test_series_order_check():
    with pytest.raises(ValueError):
        f_beta_series(0.01, 3)


# components


def test_rset_zeta_example():
    cfg = WarpConfig(math.exp(0.1), 1.0)  # beta = 10
    T = rset_zeta((1.0, 1.0), cfg)
    F = _f_oracle(10.0)
    assert T.T_pp == pytest.approx(-F, rel=1e-13)
    assert T.T_mm == pytest.approx(-F, rel=1e-13)
    assert T.T_pm == pytest.approx(1 / (24 * math.pi), rel=1e-15)
    assert T.chart is RsetChart.ZETA
    assert T.as_dict()["chart"] == "zeta"


def test_rset_zeta_errors():
    cfg = WarpConfig(math.e, 1.0)
    with pytest.raises(HorizonError):
        rset_zeta((0.0, 1.0), cfg)
    with pytest.raises(DomainError):
        rset_zeta((-1.0, 1.0), cfg)


@settings(max_examples=200, deadline=None)
@given(zp=st.floats(0.01, 100.0), zm=st.floats(0.01, 100.0), A=st.floats(1.1, 20.0))
def test_rset_zeta_properties(zp, zm, A):
    cfg = WarpConfig(A, 1.0)
    T = rset_zeta((zp, zm), cfg)
    S = rset_zeta((A * zp, A * zm), cfg)
    assert S.T_pp == pytest.approx(T.T_pp / A**2, rel=1e-13)
    assert S.T_mm == pytest.approx(T.T_mm / A**2, rel=1e-13)
    assert T.T_mm * zm * zm == pytest.approx(-f_beta(cfg.beta), rel=1e-14)
    assert T.T_pm > 0
    if zp == zm:
        assert T.T_pp == T.T_mm


def test_rset_zeta_far_point():
    cfg = WarpConfig(math.e, 1.0)
    assert rset_zeta((1e8, 1e8), cfg).T_pm < 1e-17


def test_rset_cylinder_chart_examples():
    delta = 0.01
    cfg = WarpConfig.from_delta(delta)
    T = rset_cylinder_chart((0.0, 0.0), cfg)
    assert T.chart is RsetChart.Z
    assert T.T_mm == pytest.approx(delta / (4 * math.pi) - math.pi / 12, abs=1e-4)
    assert T.T_pp == T.T_mm
    # the leading delta^2/(24 pi) is accurate to O(delta^3)
    assert T.T_pm == pytest.approx(delta**2 / (24 * math.pi), rel=2 * delta)
    assert rset_cylinder_chart(SpacetimePoint.ty(0.0, 0.0), cfg) == T
    with pytest.raises(DomainError):
        rset_cylinder_chart(SpacetimePoint.null(1.0, 1.0), cfg)


def test_rset_cylinder_chart_trend():
    vals = [rset_cylinder_chart((0.0, 0.0), WarpConfig.from_delta(d)).T_mm for d in (1e-2, 1e-4, 1e-6)]
    assert abs(vals[2] + math.pi / 12) < abs(vals[1] + math.pi / 12) < abs(vals[0] + math.pi / 12)
    assert vals[2] == pytest.approx(-math.pi / 12, abs=1e-6)
    with pytest.warns(UserWarning):
        rset_cylinder_chart((0.0, 0.0), WarpConfig.from_delta(0.2))


# Einstein cylinder


def test_cylinder_rset_examples():
    cfg = CylinderConfig(1.0)
    T = cylinder_rset(ZeroModeState(0.0), cfg)
    assert T.T_mm == pytest.approx(-math.pi / 12, rel=1e-15)
    assert T.T_pm == 0.0
    delta = 0.01
    T = cylinder_rset(ZeroModeState(gamma_of_delta(delta)), cfg)
    assert T.T_mm == pytest.approx(delta / (4 * math.pi) - math.pi / 12, rel=1e-14)
    S = rset_cylinder_chart((0.0, 0.0), WarpConfig.from_delta(delta))
    assert abs(S.T_mm - T.T_mm) < 10 * delta**2


@given(g=st.floats(0.0, 1e3), L=st.floats(0.1, 10.0))
def test_cylinder_zero_mode_positive(g, L):
    cfg = CylinderConfig(L)
    T = cylinder_rset(ZeroModeState(g), cfg)
    assert T.T_mm >= cylinder_rset(ZeroModeState(0.0), cfg).T_mm
    assert T.T_pp == T.T_mm


def test_decomposition_second_order():
    deltas = np.geomspace(1e-3, 1e-1, 7)
    cfg = CylinderConfig(1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        dev = [
            abs(
                rset_cylinder_chart((0.0, 0.0), WarpConfig.from_delta(d)).T_mm
                - cylinder_rset(ZeroModeState(gamma_of_delta(d)), cfg).T_mm
            )
            for d in deltas
        ]
    slope = np.polyfit(np.log(deltas), np.log(dev), 1)[0]
    assert slope == pytest.approx(2.0, abs=0.2)
