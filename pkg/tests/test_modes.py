import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from tmqft.errors import ConvergenceError, DomainError, HorizonError
from tmqft.geometry import Chart, SpacetimePoint, WarpConfig, chart_transform
from tmqft.series import SeriesControl, SeriesReport
from tmqft.tm_modes import (
    AutomorphicMode,
    CoveringMode,
    automorphy_residual,
    covering_mode,
    gram_matrix,
    kg_inner_product,
    kg_residual,
    mode_eval,
)

E_CFG = WarpConfig(math.e, 1.0)


class _Conj:
    """Complex conjugate of a mode, as an evaluator with d_eta."""

    def __init__(self, m):
        self.m = m

    def __call__(self, zp, zm):
        return np.conj(self.m(zp, zm))

    def d_eta(self, zp, zm):
        return np.conj(self.m.d_eta(zp, zm))


def _mellin_oracle(n, cfg, zp, zm, e0=1e-3):
    """Regulated defining integral, extrapolated to zero regulator.

    int_0^inf dw/w (w/W)^(-i kappa) (e^{-i w zp} - e^{i w zm}) e^{-eps w}
    at eps = e0, 2 e0, 3 e0 by adaptive quadrature in log w, then a
    quadratic through the three values evaluated at eps = 0. The
    normalization b_n makes b_n Gamma(-i kappa) = [8 pi n sinh(2 pi^2 beta n)]^(-1/2),
    which is even in n.
    """
    W, beta = cfg.W, cfg.beta
    k = 2 * math.pi * beta * n

    def regulated(eps):
        def f(w, part):
            om = W * math.exp(w)
            v = np.exp(-1j * k * w) * (np.exp(-1j * om * zp) - np.exp(1j * om * zm)) * math.exp(-eps * om)
            return v.real if part == 0 else v.imag

        hi = math.log(40 / (eps * W))
        opts = dict(limit=20000, epsabs=1e-12, epsrel=1e-12)
        return integrate.quad(f, -40, hi, args=(0,), **opts)[0] + 1j * integrate.quad(
            f, -40, hi, args=(1,), **opts
        )[0]

    eps = np.array([e0, 2 * e0, 3 * e0])
    vals = np.array([regulated(e) for e in eps])
    ext = np.polyval(np.polyfit(eps, vals, 2), 0.0)
    bn = (8 * math.pi * n * math.sinh(2 * math.pi**2 * beta * n)) ** -0.5 / special.gamma(-1j * k)
    return complex(bn * ext)


# covering modes


def test_covering_mode_examples():
    assert covering_mode(1.0, (1.3, -1.3)) == 0
    assert abs(covering_mode(1.0, (math.pi, math.pi))) < 1e-15
    assert covering_mode(1.0, (math.pi / 2, 0.0)) == pytest.approx((-1j - 1) / math.sqrt(4 * math.pi))
    with pytest.raises(DomainError):
        CoveringMode(0.0)


@given(w=st.floats(0.01, 50.0), z=st.floats(-10.0, 10.0))
def test_covering_dirichlet(w, z):
    assert CoveringMode(w)(z, -z) == 0


# automorphic modes


def test_zero_mode_examples():
    beta = E_CFG.beta
    assert mode_eval(AutomorphicMode(0, E_CFG), (0.7, 0.7)) == pytest.approx(-1j * math.sqrt(math.pi * beta) / 2)
    val = mode_eval(AutomorphicMode(0, E_CFG), (math.e * 0.4, 0.4))
    assert val == pytest.approx(-math.sqrt(1 / (4 * math.pi)) * (1 + 1j * math.pi), rel=1e-14)


def test_mode_matches_mellin_integral():
    cfg = WarpConfig(math.exp(2.0), 1.0)  # beta = 0.5
    W = cfg.W
    got = mode_eval(AutomorphicMode(2, cfg), (2 / W, 1 / W))
    assert got == pytest.approx(_mellin_oracle(2, cfg, 2 / W, 1 / W), abs=1e-6)


@pytest.mark.parametrize("n,p", [(1, (0.5, 1.7)), (3, (1.0, 2.2)), (-1, (2.0, 1.0))])
def test_mode_matches_mellin_integral_more(n, p):
    cfg = WarpConfig(math.exp(2.0), 1.0)
    W = cfg.W
    zp, zm = p[0] / W, p[1] / W
    got = mode_eval(AutomorphicMode(n, cfg), (zp, zm))
    assert got == pytest.approx(_mellin_oracle(n, cfg, zp, zm), abs=1e-6)


def test_horizon_errors():
    m = AutomorphicMode(1, E_CFG)
    with pytest.raises(HorizonError):
        m(0.0, 1.0)
    with pytest.raises(HorizonError):
        m.d_eta(1.0, 0.0)
    with pytest.raises(DomainError):
        AutomorphicMode(1, WarpConfig(1.0, 1.0))


def test_spacetime_point_input():
    m = AutomorphicMode(2, E_CFG)
    p = SpacetimePoint.ty(0.1, 0.3)
    q = chart_transform(p, Chart.NULL, E_CFG)
    assert mode_eval(m, p) == mode_eval(m, q.coords)


# inner product


def test_inner_product_examples():
    u0, u1, u2, um2 = (AutomorphicMode(n, E_CFG) for n in (0, 1, 2, -2))
    assert kg_inner_product(u1, u1, E_CFG) == pytest.approx(1.0, abs=1e-8)
    assert abs(kg_inner_product(u0, u1, E_CFG)) < 1e-8
    assert abs(kg_inner_product(u2, um2, E_CFG)) < 1e-8
    # positive and negative frequency sectors are orthogonal
    assert abs(kg_inner_product(u2, _Conj(um2), E_CFG)) < 1e-8
    assert abs(kg_inner_product(u1, _Conj(u1), E_CFG)) < 1e-8


def test_inner_product_two_node_densities():
    u1 = AutomorphicMode(1, E_CFG)
    rep = SeriesReport()
    val = kg_inner_product(u1, u1, E_CFG, report=rep)
    assert rep.converged and rep.tail_bound < 1e-12
    fd = kg_inner_product(u1, u1, E_CFG, derivative="fd")
    assert fd == pytest.approx(val, abs=1e-8)


def test_inner_product_nonconvergence_reports_nodes():
    cfg = WarpConfig(1.01, 1.0)
    # opposite indices leave ~80 oscillations over the domain
    u, v = AutomorphicMode(40, cfg), AutomorphicMode(-40, cfg)
    with pytest.raises(ConvergenceError) as exc:
        kg_inner_product(u, v, cfg, SeriesControl(n_max=64))
    assert "nodes" in exc.value.diagnostics


def test_inner_product_bad_derivative():
    u = AutomorphicMode(1, E_CFG)
    with pytest.raises(ValueError):
        kg_inner_product(u, u, E_CFG, derivative="spline")


@pytest.mark.parametrize("A", [1.1, math.e, 10.0])
def test_orthonormality(A):
    G = gram_matrix(range(-3, 4), WarpConfig(A, 1.0))
    assert np.max(np.abs(G - np.eye(7))) < 1e-7


# residuals

diamond = st.tuples(st.floats(0.05, 20.0), st.floats(0.05, 20.0))


@settings(max_examples=200, deadline=None)
@given(n=st.integers(-5, 5), p=diamond, A=st.floats(1.1, 10.0), k=st.integers(-2, 2))
def test_automorphy(n, p, A, k):
    cfg = WarpConfig(A, 1.0)
    assert automorphy_residual(AutomorphicMode(n, cfg), p, power=k) < 1e-12


@settings(max_examples=100, deadline=None)
@given(n=st.integers(-5, 5), zp=st.floats(-20.0, 20.0), zm=st.floats(-20.0, 20.0))
def test_automorphy_all_sectors(n, zp, zm):
    assume(abs(zp) > 0.05 and abs(zm) > 0.05 and zp + zm > 0)
    assert automorphy_residual(AutomorphicMode(n, E_CFG), (zp, zm)) < 1e-12


def test_automorphy_examples():
    cfg = WarpConfig(2.0, 1.0)
    assert automorphy_residual(AutomorphicMode(3, cfg), (1.0, 0.5)) < 1e-12
    assert automorphy_residual(AutomorphicMode(1, cfg), (1.0, 0.5), power=2) < 1e-12
    assert automorphy_residual(AutomorphicMode(0, cfg), (1.0, 0.5)) == 0.0


def test_kg_residual_examples():
    assert kg_residual(AutomorphicMode(0, E_CFG), (2.0, 1.0), 1e-3) < 1e-6
    r1 = kg_residual(AutomorphicMode(1, E_CFG), (2.0, 1.0), 2e-3)
    r2 = kg_residual(AutomorphicMode(1, E_CFG), (2.0, 1.0), 1e-3)
    assert r1 / r2 == pytest.approx(4.0, abs=0.5)
    assert kg_residual(CoveringMode(1.0), (2.0, 1.0), 1e-3, E_CFG) < 1e-6


@pytest.mark.parametrize("n", [-2, 0, 3])
@pytest.mark.parametrize("p", [(2.0, 1.0), (0.5, 3.0), (4.0, -1.0)])
def test_kg_residual_second_order(n, p):
    m = AutomorphicMode(n, E_CFG)
    r1, r2 = kg_residual(m, p, 4e-3), kg_residual(m, p, 2e-3)
    assert r1 / r2 == pytest.approx(4.0, abs=0.5)


@settings(max_examples=100, deadline=None)
@given(sigma=st.floats(-1.4, 1.4), chi1=st.floats(-3.0, 3.0), chi2=st.floats(-3.0, 3.0))
def test_zero_mode_depends_on_sigma_only(sigma, chi1, chi2):
    m = AutomorphicMode(0, E_CFG)
    a = chart_transform(SpacetimePoint(Chart.ADAPTED, sigma, chi1), Chart.NULL, E_CFG)
    b = chart_transform(SpacetimePoint(Chart.ADAPTED, sigma, chi2), Chart.NULL, E_CFG)
    assert mode_eval(m, a) == pytest.approx(mode_eval(m, b), abs=1e-12)
