r"""Metric profiles, canonicalization and coordinate charts.

A (1+1) time machine is described in Fermi-type coordinates by

.. math::

    ds^2 = -\alpha(x)^2 dt^2 + dx^2, \qquad \alpha(x) = e^{-\int_0^x a},

with a periodic acceleration profile :math:`a(x+Q) = a(x)` and the
identification :math:`(t, x) \sim (At, x+Q)`. Every profile is conformal to
the constant-acceleration representative with :math:`a = W = \log A / L`,
which is locally AdS2 with :math:`R = -2W^2`.

Charts on the canonical covering space (all points carry their chart tag):

==========  ==============  ==============================================
chart       (c1, c2)        relation to the null hub
==========  ==============  ==============================================
TY          (t, y)          eta = t, xi = exp(W y) / W
POINCARE    (eta, xi)       zeta_pm = xi +- eta, xi > 0
NULL        (zeta_+, zeta_-)
COMPACT     (tau, rho)      rho = pi - (u+v), tau = pi/2 + (u-v),
                            u = arctan(2 W zeta_+), v = arctan(2 W zeta_-)
ADAPTED     (sigma, chi)    zeta_pm = e^chi (1 +- sin sigma) / (W cos sigma)
==========  ==============  ==============================================
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import ConvergenceError, DegenerateProfileError, DomainError

__all__ = [
    "MetricProfile",
    "WarpConfig",
    "Chart",
    "SpacetimePoint",
    "ConformalMap",
    "KillingResiduals",
    "curvature_scalar",
    "canonicalize",
    "circulation",
    "chart_transform",
    "to_null",
    "is_ctc_region",
    "killing_residuals",
    "DEFAULT_ORIENTATION",
]

# orientation whose winding-one circulation is -log A
DEFAULT_ORIENTATION = -1

_GL_X, _GL_W = np.polynomial.legendre.leggauss(12)


def _short_integral(f, x0, dx):
    """Gauss-Legendre integral of a smooth f over [x0, x0 + dx].

    The width is taken from ``dx`` itself, not from (x0 + dx) - x0, which
    would carry a rounding error of relative size eps |x0| / |dx|.
    """
    half = 0.5 * dx
    mid = x0 + half
    return half * float(np.dot(_GL_W, [f(mid + half * s) for s in _GL_X]))


@dataclass(frozen=True)
class MetricProfile:
    """Acceleration profile a(x) with period Q and warp parameter A.

    Parameters
    ----------
    a : callable
        Acceleration as a function of proper distance, units 1/length.
    Q : float
        Proper length of the wormhole, the period of ``a``.
    A : float
        Warp parameter; ``int_0^Q a = log A`` is checked on construction.
    tol : float
        Tolerance for the periodicity and period-integral checks.
    """

    a: Callable[[float], float]
    Q: float
    A: float
    tol: float = 1e-8
    period_integral: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.Q > 0:
            raise DomainError(f"Q must be positive, got {self.Q}")
        if not self.A >= 1:
            raise DomainError(f"warp parameter must satisfy A >= 1, got {self.A}")
        for x in np.linspace(0.0, self.Q, 17):
            ax, axq = self.a(float(x)), self.a(float(x) + self.Q)
            if not (math.isfinite(ax) and math.isfinite(axq)):
                raise DegenerateProfileError(f"a({x}) is not finite")
            if abs(axq - ax) > self.tol * max(1.0, abs(ax)):
                raise DegenerateProfileError(
                    f"a is not Q-periodic: |a(x+Q) - a(x)| = {abs(axq - ax):.3g} at x = {x}"
                )
        val, _ = integrate.quad(self.a, 0.0, self.Q, epsabs=0.0, epsrel=1e-13, limit=200)
        if abs(val - math.log(self.A)) > self.tol * max(1.0, abs(math.log(self.A))):
            raise DegenerateProfileError(
                f"int_0^Q a = {val!r} does not equal log A = {math.log(self.A)!r}"
            )
        object.__setattr__(self, "period_integral", val)

    @classmethod
    def canonical(cls, A, L):
        """Constant acceleration W = log A / L with Q = L."""
        w = math.log(A) / L
        return cls(lambda x: w, L, A)

    @classmethod
    def flat(cls, Q):
        """The Einstein cylinder: a = 0, A = 1."""
        return cls(lambda x: 0.0, Q, 1.0)

    def log_alpha(self, x):
        """-int_0^x a, reduced to one period with the stored period integral."""
        k = math.floor(x / self.Q)
        r = x - k * self.Q
        val, _ = integrate.quad(self.a, 0.0, r, epsabs=0.0, epsrel=1e-13, limit=200)
        return -(k * self.period_integral + val)

    def alpha(self, x):
        """Lapse alpha(x) = exp(-int_0^x a)."""
        out = math.exp(self.log_alpha(x))
        if not (math.isfinite(out) and out > 0):
            raise DegenerateProfileError(f"alpha({x}) = {out} is not finite and positive")
        return out

    def alpha_ratio_m1(self, x, dx):
        """alpha(x+dx)/alpha(x) - 1 without cancellation for small dx."""
        return math.expm1(-_short_integral(self.a, x, dx))


@dataclass(frozen=True)
class WarpConfig:
    """Canonical time machine parameters.

    Only (A, L) are stored. ``from_delta`` keeps the exact delta so that
    log A = log1p(delta) stays accurate in the weak-warp limit.
    """

    A: float
    L: float
    _delta: float | None = field(default=None, repr=False)

    def __post_init__(self):
        if not self.A >= 1:
            raise DomainError(f"warp parameter must satisfy A >= 1, got {self.A}")
        if not self.L > 0:
            raise DomainError(f"L must be positive, got {self.L}")
        if self._delta is not None:
            if self._delta < 0 or abs(1.0 + self._delta - self.A) > 4 * np.spacing(self.A):
                raise DomainError(f"delta = {self._delta} inconsistent with A = {self.A}")

    @classmethod
    def from_delta(cls, delta, L=1.0):
        if not delta >= 0:
            raise DomainError(f"delta must be >= 0, got {delta}")
        return cls(1.0 + delta, L, float(delta))

    @property
    def delta(self):
        return self._delta if self._delta is not None else self.A - 1.0

    @property
    def log_A(self):
        return math.log1p(self.delta)

    @property
    def is_cylinder(self):
        return self.delta == 0.0

    @property
    def beta(self):
        """1 / log A; undefined in the cylinder limit."""
        if self.is_cylinder:
            raise DomainError("beta is infinite in the cylinder limit A = 1")
        return 1.0 / self.log_A

    @property
    def W(self):
        """log A / L; the Poincare charts degenerate in the cylinder limit."""
        if self.is_cylinder:
            raise DomainError("W vanishes in the cylinder limit A = 1")
        return self.log_A / self.L


class Chart(enum.Enum):
    TY = "ty"
    POINCARE = "poincare"
    NULL = "null"
    COMPACT = "compact"
    ADAPTED = "adapted"


@dataclass(frozen=True)
class SpacetimePoint:
    """An event given by two coordinates in a tagged chart."""

    chart: Chart
    c1: float
    c2: float

    def __post_init__(self):
        object.__setattr__(self, "c1", float(self.c1))
        object.__setattr__(self, "c2", float(self.c2))
        c1, c2 = self.c1, self.c2
        if not (math.isfinite(c1) and math.isfinite(c2)):
            raise DomainError(f"non-finite coordinates ({c1}, {c2})")
        if self.chart is Chart.POINCARE and not c2 > 0:
            raise DomainError(f"POINCARE chart requires xi > 0, got xi = {c2}")
        if self.chart is Chart.NULL and not c1 + c2 > 0:
            raise DomainError(f"NULL chart requires zeta_+ + zeta_- > 0, got {c1 + c2}")
        if self.chart is Chart.COMPACT and not 0 < c2 < math.pi:
            raise DomainError(f"COMPACT chart requires 0 < rho < pi, got rho = {c2}")
        if self.chart is Chart.ADAPTED and not abs(c1) < math.pi / 2:
            raise DomainError(f"ADAPTED chart requires |sigma| < pi/2, got sigma = {c1}")

    @classmethod
    def ty(cls, t, y):
        return cls(Chart.TY, float(t), float(y))

    @classmethod
    def null(cls, zp, zm):
        return cls(Chart.NULL, float(zp), float(zm))

    @classmethod
    def poincare(cls, eta, xi):
        return cls(Chart.POINCARE, float(eta), float(xi))

    @property
    def coords(self):
        return (self.c1, self.c2)


def to_null(p, cfg):
    """(zeta_+, zeta_-) of an event in any chart."""
    c1, c2 = p.c1, p.c2
    if p.chart is Chart.NULL:
        return c1, c2
    if p.chart is Chart.POINCARE:
        return c2 + c1, c2 - c1
    W = cfg.W
    if p.chart is Chart.TY:
        xi = math.exp(W * c2) / W
        return xi + c1, xi - c1
    if p.chart is Chart.COMPACT:
        tau, rho = c1, c2
        u = 0.5 * (math.pi / 2 - rho + tau)
        v = 0.5 * (3 * math.pi / 2 - rho - tau)
        if not (abs(u) < math.pi / 2 and abs(v) < math.pi / 2):
            raise DomainError(
                f"COMPACT point (tau, rho) = ({tau}, {rho}) violates rho > |tau - pi/2|"
            )
        return math.tan(u) / (2 * W), math.tan(v) / (2 * W)
    if p.chart is Chart.ADAPTED:
        sigma, chi = c1, c2
        pref = math.exp(chi) / (W * math.cos(sigma))
        s = math.sin(sigma)
        return pref * (1 + s), pref * (1 - s)
    raise ValueError(f"unknown chart {p.chart}")


def _from_null(zp, zm, target, cfg):
    if target is Chart.NULL:
        return zp, zm
    eta, xi = 0.5 * (zp - zm), 0.5 * (zp + zm)
    if target is Chart.POINCARE:
        return eta, xi
    W = cfg.W
    if target is Chart.TY:
        return eta, math.log(W * xi) / W
    if target is Chart.COMPACT:
        u, v = math.atan(2 * W * zp), math.atan(2 * W * zm)
        return math.pi / 2 + (u - v), math.pi - (u + v)
    if target is Chart.ADAPTED:
        if not (zp > 0 and zm > 0):
            raise DomainError(
                f"ADAPTED chart requires the diamond zeta_+ > 0 and zeta_- > 0, got ({zp}, {zm})"
            )
        # sin(sigma) = eta/xi; the ratio form keeps accuracy near the edges
        sigma = math.atan2(zp - zm, 2.0 * math.sqrt(zp * zm))
        chi = 0.5 * math.log(W * W * zp * zm)
        return sigma, chi
    raise ValueError(f"unknown chart {target}")


def chart_transform(p, target, cfg):
    """Express the event ``p`` in the ``target`` chart.

    Raises
    ------
    DomainError
        If the event lies outside the target chart.
    """
    if p.chart is target:
        return p
    zp, zm = to_null(p, cfg)
    c1, c2 = _from_null(zp, zm, target, cfg)
    return SpacetimePoint(target, c1, c2)


def is_ctc_region(p, cfg):
    """True beyond the Cauchy horizons, where the identified orbits are CTCs."""
    if p.chart is Chart.TY:
        W = cfg.W
        return p.c1 * p.c1 > math.exp(2 * W * p.c2) / (W * W)
    zp, zm = to_null(p, cfg)
    return zp * zm < 0


def curvature_scalar(profile, x, h=None):
    """Ricci scalar R = -2 alpha''/alpha by a central second difference.

    The ratios alpha(x +- h)/alpha(x) are formed from short-interval
    integrals of ``a`` so that the stencil does not lose digits to the
    absolute size of alpha.
    """
    if h is None:
        h = max(1e-5, 1e-5 * abs(x))
    profile.alpha(x)
    rp = profile.alpha_ratio_m1(x, h)
    rm = profile.alpha_ratio_m1(x, -h)
    R = -2.0 * (rp + rm) / (h * h)
    if not math.isfinite(R):
        raise DegenerateProfileError(f"curvature is not finite at x = {x}")
    return R


def circulation(profile, n=1, orientation=DEFAULT_ORIENTATION):
    """Holonomy integral of the acceleration around a loop winding n times."""
    if orientation not in (-1, 1):
        raise ValueError(f"orientation must be +1 or -1, got {orientation}")
    return orientation * n * profile.period_integral


@dataclass(frozen=True)
class ConformalMap:
    """The map y -> x(y) to the canonical time machine and its conformal factor.

    The dense solution covers y in [0, L]; other y are reached with
    x(y + L) = x(y) + Q.
    """

    W: float
    L: float
    Q: float
    _sol: object = field(repr=False)
    closure_error: float = 0.0

    def _reduce(self, y):
        y = np.asarray(y, dtype=float)
        k = np.floor(y / self.L)
        return y - k * self.L, k

    def x_of_y(self, y):
        r, k = self._reduce(y)
        out = self._sol(r)[0] + k * self.Q
        return out if out.ndim else float(out)

    def omega(self, y):
        """Omega(y) = exp(W y) alpha(x(y)), periodic with period L."""
        r, _ = self._reduce(y)
        out = np.exp(self.W * r - self._sol(r)[1])
        return out if out.ndim else float(out)


def canonicalize(profile):
    """Conformal map of a profile to its canonical time machine.

    Returns
    -------
    cfg : WarpConfig
        With L = (log A / (A - 1)) int_0^Q dx / alpha.
    cmap : ConformalMap
        Solution of dx/dy = exp(W y) alpha(x), x(0) = 0.
    """
    A = profile.A

    def inv_alpha(x):
        return math.exp(-profile.log_alpha(x))

    J, err = integrate.quad(inv_alpha, 0.0, profile.Q, epsabs=0.0, epsrel=1e-13, limit=200)
    if not math.isfinite(J) or err > 1e-10 * abs(J):
        raise ConvergenceError("quadrature of 1/alpha did not converge", {"value": J, "error": err})
    delta = A - 1.0
    pref = 1.0 if delta == 0.0 else math.log1p(delta) / delta
    L = pref * J
    cfg = WarpConfig(A, L)
    W = 0.0 if cfg.is_cylinder else cfg.W

    # state (x, I) with I = int_0^x a so alpha = exp(-I)
    def rhs(y, s):
        dx = math.exp(W * y - s[1])
        return [dx, profile.a(s[0]) * dx]

    sol = integrate.solve_ivp(
        rhs, (0.0, L), [0.0, 0.0], method="RK45", rtol=1e-10, atol=1e-12, dense_output=True
    )
    if sol.status != 0:
        raise ConvergenceError(
            f"conformal map ODE failed: {sol.message}", {"nfev": sol.nfev, "t_last": sol.t[-1]}
        )
    closure = abs(sol.y[0, -1] - profile.Q)
    if closure > 1e-7 * profile.Q:
        raise ConvergenceError(
            "conformal map does not close onto one period", {"x(L)": sol.y[0, -1], "Q": profile.Q}
        )
    return cfg, ConformalMap(W, L, profile.Q, sol.sol, closure)


@dataclass(frozen=True)
class KillingResiduals:
    """Max residuals of the three Killing-observer identities."""

    normalization: float
    gradient: float
    curl: float

    @property
    def max(self):
        return max(self.normalization, self.gradient, self.curl)


def killing_residuals(profile, x, h=1e-4):
    """Finite-difference residuals of the static-observer identities.

    With g = diag(-alpha^2, 1), u^mu = (1/alpha, 0) and a_mu = (0, -a):
    u.u = -1, grad_nu u_mu = -a_mu u_nu and d_[mu a_nu] = 0. The only
    Christoffel symbols are Gamma^t_tx = alpha'/alpha and Gamma^x_tt =
    alpha alpha', both formed by central differences with step h.
    """
    al = profile.alpha(x)
    # d(log alpha)/dx
    dlog = (profile.alpha_ratio_m1(x, h) - profile.alpha_ratio_m1(x, -h)) / (2 * h)
    g_tt, g_xx = -al * al, 1.0
    u_up = np.array([1.0 / al, 0.0])
    u_dn = np.array([g_tt * u_up[0], g_xx * u_up[1]])
    a_dn = np.array([0.0, -profile.a(x)])
    norm = abs(g_tt * u_up[0] ** 2 + g_xx * u_up[1] ** 2 + 1.0)

    gam = np.zeros((2, 2, 2))  # gam[l, m, n] = Gamma^l_mn
    gam[0, 0, 1] = gam[0, 1, 0] = dlog
    gam[1, 0, 0] = al * al * dlog
    # static field: only d_x of u_t = -alpha survives
    du = np.zeros((2, 2))  # du[nu, mu] = d_nu u_mu
    du[1, 0] = -al * dlog
    cov = du - np.einsum("lnm,l->nm", gam, u_dn)
    grad = np.abs(cov + np.outer(u_dn, a_dn)).max()

    def a_field(t, xx):
        return np.array([0.0, -profile.a(xx)])

    d_t_ax = (a_field(h, x)[1] - a_field(-h, x)[1]) / (2 * h)
    d_x_at = (a_field(0.0, x + h)[0] - a_field(0.0, x - h)[0]) / (2 * h)
    curl = abs(d_t_ax - d_x_at)
    return KillingResiduals(float(norm), float(grad), float(curl))
