r"""Renormalized stress-energy tensor on the canonical time machine.

Inside the diamond the null components are

.. math::

    \langle T_{\pm\pm}\rangle = -\frac{F(\beta)}{\zeta_\pm^2}, \qquad
    \langle T_{+-}\rangle = \frac{1}{6\pi(\zeta_+ + \zeta_-)^2},

    F(\beta) = \frac{1}{48\pi} - \frac{\beta}{4\pi} + \frac{\pi\beta^2}{12}
             - 2\pi\beta^2\sum_{n\ge1}\frac{n e^{-4\pi^2\beta n}}{1 - e^{-4\pi^2\beta n}}.

On the Einstein cylinder the oscillators give the Casimir value
-pi/(12 L^2) and a Gaussian zero-mode state adds <P^2>/(4 L^2).
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

from .correlators import weak_warp_null
from .errors import DomainError, HorizonError
from .geometry import Chart, SpacetimePoint, to_null
from .series import SeriesControl, SeriesReport

__all__ = [
    "RsetChart",
    "RsetComponents",
    "f_beta",
    "f_beta_asymptote",
    "f_beta_series",
    "rset_zeta",
    "rset_cylinder_chart",
    "cylinder_rset",
]

# below this beta the sum converges slowly and n_max is raised as needed
SLOW_BETA = 0.05


class RsetChart(enum.Enum):
    ZETA = "zeta"
    Z = "z"


@dataclass(frozen=True)
class RsetComponents:
    """Null components of <T_ab>; T_pm stands for both T_+- and T_-+."""

    T_pp: float
    T_mm: float
    T_pm: float
    chart: RsetChart

    def as_dict(self):
        return {"T_pp": self.T_pp, "T_mm": self.T_mm, "T_pm": self.T_pm, "chart": self.chart.value}


def _sum_n_over_expm1(c, ctl, report):
    """sum_{n>=1} n / (exp(c n) - 1) with a geometric-derivative tail bound."""
    r = math.exp(-c)
    k = 1.0 / (1.0 - r)  # 1/(1 - e^{-cn}) <= 1/(1 - r) for n >= 1

    def tail(N):
        # k * sum_{n>N} n r^n
        return k * r ** (N + 1) * ((N + 1) - N * r) / (1.0 - r) ** 2

    n_cap = ctl.n_max
    N = 0
    while tail(N) > ctl.tail_tol:
        N += 1
        if N > n_cap:
            if c / (4 * math.pi**2) < SLOW_BETA:
                n_cap *= 2
                report.notes.append(f"slow convergence: n_max raised to {n_cap}")
            else:
                report.converged = False
                report.notes.append(f"tail bound {tail(N - 1):.3g} exceeds tail_tol at n_max")
                N -= 1
                break
    s = 0.0
    for n in range(N, 0, -1):  # smallest terms first
        s += n * math.exp(-c * n) / -math.expm1(-c * n)
    report.terms = N
    report.tail_bound = tail(N)
    return s


def f_beta(beta, ctl=SeriesControl(), report=None):
    """Warp coefficient F(beta) of the null-null RSET components.

    For small beta the closed terms cancel against the sum, so the result
    has absolute (not relative) accuracy of a few 1e-17.
    """
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    rep = report if report is not None else SeriesReport()
    if beta < SLOW_BETA:
        rep.notes.append(f"beta = {beta} < {SLOW_BETA}: strong-warp regime, slow series")
    s = _sum_n_over_expm1(4 * math.pi**2 * beta, ctl, rep)
    b2 = beta * beta
    return 1 / (48 * math.pi) - beta / (4 * math.pi) + math.pi * b2 / 12 - 2 * math.pi * b2 * s


def _check_small_delta(delta):
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    if delta > 0.1:
        warnings.warn(f"small-delta expansion used at delta = {delta} > 0.1", stacklevel=3)


def f_beta_asymptote(delta):
    """Two-term form pi/(12 delta^2) - 1/(4 pi delta)."""
    _check_small_delta(delta)
    return math.pi / (12 * delta**2) - 1 / (4 * math.pi * delta)


def f_beta_series(delta, order=2):
    r"""Consistent small-delta expansion of F(beta(delta)).

    With :math:`\beta^2 = \delta^{-2}(1 + \delta + \delta^2/12 + O(\delta^3))`,

    .. math::

        F = \frac{\pi}{12\delta^2} + \left(\frac{\pi}{12} - \frac{1}{4\pi}\right)\frac{1}{\delta}
            + \frac{\pi}{144} - \frac{1}{8\pi} + \frac{1}{48\pi} + O(\delta).

    ``order`` = 0, 1, 2 keeps the terms through delta^-2, delta^-1, delta^0.
    """
    _check_small_delta(delta)
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order}")
    terms = [
        math.pi / (12 * delta**2),
        (math.pi / 12 - 1 / (4 * math.pi)) / delta,
        math.pi / 144 - 1 / (8 * math.pi) + 1 / (48 * math.pi),
    ]
    return sum(terms[: order + 1])


def rset_zeta(p, cfg, ctl=SeriesControl()):
    """RSET components in the null coordinates zeta_pm of the diamond."""
    zp, zm = to_null(p, cfg) if isinstance(p, SpacetimePoint) else map(float, p)
    if zp == 0 or zm == 0:
        raise HorizonError("the RSET diverges on the Cauchy horizons zeta_pm = 0")
    if not (zp > 0 and zm > 0):
        raise DomainError(f"RSET is given inside the diamond only, got ({zp}, {zm})")
    F = f_beta(cfg.beta, ctl)
    return RsetComponents(-F / zp**2, -F / zm**2, 1 / (6 * math.pi * (zp + zm) ** 2), RsetChart.ZETA)


def rset_cylinder_chart(p, cfg, ctl=SeriesControl()):
    """RSET in the cylinder null coordinates z_pm = y +- t.

    Uses zeta_pm = 1/W + z_pm, whose Jacobian d zeta_pm / d z_pm is 1, so
    the components carry over unchanged to the point (t, y).
    """
    if cfg.delta > 0.1:
        warnings.warn(f"weak-warp map used at delta = {cfg.delta} > 0.1", stacklevel=2)
    t, y = (p.c1, p.c2) if isinstance(p, SpacetimePoint) else p
    if isinstance(p, SpacetimePoint) and p.chart is not Chart.TY:
        raise DomainError(f"rset_cylinder_chart takes a TY point, got {p.chart}")
    zp, zm = weak_warp_null(t, y, cfg)
    jp = jm = 1.0
    T = rset_zeta((zp, zm), cfg, ctl)
    return RsetComponents(T.T_pp * jp * jp, T.T_mm * jm * jm, T.T_pm * jp * jm, RsetChart.Z)


def cylinder_rset(state, cfg):
    """Einstein-cylinder RSET: Casimir term plus the zero-mode <P^2>/(4 L^2)."""
    L2 = cfg.L * cfg.L
    T = state.p2 / (4 * L2) - math.pi / (12 * L2)
    return RsetComponents(T, T, 0.0, RsetChart.Z)
