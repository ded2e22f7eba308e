r"""Boundary conditions at the conformal boundary xi = 0 of the Poincare patch.

A Fourier mode :math:`\phi = e^{-i\omega\eta}\Phi_\omega(\xi)` of a field with
effective mass m solves

.. math::

    \xi^2\Phi'' + (\omega^2\xi^2 - m^2/W^2)\Phi = 0,

with fundamental solutions :math:`\Phi^\pm = \sqrt{W\xi}\,J_{\pm\nu}(\omega\xi)`,
:math:`\nu = \tfrac12\sqrt{1 + 4m^2/W^2}`. The Robin family is
:math:`\cos\lambda\,\Phi + W^{-1}\sin\lambda\,\Phi' = 0`, lambda in [-pi/2, 0].
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .special_functions import bessel_j

__all__ = [
    "BoundaryProblem",
    "BCClass",
    "Classification",
    "nu_index",
    "mode_solution",
    "ode_residual",
    "robin_residual",
    "expected_exponent",
    "fit_exponent",
    "classify_bc",
]

BF_BOUND = -0.25


@dataclass(frozen=True)
class BoundaryProblem:
    """Mode problem near xi = 0.

    Parameters
    ----------
    m2_over_W2 : float
        Effective mass ratio m^2/W^2, curvature coupling included.
    lam : float
        Robin angle in [-pi/2, 0]; 0 is Dirichlet, -pi/2 Neumann.
    omega : float
        Mode frequency.
    W : float
        Inverse AdS length setting the units of xi.
    """

    m2_over_W2: float
    lam: float = 0.0
    omega: float = 1.0
    W: float = 1.0

    def __post_init__(self):
        if self.m2_over_W2 < BF_BOUND:
            raise DomainError(
                f"m^2/W^2 = {self.m2_over_W2} violates the Breitenlohner-Freedman bound -1/4"
            )
        if not -math.pi / 2 <= self.lam <= 0:
            raise DomainError(f"Robin angle must lie in [-pi/2, 0], got {self.lam}")
        if not self.omega > 0:
            raise DomainError(f"omega must be positive, got {self.omega}")
        if not self.W > 0:
            raise DomainError(f"W must be positive, got {self.W}")

    @property
    def nu(self):
        return nu_index(self.m2_over_W2)


def nu_index(m2_over_W2):
    """Bessel index nu = sqrt(1 + 4 m^2/W^2) / 2."""
    if m2_over_W2 < BF_BOUND:
        raise DomainError(f"m^2/W^2 = {m2_over_W2} is below the Breitenlohner-Freedman bound")
    return 0.5 * math.sqrt(1.0 + 4.0 * m2_over_W2)


def mode_solution(sign, bp, xi):
    """Fundamental solution sqrt(W xi) J_{sign nu}(omega xi)."""
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    if xi <= 0:
        raise DomainError(f"xi must be positive, got {xi}")
    nu = bp.nu
    if sign < 0 and float(nu).is_integer():
        raise DomainError(
            f"integer nu = {nu}: the second solution is Bessel Y, which is not implemented"
        )
    return math.sqrt(bp.W * xi) * bessel_j(sign * nu, bp.omega * xi)


def _phi(bp, c_plus, c_minus, xi):
    out = 0.0
    if c_plus:
        out += c_plus * mode_solution(1, bp, xi)
    if c_minus:
        out += c_minus * mode_solution(-1, bp, xi)
    return out


def ode_residual(bp, c_plus, c_minus, xi, h=2e-3):
    """xi^2 Phi'' + (omega^2 xi^2 - m^2/W^2) Phi by a fourth-order stencil.

    The default step balances O(h^4) truncation against roundoff in the
    Bessel series, which the stencil amplifies by 1/h^2.
    """
    if xi - 2 * h <= 0:
        raise DomainError(f"stencil leaves xi > 0: xi = {xi}, h = {h}")
    f = [_phi(bp, c_plus, c_minus, xi + k * h) for k in (-2, -1, 0, 1, 2)]
    d2 = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h)
    return xi * xi * d2 + ((bp.omega * xi) ** 2 - bp.m2_over_W2) * f[2]


def robin_residual(bp, c_plus, c_minus, xi):
    """BC(xi) = cos(lam) Phi + sin(lam) Phi'/W with a central difference of step 1e-3 xi."""
    h = 1e-3 * xi
    dphi = (_phi(bp, c_plus, c_minus, xi + h) - _phi(bp, c_plus, c_minus, xi - h)) / (2 * h)
    return math.cos(bp.lam) * _phi(bp, c_plus, c_minus, xi) + math.sin(bp.lam) * dphi / bp.W


def expected_exponent(nu, lam, sign):
    """Leading power of xi in the Robin residual of one fundamental solution.

    Phi^pm ~ xi^p (1 + O(xi^2)) with p = 1/2 +- nu, so the residual goes like
    xi^(p-1) when sin(lam) p != 0 and like xi^p otherwise. When both terms
    vanish (p = 0 with Neumann data) the next order gives xi^(p+1).
    """
    p = 0.5 + sign * nu
    has_sin = math.sin(lam) != 0.0
    has_cos = abs(math.cos(lam)) > 1e-15
    if has_sin and p != 0.0:
        return p - 1.0
    if has_cos:
        return p
    return p + 1.0


def fit_exponent(bp, c_plus, c_minus, window=(1e-6, 1e-3), n=13):
    """Log-log slope of |BC(xi)| over a window of small xi."""
    xs = np.geomspace(window[0], window[1], n)
    ys = np.array([abs(robin_residual(bp, c_plus, c_minus, x)) for x in xs])
    slope, _ = np.polyfit(np.log(xs), np.log(ys), 1)
    return float(slope)


class BCClass(enum.Enum):
    DIRICHLET_ONLY_POSITIVE = "dirichlet_only_positive"
    DIRICHLET_ONLY_NEGATIVE = "dirichlet_only_negative"
    ALL_ROBIN = "all_robin"


@dataclass(frozen=True)
class Classification:
    kind: BCClass
    nu: float
    note: str = ""

    def residual_bounded(self, lam, c_plus, c_minus):
        """Whether BC(xi) stays bounded as xi -> 0 for this Robin angle and mix."""
        exps = [expected_exponent(self.nu, lam, s) for s, c in ((1, c_plus), (-1, c_minus)) if c]
        return bool(exps) and min(exps) >= 0.0


def classify_bc(m2_over_W2):
    """Which Robin conditions leave the modes regular at the boundary."""
    nu = nu_index(m2_over_W2)
    if m2_over_W2 == 0.0:
        return Classification(BCClass.ALL_ROBIN, nu)
    if m2_over_W2 > 0:
        return Classification(BCClass.DIRICHLET_ONLY_POSITIVE, nu)
    if m2_over_W2 == BF_BOUND:
        return Classification(
            BCClass.DIRICHLET_ONLY_NEGATIVE, nu, "bound saturated: nu = 0, J_nu and J_-nu coincide"
        )
    return Classification(BCClass.DIRICHLET_ONLY_NEGATIVE, nu)
