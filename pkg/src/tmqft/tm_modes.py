r"""Automorphic mode functions on the canonical time machine.

The covering space is the Poincare patch with Dirichlet data at xi = 0. The
identification acts as the dilation zeta_pm -> A zeta_pm, and the
normalized automorphic modes are, with s_pm = sign(zeta_pm),

.. math::

    \bar u_0 = -\sqrt{\beta/4\pi}\,\left[\ln|\zeta_+/\zeta_-|
               + \tfrac{i\pi}{2}(s_+ + s_-)\right],

    \bar u_n = N_n\left(e^{-\pi^2\beta n s_+}|W\zeta_+|^{2\pi i\beta n}
               - e^{\pi^2\beta n s_-}|W\zeta_-|^{2\pi i\beta n}\right),
    \qquad N_n = [8\pi n\sinh(2\pi^2\beta n)]^{-1/2}.

N_n is formed in log space; at delta = 0.01 the sinh alone overflows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, HorizonError
from .geometry import Chart, SpacetimePoint, WarpConfig, chart_transform, to_null
from .series import SeriesControl
from .special_functions import log_abs_sinh

__all__ = [
    "AutomorphicMode",
    "CoveringMode",
    "covering_mode",
    "mode_eval",
    "kg_inner_product",
    "gram_matrix",
    "automorphy_residual",
    "kg_residual",
]


def _check_horizon(zp, zm):
    if np.any(np.asarray(zp) == 0) or np.any(np.asarray(zm) == 0):
        raise HorizonError("mode functions are not evaluated on the horizons zeta_pm = 0")


@dataclass(frozen=True)
class AutomorphicMode:
    """Normalized automorphic mode with ladder index n on the time machine."""

    n: int
    cfg: WarpConfig

    def __post_init__(self):
        if int(self.n) != self.n:
            raise DomainError(f"mode index must be an integer, got {self.n}")
        self.cfg.beta  # rejects the cylinder limit

    @property
    def kappa(self):
        """Mellin exponent 2 pi beta n."""
        return 2 * math.pi * self.cfg.beta * self.n

    def _parts(self, zp, zm):
        beta, n = self.cfg.beta, self.n
        sp, sm = np.sign(zp), np.sign(zm)
        an = abs(n)
        log_norm = -0.5 * (math.log(8 * math.pi * an) + log_abs_sinh(2 * math.pi**2 * beta * an))
        W = self.cfg.W
        k = self.kappa
        ep = np.exp(log_norm - math.pi**2 * beta * n * sp + 1j * k * np.log(np.abs(W * zp)))
        em = np.exp(log_norm + math.pi**2 * beta * n * sm + 1j * k * np.log(np.abs(W * zm)))
        return ep, em

    def __call__(self, zp, zm):
        """Vectorized evaluation at null coordinates."""
        zp = np.asarray(zp, dtype=float)
        zm = np.asarray(zm, dtype=float)
        _check_horizon(zp, zm)
        if self.n == 0:
            pref = -math.sqrt(self.cfg.beta / (4 * math.pi))
            out = pref * (
                np.log(np.abs(zp) / np.abs(zm)) + 0.5j * math.pi * (np.sign(zp) + np.sign(zm))
            )
        else:
            ep, em = self._parts(zp, zm)
            out = ep - em
        return out if out.ndim else complex(out)

    def d_eta(self, zp, zm):
        """Analytic eta derivative, with d zeta_pm / d eta = +-1."""
        zp = np.asarray(zp, dtype=float)
        zm = np.asarray(zm, dtype=float)
        _check_horizon(zp, zm)
        if self.n == 0:
            out = -math.sqrt(self.cfg.beta / (4 * math.pi)) * (1 / zp + 1 / zm) + 0j
        else:
            ep, em = self._parts(zp, zm)
            ik = 1j * self.kappa
            out = ep * ik / zp + em * ik / zm
        return out if out.ndim else complex(out)


@dataclass(frozen=True)
class CoveringMode:
    """Positive-frequency Dirichlet mode of the Poincare patch."""

    omega: float

    def __post_init__(self):
        if not self.omega > 0:
            raise DomainError(f"covering-mode frequency must be positive, got {self.omega}")

    def __call__(self, zp, zm):
        w = self.omega
        out = (np.exp(-1j * w * np.asarray(zp)) - np.exp(1j * w * np.asarray(zm))) / math.sqrt(
            4 * math.pi * w
        )
        return out if np.ndim(out) else complex(out)

    def d_eta(self, zp, zm):
        w = self.omega
        out = (
            -1j * w * np.exp(-1j * w * np.asarray(zp)) + 1j * w * np.exp(1j * w * np.asarray(zm))
        ) / math.sqrt(4 * math.pi * w)
        return out if np.ndim(out) else complex(out)


def covering_mode(omega, p, cfg=None):
    """(exp(-i omega zeta_+) - exp(i omega zeta_-)) / sqrt(4 pi omega)."""
    zp, zm = to_null(p, cfg) if isinstance(p, SpacetimePoint) else p
    return CoveringMode(omega)(zp, zm)


def mode_eval(m, p):
    """Value of an automorphic mode at an event."""
    zp, zm = to_null(p, m.cfg) if isinstance(p, SpacetimePoint) else p
    return m(zp, zm)


def _fd_d_eta(f, zp, zm, h):
    return (f(zp + h, zm - h) - f(zp - h, zm + h)) / (2 * h)


def kg_inner_product(f, g, cfg, ctl=SeriesControl(), derivative="analytic", rtol=None,
                     report=None):
    r"""Klein-Gordon product on the eta = 0 slice of one fundamental domain.

    .. math::

        (f, g) = -i\int_{1/W}^{A/W} d\xi\,(f\,\partial_\eta g^* - g^*\partial_\eta f)

    Integrated in s = log(W xi) with Gauss-Legendre nodes, doubled from 32
    until successive values agree to ``rtol`` or ``ctl.n_max`` nodes is
    exceeded.

    Parameters
    ----------
    f, g : callables of (zeta_+, zeta_-)
        Mode evaluators; ``derivative="analytic"`` uses their ``d_eta``,
        ``"fd"`` uses central differences with step 1e-6 xi.
    rtol : float, optional
        Agreement required between node doublings; defaults to 1e-12 for
        analytic derivatives and 1e-8 for finite differences, whose
        roundoff floor is about 1e-10.
    """
    W, logA = cfg.W, cfg.log_A
    if rtol is None:
        rtol = 1e-12 if derivative == "analytic" else 1e-8

    def d_eta(h, z):
        if derivative == "analytic":
            return h.d_eta(z, z)
        if derivative == "fd":
            return _fd_d_eta(h, z, z, 1e-6 * z)
        raise ValueError(f"derivative must be 'analytic' or 'fd', got {derivative!r}")

    def quad(nodes):
        x, w = np.polynomial.legendre.leggauss(nodes)
        s = 0.5 * logA * (x + 1)
        xi = np.exp(s) / W
        fv, gv = f(xi, xi), g(xi, xi)
        integrand = fv * np.conj(d_eta(g, xi)) - np.conj(gv) * d_eta(f, xi)
        return -1j * 0.5 * logA * np.sum(w * integrand * xi)

    nodes = 32
    prev = quad(nodes)
    history = [(nodes, prev)]
    while True:
        nodes *= 2
        cur = quad(nodes)
        history.append((nodes, cur))
        diff = abs(cur - prev)
        if diff <= rtol * max(1.0, abs(cur)):
            break
        if nodes * 2 > max(ctl.n_max, 64):
            raise ConvergenceError(
                "inner-product quadrature did not converge",
                {"nodes": [n for n, _ in history], "values": [complex(v) for _, v in history]},
            )
        prev = cur
    if report is not None:
        report.terms = nodes
        report.tail_bound = float(diff)
        report.converged = True
    return complex(cur)


def gram_matrix(indices, cfg, ctl=SeriesControl(), derivative="analytic"):
    """Matrix of KG products (u_m, u_n) over the given mode indices."""
    modes = [AutomorphicMode(n, cfg) for n in indices]
    G = np.empty((len(modes), len(modes)), dtype=complex)
    for i, um in enumerate(modes):
        for j, un in enumerate(modes):
            G[i, j] = kg_inner_product(um, un, cfg, ctl, derivative)
    return G


def automorphy_residual(m, p, power=1):
    """|u(A^k zeta_+, A^k zeta_-) - u(zeta_+, zeta_-)| for k = ``power``."""
    zp, zm = to_null(p, m.cfg) if isinstance(p, SpacetimePoint) else p
    scale = m.cfg.A ** power
    return abs(m(scale * zp, scale * zm) - m(zp, zm))


def kg_residual(m, p, h, cfg=None):
    r"""Finite-difference estimate of |d_+ d_- u| at an event.

    The wave operator is applied in the (t, y) chart,

    .. math::

        \Box u = -e^{2Wy}\partial_t^2 u + \partial_y^2 u - W\partial_y u
               = 4W^2\xi^2\,\partial_+\partial_- u,

    with central differences of step h. A null-coordinate mixed stencil is
    exact for every F(zeta_+) + G(zeta_-) and would hide the step
    dependence.
    """
    cfg = cfg if cfg is not None else m.cfg
    W = cfg.W
    q = p if isinstance(p, SpacetimePoint) else SpacetimePoint(Chart.NULL, *p)
    t, y = chart_transform(q, Chart.TY, cfg).coords

    def u(tt, yy):
        xi = math.exp(W * yy) / W
        return m(xi + tt, xi - tt)

    u0 = u(t, y)
    utt = (u(t + h, y) - 2 * u0 + u(t - h, y)) / (h * h)
    uyy = (u(t, y + h) - 2 * u0 + u(t, y - h)) / (h * h)
    uy = (u(t, y + h) - u(t, y - h)) / (2 * h)
    box = -math.exp(2 * W * y) * utt + uyy - W * uy
    xi = math.exp(W * y) / W
    return abs(box) / (4 * W * W * xi * xi)
