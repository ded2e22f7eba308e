r"""Massless scalar on the Einstein cylinder, oscillators plus zero mode.

Null coordinates on the cylinder are :math:`z_\pm = y \pm t`, matching
:math:`\zeta_\pm = \xi \pm \eta` on the time machine in the weak-warp limit.
For a pair of points with :math:`\Delta z_\pm = z_\pm - z'_\pm` the oscillator
Wightman function is

.. math::

    W_{osc} = -\frac{1}{4\pi}\left[\log(1 - e^{2\pi i\Delta z_-/L})
              + \log(1 - e^{-2\pi i\Delta z_+/L})\right]

with principal logarithms, and :math:`C^\pm = W(x,x') \pm W(x',x)`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, SingularStateError
from .geometry import Chart, SpacetimePoint
from .series import SeriesControl

__all__ = [
    "CylinderConfig",
    "ZeroModeState",
    "Status",
    "CorrelatorValue",
    "CorrelatorTriple",
    "osc_mode",
    "osc_correlators",
    "zm_correlators",
    "cylinder_correlators",
    "minkowski_pj",
    "image_sum_pj",
]

# null separations closer than this (in units of L) to the lattice are flagged
LATTICE_TOL = 1e-14


@dataclass(frozen=True)
class CylinderConfig:
    L: float = 1.0

    def __post_init__(self):
        if not self.L > 0:
            raise DomainError(f"circumference must be positive, got L = {self.L}")

    def k(self, n):
        return 2 * math.pi * n / self.L


@dataclass(frozen=True)
class ZeroModeState:
    """Gaussian zero-mode state with <Q^2> = 1/(2 gamma), <P^2> = gamma/2."""

    gamma: float

    def __post_init__(self):
        if not self.gamma >= 0:
            raise DomainError(f"gamma must be >= 0, got {self.gamma}")

    @property
    def is_singular(self):
        return self.gamma == 0.0

    @property
    def q2(self):
        if self.is_singular:
            raise SingularStateError("gamma = 0 is a momentum eigenstate; <Q^2> diverges")
        return 1.0 / (2.0 * self.gamma)

    @property
    def p2(self):
        return 0.5 * self.gamma


class Status(enum.Enum):
    OK = "ok"
    COINCIDENT = "coincident"
    LIGHTCONE = "lightcone"


@dataclass(frozen=True)
class CorrelatorValue:
    """A correlator value with a flag for the singular support.

    When ``status`` is not OK the ``value`` is nan and must not be used.
    """

    value: complex
    status: Status = Status.OK

    @property
    def ok(self):
        return self.status is Status.OK

    @classmethod
    def singular(cls, status):
        return cls(complex(math.nan, math.nan), status)


@dataclass(frozen=True)
class CorrelatorTriple:
    """Hadamard C+, Pauli-Jordan C- and Wightman W for one pair of points."""

    c_plus: CorrelatorValue
    c_minus: CorrelatorValue
    wightman: CorrelatorValue

    @property
    def status(self):
        return self.wightman.status


def _triple(cp, cm, status=Status.OK):
    if status is not Status.OK:
        bad = CorrelatorValue.singular(status)
        return CorrelatorTriple(bad, bad, bad)
    return CorrelatorTriple(
        CorrelatorValue(complex(cp)), CorrelatorValue(complex(cm)), CorrelatorValue(complex(0.5 * (cp + cm)))
    )


def _ty(p):
    if not isinstance(p, SpacetimePoint):
        t, y = p
        return float(t), float(y)
    if p.chart is not Chart.TY:
        raise DomainError(f"cylinder correlators take TY points, got {p.chart}")
    return p.c1, p.c2


def osc_mode(n, t, y, cfg):
    """Positive-frequency oscillator mode exp(-i|k|t + iky)/sqrt(4 pi |n|)."""
    if n == 0:
        raise DomainError("n = 0 is the zero mode, which has no Fock mode function")
    k = cfg.k(n)
    return complex(np.exp(-1j * abs(k) * t + 1j * k * y) / math.sqrt(4 * math.pi * abs(n)))


def _lattice_frac(dz, L):
    """dz / L reduced to [-1/2, 1/2] and whether it sits on the lattice.

    u - round(u) is exact, so dz and -dz reduce to exact negatives.
    """
    u = dz / L
    f = u - round(u)
    return f, abs(f) < LATTICE_TOL


def _pair_status(on_plus, on_minus, dzp=0.0, dzm=0.0, L=1.0):
    """COINCIDENT only when both null separations are the same multiple of L."""
    if on_plus and on_minus and round(dzp / L) == round(dzm / L):
        return Status.COINCIDENT
    if on_plus or on_minus:
        return Status.LIGHTCONE
    return Status.OK


def osc_correlators(x, xp, cfg):
    """Oscillator C+, C-, W between two TY points."""
    t, y = _ty(x)
    tp, yp = _ty(xp)
    dt, dy = t - tp, y - yp
    fp, on_p = _lattice_frac(dy + dt, cfg.L)
    fm, on_m = _lattice_frac(dy - dt, cfg.L)
    status = _pair_status(on_p, on_m, dy + dt, dy - dt, cfg.L)
    if status is not Status.OK:
        return _triple(0, 0, status)
    lm = np.log(-np.expm1(2j * math.pi * fm))
    lp = np.log(-np.expm1(-2j * math.pi * fp))
    w = -(lm + lp) / (4 * math.pi)
    cp, cm = 2 * float(w.real), 2j * float(w.imag)
    return _triple(cp, cm)


def zm_correlators(t, tp, state, cfg):
    """Zero-mode C+ = 1/gamma + gamma t t'/L^2 and C- = -i (t - t')/L."""
    if state.is_singular:
        raise SingularStateError("gamma = 0 is not a normalizable zero-mode state")
    L = cfg.L
    cp = 1.0 / state.gamma + state.gamma * t * tp / (L * L)
    cm = -1j * (t - tp) / L
    return _triple(cp, cm)


def cylinder_correlators(x, xp, state, cfg):
    """Full cylinder correlators: oscillators plus the zero mode."""
    osc = osc_correlators(x, xp, cfg)
    if osc.status is not Status.OK:
        return osc
    zm = zm_correlators(_ty(x)[0], _ty(xp)[0], state, cfg)
    return _triple(
        osc.c_plus.value + zm.c_plus.value, osc.c_minus.value + zm.c_minus.value
    )


def minkowski_pj(dt, dy):
    """Massless Pauli-Jordan function of 1+1 Minkowski space."""
    return -0.25j * (np.sign(dt + dy) + np.sign(dt - dy))


def image_sum_pj(x, xp, cfg, ctl=SeriesControl(), report=None):
    """Cylinder C- as a sum of Minkowski C- over the images y' + nL.

    Outside the causal past and future of x the paired images n and -n
    cancel term by term, so the linear-in-N drift counterterm of the
    truncated sum vanishes identically for this kernel; it is kept as an
    explicit zero. Convergence is checked by comparing the partial sums at
    N and 2N.
    """
    t, y = _ty(x)
    tp, yp = _ty(xp)
    dt, dy = t - tp, y - yp
    L = cfg.L
    _, on_p = _lattice_frac(dy + dt, L)
    _, on_m = _lattice_frac(dy - dt, L)
    status = _pair_status(on_p, on_m, dy + dt, dy - dt, cfg.L)
    if status is not Status.OK:
        return CorrelatorValue.singular(status)

    def partial(N):
        n = np.arange(-N, N + 1)
        return complex(np.sum(minkowski_pj(dt, dy - n * L)))

    counterterm = 0.0
    N = int(math.ceil((abs(dt) + abs(dy)) / L)) + 1
    if N > ctl.n_max:
        raise ConvergenceError(
            "image sum needs more terms than n_max", {"needed": N, "n_max": ctl.n_max}
        )
    s1 = partial(N) - counterterm * N
    s2 = partial(2 * N) - counterterm * 2 * N
    diff = abs(s2 - s1)
    if report is not None:
        report.terms = 2 * (2 * N) + 1
        report.tail_bound = diff
        report.converged = diff <= ctl.tail_tol
    if diff > ctl.tail_tol:
        raise ConvergenceError(
            "image sum partial sums disagree", {"N": N, "S_N": s1, "S_2N": s2}
        )
    return CorrelatorValue(complex(0.0, s2.imag))
