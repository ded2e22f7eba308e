r"""Vacuum two-point functions of the canonical time machine.

Writing the mode sum :math:`W = \sum_n \bar u_n(x)\bar u_n^*(x')` and pairing
n with -n, every non-zero-mode block is a sum over n >= 1 of

.. math::

    \frac{\cosh(g x_n/2)}{2\pi n \sinh x_n}\cos(n\tau), \qquad
    i\,\frac{\sinh(g x_n/2)}{2\pi n \sinh x_n}\sin(n\tau),

for C+ and C- respectively, with :math:`x_n = 2\pi^2\beta n`,
:math:`g \in \{-2, 0, 2\}` fixed by the null-coordinate signs and
:math:`\tau = 2\pi\beta\ln|\zeta_a/\zeta'_b|`. The four (a, b) pairings are
C+_1 (same null direction) and C+_2 (crossed directions).

The coefficient of each block tends to a constant c_inf (1 for coth, 0 for
csch, sign(g) for the sinh ratio) plus an exponentially small remainder.
The constant part is summed exactly,

.. math::

    \sum_{n\ge1}\frac{\cos n\tau}{n} = -\log|2\sin(\tau/2)|, \qquad
    \sum_{n\ge1}\frac{\sin n\tau}{n} = \frac{\pi - (\tau \bmod 2\pi)}{2},

and the remainder is truncated with a geometric tail bound. Truncating the
constant part directly would converge only conditionally.

Closed forms inside the diamond use Jacobi theta functions with nome
:math:`q = e^{-2\pi^2\beta}`, evaluated in log space.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .cylinder_qft import (
    CorrelatorValue,
    CylinderConfig,
    Status,
    ZeroModeState,
    osc_correlators,
    zm_correlators,
)
from .errors import DomainError, HorizonError
from .geometry import SpacetimePoint, WarpConfig, to_null
from .series import SeriesControl, SeriesReport
from .special_functions import log_abs_sinh, log_abs_theta

__all__ = [
    "HadamardDecomposition",
    "PauliJordanDecomposition",
    "LimitDeviation",
    "hadamard_series",
    "hadamard_closed",
    "pj_series",
    "pj_closed",
    "wightman",
    "c0_asymptote",
    "gamma_of_delta",
    "weak_warp_null",
    "limit_deviation",
]

# a null ratio within this many turns of an image light cone is flagged
LIGHTCONE_TOL = 1e-13


def _null_pair(x, xp, cfg):
    zp, zm = to_null(x, cfg) if isinstance(x, SpacetimePoint) else map(float, x)
    zpp, zmp = to_null(xp, cfg) if isinstance(xp, SpacetimePoint) else map(float, xp)
    if 0.0 in (zp, zm, zpp, zmp):
        raise HorizonError("correlators are not evaluated with a point on a horizon")
    return zp, zm, zpp, zmp


def _turns(beta, ratio):
    """beta ln|ratio| reduced to [-1/2, 1/2], and whether it is on a light cone.

    The reduction u - round(u) is exact, so reciprocal ratios give exact
    negatives.
    """
    u = beta * math.log(abs(ratio))
    f = u - round(u)
    return f, abs(f) < LIGHTCONE_TOL


@dataclass(frozen=True)
class _Block:
    """One (a, b) pairing of null directions in the mode sum."""

    sign: int  # +1 for same-direction products, -1 for crossed
    g: int  # exponent multiplier in {-2, 0, 2}
    ratio: float  # zeta_a / zeta'_b


def _blocks(zp, zm, zpp, zmp):
    sp, sm = int(np.sign(zp)), int(np.sign(zm))
    spp, smp = int(np.sign(zpp)), int(np.sign(zmp))
    return (
        _Block(+1, -(sp + spp), zp / zpp),
        _Block(+1, sm + smp, zm / zmp),
        _Block(-1, -(sp - smp), zp / zmp),
        _Block(-1, sm - spp, zm / zpp),
    )


def _remainder_terms(beta, ctl, report):
    """Number of terms for the exponentially small remainders and its bound."""
    x1 = 2 * math.pi**2 * beta
    # remainder coefficients are bounded by K exp(-x_1 n)
    K = 2.0 / -math.expm1(-2 * x1)
    g = -math.expm1(-x1)

    def bound(N):
        return K * math.exp(-x1 * (N + 1)) / ((N + 1) * g) / (2 * math.pi)

    N = 0
    while bound(N) > ctl.tail_tol and N < ctl.n_max:
        N += 1
    b = 4 * bound(N)
    report.terms = max(report.terms, N)
    report.tail_bound = max(report.tail_bound, b)
    if b > ctl.tail_tol:
        report.converged = False
        report.notes.append(f"remainder tail bound {b:.3g} exceeds tail_tol at n_max = {ctl.n_max}")
    return N


def _plus_block(blk, beta, N):
    """C+ contribution of one block, or None on an image light cone."""
    f, on_cone = _turns(beta, blk.ratio)
    n = np.arange(1, N + 1)
    x = 2 * math.pi**2 * beta * n
    cosn = np.cos(2 * math.pi * f * n)
    if blk.g == 0:
        # csch, no harmonic part
        rem = np.sum(2 * np.exp(-x) / -np.expm1(-2 * x) * cosn / n) if N else 0.0
        return blk.sign * rem / (2 * math.pi)
    if on_cone:
        return None
    rem = np.sum(2.0 / np.expm1(2 * x) * cosn / n) if N else 0.0
    harm = -math.log(abs(2 * math.sin(math.pi * f)))
    return blk.sign * (harm + rem) / (2 * math.pi)


def _minus_block(blk, beta):
    """C- contribution of one block; the sinh ratio is exactly sign(g)."""
    if blk.g == 0:
        return 0.0
    f, on_cone = _turns(beta, blk.ratio)
    if on_cone:
        return None
    # sum_n sin(2 pi n f)/n = pi (1/2 - f) for f in (0, 1), odd and 1-periodic
    saw = math.pi * (math.copysign(0.5, f) - f)
    return 1j * blk.sign * np.sign(blk.g) * saw / (2 * math.pi)


def _c2_first_log10(blocks, beta):
    """log10 of the n = 1 term of the crossed blocks, without underflow."""
    x1 = 2 * math.pi**2 * beta
    logs, vals = [], []
    for blk in blocks[2:]:
        a = abs(blk.g) * x1 / 2
        log_cosh = a + math.log1p(math.exp(-2 * a)) - math.log(2.0)
        logs.append(log_cosh - log_abs_sinh(x1))
        vals.append(blk.sign * math.cos(2 * math.pi * beta * math.log(abs(blk.ratio))))
    m = max(logs)
    s = sum(v * math.exp(lg - m) for v, lg in zip(vals, logs))
    if s == 0.0:
        return -math.inf
    return (m + math.log(abs(s)) - math.log(2 * math.pi)) / math.log(10.0)


@dataclass(frozen=True)
class HadamardDecomposition:
    """C+ split into the zero-mode block c0 and the oscillator blocks c1, c2."""

    c0: complex
    c1: complex
    c2: complex
    status: Status = Status.OK
    c2_first_log10: float = -math.inf
    report: SeriesReport = field(default_factory=SeriesReport, compare=False)

    @property
    def total(self):
        return self.c0 + self.c1 + self.c2

    @property
    def c2_first_term(self):
        """Magnitude of the n = 1 term of c2 (underflows to 0 for large beta)."""
        return 10.0**self.c2_first_log10


@dataclass(frozen=True)
class PauliJordanDecomposition:
    """C- split into the zero-mode block and the oscillator blocks."""

    c0: complex
    osc: complex
    status: Status = Status.OK

    @property
    def total(self):
        return self.c0 + self.osc


def _zero_mode_blocks(zp, zm, zpp, zmp, beta):
    l, lp = math.log(abs(zp / zm)), math.log(abs(zpp / zmp))
    S = np.sign(zp) + np.sign(zm)
    Sp = np.sign(zpp) + np.sign(zmp)
    c0p = beta / (2 * math.pi) * (l * lp + math.pi**2 * S * Sp / 4)
    c0m = 1j * beta / 4 * (S * lp - Sp * l)
    return float(c0p), complex(c0m)


def _image_index(beta, ratio):
    """Nearest k with ratio = A^k, or None when ratio is off the image lattice."""
    if ratio <= 0:
        return None
    u = beta * math.log(ratio)
    k = round(u)
    return k if abs(u - k) < LIGHTCONE_TOL else None


def _singular_status(zp, zm, zpp, zmp, beta):
    """COINCIDENT when x' is an image A^k x of x, LIGHTCONE otherwise."""
    kp, km = _image_index(beta, zpp / zp), _image_index(beta, zmp / zm)
    if kp is not None and kp == km:
        return Status.COINCIDENT
    return Status.LIGHTCONE


def _status_of(parts, zp, zm, zpp, zmp, beta):
    if all(p is not None for p in parts):
        return Status.OK
    return _singular_status(zp, zm, zpp, zmp, beta)


def hadamard_series(x, xp, cfg, ctl=SeriesControl()):
    """C+ from the mode sum, valid for all sign sectors of the null coordinates."""
    zp, zm, zpp, zmp = _null_pair(x, xp, cfg)
    beta = cfg.beta
    report = SeriesReport()
    N = _remainder_terms(beta, ctl, report)
    blocks = _blocks(zp, zm, zpp, zmp)
    c0, _ = _zero_mode_blocks(zp, zm, zpp, zmp, beta)
    parts = [_plus_block(b, beta, N) for b in blocks]
    first = _c2_first_log10(blocks, beta)
    status = _status_of(parts, zp, zm, zpp, zmp, beta)
    if status is not Status.OK:
        nan = complex(math.nan, math.nan)
        return HadamardDecomposition(complex(c0), nan, nan, status, first, report)
    c1 = parts[0] + parts[1]
    c2 = parts[2] + parts[3]
    return HadamardDecomposition(complex(c0), complex(c1), complex(c2), status, first, report)


def pj_series_blocks(x, xp, cfg):
    """C- from the mode sum, split into zero-mode and oscillator blocks."""
    zp, zm, zpp, zmp = _null_pair(x, xp, cfg)
    beta = cfg.beta
    _, c0 = _zero_mode_blocks(zp, zm, zpp, zmp, beta)
    parts = [_minus_block(b, beta) for b in _blocks(zp, zm, zpp, zmp)]
    status = _status_of(parts, zp, zm, zpp, zmp, beta)
    if status is not Status.OK:
        return PauliJordanDecomposition(c0, complex(math.nan, math.nan), status)
    return PauliJordanDecomposition(c0, complex(sum(parts)), status)


def pj_series(x, xp, cfg, ctl=SeriesControl()):
    """C- from the mode sum, valid for all sign sectors.

    Every oscillator coefficient sinh(g x_n / 2) / sinh(x_n) equals sign(g)
    exactly, so the blocks are pure sawtooth sums with no remainder and
    ``ctl`` only exists for interface symmetry.
    """
    d = pj_series_blocks(x, xp, cfg)
    if d.status is not Status.OK:
        return CorrelatorValue.singular(d.status)
    return CorrelatorValue(complex(0.0, d.total.imag))


def _diamond(zp, zm, zpp, zmp):
    if not (zp > 0 and zm > 0 and zpp > 0 and zmp > 0):
        raise DomainError(
            "closed forms hold only inside the diamond zeta_+ > 0, zeta_- > 0; "
            f"got ({zp}, {zm}) and ({zpp}, {zmp})"
        )


def hadamard_closed(x, xp, cfg):
    r"""C+ inside the diamond from the theta-function closed form.

    .. math::

        C^+ = \frac{\beta}{2\pi}\ln\frac{\zeta'_+}{\zeta'_-}\ln\frac{\zeta_+}{\zeta_-}
        - \frac{1}{2\pi}\ln\left|\frac{\theta_1(\beta\pi\ln\frac{\zeta'_+}{\zeta_+})
        \theta_1(\beta\pi\ln\frac{\zeta'_-}{\zeta_-})}
        {\theta_4(\beta\pi\ln\frac{\zeta'_+}{\zeta_-})
        \theta_4(\beta\pi\ln\frac{\zeta'_-}{\zeta_+})}\right|
    """
    zp, zm, zpp, zmp = _null_pair(x, xp, cfg)
    _diamond(zp, zm, zpp, zmp)
    beta = cfg.beta
    _, cone_p = _turns(beta, zpp / zp)
    _, cone_m = _turns(beta, zmp / zm)
    if cone_p or cone_m:
        return CorrelatorValue.singular(_singular_status(zp, zm, zpp, zmp, beta))
    log_q = -2 * math.pi**2 * beta
    bp = beta * math.pi
    num = log_abs_theta(1, bp * math.log(zpp / zp), log_q) + log_abs_theta(
        1, bp * math.log(zmp / zm), log_q
    )
    den = log_abs_theta(4, bp * math.log(zpp / zm), log_q) + log_abs_theta(
        4, bp * math.log(zmp / zp), log_q
    )
    val = beta / (2 * math.pi) * math.log(zpp / zmp) * math.log(zp / zm) - (num - den) / (
        2 * math.pi
    )
    return CorrelatorValue(complex(val))


def pj_closed(x, xp, cfg):
    r"""C- inside the diamond from the resummed logarithms.

    .. math::

        C^- = \frac{i\beta}{2}\left[\ln\frac{\zeta'_+}{\zeta'_-} - \ln\frac{\zeta_+}{\zeta_-}\right]
        + \frac{1}{4\pi}\left[\log(1 - r_-^{2\pi i\beta}) - \log(1 - r_-^{-2\pi i\beta})
        + \log(1 - r_+^{-2\pi i\beta}) - \log(1 - r_+^{2\pi i\beta})\right]

    with r_pm = zeta'_pm / zeta_pm and principal logarithms. The powers are
    reduced modulo full turns before exponentiation.
    """
    zp, zm, zpp, zmp = _null_pair(x, xp, cfg)
    _diamond(zp, zm, zpp, zmp)
    beta = cfg.beta
    fp, cone_p = _turns(beta, zpp / zp)
    fm, cone_m = _turns(beta, zmp / zm)
    if cone_p or cone_m:
        return CorrelatorValue.singular(_singular_status(zp, zm, zpp, zmp, beta))

    def log1m(f):
        return np.log(-np.expm1(2j * math.pi * f))

    zero = 0.5j * beta * (math.log(zpp / zmp) - math.log(zp / zm))
    osc = (log1m(fm) - log1m(-fm) + log1m(-fp) - log1m(fp)) / (4 * math.pi)
    return CorrelatorValue(complex(0.0, (zero + osc).imag))


def wightman(x, xp, cfg, ctl=SeriesControl(), form="series"):
    """W = (C+ + C-)/2 from the series (any signs) or closed forms (diamond)."""
    if form == "series":
        h = hadamard_series(x, xp, cfg, ctl)
        cp = CorrelatorValue(h.total, h.status)
        cm = pj_series(x, xp, cfg, ctl)
    elif form == "closed":
        cp = hadamard_closed(x, xp, cfg)
        cm = pj_closed(x, xp, cfg)
    else:
        raise ValueError(f"form must be 'series' or 'closed', got {form!r}")
    if not cp.ok:
        return CorrelatorValue.singular(cp.status)
    if not cm.ok:
        return CorrelatorValue.singular(cm.status)
    return CorrelatorValue(0.5 * (cp.value + cm.value))


def gamma_of_delta(delta):
    """Zero-mode frequency parameter gamma = 2 delta / pi."""
    if not delta >= 0:
        raise DomainError(f"delta must be >= 0, got {delta}")
    return 2.0 * delta / math.pi


def c0_asymptote(t, tp, cfg):
    """Leading weak-warp form of C+_0: 1/gamma + gamma t t'/L^2, gamma = 2 delta/pi.

    Equivalently pi/(2 delta) + (2 delta/(pi L^2)) t t'.
    """
    delta, L = cfg.delta, cfg.L
    if not delta > 0:
        raise DomainError("the asymptote diverges at delta = 0")
    if delta > 0.1:
        warnings.warn(f"c0_asymptote is a small-delta expansion; delta = {delta} > 0.1", stacklevel=2)
    return math.pi / (2 * delta) + 2 * delta / (math.pi * L * L) * t * tp


def weak_warp_null(t, y, cfg):
    """Null coordinates zeta_pm = 1/W + z_pm of a cylinder point, z_pm = y +- t."""
    W = cfg.W
    return 1.0 / W + (y + t), 1.0 / W + (y - t)


@dataclass(frozen=True)
class LimitDeviation:
    """Distances between time-machine blocks at warp delta and their cylinder limits."""

    delta: float
    c1_osc: float
    c2: float
    c2_first_log10: float
    cminus: float
    cminus_zm: float
    cminus_osc: float
    c0_asymptote: float
    c0_asymptote_rel: float
    status: Status = Status.OK

    def as_dict(self):
        return {
            "delta": self.delta,
            "c1_osc": self.c1_osc,
            "c2": self.c2,
            "c2_first_log10": self.c2_first_log10,
            "cminus": self.cminus,
            "cminus_zm": self.cminus_zm,
            "cminus_osc": self.cminus_osc,
            "c0_asymptote": self.c0_asymptote,
            "c0_asymptote_rel": self.c0_asymptote_rel,
            "status": self.status.value,
        }


def limit_deviation(x, xp, delta, L=1.0, ctl=SeriesControl()):
    """Compare the time machine at warp delta with the Einstein cylinder.

    The cylinder points (t, y) are placed at zeta_pm = 1/W + y +- t. The
    returned record holds |C+_1 - C+_osc|, |C+_2|, |C- - (C-_zm + C-_osc)|,
    the zero-mode and oscillator parts of the last separately, and the
    absolute and relative distance of C+_0 from its asymptote.
    """
    cfg = WarpConfig.from_delta(delta, L)
    t, y = (x.c1, x.c2) if isinstance(x, SpacetimePoint) else x
    tp, yp = (xp.c1, xp.c2) if isinstance(xp, SpacetimePoint) else xp
    nx, nxp = weak_warp_null(t, y, cfg), weak_warp_null(tp, yp, cfg)
    h = hadamard_series(nx, nxp, cfg, ctl)
    pj = pj_series_blocks(nx, nxp, cfg)
    cyl = CylinderConfig(L)
    osc = osc_correlators((t, y), (tp, yp), cyl)
    zm = zm_correlators(t, tp, ZeroModeState(gamma_of_delta(delta)), cyl)
    status = h.status if h.status is not Status.OK else osc.status
    if pj.status is not Status.OK:
        status = pj.status
    asym = c0_asymptote(t, tp, cfg)
    nan = math.nan
    if status is not Status.OK:
        return LimitDeviation(delta, nan, nan, h.c2_first_log10, nan, nan, nan,
                              abs(h.c0 - asym), abs(h.c0 - asym) / abs(asym), status)
    cm_cyl = zm.c_minus.value + osc.c_minus.value
    return LimitDeviation(
        delta=delta,
        c1_osc=abs(h.c1 - osc.c_plus.value),
        c2=abs(h.c2),
        c2_first_log10=h.c2_first_log10,
        cminus=abs(pj.total - cm_cyl),
        cminus_zm=abs(pj.c0 - zm.c_minus.value),
        cminus_osc=abs(pj.osc - osc.c_minus.value),
        c0_asymptote=abs(h.c0 - asym),
        c0_asymptote_rel=abs(h.c0 - asym) / abs(asym),
        status=status,
    )
