r"""Jacobi theta functions and Bessel functions of the first kind.

Both are written from their defining series so the package has no
special-function dependency beyond ``math``.

Theta functions use the handbook convention with the factor of :math:`\pi`
inside the argument,

.. math::

    \theta_1(z, q) = 2\sum_{n\ge 0} (-1)^n q^{(n+1/2)^2}\sin((2n+1)z), \qquad
    \theta_4(z, q) = 1 + 2\sum_{n\ge 1} (-1)^n q^{n^2}\cos(2nz).

The nome that appears in the time-machine correlators is
:math:`q = e^{-2\pi^2\beta}`, which underflows once :math:`\beta \gtrsim 36`.
The log-space entry point :func:`log_abs_theta` therefore takes ``log q``
and never forms ``q`` itself when that would lose the answer.
"""
from __future__ import annotations

import decimal
import math

from .errors import DomainError

__all__ = [
    "jacobi_theta",
    "log_abs_theta",
    "lanczos_gamma",
    "bessel_j",
    "log_abs_sinh",
]

_EPS = 1e-16
# above this x the float ascending series loses more than ~1e-13 to cancellation
_FLOAT_SERIES_MAX = 5.0
_MAX_TERMS = 100_000
# above this log q the imaginary transformation is used
_MODULAR_LOG_Q = -math.pi


def _check_log_q(log_q):
    if math.isnan(log_q) or log_q >= 0.0:
        raise DomainError(f"theta nome must satisfy 0 <= q < 1, got log q = {log_q}")


def _theta1_ratio_sum(z, log_q):
    """sum_{n>=0} (-1)^n q^{n(n+1)} sin((2n+1)z) / sin z.

    The ratio is the Chebyshev polynomial U_{2n}(cos z), which keeps full
    relative accuracy near the zeros of theta_1.
    """
    c2 = 2.0 * math.cos(z)
    u_prev, u = 1.0, c2  # U_0, U_1
    total = 1.0
    n = 1
    while n < _MAX_TERMS:
        expo = n * (n + 1) * log_q
        if expo < -745.0:
            break
        u_prev, u = u, c2 * u - u_prev  # U_2n
        term = (-1) ** n * math.exp(expo) * u
        total += term
        # |U_2n| <= 2n+1
        if math.exp(expo + 2 * (n + 1) * log_q) * (2 * n + 3) <= _EPS * abs(total):
            break
        u_prev, u = u, c2 * u - u_prev  # U_2n+1
        n += 1
    return total


def _theta4_sum(z, log_q):
    total = 1.0
    n = 1
    while n < _MAX_TERMS:
        expo = n * n * log_q
        if expo < -745.0:
            break
        mag = math.exp(expo)
        total += 2.0 * (-1) ** n * mag * math.cos(2 * n * z)
        if 2.0 * mag < _EPS * abs(total):
            break
        n += 1
    return total


def _log_cosh(x):
    ax = abs(x)
    return ax + math.log1p(math.exp(-2.0 * ax)) - math.log(2.0)


def _theta_modular(j, z, log_q):
    """(log|theta_j|, sign) from the imaginary transformation, for q near 1.

    With t = -log(q)/pi and z reduced to [-pi/2, pi/2] by z -> z - k pi,

        theta_1 = 2 t^(-1/2) e^(-z^2/(pi t)) sum_n (-1)^n e^(-pi (n+1/2)^2 / t) sinh((2n+1) z/t)
        theta_4 = 2 t^(-1/2) e^(-z^2/(pi t)) sum_n e^(-pi (n+1/2)^2 / t) cosh((2n+1) z/t)

    The terms fall off at least like e^(-pi/t) per step, so nothing cancels.
    """
    t = -log_q / math.pi
    k = round(z / math.pi)
    zr = z - k * math.pi
    if j == 1 and zr == 0.0:
        return -math.inf, 0.0
    logs, signs = [], []
    n = 0
    while n < _MAX_TERMS:
        x = (2 * n + 1) * zr / t
        a = -math.pi * (n + 0.5) ** 2 / t + (log_abs_sinh(x) if j == 1 else _log_cosh(x))
        if logs and a - logs[0] < -40.0:
            break
        logs.append(a)
        signs.append(((-1) ** n) * math.copysign(1.0, zr) if j == 1 else 1.0)
        n += 1
    m = max(logs)
    acc = sum(sg * math.exp(a - m) for sg, a in zip(signs, logs))
    val = math.log(2.0) - 0.5 * math.log(t) - zr * zr / (math.pi * t) + m + math.log(abs(acc))
    sign = math.copysign(1.0, acc)
    if j == 1 and k % 2:
        sign = -sign
    return val, sign


def log_abs_theta(j, z, log_q):
    """Return ``log|theta_j(z, q)|`` for j in {1, 4}, given ``log q`` < 0.

    ``log_q = -inf`` is the q = 0 limit: theta_4 = 1 exactly, theta_1
    vanishes identically and ``-inf`` is returned. For q > e^(-pi) the
    transformed series is used, since the q-series cancels there.
    """
    _check_log_q(log_q)
    if j not in (1, 4):
        raise ValueError(f"only theta_1 and theta_4 are implemented, got j={j}")
    if log_q > _MODULAR_LOG_Q:
        return _theta_modular(j, z, log_q)[0]
    if j == 1:
        if math.isinf(log_q):
            return -math.inf
        sz = math.sin(z)
        if sz == 0.0:
            return -math.inf
        s = _theta1_ratio_sum(z, log_q)
        return math.log(2.0) + 0.25 * log_q + math.log(abs(sz)) + math.log(abs(s))
    if math.isinf(log_q):
        return 0.0
    return math.log(abs(_theta4_sum(z, log_q)))


def jacobi_theta(j, z, q):
    """Jacobi theta function theta_j(z, q) for real z and real nome 0 <= q < 1."""
    if not 0.0 <= q < 1.0:
        raise DomainError(f"theta nome must satisfy 0 <= q < 1, got {q}")
    if j not in (1, 4):
        raise ValueError(f"only theta_1 and theta_4 are implemented, got j={j}")
    if q == 0.0:
        return 0.0 if j == 1 else 1.0
    log_q = math.log(q)
    if log_q > _MODULAR_LOG_Q:
        val, sign = _theta_modular(j, z, log_q)
        return sign * math.exp(val)
    if j == 1:
        return 2.0 * math.exp(0.25 * log_q) * math.sin(z) * _theta1_ratio_sum(z, log_q)
    return _theta4_sum(z, log_q)


# g = 7, n = 9 coefficients; relative accuracy ~1e-15 on the positive axis
_LANCZOS_G = 7
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _sinpi(x):
    """sin(pi x) with the argument reduced exactly first, accurate near integers."""
    n = round(x)
    r = x - n  # exact for |x| < 2^52
    return math.sin(math.pi * r) * (-1.0 if n % 2 else 1.0)


def lanczos_gamma(x):
    """Gamma function of a real argument by the Lanczos approximation."""
    if x <= 0 and float(x).is_integer():
        raise DomainError(f"gamma has a pole at {x}")
    if x < 0.5:
        return math.pi / (_sinpi(x) * lanczos_gamma(1.0 - x))
    x -= 1.0
    acc = _LANCZOS_COEF[0]
    t = x + _LANCZOS_G + 0.5
    for i in range(1, _LANCZOS_G + 2):
        acc += _LANCZOS_COEF[i] / (x + i)
    return math.sqrt(2 * math.pi) * t ** (x + 0.5) * math.exp(-t) * acc


def bessel_j(nu, x):
    """Bessel function of the first kind J_nu(x) from its ascending series.

    Negative orders are accepted only when nu is not an integer, which is the
    (J_nu, J_{-nu}) fundamental pair. The alternating series cancels like
    exp(x), so above x = 5 it is summed in decimal arithmetic with the lost
    digits added back; x is restricted to [0, 50].
    """
    if x < 0:
        raise DomainError(f"bessel_j needs x >= 0, got {x}")
    if x > 50:
        raise DomainError(f"ascending series is not used beyond x = 50, got {x}")
    if nu < 0 and float(nu).is_integer():
        raise DomainError(
            f"integer negative order {nu} is not an independent solution; "
            "the second solution for integer order is not implemented"
        )
    if x == 0.0:
        if nu == 0:
            return 1.0
        if nu > 0:
            return 0.0
        return math.copysign(math.inf, lanczos_gamma(nu + 1.0))
    half = 0.5 * x
    pref = half**nu / lanczos_gamma(nu + 1.0)
    if x <= _FLOAT_SERIES_MAX:
        return pref * _bessel_sum_float(nu, half * half)
    return pref * _bessel_sum_decimal(nu, x)


def _bessel_sum_float(nu, h2):
    term = total = 1.0
    k = 0
    while True:
        k += 1
        term *= -h2 / (k * (k + nu))
        total += term
        if abs(term) <= _EPS * abs(total) and k * k > h2:
            return total
        if k > 10_000:
            return total


def _bessel_sum_decimal(nu, x):
    """The same sum with enough extra digits to absorb the exp(x) cancellation."""
    with decimal.localcontext() as ctx:
        ctx.prec = 30 + int(x / math.log(10.0)) + 1
        h2 = (decimal.Decimal(x) / 2) ** 2
        dnu = decimal.Decimal(nu)
        term = total = decimal.Decimal(1)
        tol = decimal.Decimal(10) ** -20
        k = 0
        while True:
            k += 1
            term *= -h2 / (k * (k + dnu))
            total += term
            if abs(term) <= tol * abs(total) and k * k > h2:
                return float(total)
            if k > 10_000:
                return float(total)


def log_abs_sinh(x):
    """log|sinh x| without overflow for large |x|."""
    ax = abs(x)
    if ax == 0.0:
        return -math.inf
    if ax > 20.0:
        return ax - math.log(2.0) + math.log1p(-math.exp(-2.0 * ax))
    return math.log(math.sinh(ax))
