"""Modified Bessel functions I0, I1, K0, K1 for real non-negative arguments.

Evaluation strategy
-------------------
I_n : ascending power series for y <= 25, Hankel asymptotic expansion above.
K_n : series with logarithmic term for y <= 2; above that the integral
      K_n(y) = int_0^inf exp(-y cosh t) cosh(n t) dt by the trapezoidal rule,
      which converges geometrically for this analytic, rapidly decaying integrand.

The exponentially scaled forms (``i0e`` = I0(y) exp(-y), ``k0e`` = K0(y) exp(y), ...)
are used by the flux solution when arguments run past the overflow range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

EULER_GAMMA = 0.57721566490153286061

I_SERIES_MAX = 25.0
K_SERIES_MAX = 2.0
I_OVERFLOW = 700.0

_I_SERIES_TERMS = 60
_I_ASYMPTOTIC_TERMS = 30
_K_SERIES_TERMS = 25
_K_QUAD_INTERVALS = 64
_K_QUAD_TAIL = 45.0  # truncate where exp(-y (cosh t - 1)) < exp(-45)


class BesselDomainError(ValueError):
    pass


class BesselOverflowError(OverflowError):
    pass


def _i_series(n, y):
    half = 0.5 * y
    q = half * half
    term = np.ones_like(y) if n == 0 else half.copy()
    total = term.copy()
    for k in range(1, _I_SERIES_TERMS):
        term = term * q / (k * (k + n))
        total += term
    return total


def _i_asymptotic_scaled(n, y):
    mu = 4.0 * n * n
    term = np.ones_like(y)
    total = term.copy()
    for k in range(1, _I_ASYMPTOTIC_TERMS):
        term = -term * (mu - (2 * k - 1) ** 2) / (8.0 * k * y)
        total += term
    return total / np.sqrt(2.0 * np.pi * y)


def _k_series(n, y):
    half = 0.5 * y
    q = half * half
    log_half = np.log(half)
    if n == 0:
        # -(ln(y/2) + gamma) I0 + sum H_k q^k / (k!)^2
        term = np.ones_like(y)
        harmonic = 0.0
        tail = np.zeros_like(y)
        for k in range(1, _K_SERIES_TERMS):
            term = term * q / (k * k)
            harmonic += 1.0 / k
            tail += harmonic * term
        return -(log_half + EULER_GAMMA) * _i_series(0, y) + tail
    # 1/y + ln(y/2) I1 - (y/4) sum (psi(k+1) + psi(k+2)) q^k / (k! (k+1)!)
    term = np.ones_like(y)
    psi_k1 = -EULER_GAMMA
    psi_k2 = 1.0 - EULER_GAMMA
    tail = (psi_k1 + psi_k2) * term
    for k in range(1, _K_SERIES_TERMS):
        term = term * q / (k * (k + 1))
        psi_k1 += 1.0 / k
        psi_k2 += 1.0 / (k + 1)
        tail = tail + (psi_k1 + psi_k2) * term
    return 1.0 / y + log_half * _i_series(1, y) - 0.5 * half * tail


def _k_quadrature_scaled(n, y):
    z = _K_QUAD_TAIL / y
    t_max = np.log1p(z + np.sqrt(z * (2.0 + z)))  # arccosh(1 + z) without cancellation
    step = t_max / _K_QUAD_INTERVALS
    k = np.arange(_K_QUAD_INTERVALS + 1)
    t = step[:, None] * k[None, :]
    f = np.exp(-2.0 * y[:, None] * np.sinh(0.5 * t) ** 2)  # cosh t - 1 = 2 sinh^2(t/2)
    if n == 1:
        f *= np.cosh(t)
    f[:, 0] *= 0.5
    f[:, -1] *= 0.5
    return step * f.sum(axis=1)


def _as_array(y):
    arr = np.asarray(y, dtype=float)
    return arr, arr.ndim == 0


def _finish(out, scalar):
    return float(out) if scalar else out


def _bessel_i_scaled(n, y):
    flat = np.atleast_1d(y).ravel()
    out = np.empty_like(flat)
    small = flat <= I_SERIES_MAX
    if small.any():
        ys = flat[small]
        out[small] = _i_series(n, ys) * np.exp(-ys)
    if (~small).any():
        out[~small] = _i_asymptotic_scaled(n, flat[~small])
    return out.reshape(np.shape(y))


def _bessel_k_scaled(n, y):
    flat = np.atleast_1d(y).ravel()
    out = np.empty_like(flat)
    small = flat <= K_SERIES_MAX
    if small.any():
        ys = flat[small]
        out[small] = _k_series(n, ys) * np.exp(ys)
    if (~small).any():
        out[~small] = _k_quadrature_scaled(n, flat[~small])
    return out.reshape(np.shape(y))


def _check_i(y, scaled):
    if np.any(np.isnan(y)) or np.any(y < 0):
        raise BesselDomainError("I_n requires argument >= 0")
    if not scaled and np.any(y > I_OVERFLOW):
        raise BesselOverflowError(f"I_n argument exceeds {I_OVERFLOW}; use the scaled form")


def _check_k(y):
    if np.any(np.isnan(y)) or np.any(y <= 0):
        raise BesselDomainError("K_n requires argument > 0")


def bessel_i(order: int, y, scaled: bool = False):
    """Modified Bessel function of the first kind, order 0 or 1.

    With ``scaled=True`` returns ``I_n(y) * exp(-y)``, valid for any y >= 0.
    """
    if order not in (0, 1):
        raise BesselDomainError(f"order must be 0 or 1, got {order!r}")
    arr, scalar = _as_array(y)
    _check_i(arr, scaled)
    out = _bessel_i_scaled(order, arr)
    if not scaled:
        out = out * np.exp(arr)
    return _finish(out, scalar)


def bessel_k(order: int, y, scaled: bool = False):
    """Modified Bessel function of the third kind, order 0 or 1.

    With ``scaled=True`` returns ``K_n(y) * exp(y)``.
    """
    if order not in (0, 1):
        raise BesselDomainError(f"order must be 0 or 1, got {order!r}")
    arr, scalar = _as_array(y)
    _check_k(arr)
    out = _bessel_k_scaled(order, arr)
    if not scaled:
        out = out * np.exp(-arr)
    return _finish(out, scalar)


def i0(y):
    return bessel_i(0, y)


def i1(y):
    return bessel_i(1, y)


def k0(y):
    return bessel_k(0, y)


def k1(y):
    return bessel_k(1, y)


def i0e(y):
    return bessel_i(0, y, scaled=True)


def i1e(y):
    return bessel_i(1, y, scaled=True)


def k0e(y):
    return bessel_k(0, y, scaled=True)


def k1e(y):
    return bessel_k(1, y, scaled=True)


@dataclass(frozen=True)
class BesselRequest:
    kind: str  # "I" or "K"
    order: int
    argument: float

    def __post_init__(self):
        if self.kind not in ("I", "K"):
            raise BesselDomainError(f"kind must be 'I' or 'K', got {self.kind!r}")
        if self.order not in (0, 1):
            raise BesselDomainError(f"order must be 0 or 1, got {self.order!r}")
        if not math.isfinite(self.argument):
            raise BesselDomainError("argument must be finite")


def modified_bessel(req: BesselRequest) -> float:
    if req.kind == "I":
        return bessel_i(req.order, float(req.argument))
    return bessel_k(req.order, float(req.argument))


def bessel_table(y):
    """Rows ``(y, I0, I1, K0, K1)`` for each argument in ``y``."""
    y = np.asarray(y, dtype=float)
    return np.column_stack([y, i0(y), i1(y), k0(y), k1(y)])
