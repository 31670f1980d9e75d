"""Principal branch of the Lambert W function on [0, inf).

``W(x)`` is the unique ``w >= 0`` with ``w * exp(w) == x``. Only the
non-negative half line is supported, where the branch is smooth and
increasing, so no branch-point handling is needed.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

_EPS = np.finfo(float).eps
_MAX_ITER = 8
# beyond this the residual w*exp(w) - x is evaluated in log space
_LOG_SPACE_THRESHOLD = 1e300


def _initial_guess(x: float) -> float:
    if x < 1e-3:
        return x - x * x + 1.5 * x**3
    if x > 3.0:
        l1 = math.log(x)
        l2 = math.log(l1)
        return l1 - l2 + l2 / l1
    # Winitzki's uniform approximation, good to a few percent in between
    lp = math.log1p(x)
    return lp * (1.0 - math.log1p(lp) / (2.0 + lp))


def _halley(x: float, w: float) -> float:
    for _ in range(_MAX_ITER):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= dw
        if abs(dw) <= 4 * _EPS * abs(w):
            break
    return w


def _halley_log(log_x: float, w: float) -> float:
    # root of g(w) = w + log(w) - log_x; g' = 1 + 1/w, g'' = -1/w**2
    for _ in range(_MAX_ITER):
        g = w + math.log(w) - log_x
        g1 = 1.0 + 1.0 / w
        g2 = -1.0 / (w * w)
        dw = g / (g1 - 0.5 * g * g2 / g1)
        w -= dw
        if abs(dw) <= 4 * _EPS * abs(w):
            break
    return w


def lambert_w0(x: float) -> float:
    """Principal Lambert W of a finite ``x >= 0``.

    Examples
    --------
    >>> lambert_w0(0.0)
    0.0
    >>> round(lambert_w0(math.e), 15)
    1.0
    """
    x = float(x)
    if not math.isfinite(x) or x < 0:
        raise DomainError(f"lambert_w0 needs a finite x >= 0, got {x!r}")
    if x == 0.0:
        return 0.0
    if x > _LOG_SPACE_THRESHOLD:
        log_x = math.log(x)
        return _halley_log(log_x, log_x - math.log(log_x))
    return _halley(x, _initial_guess(x))


def lambert_w0_exp(log_x: float) -> float:
    """``W(exp(log_x))`` without forming ``exp(log_x)``.

    Useful when the argument is a product of an exponential that may overflow
    or underflow; ``log_x = -inf`` maps to 0.
    """
    log_x = float(log_x)
    if math.isnan(log_x) or log_x == math.inf:
        raise DomainError(f"lambert_w0_exp needs log_x < inf, got {log_x!r}")
    if log_x < 690.0:
        # exp underflows to 0.0 for very negative log_x, which is the right limit
        return lambert_w0(math.exp(log_x))
    return _halley_log(log_x, log_x - math.log(log_x))


_w0_vec = np.vectorize(lambert_w0, otypes=[float])
_w0_exp_vec = np.vectorize(lambert_w0_exp, otypes=[float])


def lambert_w0_array(x) -> np.ndarray:
    """Element-wise :func:`lambert_w0` over an array."""
    return _w0_vec(np.asarray(x, dtype=float))


def lambert_w0_exp_array(log_x) -> np.ndarray:
    """Element-wise :func:`lambert_w0_exp` over an array."""
    return _w0_exp_vec(np.asarray(log_x, dtype=float))
