"""Closed-form inner, outer and uniform approximations for both QSSA regimes.

Each constructor returns the three layers of one approximation as immutable
:class:`ApproxCurve` objects. Calling a curve at times ``t`` returns the pair
``(X, C)`` where ``X`` is the free substrate ``S`` (``approach="free"``) or the
total substrate ``T = S + C`` (``approach="total"``).

The standard-regime outer layers go through the Lambert W function. Its
argument ``(X0/K_M) exp((X0 - k2 A2 t)/K_M)`` is formed in log space, so it
neither overflows for large ``X0/K_M`` nor turns into NaN once it underflows at
late times (the curve is then exactly 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, NotApplicableError
from .kinetics import DerivedConstants, InitialState, RateConstants
from .lambertw import lambert_w0_exp_array

SQSSA = "sqssa"
RQSSA = "rqssa"
BLEND = "blend"
FREE = "free"
TOTAL = "total"
INNER = "inner"
OUTER = "outer"
UNIFORM = "uniform"

PRINTED = "printed"
INNER_CONSISTENT = "inner-consistent"


@dataclass(frozen=True)
class ApproxCurve:
    """One layer of a closed-form approximation.

    ``ell`` is the outer-solution constant fixed by matching and ``limit`` the
    common limit ``L`` of the inner and outer layers, so that
    ``uniform(t) == inner(t) + outer(t) - limit`` (except for the printed
    total-substrate standard variant, see :func:`sqssa_total`).
    """

    regime: str
    approach: str
    layer: str
    rates: RateConstants
    dc: DerivedConstants
    init: InitialState
    ell: float
    limit: tuple[float, float]
    variant: str = INNER_CONSISTENT

    @property
    def x0(self) -> float:
        """Initial value of the substrate variable (``S0`` or ``T0``)."""
        if self.approach == TOTAL:
            return self.init.s0 + self.init.c0
        return self.init.s0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0):
            raise DomainError("approximations are defined for t >= 0 only")
        fn = _EVALUATORS[(self.regime, self.layer)]
        x, c = fn(self, t)
        return np.broadcast_to(x, t.shape).astype(float), np.broadcast_to(c, t.shape).astype(float)


class Layers(NamedTuple):
    inner: ApproxCurve
    outer: ApproxCurve
    uniform: ApproxCurve


def _require_positive_totals(dc: DerivedConstants):
    if dc.a1 <= 0 or dc.a2 <= 0:
        raise NotApplicableError("closed-form approximations need a1 > 0 and a2 > 0")


# -- standard regime -------------------------------------------------------


def _s_inner(cur: ApproxCurve, t):
    k, dc, x0 = cur.rates, cur.dc, cur.x0
    c_star = dc.a2 * x0 / (dc.k_m + x0)
    c = c_star + (cur.init.c0 - c_star) * np.exp(-k.k1 * (dc.k_m + x0) * t)
    return np.full_like(t, x0), c


def _s_outer_w(cur: ApproxCurve, t):
    k, dc = cur.rates, cur.dc
    lead = cur.ell * dc.a1
    if lead == 0.0:
        return np.zeros_like(t)
    log_arg = math.log(lead / dc.k_m) + (lead - k.k2 * dc.a2 * t) / dc.k_m
    return lambert_w0_exp_array(log_arg)


def _s_outer(cur: ApproxCurve, t):
    w = _s_outer_w(cur, t)
    return cur.dc.k_m * w, cur.dc.a2 * w / (1.0 + w)


def _s_uniform(cur: ApproxCurve, t):
    k, dc, x0 = cur.rates, cur.dc, cur.x0
    w = _s_outer_w(cur, t)
    c_star = dc.a2 * x0 / (dc.k_m + x0)
    if cur.variant == PRINTED:
        layer_amp = x0 - c_star
    else:
        layer_amp = cur.init.c0 - c_star
    c = dc.a2 * w / (1.0 + w) + layer_amp * np.exp(-k.k1 * (dc.k_m + x0) * t)
    return dc.k_m * w, c


# -- reverse regime --------------------------------------------------------


def _r_inner(cur: ApproxCurve, t):
    k, dc, init = cur.rates, cur.dc, cur.init
    fast = np.exp(-k.k1 * dc.a2 * t)
    if cur.approach == TOTAL:
        t0 = cur.x0
        return np.full_like(t, t0), t0 + (init.c0 - t0) * fast
    return init.s0 * fast, init.c0 + init.s0 * (1.0 - fast)


def _r_outer(cur: ApproxCurve, t):
    slow = cur.ell * cur.dc.a1 * np.exp(-cur.rates.k2 * t)
    if cur.approach == TOTAL:
        return slow, slow
    return np.zeros_like(t), slow


def _r_uniform(cur: ApproxCurve, t):
    k, dc, init = cur.rates, cur.dc, cur.init
    fast = np.exp(-k.k1 * dc.a2 * t)
    slow = np.exp(-k.k2 * t)
    if cur.approach == TOTAL:
        t0 = cur.x0
        return t0 * slow, t0 * slow + (init.c0 - t0) * fast
    return init.s0 * fast, init.c0 * slow + init.s0 * (slow - fast)


_EVALUATORS = {
    (SQSSA, INNER): _s_inner,
    (SQSSA, OUTER): _s_outer,
    (SQSSA, UNIFORM): _s_uniform,
    (RQSSA, INNER): _r_inner,
    (RQSSA, OUTER): _r_outer,
    (RQSSA, UNIFORM): _r_uniform,
}


def _layers(regime, approach, rates, dc, init, ell, limit, variant=INNER_CONSISTENT) -> Layers:
    return Layers(
        *(
            ApproxCurve(regime, approach, layer, rates, dc, init, ell, limit, variant)
            for layer in (INNER, OUTER, UNIFORM)
        )
    )


def sqssa_free(rates: RateConstants, dc: DerivedConstants, init: InitialState) -> Layers:
    """Standard-regime approximation of the free substrate and the complex.

    The outer layer is the Lambert-W solution of the Michaelis-Menten rate law
    and the inner layer relaxes the complex from ``C0`` to its quasi-steady
    value ``A2 S0 / (K_M + S0)`` at rate ``k1 (K_M + S0)``.
    """
    _require_positive_totals(dc)
    s0 = init.s0
    limit = (s0, dc.a2 * s0 / (dc.k_m + s0))
    return _layers(SQSSA, FREE, rates, dc, init, s0 / dc.a1, limit)


def sqssa_total(
    rates: RateConstants, dc: DerivedConstants, init: InitialState, variant: str = PRINTED
) -> Layers:
    """Standard-regime approximation of the total substrate ``T = S + C``.

    ``variant="printed"`` uses ``T0 - A2 T0/(K_M + T0)`` as the amplitude of the
    boundary-layer term of the uniform complex curve, which makes
    ``C_un(0) == T0``. ``variant="inner-consistent"`` uses the inner-layer
    amplitude ``C0 - A2 T0/(K_M + T0)`` instead, giving ``C_un(0) == C0`` and
    restoring ``uniform == inner + outer - limit``.
    """
    if variant not in (PRINTED, INNER_CONSISTENT):
        raise DomainError(f"unknown variant {variant!r}")
    _require_positive_totals(dc)
    t0 = init.s0 + init.c0
    limit = (t0, dc.a2 * t0 / (dc.k_m + t0))
    return _layers(SQSSA, TOTAL, rates, dc, init, t0 / dc.a1, limit, variant)


def rqssa_free(rates: RateConstants, dc: DerivedConstants, init: InitialState) -> Layers:
    """Reverse-regime approximation of the free substrate and the complex."""
    _require_positive_totals(dc)
    total = init.s0 + init.c0
    return _layers(RQSSA, FREE, rates, dc, init, total / dc.a1, (0.0, total))


def rqssa_total(rates: RateConstants, dc: DerivedConstants, init: InitialState) -> Layers:
    """Reverse-regime approximation of the total substrate and the complex."""
    _require_positive_totals(dc)
    t0 = init.s0 + init.c0
    return _layers(RQSSA, TOTAL, rates, dc, init, t0 / dc.a1, (t0, t0))


# spelling used by some callers
squssa_free = sqssa_free
squssa_total = sqssa_total


@dataclass(frozen=True)
class BlendedCurve:
    """Convex combination ``w * reverse + (1 - w) * standard`` with ``w = eps/(1+eps)``."""

    epsilon: float
    standard: ApproxCurve
    reverse: ApproxCurve

    regime = BLEND
    layer = UNIFORM

    @property
    def approach(self) -> str:
        return self.standard.approach

    @property
    def weight(self) -> float:
        if math.isinf(self.epsilon):
            return 1.0
        return self.epsilon / (1.0 + self.epsilon)

    def __call__(self, t):
        w = self.weight
        xs, cs = self.standard(t)
        xr, cr = self.reverse(t)
        return w * xr + (1.0 - w) * xs, w * cr + (1.0 - w) * cs


def blend(eps: float, s_curve: ApproxCurve, r_curve: ApproxCurve) -> BlendedCurve:
    """Blend a standard-regime and a reverse-regime uniform curve by ``eps``."""
    if not eps >= 0:
        raise DomainError(f"eps must be >= 0, got {eps!r}")
    if s_curve.layer != UNIFORM or r_curve.layer != UNIFORM:
        raise DomainError("only uniform layers can be blended")
    if s_curve.regime != SQSSA or r_curve.regime != RQSSA:
        raise DomainError("blend needs a standard-regime and a reverse-regime curve")
    if s_curve.approach != r_curve.approach:
        raise DomainError("blended curves must share the substrate approach")
    if s_curve.rates != r_curve.rates or s_curve.init != r_curve.init:
        raise DomainError("blended curves must share rates and initial state")
    return BlendedCurve(eps, s_curve, r_curve)


# -- reaction rates --------------------------------------------------------


def mm_rate(s, rates: RateConstants, dc: DerivedConstants):
    """Michaelis-Menten rate ``k2 A2 S / (K_M + S)``."""
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise DomainError("substrate concentration must be >= 0")
    if np.any(np.isinf(s)):
        out = np.where(np.isinf(s), rates.k2 * dc.a2, rates.k2 * dc.a2 * s / (dc.k_m + np.where(np.isinf(s), 0.0, s)))
    else:
        out = rates.k2 * dc.a2 * s / (dc.k_m + s)
    return out if out.ndim else float(out)


def rqssa_rate(s, rates: RateConstants, dc: DerivedConstants):
    """Pseudo-first-order rate ``k1 A2 S`` of the reverse regime."""
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise DomainError("substrate concentration must be >= 0")
    out = rates.k1 * dc.a2 * s
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class RateCurve:
    """Reaction rate of one regime as a function of the free substrate."""

    regime: str
    rates: RateConstants
    dc: DerivedConstants

    def __call__(self, s):
        if self.regime == SQSSA:
            return mm_rate(s, self.rates, self.dc)
        if self.regime == RQSSA:
            return rqssa_rate(s, self.rates, self.dc)
        raise NotApplicableError(f"no rate law for regime {self.regime!r}")

    def along(self, curve: ApproxCurve, t):
        """Rate evaluated on the substrate of a free-substrate ``curve`` at times ``t``."""
        if curve.approach != FREE:
            raise DomainError("rate laws take the free substrate")
        s, _ = curve(t)
        return self(np.maximum(s, 0.0))
