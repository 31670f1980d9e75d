"""Kinetic parameters, conserved totals and derived scales of the
single-substrate, single-complex enzyme mechanism

    S + E <=> C -> E + P      (forward k1, backward k_minus1, catalytic k2)

All quantities are plain floats in consistent units (molar, seconds).
Quantities that need a positive enzyme total are ``None`` when the enzyme
total vanishes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .errors import DomainError, NotApplicableError

DEFAULT_EPS_LO = 0.1
DEFAULT_EPS_HI = 10.0


@dataclass(frozen=True)
class RateConstants:
    """Mass-action rate constants ``k1`` (1/(M s)), ``k_minus1`` and ``k2`` (1/s)."""

    k1: float
    k_minus1: float
    k2: float

    def __post_init__(self):
        for name in ("k1", "k_minus1", "k2"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"rate constant {name} must be finite and > 0, got {value!r}")


@dataclass(frozen=True)
class InitialState:
    """Initial concentrations of substrate, free enzyme, complex and product."""

    s0: float
    e0: float
    c0: float = 0.0
    p0: float = 0.0

    def __post_init__(self):
        for name in ("s0", "e0", "c0", "p0"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise DomainError(f"initial concentration {name} must be finite and >= 0, got {value!r}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.s0, self.e0, self.c0, self.p0)


@dataclass(frozen=True)
class DerivedConstants:
    """Every scalar derived from the rates and the initial state.

    ``a1`` and ``a2`` are the conserved substrate and enzyme totals, ``a3`` and
    ``a4`` the two successive upper bounds on the complex. ``epsilon`` is the
    parameter that separates the standard (small) and reverse (large) regimes.
    The ``*_s`` time scales belong to the standard regime and the ``*_r`` ones
    to the reverse regime.
    """

    k_dis: float
    k_vsc: float
    k_m: float
    a1: float
    a2: float
    a3: float
    a4: float
    epsilon: float
    eta: Optional[float]
    sigma: float
    rho: float
    t1_s: float
    t2_s: Optional[float]
    t1_r: Optional[float]
    t2_r: float

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.__dataclass_fields__}


def derive_constants(rates: RateConstants, init: InitialState) -> DerivedConstants:
    """Compute all derived constants for ``rates`` and ``init``."""
    k1, km1, k2 = rates.k1, rates.k_minus1, rates.k2
    k_dis = km1 / k1
    k_vsc = k2 / k1
    k_m = k_dis + k_vsc

    a1 = init.s0 + init.c0 + init.p0
    a2 = init.e0 + init.c0
    a3 = min(a1, a2, a1 * a2 / k_m)
    # min{a1, a1 a2/(k_m + a1)}; the second entry wins exactly when a2 <= k_m + a1
    a4 = min(a1, a1 * a2 / (k_m + a1))

    epsilon = a2 / (k_m + a1)
    positive_enzyme = a2 > 0
    return DerivedConstants(
        k_dis=k_dis,
        k_vsc=k_vsc,
        k_m=k_m,
        a1=a1,
        a2=a2,
        a3=a3,
        a4=a4,
        epsilon=epsilon,
        eta=a1 / a2 if positive_enzyme else None,
        sigma=a1 / k_m,
        rho=km1 / k2,
        t1_s=1.0 / (k1 * (k_m + a1)),
        t2_s=1.0 / (k1 * a2) if positive_enzyme else None,
        t1_r=a1 / (k1 * (k_m + a1) * a2) if positive_enzyme else None,
        t2_r=1.0 / (k1 * (k_m + a1)),
    )


class RegimeKind(enum.Enum):
    STANDARD = "StandardQSSA"
    REVERSE = "ReverseQSSA"
    INTERMEDIATE = "Intermediate"


@dataclass(frozen=True)
class Regime:
    kind: RegimeKind
    epsilon: float

    @property
    def name(self) -> str:
        return self.kind.value


def classify_regime(
    dc: DerivedConstants,
    eps_lo: float = DEFAULT_EPS_LO,
    eps_hi: float = DEFAULT_EPS_HI,
) -> Regime:
    """Classify ``dc`` as standard, reverse or intermediate by its epsilon.

    Raises
    ------
    NotApplicableError
        If either conserved total vanishes; both regimes need ``a1 > 0`` and
        ``a2 > 0``.
    DomainError
        If the thresholds do not satisfy ``0 < eps_lo < eps_hi``.
    """
    if not (0 < eps_lo < eps_hi):
        raise DomainError(f"thresholds must satisfy 0 < eps_lo < eps_hi, got ({eps_lo}, {eps_hi})")
    if dc.a1 <= 0 or dc.a2 <= 0:
        raise NotApplicableError("regime classification needs a1 > 0 and a2 > 0")
    eps = dc.epsilon
    if eps <= eps_lo:
        kind = RegimeKind.STANDARD
    elif eps >= eps_hi:
        kind = RegimeKind.REVERSE
    else:
        kind = RegimeKind.INTERMEDIATE
    return Regime(kind, eps)


def regime_time_scales(dc: DerivedConstants, regime: Regime) -> tuple[float, float]:
    """Return the (fast, slow) time-scale pair belonging to ``regime``.

    The intermediate regime borrows the standard pair when ``epsilon <= 1`` and
    the reverse pair otherwise; at ``epsilon == 1`` both slow scales coincide.
    """
    if dc.a2 <= 0:
        raise NotApplicableError("time-scale pairs need a2 > 0")
    if regime.kind is RegimeKind.STANDARD or (
        regime.kind is RegimeKind.INTERMEDIATE and dc.epsilon <= 1
    ):
        return dc.t1_s, dc.t2_s
    return dc.t1_r, dc.t2_r
