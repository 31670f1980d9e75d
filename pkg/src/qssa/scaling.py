"""Nondimensionalization of polynomial systems with bounded non-negative solutions.

The procedure has three steps:

1. declare the bounded feasible region through a supremum bound per variable;
2. divide each variable by its bound, so every scaled variable lives in [0, 1];
3. read candidate time scales off the coefficients that remain.

Systems are described numerically. An equation is a list of ``(exponents,
coefficient)`` terms, ``exponents`` being one integer per variable, so
``((1, 1), -k1)`` stands for ``-k1 * x0 * x1``.

For step 3 each equation contributes one *leading group*: the largest
magnitude among its linear terms (or among all terms, if no equation of the
system has a linear term). The candidate time scales are the reciprocals of
the distinct leading groups.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateBoundError, DomainError, NotApplicableError
from .kinetics import DerivedConstants, InitialState, RateConstants, Regime, RegimeKind
from .ode import dopri45

DEDUP_RTOL = 1e-9

Term = tuple[tuple[int, ...], float]


@dataclass(frozen=True)
class BoundedSystem:
    """Polynomial vector field in physical variables plus a supremum bound per variable."""

    names: tuple[str, ...]
    bounds: tuple[float, ...]
    equations: tuple[tuple[Term, ...], ...]

    def __post_init__(self):
        n = len(self.names)
        if len(self.bounds) != n or len(self.equations) != n:
            raise DomainError("names, bounds and equations must have the same length")
        for name, b in zip(self.names, self.bounds):
            if not (math.isfinite(b) and b > 0):
                raise DegenerateBoundError(f"bound of {name!r} must be positive and finite, got {b!r}")
        for eq in self.equations:
            for exps, coef in eq:
                if len(exps) != n or any(e < 0 for e in exps):
                    raise DomainError(f"bad exponent vector {exps!r}")
                if not math.isfinite(coef):
                    raise DomainError(f"non-finite coefficient {coef!r}")


@dataclass(frozen=True)
class ScalingReport:
    """Outcome of :func:`scale_system`.

    ``coefficients[i]`` holds the terms of equation ``i`` in the scaled
    variables (dimension 1/time). ``groups[j]`` lists the distinct dimensionless
    magnitudes other than 1 that remain after choosing ``time_scales[j]``.
    """

    names: tuple[str, ...]
    scales: tuple[float, ...]
    coefficients: tuple[tuple[Term, ...], ...]
    time_scales: tuple[float, ...]
    groups: tuple[tuple[float, ...], ...]
    separation_ratios: tuple[float, ...]

    def dimensionless(self, time_scale: float) -> tuple[tuple[Term, ...], ...]:
        """Coefficient table after measuring time in units of ``time_scale``."""
        return tuple(tuple((e, c * time_scale) for e, c in eq) for eq in self.coefficients)

    def as_dict(self) -> dict:
        return {
            "variables": list(self.names),
            "scales": list(self.scales),
            "time_scales": list(self.time_scales),
            "groups": [list(g) for g in self.groups],
            "separation_ratios": list(self.separation_ratios),
            "coefficients": [
                [{"exponents": list(e), "coefficient": c} for e, c in eq] for eq in self.coefficients
            ],
        }


def _dedup(values: Sequence[float], rtol: float = DEDUP_RTOL) -> list[float]:
    out: list[float] = []
    for v in sorted(values):
        if not out or abs(v - out[-1]) > rtol * max(abs(v), abs(out[-1])):
            out.append(v)
    return out


def scale_system(sys: BoundedSystem) -> ScalingReport:
    """Scale every variable by its bound and collect candidate time scales."""
    bounds = sys.bounds
    scaled = []
    for i, eq in enumerate(sys.equations):
        terms = []
        for exps, coef in eq:
            own = list(exps)
            if own[i] > 0:
                # cancel the own-variable bound first; keeps e.g. beta*N0 bit-exact
                own[i] -= 1
                factor = math.prod(b**e for b, e in zip(bounds, own))
            else:
                factor = math.prod(b**e for b, e in zip(bounds, own)) / bounds[i]
            terms.append((tuple(exps), coef * factor))
        scaled.append(tuple(terms))

    has_linear = any(sum(e) == 1 for eq in scaled for e, _ in eq)
    leading = []
    for eq in scaled:
        pool = [abs(c) for e, c in eq if (sum(e) == 1 or not has_linear) and c != 0.0]
        if pool:
            leading.append(max(pool))
    rates = _dedup(leading)
    rates = rates[::-1]
    time_scales = [1.0 / r for r in rates]

    groups = []
    for rate in rates:
        mags = [abs(c) / rate for eq in scaled for _, c in eq if c != 0.0]
        groups.append(tuple(g for g in _dedup(mags) if abs(g - 1.0) > DEDUP_RTOL))
    ratios = tuple(b / a for a, b in zip(time_scales, time_scales[1:]))
    return ScalingReport(
        names=sys.names,
        scales=bounds,
        coefficients=tuple(scaled),
        time_scales=tuple(time_scales),
        groups=tuple(groups),
        separation_ratios=ratios,
    )


# -- concrete systems ------------------------------------------------------


def sc_bounded_system(rates: RateConstants, dc: DerivedConstants) -> BoundedSystem:
    """The reduced substrate/complex system with bounds ``(a1, a4)``."""
    k1, km1, k2, a2 = rates.k1, rates.k_minus1, rates.k2, dc.a2
    return BoundedSystem(
        names=("S", "C"),
        bounds=(dc.a1, dc.a4),
        equations=(
            (((1, 0), -k1 * a2), ((1, 1), k1), ((0, 1), km1)),
            (((1, 0), k1 * a2), ((1, 1), -k1), ((0, 1), -(km1 + k2))),
        ),
    )


def sir_bounded_system(beta: float, gamma: float, n0: float) -> BoundedSystem:
    """Classical SIR epidemic model; every compartment is bounded by ``n0``."""
    if not (beta > 0 and gamma > 0):
        raise DomainError("beta and gamma must be positive")
    return BoundedSystem(
        names=("S", "I", "R"),
        bounds=(n0, n0, n0),
        equations=(
            (((1, 1, 0), -beta),),
            (((0, 1, 0), -gamma), ((1, 1, 0), beta)),
            (((0, 1, 0), gamma),),
        ),
    )


# -- regime-specific scaled forms of the SC system -------------------------

T1 = "t1"
T2 = "t2"
_S, _SC, _C = (1, 0), (1, 1), (0, 1)


@dataclass(frozen=True)
class ScaledSC:
    """SC system in scaled variables for one regime and one time-scale choice.

    Equation ``i`` reads ``dX_i/dtau = prefactors[i] * sum(bracket * monomial)``
    where ``X = (S/bounds[0], C/bounds[1])`` and ``tau = t / time_scale``.
    """

    regime: RegimeKind
    choice: str
    time_scale: float
    bounds: tuple[float, float]
    prefactors: tuple[float, float]
    brackets: tuple[dict, dict]

    def coefficients(self) -> tuple[dict, dict]:
        """Prefactor times bracket, i.e. the effective coefficient of each monomial."""
        return tuple({m: p * v for m, v in br.items()} for p, br in zip(self.prefactors, self.brackets))

    def rhs(self, x) -> list[float]:
        return self._rhs_from(self.coefficients())(x)

    @staticmethod
    def _rhs_from(coefs):
        (s_s, s_sc, s_c), (c_s, c_sc, c_c) = ((eq[_S], eq[_SC], eq[_C]) for eq in coefs)

        def f(x):
            s, c = x
            return [s_s * s + s_sc * s * c + s_c * c, c_s * s + c_sc * s * c + c_c * c]

        return f

    def initial(self, init: InitialState) -> list[float]:
        return [init.s0 / self.bounds[0], init.c0 / self.bounds[1]]

    def integrate(self, init: InitialState, tau_end: float, rel_tol=1e-10, abs_tol=1e-14, t_eval=None):
        """Integrate the scaled system; returns ``(tau, X)`` arrays."""
        h0 = min(1.0, 1.0 / max(abs(p) for p in self.prefactors), tau_end) / 100.0
        f = self._rhs_from(self.coefficients())
        h_max = tau_end / 400 if t_eval is None else math.inf
        ts, ys, _, _ = dopri45(
            lambda t, y: f(y), self.initial(init), tau_end, rel_tol, abs_tol, h0, h_max=h_max, t_eval=t_eval
        )
        return np.asarray(ts), np.asarray(ys)


def scaled_sc_coefficients(dc: DerivedConstants, regime: Regime, time_scale_choice: str) -> ScaledSC:
    """Scaled SC system for the standard or reverse regime.

    Standard regime: ``S`` is scaled by ``a1`` and ``C`` by ``a4 = epsilon a1``;
    the fast and slow scales are ``t1_s`` and ``t2_s = t1_s/epsilon``. Reverse
    regime: both are scaled by ``a1``; the scales are ``t1_r`` and
    ``t2_r = t1_r/eta``.
    """
    if time_scale_choice not in (T1, T2):
        raise DomainError(f"time_scale_choice must be 't1' or 't2', got {time_scale_choice!r}")
    sigma, rho = dc.sigma, dc.rho
    if regime.kind is RegimeKind.STANDARD:
        eps = dc.epsilon
        brackets = (
            {_S: -1.0, _SC: sigma / (1 + sigma), _C: rho / ((1 + rho) * (1 + sigma))},
            {_S: 1.0, _SC: -sigma / (1 + sigma), _C: -1.0 / (1 + sigma)},
        )
        if time_scale_choice == T1:
            prefactors, tau = (eps, 1.0), dc.t1_s
        else:
            prefactors, tau = (1.0, 1.0 / eps), dc.t2_s
        bounds = (dc.a1, eps * dc.a1)
    elif regime.kind is RegimeKind.REVERSE:
        eta = dc.eta
        brackets = (
            {_S: -sigma / (1 + sigma), _SC: eta * sigma / (1 + sigma), _C: eta * rho / ((1 + rho) * (1 + sigma))},
            {_S: sigma / (1 + sigma), _SC: -eta * sigma / (1 + sigma), _C: -eta / (1 + sigma)},
        )
        if time_scale_choice == T1:
            prefactors, tau = (1.0, 1.0), dc.t1_r
        else:
            prefactors, tau = (1.0 / eta, 1.0 / eta), dc.t2_r
        bounds = (dc.a1, dc.a1)
    else:
        raise NotApplicableError("scaled forms exist only for the standard and reverse regimes")
    return ScaledSC(regime.kind, time_scale_choice, tau, bounds, prefactors, brackets)


@dataclass(frozen=True)
class SCScalingReport:
    """Scaling of the SC system for a classified regime.

    ``time_scales`` is the (fast, slow) pair of the regime's gathered form;
    ``mechanical`` is the generic :func:`scale_system` report of the same system.
    """

    regime: Regime
    time_scales: tuple[float, ...]
    groups: dict
    mechanical: ScalingReport

    @property
    def ratio(self) -> float:
        return self.time_scales[1] / self.time_scales[0]

    def as_dict(self) -> dict:
        return {
            "system": "SC",
            "regime": self.regime.name,
            "time_scales": list(self.time_scales),
            "separation_ratio": self.ratio if len(self.time_scales) == 2 else None,
            "groups": dict(self.groups),
            "mechanical": self.mechanical.as_dict(),
        }


def sc_scaling_report(rates: RateConstants, dc: DerivedConstants, regime: Regime) -> SCScalingReport:
    mech = scale_system(sc_bounded_system(rates, dc))
    if regime.kind is RegimeKind.STANDARD:
        pair = (dc.t1_s, dc.t2_s)
        groups = {"epsilon": dc.epsilon, "sigma": dc.sigma, "rho": dc.rho}
    elif regime.kind is RegimeKind.REVERSE:
        pair = (dc.t1_r, dc.t2_r)
        groups = {"eta": dc.eta, "sigma": dc.sigma, "rho": dc.rho}
    else:
        pair = mech.time_scales
        groups = {"epsilon": dc.epsilon, "sigma": dc.sigma, "rho": dc.rho}
    return SCScalingReport(regime, tuple(pair), groups, mech)
