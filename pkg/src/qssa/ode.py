"""Mass-action right-hand sides and an adaptive Dormand-Prince integrator.

The integrator is the high-accuracy reference every closed-form
approximation is checked against. States are short (2 or 4 components), so
the stepper works on plain Python float lists; numpy only enters when the
finished trajectory is packed into arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError, InvariantViolationError, StiffnessError
from .kinetics import DerivedConstants, InitialState, RateConstants, derive_constants

FULL = "full"
REDUCED = "reduced"

DEFAULT_REL_TOL = 1e-10
MIN_SAMPLES = 400


def secp_rhs(x: Sequence[float], k: RateConstants) -> list[float]:
    """Time derivatives ``(dS, dE, dC, dP)`` of the full four-species system."""
    s, e, c, _ = x
    binding = k.k1 * s * e
    return [
        -binding + k.k_minus1 * c,
        -binding + (k.k_minus1 + k.k2) * c,
        binding - (k.k_minus1 + k.k2) * c,
        k.k2 * c,
    ]


def sc_rhs(x: Sequence[float], k: RateConstants, a2: float) -> list[float]:
    """Time derivatives ``(dS, dC)`` of the system reduced by the two conservation laws."""
    s, c = x
    k1 = k.k1
    return [
        -k1 * a2 * s + k1 * s * c + k.k_minus1 * c,
        k1 * a2 * s - k1 * s * c - (k.k_minus1 + k.k2) * c,
    ]


# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = _A[6]
# 5th order minus embedded 4th order weights
_E = (
    71 / 57600,
    0.0,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)

_SAFETY = 0.9
_FAC_MIN = 0.2
_FAC_MAX = 10.0
_BETA = 0.04
_ALPHA = 0.2 - 0.75 * _BETA


@dataclass
class Trajectory:
    """Accepted samples of one integration run.

    ``y[i, j]`` is component ``names[j]`` at time ``t[i]``; ``t[0] == 0``.
    """

    t: np.ndarray
    y: np.ndarray
    names: tuple[str, ...]
    steps: int = 0
    rejected: int = 0
    max_conservation_residual: Optional[float] = None
    meta: dict = field(default_factory=dict)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.y[:, self.names.index(name)]

    def __len__(self) -> int:
        return len(self.t)


def dopri45(
    f: Callable[[float, list[float]], list[float]],
    y0: Sequence[float],
    t_end: float,
    rel_tol: float,
    abs_tol: float,
    h0: float,
    h_max: float = math.inf,
    t_eval: Optional[Sequence[float]] = None,
    max_steps: int = 2_000_000,
):
    """Integrate ``y' = f(t, y)`` on ``[0, t_end]``.

    With ``t_eval`` the steps are shortened to land exactly on every requested
    time and only those samples (plus ``t = 0``) are returned; otherwise every
    accepted step is returned.

    Returns
    -------
    ts, ys, n_steps, n_rejected
    """
    n = len(y0)
    y = [float(v) for v in y0]
    t = 0.0
    h = min(h0, h_max, t_end)
    ts = [0.0]
    ys = [list(y)]
    targets = None
    if t_eval is not None:
        targets = [float(v) for v in t_eval if v > 0.0]
        if targets and targets[-1] < t_end:
            targets.append(t_end)
        if not targets:
            targets = [t_end]
    target_idx = 0
    k1 = f(t, y)
    err_prev = 1e-4
    n_steps = n_rejected = 0
    h_min_abs = 1e-300

    while t < t_end:
        if n_steps + n_rejected >= max_steps:
            raise StiffnessError(f"step budget of {max_steps} exhausted at t={t:.17g}", t)
        stop = targets[target_idx] if targets is not None else t_end
        if targets is not None and stop - t <= 16 * np.finfo(float).eps * abs(stop):
            # target within round-off of the current time: sample the current state
            t = stop
            ts.append(t)
            ys.append(list(y))
            target_idx += 1
            continue
        landing = False
        h_try = h
        if t + h_try >= stop or stop - (t + h_try) < 1e-12 * abs(stop):
            h_try = stop - t
            landing = True
        if h_try <= max(h_min_abs, 16 * np.finfo(float).eps * abs(t)):
            raise StiffnessError(f"step size underflow (h={h_try:.3g}) at t={t:.17g}", t)

        ks = [k1]
        for i in range(1, 7):
            a = _A[i]
            yi = [y[j] + h_try * sum(a[m] * ks[m][j] for m in range(i)) for j in range(n)]
            ks.append(f(t + _C[i] * h_try, yi))
        # y_new is the stage-7 input (FSAL), recompute it from the b weights
        y_new = [y[j] + h_try * sum(_B[m] * ks[m][j] for m in range(6)) for j in range(n)]
        err = 0.0
        for j in range(n):
            e_j = h_try * sum(_E[m] * ks[m][j] for m in range(7))
            sc = abs_tol + rel_tol * max(abs(y[j]), abs(y_new[j]))
            err = max(err, abs(e_j) / sc)

        if err <= 1.0:
            t = stop if landing else t + h_try
            y = y_new
            k1 = ks[6]
            n_steps += 1
            if targets is None:
                ts.append(t)
                ys.append(list(y))
            elif landing:
                ts.append(t)
                ys.append(list(y))
                target_idx += 1
            err = max(err, 1e-10)
            fac = _SAFETY * err ** (-_ALPHA) * err_prev**_BETA
            fac = min(_FAC_MAX, max(_FAC_MIN, fac))
            # keep the controller's proposal when the step was only clipped to hit a target
            h = min(h_max, max(h, h_try) * fac if landing else h_try * fac)
            err_prev = err
        else:
            n_rejected += 1
            fac = max(_FAC_MIN, _SAFETY * err ** (-_ALPHA))
            h = h_try * fac
    return ts, ys, n_steps, n_rejected


def _initial_step(dc: DerivedConstants, t_end: float) -> float:
    fast = [v for v in (dc.t1_s, dc.t1_r) if v is not None and v > 0]
    if fast:
        return min(min(fast), t_end) / 100.0
    return t_end / 1e6


def default_abs_tol(dc: DerivedConstants) -> float:
    scale = dc.a1 if dc.a1 > 0 else dc.a2
    return 1e-14 * scale if scale > 0 else 1e-300


def _clamp_negative(y: np.ndarray, abs_tol: float) -> np.ndarray:
    worst = float(y.min()) if y.size else 0.0
    if worst < -abs_tol:
        raise InvariantViolationError(
            f"concentration {worst:.3g} is below zero by more than abs_tol={abs_tol:.3g}"
        )
    return np.where(y < 0.0, 0.0, y)


def integrate(
    system: str,
    k: RateConstants,
    init: InitialState,
    t_end: float,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: Optional[float] = None,
    t_eval: Optional[Sequence[float]] = None,
) -> Trajectory:
    """Integrate the full (``"full"``) or reduced (``"reduced"``) system from ``t = 0``.

    Without ``t_eval`` the maximum step is capped at ``t_end / 400`` so the
    trajectory always holds at least 400 accepted samples. Tiny negative
    round-off (at most ``abs_tol``) is clamped to zero in the returned samples.
    """
    if not (t_end > 0 and math.isfinite(t_end)):
        raise DomainError(f"t_end must be positive and finite, got {t_end!r}")
    if not rel_tol > 0:
        raise DomainError(f"rel_tol must be positive, got {rel_tol!r}")
    dc = derive_constants(k, init)
    if abs_tol is None:
        abs_tol = default_abs_tol(dc)
    if not abs_tol > 0:
        raise DomainError(f"abs_tol must be positive, got {abs_tol!r}")

    if system == FULL:
        names = ("S", "E", "C", "P")
        y0 = list(init.as_tuple())
        rhs = lambda t, y: secp_rhs(y, k)  # noqa: E731
    elif system == REDUCED:
        names = ("S", "C")
        y0 = [init.s0, init.c0]
        a2 = dc.a2
        rhs = lambda t, y: sc_rhs(y, k, a2)  # noqa: E731
    else:
        raise DomainError(f"unknown system {system!r}; expected 'full' or 'reduced'")

    if t_eval is not None:
        t_eval = np.asarray(t_eval, dtype=float)
        if np.any(np.diff(t_eval) <= 0) or t_eval[0] < 0 or t_eval[-1] > t_end * (1 + 1e-12):
            raise DomainError("t_eval must be strictly increasing within [0, t_end]")
        h_max = math.inf
    else:
        h_max = t_end / MIN_SAMPLES

    ts, ys, n_steps, n_rej = dopri45(
        rhs, y0, t_end, rel_tol, abs_tol, _initial_step(dc, t_end), h_max=h_max, t_eval=t_eval
    )
    t_arr = np.asarray(ts)
    y_arr = _clamp_negative(np.asarray(ys), abs_tol)
    traj = Trajectory(t_arr, y_arr, names, steps=n_steps, rejected=n_rej)
    traj.meta.update(system=system, rel_tol=rel_tol, abs_tol=abs_tol, t_end=t_end)
    if system == FULL:
        r_sub, r_enz = conservation_residuals(traj, dc)
        traj.max_conservation_residual = float(max(r_sub.max(), r_enz.max()))
    return traj


def conservation_residuals(traj: Trajectory, dc: DerivedConstants) -> tuple[np.ndarray, np.ndarray]:
    """Relative drift of the substrate total ``S+C+P`` and enzyme total ``E+C``."""
    if traj.names != ("S", "E", "C", "P"):
        raise DomainError("conservation residuals need a full-system trajectory")
    floor = np.finfo(float).tiny
    s, e, c, p = traj.y.T
    r_sub = np.abs(s + c + p - dc.a1) / max(dc.a1, floor)
    r_enz = np.abs(e + c - dc.a2) / max(dc.a2, floor)
    return r_sub, r_enz
