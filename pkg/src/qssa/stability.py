"""Local and global stability of the origin of the reduced (S, C) system."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .kinetics import RateConstants


@dataclass(frozen=True)
class EigenPair:
    lambda_plus: float
    lambda_minus: float


def jacobian(x, rates: RateConstants, a2: float) -> np.ndarray:
    """Jacobian of the reduced vector field at ``x = (s, c)``."""
    s, c = x
    k1, km1, k2 = rates.k1, rates.k_minus1, rates.k2
    return np.array(
        [
            [k1 * (c - a2), k1 * s + km1],
            [k1 * (a2 - c), -k1 * s - (km1 + k2)],
        ]
    )


def discriminant(rates: RateConstants, a2: float) -> float:
    """Discriminant of the characteristic polynomial at the origin.

    Computed as ``(k1 A2 + (k_-1 - k2))**2 + 4 k_-1 k2``, a sum of non-negative
    terms, instead of the textbook ``trace**2 - 4 det`` which cancels.
    """
    k1, km1, k2 = rates.k1, rates.k_minus1, rates.k2
    return (k1 * a2 + (km1 - k2)) ** 2 + 4.0 * km1 * k2


def eigenvalues_at_origin(rates: RateConstants, a2: float) -> EigenPair:
    """Both (real, negative) eigenvalues of the Jacobian at ``(0, 0)``.

    ``lambda_minus`` comes from the closed form; ``lambda_plus`` from the
    product ``lambda_plus * lambda_minus = k1 k2 A2``, which avoids the
    cancellation of the closed form when ``k1 A2`` is small.
    """
    if not a2 > 0:
        raise DomainError(f"a2 must be > 0, got {a2!r}")
    k1, km1, k2 = rates.k1, rates.k_minus1, rates.k2
    b = k1 * a2 + km1 + k2
    lam_minus = -0.5 * (b + math.sqrt(discriminant(rates, a2)))
    lam_plus = k1 * k2 * a2 / lam_minus
    return EigenPair(lam_plus, lam_minus)


def dulac_divergence(x, rates: RateConstants, a2: float) -> float:
    """Divergence of the reduced field multiplied by ``1/(s c)``.

    Equals ``-k_-1/s**2 - k1 A2/c**2`` and is negative on the open quadrant,
    which rules out periodic orbits there.
    """
    s, c = x
    if not (s > 0 and c > 0):
        raise DomainError(f"the Dulac function needs s > 0 and c > 0, got ({s!r}, {c!r})")
    return -rates.k_minus1 / (s * s) - rates.k1 * a2 / (c * c)


def dulac_grid(rates: RateConstants, a1: float, a2: float, a4: float, n: int = 10) -> list[dict]:
    """Divergence samples on an ``n x n`` interior grid of the feasible region."""
    out = []
    for s in (np.arange(1, n + 1) / (n + 1)) * a1:
        for c in (np.arange(1, n + 1) / (n + 1)) * a4:
            if s + c < a1:
                out.append({"s": float(s), "c": float(c), "divergence": dulac_divergence((s, c), rates, a2)})
    return out
