"""Qubit-specific fixtures: Pauli matrices, noisy spin observables, and the
closed-form statistics they satisfy on a Bloch state.

The closed forms were verified symbolically from first principles (direct
2x2 algebra with sigma_x sigma_y = i sigma_z); they are the reference
values the demo and sweep commands compare against.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .errors import ValidationError
from .observables import RealObservable

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_AXES = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


def noisy_spin(mu: float, axis: str = "x") -> RealObservable:
    """Dichotomic qubit observable with effects (I +- mu sigma_axis)/2 at
    outcomes +-1; mu = 1 is the sharp spin observable, mu = 0 is pure noise."""
    if not 0.0 <= mu <= 1.0:
        raise ValidationError(f"noise strength mu={mu} must be in [0, 1]",
                              invariant="mu-range")
    try:
        sigma = _AXES[axis]
    except KeyError:
        raise ValidationError(f"axis must be one of {sorted(_AXES)}",
                              invariant="axis") from None
    eye = np.eye(2, dtype=complex)
    return RealObservable([1.0, -1.0],
                          [(eye + mu * sigma) / 2.0, (eye - mu * sigma) / 2.0])


def noisy_spin_closed_forms(mu: float, r: Sequence[float]) -> dict:
    """Closed-form statistics of the noisy spin-x/spin-y pair on the Bloch
    state with vector r.

    ``*_term`` entries use the effect-level normalization (the observable-
    level uncertainty terms divided by 16, since the stochastic operators
    are 2 A_1 - I).  ``slack`` is variance_term - correlation_term, which
    simplifies to (1 - |r|^2) mu^4 / 16.
    """
    r1, r2, r3 = (float(v) for v in r)
    mu = float(mu)
    mu2, mu4 = mu ** 2, mu ** 4
    out = {
        "mean_a": r1 * mu,
        "mean_b": r2 * mu,
        "var_a": mu2 * (1.0 - r1 ** 2),
        "var_b": mu2 * (1.0 - r2 ** 2),
        "cor": complex(-r1 * r2 * mu2, r3 * mu2),
        "second_moment_a1": 0.25 * (1.0 + mu2) + 0.5 * mu * r1,
        "commutator_term": r3 ** 2 * mu4 / 16.0,
        "covariance_term": (r1 * r2) ** 2 * mu4 / 16.0,
        "correlation_term": (r3 ** 2 + (r1 * r2) ** 2) * mu4 / 16.0,
        "variance_term": (1.0 - r1 ** 2) * (1.0 - r2 ** 2) * mu4 / 16.0,
    }
    out["slack"] = ((1.0 - r1 ** 2) * (1.0 - r2 ** 2)
                    - r3 ** 2 - (r1 * r2) ** 2) * mu4 / 16.0
    return out
