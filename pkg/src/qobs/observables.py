"""Effects and finite observables (POVMs).

A real-valued observable is a finite set of effects indexed by distinct real
outcomes, summing to the identity.  The stochastic operator sum_x x A_x
carries all first- and second-moment statistics of the observable; its
spectral decomposition defines the sharp version, and pinching by the sharp
version's projections defines the conjugate.
"""

from __future__ import annotations

from collections.abc import Callable, Hashable, Mapping, Sequence
from typing import Union

import numpy as np

from . import linalg
from .errors import (
    CompletenessViolationError,
    DimensionMismatchError,
    DuplicateOutcomeError,
    MissingLabelError,
    NotAnEffectError,
    NotCommutingError,
    ValidationError,
)
from .linalg import TOL_LIN, TOL_PSD, as_matrix, max_abs, scale_of


def canonical_outcome(x) -> float:
    """Outcome values are finite doubles; -0.0 is folded into 0.0."""
    v = float(x)
    if not np.isfinite(v):
        raise ValidationError(f"outcome {x!r} is not finite",
                              invariant="finite-outcome")
    return v + 0.0 if v != 0.0 else 0.0


def validate_effect(M, *, tol_lin: float = TOL_LIN, tol_psd: float = TOL_PSD,
                    index: int | None = None, name: str = "effect") -> np.ndarray:
    """Check 0 <= M <= I (Hermitian, spectrum within slack) and return M."""
    where = name if index is None else f"{name}[{index}]"
    M = as_matrix(M, name=where)
    defect = linalg.hermiticity_defect(M)
    if defect > tol_lin * scale_of(M):
        raise NotAnEffectError(f"{where} is not Hermitian (defect {defect:.3e})",
                               invariant="hermitian", violation=defect,
                               field=where, index=index)
    eigs = linalg.hermitian_eigenvalues(M)
    if eigs[0] < -tol_psd:
        raise NotAnEffectError(
            f"{where} has eigenvalue {eigs[0]:.3e} < 0",
            invariant="effect-lower-bound", violation=float(-eigs[0]),
            field=where, index=index)
    if eigs[-1] > 1.0 + tol_psd:
        raise NotAnEffectError(
            f"{where} has eigenvalue {eigs[-1]:.6g} > 1",
            invariant="effect-upper-bound", violation=float(eigs[-1] - 1.0),
            field=where, index=index)
    return M


def _check_completeness(effects: Sequence[np.ndarray], dim: int,
                        tol_lin: float) -> None:
    total = np.zeros((dim, dim), dtype=complex)
    for E in effects:
        total = total + E
    residual = max_abs(total - np.eye(dim))
    if residual > tol_lin:
        raise CompletenessViolationError(
            f"effects sum to identity with residual {residual:.3e}",
            invariant="completeness", residual=residual)


class RealObservable:
    """Finite POVM with real outcomes, stored outcome-sorted ascending."""

    __slots__ = ("outcomes", "effects", "dim")

    def __init__(self, outcomes: Sequence[float], effects: Sequence,
                 *, tol_lin: float = TOL_LIN, tol_psd: float = TOL_PSD):
        if len(outcomes) != len(effects) or len(outcomes) == 0:
            raise ValidationError(
                "outcomes and effects must be parallel nonempty lists",
                invariant="parallel-lists")
        xs = [canonical_outcome(x) for x in outcomes]
        if len(set(xs)) != len(xs):
            raise DuplicateOutcomeError("outcomes are not pairwise distinct",
                                        invariant="distinct-outcomes")
        mats = [validate_effect(E, tol_lin=tol_lin, tol_psd=tol_psd, index=i)
                for i, E in enumerate(effects)]
        dim = mats[0].shape[0]
        for i, E in enumerate(mats):
            if E.shape[0] != dim:
                raise DimensionMismatchError(
                    f"effect[{i}] has dim {E.shape[0]}, expected {dim}",
                    invariant="matching-dims")
        _check_completeness(mats, dim, tol_lin)
        order = np.argsort(xs, kind="stable")
        object.__setattr__(self, "outcomes",
                           tuple(xs[i] for i in order))
        object.__setattr__(self, "effects",
                           tuple(linalg.frozen(mats[i]) for i in order))
        object.__setattr__(self, "dim", dim)

    def __setattr__(self, name, value):
        raise AttributeError("RealObservable is immutable")

    def __len__(self):
        return len(self.outcomes)

    def pairs(self):
        return zip(self.outcomes, self.effects)

    def __repr__(self):
        return f"RealObservable(dim={self.dim}, outcomes={self.outcomes})"


class GeneralObservable:
    """Finite POVM with opaque (hashable) outcome labels."""

    __slots__ = ("labels", "effects", "dim")

    def __init__(self, labels: Sequence[Hashable], effects: Sequence,
                 *, tol_lin: float = TOL_LIN, tol_psd: float = TOL_PSD):
        if len(labels) != len(effects) or len(labels) == 0:
            raise ValidationError(
                "labels and effects must be parallel nonempty lists",
                invariant="parallel-lists")
        labs = tuple(labels)
        if len(set(labs)) != len(labs):
            raise DuplicateOutcomeError("labels are not pairwise distinct",
                                        invariant="distinct-labels")
        mats = [validate_effect(E, tol_lin=tol_lin, tol_psd=tol_psd, index=i)
                for i, E in enumerate(effects)]
        dim = mats[0].shape[0]
        for i, E in enumerate(mats):
            if E.shape[0] != dim:
                raise DimensionMismatchError(
                    f"effect[{i}] has dim {E.shape[0]}, expected {dim}",
                    invariant="matching-dims")
        _check_completeness(mats, dim, tol_lin)
        object.__setattr__(self, "labels", labs)
        object.__setattr__(self, "effects", tuple(linalg.frozen(E) for E in mats))
        object.__setattr__(self, "dim", dim)

    def __setattr__(self, name, value):
        raise AttributeError("GeneralObservable is immutable")

    def __len__(self):
        return len(self.labels)

    def pairs(self):
        return zip(self.labels, self.effects)

    def __repr__(self):
        return f"GeneralObservable(dim={self.dim}, labels={self.labels})"


Observable = Union[RealObservable, GeneralObservable]


def new_real_observable(pairs, *, tol_lin: float = TOL_LIN,
                        tol_psd: float = TOL_PSD) -> RealObservable:
    """Build a validated real-valued observable from (outcome, matrix) pairs."""
    pairs = list(pairs)
    return RealObservable([x for x, _ in pairs], [E for _, E in pairs],
                          tol_lin=tol_lin, tol_psd=tol_psd)


def stochastic_operator(A: RealObservable) -> np.ndarray:
    """The Hermitian operator sum_x x A_x."""
    out = np.zeros((A.dim, A.dim), dtype=complex)
    for x, E in A.pairs():
        out = out + x * E
    return out


def is_sharp(A: Observable, tol: float = TOL_LIN) -> bool:
    """True when every effect is a projection (P^2 = P within tolerance)."""
    return all(max_abs(E @ E - E) <= tol * scale_of(E) for E in A.effects)


def is_commutative(A: Observable, tol: float = TOL_LIN) -> bool:
    """True when all pairs of effects commute within tolerance."""
    effs = A.effects
    for i in range(len(effs)):
        for j in range(i + 1, len(effs)):
            bound = tol * max(1.0, max_abs(effs[i]) * max_abs(effs[j]))
            if max_abs(effs[i] @ effs[j] - effs[j] @ effs[i]) > bound:
                return False
    return True


def sharp_version(A: RealObservable, cluster_tol: float | None = None,
                  *, tol_lin: float = TOL_LIN) -> RealObservable:
    """The projection-valued observable given by the spectral decomposition
    of the stochastic operator.

    Outcomes are the distinct eigenvalues; the result has the same stochastic
    operator as the input.  Outcomes carried only by zero effects do not
    appear, since the stochastic operator cannot see them.
    """
    sto = stochastic_operator(A)
    decomp = linalg.hermitian_eigendecomposition(sto, cluster_tol, tol=tol_lin)
    return RealObservable(decomp.eigenvalues, decomp.projections, tol_lin=tol_lin)


def conjugate(A: RealObservable, cluster_tol: float | None = None,
              *, tol_lin: float = TOL_LIN) -> RealObservable:
    """The observable with effects sum_i P_i A_x P_i, pinched by the sharp
    version's eigenprojections.

    Shares the input's outcome space and stochastic operator, hence also its
    sharp version.  Equals the input exactly when the input is commutative.
    """
    sto = stochastic_operator(A)
    decomp = linalg.hermitian_eigendecomposition(sto, cluster_tol, tol=tol_lin)
    effects = []
    for _, E in A.pairs():
        B = np.zeros_like(E)
        for P in decomp.projections:
            B = B + P @ E @ P
        effects.append(B)
    return RealObservable(A.outcomes, effects, tol_lin=tol_lin)


def conjugate_joint(A: RealObservable, cluster_tol: float | None = None,
                    *, tol_lin: float = TOL_LIN):
    """Joint observable C_(i,x) = P_i A_x P_i for the conjugate and the sharp
    version.

    Returns a list of ((i, x), matrix) entries where i indexes the sharp
    version's outcomes: summing over i at fixed x gives the conjugate's
    effect at x, summing over x at fixed i gives P_i.
    """
    sto = stochastic_operator(A)
    decomp = linalg.hermitian_eigendecomposition(sto, cluster_tol, tol=tol_lin)
    joint = []
    for i, P in enumerate(decomp.projections):
        for x, E in A.pairs():
            C = P @ E @ P
            joint.append(((i, x), (C + C.conj().T) / 2.0))
    return joint


def commuting_joint(A: RealObservable, B: RealObservable,
                    tol: float = TOL_LIN):
    """Joint observable C_(x,y) = A_x B_y for pairwise commuting effects.

    Raises ``NotCommutingError`` on the first pair whose commutator exceeds
    tolerance; marginals of the result reproduce A and B.
    """
    if A.dim != B.dim:
        raise DimensionMismatchError(
            f"observables have dims {A.dim} and {B.dim}",
            invariant="matching-dims")
    for x, Ax in A.pairs():
        for y, By in B.pairs():
            norm = max_abs(Ax @ By - By @ Ax)
            if norm > tol * max(1.0, max_abs(Ax) * max_abs(By)):
                raise NotCommutingError(
                    f"effects at outcomes ({x}, {y}) do not commute "
                    f"(norm {norm:.3e})", x=x, y=y, norm=norm)
    return [((x, y), A.effects[i] @ B.effects[j])
            for i, x in enumerate(A.outcomes)
            for j, y in enumerate(B.outcomes)]


def _lookup(f, key, kind: str) -> float:
    if callable(f) and not isinstance(f, Mapping):
        return canonical_outcome(f(key))
    try:
        return canonical_outcome(f[key])
    except KeyError:
        raise MissingLabelError(
            f"coarse-graining function has no value for {kind} {key!r}",
            invariant="total-function", field=str(key)) from None


def coarse_grain(A: Observable, f: Mapping | Callable,
                 *, tol_lin: float = TOL_LIN) -> RealObservable:
    """Real-valued coarse graining: relabel outcomes through f and sum the
    effects over each fiber f^{-1}(z)."""
    keys = A.outcomes if isinstance(A, RealObservable) else A.labels
    grouped: dict[float, np.ndarray] = {}
    for key, E in zip(keys, A.effects):
        z = _lookup(f, key, "outcome" if isinstance(A, RealObservable) else "label")
        if z in grouped:
            grouped[z] = grouped[z] + E
        else:
            grouped[z] = E.copy()
    zs = sorted(grouped)
    return RealObservable(zs, [grouped[z] for z in zs], tol_lin=tol_lin)
