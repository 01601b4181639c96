"""Finite quantum instruments in operator-sum form.

An instrument assigns to each outcome a completely positive trace-
nonincreasing map; the maps must sum to a channel.  Representing every map
by its Kraus operators makes complete positivity true by construction, and
covers the three named families: trivial (scaled identity), Holevo
(measure-and-reprepare), and Lueders (square-root pinching).
"""

from __future__ import annotations

from collections.abc import Callable, Hashable, Mapping, Sequence

import numpy as np

from . import linalg
from .errors import (
    CompletenessViolationError,
    DimensionMismatchError,
    DuplicateOutcomeError,
    MissingLabelError,
    NotAProbabilityError,
    UnknownOutcomeError,
    ValidationError,
)
from .linalg import TOL_LIN, TOL_PSD, as_matrix, max_abs, psd_sqrt
from .observables import (
    GeneralObservable,
    Observable,
    RealObservable,
    canonical_outcome,
    coarse_grain,
)
from .states import DensityOperator


class OperationMap:
    """A trace-nonincreasing completely positive map sum_j K_j . K_j*."""

    __slots__ = ("kraus", "dim")

    def __init__(self, kraus: Sequence, *, tol_psd: float = TOL_PSD):
        mats = [as_matrix(K, name=f"kraus[{j}]") for j, K in enumerate(kraus)]
        if not mats:
            raise ValidationError("operation needs at least one Kraus operator",
                                  invariant="nonempty-kraus")
        dim = mats[0].shape[0]
        for j, K in enumerate(mats):
            if K.shape[0] != dim:
                raise DimensionMismatchError(
                    f"kraus[{j}] has dim {K.shape[0]}, expected {dim}",
                    invariant="matching-dims")
        top = float(np.max(np.linalg.eigvalsh(self._gram(mats))))
        if top > 1.0 + tol_psd:
            raise ValidationError(
                f"operation increases trace: sum K*K has eigenvalue {top:.6g}",
                invariant="trace-nonincreasing", violation=top - 1.0)
        object.__setattr__(self, "kraus", tuple(linalg.frozen(K) for K in mats))
        object.__setattr__(self, "dim", dim)

    @staticmethod
    def _gram(mats) -> np.ndarray:
        total = np.zeros_like(mats[0])
        for K in mats:
            total = total + K.conj().T @ K
        return (total + total.conj().T) / 2.0

    def __setattr__(self, name, value):
        raise AttributeError("OperationMap is immutable")

    def __call__(self, M: np.ndarray) -> np.ndarray:
        """Schroedinger picture: sum_j K_j M K_j*."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for K in self.kraus:
            out = out + K @ M @ K.conj().T
        return out

    def dual(self, C: np.ndarray) -> np.ndarray:
        """Heisenberg picture: sum_j K_j* C K_j, the adjoint under the trace
        pairing tr(rho dual(C)) = tr(map(rho) C)."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for K in self.kraus:
            out = out + K.conj().T @ C @ K
        return out


class Instrument:
    """Parallel lists of outcomes and operation maps summing to a channel."""

    __slots__ = ("outcomes", "maps", "dim")

    def __init__(self, outcomes: Sequence[Hashable], maps: Sequence[OperationMap],
                 *, tol_lin: float = TOL_LIN):
        if len(outcomes) != len(maps) or len(outcomes) == 0:
            raise ValidationError(
                "outcomes and maps must be parallel nonempty lists",
                invariant="parallel-lists")
        outs = tuple(outcomes)
        if len(set(outs)) != len(outs):
            raise DuplicateOutcomeError("instrument outcomes are not distinct",
                                        invariant="distinct-outcomes")
        dim = maps[0].dim
        for m in maps:
            if m.dim != dim:
                raise DimensionMismatchError("operation maps have mixed dims",
                                             invariant="matching-dims")
        total = np.zeros((dim, dim), dtype=complex)
        for m in maps:
            total = total + m.dual(np.eye(dim))
        residual = max_abs(total - np.eye(dim))
        if residual > tol_lin:
            raise CompletenessViolationError(
                f"total map is not a channel (residual {residual:.3e})",
                invariant="channel", residual=residual)
        object.__setattr__(self, "outcomes", outs)
        object.__setattr__(self, "maps", tuple(maps))
        object.__setattr__(self, "dim", dim)

    def __setattr__(self, name, value):
        raise AttributeError("Instrument is immutable")

    def __len__(self):
        return len(self.outcomes)

    def is_real_valued(self) -> bool:
        return all(isinstance(x, (int, float)) and not isinstance(x, bool)
                   for x in self.outcomes)

    def _index(self, x) -> int:
        try:
            return self.outcomes.index(x)
        except ValueError:
            raise UnknownOutcomeError(
                f"outcome {x!r} not in {self.outcomes}",
                invariant="known-outcome") from None

    def apply(self, x, rho: DensityOperator) -> np.ndarray:
        """Subnormalized post-measurement matrix for outcome x; its trace is
        the outcome probability, so the result is not itself a state."""
        return self.maps[self._index(x)](rho.matrix)

    def dual_apply(self, x, C) -> np.ndarray:
        """Heisenberg-picture action on an operator for outcome x."""
        C = as_matrix(C, name="C")
        if C.shape[0] != self.dim:
            raise DimensionMismatchError(
                f"operator dim {C.shape[0]} does not match instrument dim {self.dim}",
                invariant="matching-dims")
        return self.maps[self._index(x)].dual(C)

    def measured_observable(self) -> Observable:
        """The unique observable whose probabilities the instrument
        reproduces: effects are the dual images of the identity."""
        effects = [m.dual(np.eye(self.dim)) for m in self.maps]
        effects = [(E + E.conj().T) / 2.0 for E in effects]
        if self.is_real_valued():
            return RealObservable(self.outcomes, effects)
        return GeneralObservable(self.outcomes, effects)

    def channel(self, rho: DensityOperator) -> DensityOperator:
        """Total state change when the outcome is ignored."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for m in self.maps:
            out = out + m(rho.matrix)
        return DensityOperator((out + out.conj().T) / 2.0)

    def coarse_grain(self, f: Mapping | Callable) -> "Instrument":
        """Merge outcomes through a real-valued function by concatenating the
        Kraus lists over each fiber."""
        grouped: dict[float, list[np.ndarray]] = {}
        for x, m in zip(self.outcomes, self.maps):
            z = _apply_function(f, x)
            grouped.setdefault(z, []).extend(m.kraus)
        zs = sorted(grouped)
        return Instrument(zs, [OperationMap(grouped[z]) for z in zs])

    def mean(self, rho: DensityOperator) -> float:
        """Outcome-weighted total trace, available for real outcomes only;
        equals the average of the measured observable."""
        if not self.is_real_valued():
            raise ValidationError("mean requires real-valued outcomes",
                                  invariant="real-outcomes")
        return float(sum(x * np.trace(self.apply(x, rho)).real
                         for x in self.outcomes))


def _apply_function(f, key) -> float:
    if callable(f) and not isinstance(f, Mapping):
        return canonical_outcome(f(key))
    try:
        return canonical_outcome(f[key])
    except KeyError:
        raise MissingLabelError(
            f"function has no value for outcome {key!r}",
            invariant="total-function", field=str(key)) from None


def trivial_instrument(omega: Mapping, dim: int, *,
                       tol_lin: float = TOL_LIN) -> Instrument:
    """Instrument that leaves the state alone and draws the outcome from the
    fixed distribution omega; measures the trivial observable omega(x) I."""
    outcomes = list(omega)
    probs = [float(omega[x]) for x in outcomes]
    if any(p < -tol_lin for p in probs):
        raise NotAProbabilityError("weights must be nonnegative",
                                   invariant="nonnegative-weights",
                                   violation=-min(probs))
    total = sum(probs)
    if abs(total - 1.0) > tol_lin:
        raise NotAProbabilityError(
            f"weights sum to {total:.6g}, expected 1",
            invariant="unit-total", violation=abs(total - 1.0))
    eye = np.eye(dim, dtype=complex)
    maps = [OperationMap([np.sqrt(max(p, 0.0)) * eye]) for p in probs]
    return Instrument(outcomes, maps, tol_lin=tol_lin)


def holevo_instrument(A: Observable,
                      alphas: Sequence[DensityOperator] | Mapping,
                      *, tol_lin: float = TOL_LIN) -> Instrument:
    """Measure-and-reprepare instrument: outcome x occurs with probability
    tr(rho A_x) and the state is replaced by the fixed state alpha_x.

    ``alphas`` is either a list parallel to the outcomes or a mapping keyed
    by them; it must cover every outcome.  Kraus factorization: with
    alpha_x = sum_j lam_j |v_j><v_j| and {e_k} the standard basis,
    K_(j,k) = sqrt(lam_j) |v_j><e_k| A_x^{1/2} reproduces
    tr(rho A_x) alpha_x exactly.
    """
    keys = A.outcomes if isinstance(A, RealObservable) else A.labels
    if isinstance(alphas, Mapping):
        missing = [x for x in keys if x not in alphas]
        if missing:
            raise MissingLabelError(
                f"no reprepared state for outcome {missing[0]!r}",
                invariant="total-function", field=str(missing[0]))
        alphas = [alphas[x] for x in keys]
    if len(alphas) != len(keys):
        raise ValidationError("need one reprepared state per outcome",
                              invariant="parallel-lists")
    maps = []
    for E, alpha in zip(A.effects, alphas):
        if alpha.dim != A.dim:
            raise DimensionMismatchError(
                "reprepared state dim does not match observable dim",
                invariant="matching-dims")
        root = psd_sqrt(E)
        lam, vecs = np.linalg.eigh(alpha.matrix)
        kraus = []
        for j in range(alpha.dim):
            if lam[j] <= 0.0:
                continue
            weight = np.sqrt(lam[j])
            for k in range(A.dim):
                kraus.append(weight * np.outer(vecs[:, j], root[k, :]))
        if not kraus:  # alpha numerically zero cannot happen for a state
            kraus = [np.zeros((A.dim, A.dim), dtype=complex)]
        maps.append(OperationMap(kraus))
    return Instrument(keys, maps, tol_lin=tol_lin)


def lueders_instrument(A: Observable, *, tol_lin: float = TOL_LIN) -> Instrument:
    """Square-root instrument rho -> A_x^{1/2} rho A_x^{1/2}; measures A."""
    keys = A.outcomes if isinstance(A, RealObservable) else A.labels
    maps = [OperationMap([psd_sqrt(E)]) for E in A.effects]
    return Instrument(keys, maps, tol_lin=tol_lin)


def sequential_product(inst: Instrument, B: Observable,
                       *, tol_lin: float = TOL_LIN) -> GeneralObservable:
    """Observable of the two-step experiment: run the instrument, then
    measure B.  Effects are the dual images of B's effects; labels are
    (x, y) pairs.  The y-marginal reproduces the measured observable."""
    if inst.dim != B.dim:
        raise DimensionMismatchError(
            f"instrument dim {inst.dim} does not match observable dim {B.dim}",
            invariant="matching-dims")
    b_keys = B.outcomes if isinstance(B, RealObservable) else B.labels
    labels = []
    effects = []
    for x in inst.outcomes:
        for y, Ey in zip(b_keys, B.effects):
            C = inst.dual_apply(x, Ey)
            labels.append((x, y))
            effects.append((C + C.conj().T) / 2.0)
    return GeneralObservable(labels, effects, tol_lin=tol_lin)


def conditioned_observable(inst: Instrument, B: Observable,
                           *, tol_lin: float = TOL_LIN) -> Observable:
    """Observable of: run the instrument ignoring its outcome, then measure
    B.  Effects are sum_x dual_x(B_y) on B's outcome space."""
    if inst.dim != B.dim:
        raise DimensionMismatchError(
            f"instrument dim {inst.dim} does not match observable dim {B.dim}",
            invariant="matching-dims")
    b_keys = B.outcomes if isinstance(B, RealObservable) else B.labels
    effects = []
    for Ey in B.effects:
        total = np.zeros((inst.dim, inst.dim), dtype=complex)
        for x in inst.outcomes:
            total = total + inst.dual_apply(x, Ey)
        effects.append((total + total.conj().T) / 2.0)
    if isinstance(B, RealObservable):
        return RealObservable(b_keys, effects, tol_lin=tol_lin)
    return GeneralObservable(b_keys, effects, tol_lin=tol_lin)


def product_statistics(inst: Instrument, B: Observable, f: Mapping | Callable,
                       rho: DensityOperator,
                       *, tol_lin: float = TOL_LIN):
    """Statistics of the real-valued function f of a sequential measurement.

    Returns (mean, variance, observable) where the observable is the coarse
    graining of the two-step product observable by f.
    """
    from .statistics import average, variance as obs_variance

    product = sequential_product(inst, B, tol_lin=tol_lin)
    obs = coarse_grain(product, f, tol_lin=tol_lin)
    mean = average(rho, obs)
    var = obs_variance(rho, obs)
    return mean, var, obs
