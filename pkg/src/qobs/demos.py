"""Worked demonstrations comparing computed statistics against closed forms.

Each demo returns a JSON-ready dict with per-check absolute deltas between
the toolkit's output and an independently derived reference value.  The
``demo`` CLI subcommand exposes them as example1 .. example7:

  example1  uncorrelated yet noncommuting projections on a pure state
  example2  statistics at the maximally mixed state (trace closed forms)
  example3  generic dichotomic observables with outcomes +-1
  example4  noisy spin observables on a Bloch state
  example5  trivial instrument (state untouched, outcome from a fixed law)
  example6  Holevo measure-and-reprepare instrument
  example7  Lueders square-root instrument
"""

from __future__ import annotations

import numpy as np

from . import statistics as stats
from .errors import ValidationError
from .instruments import (
    conditioned_observable,
    holevo_instrument,
    lueders_instrument,
    sequential_product,
    trivial_instrument,
)
from .linalg import commutator, max_abs
from .observables import RealObservable, coarse_grain, stochastic_operator
from .qubit import SIGMA_Z, noisy_spin, noisy_spin_closed_forms
from .sampling import (
    random_density,
    random_hermitian,
    random_observable,
    random_probability_vector,
)
from .serialization import SCHEMA_VERSION
from .states import DensityOperator, bloch_state

DEMO_NAMES = tuple(f"example{i}" for i in range(1, 8))


class _Checks:
    """Accumulates (name, computed, expected) rows and their deltas."""

    def __init__(self):
        self.rows = []

    def scalar(self, name: str, computed, expected):
        computed, expected = complex(computed), complex(expected)
        delta = abs(computed - expected)
        self.rows.append({"name": name, "computed": _num(computed),
                          "expected": _num(expected), "delta": delta})

    def matrix(self, name: str, computed, expected):
        self.rows.append({"name": name,
                          "delta": float(max_abs(np.asarray(computed)
                                                 - np.asarray(expected)))})

    def result(self, demo: str, params: dict, threshold: float) -> dict:
        max_delta = max(row["delta"] for row in self.rows)
        return {"schema": SCHEMA_VERSION, "demo": demo, "params": params,
                "checks": self.rows, "max_delta": max_delta,
                "threshold": threshold, "pass": bool(max_delta <= threshold)}


def _num(z: complex):
    re, im = z.real + 0.0, z.imag + 0.0  # fold -0.0 into 0.0
    if im == 0.0:
        return re
    return {"re": re, "im": im}


def demo_example1() -> dict:
    """Rank-one projections that are uncorrelated on |e1> yet do not commute."""
    alpha = np.array([1.0, 0.0])
    phi = np.array([0.0, 1.0])
    psi = np.array([1.0, 1.0]) / np.sqrt(2.0)
    rho = DensityOperator(np.outer(alpha, alpha.conj()))
    A = np.outer(phi, phi.conj()).astype(complex)
    B = np.outer(psi, psi.conj()).astype(complex)

    ch = _Checks()
    ch.scalar("correlation", stats.correlation(rho, A, B), 0.0)
    ch.matrix("product_AB", A @ B,
              (phi @ psi) * np.outer(phi, psi.conj()))
    comm_norm = max_abs(commutator(A, B))
    ch.scalar("commutator_norm", comm_norm, 0.5)
    out = ch.result("example1", {}, 1e-12)
    out["noncommuting"] = bool(comm_norm > 0.4)
    return out


def demo_example2(dim: int = 3, seed: int = 7) -> dict:
    """At rho = I/n every statistic reduces to traces of operator products."""
    rng = np.random.default_rng(seed)
    n = dim
    rho = DensityOperator(np.eye(n, dtype=complex) / n)
    A = random_hermitian(rng, n)
    B = random_hermitian(rng, n)
    trA, trB = np.trace(A).real, np.trace(B).real
    trAB = complex(np.trace(A @ B))

    ch = _Checks()
    ch.scalar("mean_a", stats.average(rho, A), trA / n)
    ch.scalar("correlation", stats.correlation(rho, A, B),
              trAB / n - trA * trB / n ** 2)
    ch.scalar("covariance", stats.covariance(rho, A, B),
              trAB.real / n - trA * trB / n ** 2)
    ch.scalar("variance_a", stats.variance(rho, A),
              np.trace(A @ A).real / n - (trA / n) ** 2)
    ch.scalar("commutator_expectation",
              stats.commutator_expectation(rho, A, B),
              2j * trAB.imag / n)
    return ch.result("example2", {"dim": dim, "seed": seed}, 1e-10)


def _random_dichotomic(rng, dim: int) -> RealObservable:
    return random_observable(rng, dim, 2, outcomes=[1.0, -1.0])


def _effect_at(A: RealObservable, outcome: float) -> np.ndarray:
    return A.effects[A.outcomes.index(outcome)]


def demo_example3(dim: int = 2, seed: int = 7) -> dict:
    """Two-outcome observables: every statistic collapses onto the effect at
    outcome +1."""
    rng = np.random.default_rng(seed)
    A = _random_dichotomic(rng, dim)
    B = _random_dichotomic(rng, dim)
    rho = random_density(rng, dim)
    A1, B1 = _effect_at(A, 1.0), _effect_at(B, 1.0)
    pa = np.trace(rho.matrix @ A1).real
    pb = np.trace(rho.matrix @ B1).real
    eye = np.eye(dim)

    ch = _Checks()
    ch.matrix("stochastic_operator", stochastic_operator(A), 2.0 * A1 - eye)
    ch.scalar("mean_a", stats.average(rho, A), 2.0 * pa - 1.0)
    ch.matrix("deviation", stats.deviation(rho, A), 2.0 * (A1 - pa * eye))
    ch.scalar("correlation", stats.correlation(rho, A, B),
              4.0 * (complex(np.trace(rho.matrix @ A1 @ B1)) - pa * pb))
    ch.scalar("variance_a", stats.variance(rho, A),
              4.0 * (np.trace(rho.matrix @ A1 @ A1).real - pa ** 2))
    ch.matrix("commutator", commutator(stochastic_operator(A),
                                       stochastic_operator(B)),
              4.0 * commutator(A1, B1))
    return ch.result("example3", {"dim": dim, "seed": seed}, 1e-10)


def demo_example4(mu: float = 0.5, bloch=(0.3, 0.4, 0.2)) -> dict:
    """Noisy spin observables along x and y on a Bloch state: all eight
    closed-form statistics, checked to 1e-12."""
    r = [float(v) for v in bloch]
    rho = bloch_state(r)
    A = noisy_spin(mu, "x")
    B = noisy_spin(mu, "y")
    ref = noisy_spin_closed_forms(mu, r)
    rep = stats.uncertainty_report(rho, A, B)

    ch = _Checks()
    ch.scalar("mean_a", stats.average(rho, A), ref["mean_a"])
    ch.scalar("mean_b", stats.average(rho, B), ref["mean_b"])
    ch.scalar("variance_a", stats.variance(rho, A), ref["var_a"])
    ch.scalar("variance_b", stats.variance(rho, B), ref["var_b"])
    ch.scalar("correlation", stats.correlation(rho, A, B), ref["cor"])
    # Effect-level terms: observable-level report terms divided by 16.
    ch.scalar("commutator_term", rep.commutator_term / 16.0,
              ref["commutator_term"])
    ch.scalar("covariance_term", rep.covariance_sq / 16.0,
              ref["covariance_term"])
    ch.scalar("correlation_term", rep.correlation_sq / 16.0,
              ref["correlation_term"])
    ch.scalar("second_moment_a1", np.trace(
        rho.matrix @ _effect_at(A, 1.0) @ _effect_at(A, 1.0)).real,
        ref["second_moment_a1"])
    ch.scalar("slack", rep.inequality_slack / 16.0, ref["slack"])
    out = ch.result("example4", {"mu": mu, "bloch": r}, 1e-12)
    out["equality"] = bool(abs(rep.inequality_slack) <= 1e-12)
    return out


def demo_example5(dim: int = 3, seed: int = 7, outcomes: int = 2) -> dict:
    """Trivial instrument: outcome drawn from a fixed law, state untouched;
    conditioning on it changes nothing."""
    rng = np.random.default_rng(seed)
    probs = random_probability_vector(rng, outcomes)
    omega = {float(x): float(p)
             for x, p in zip(range(1, outcomes + 1), probs)}
    inst = trivial_instrument(omega, dim)
    B = random_observable(rng, dim, 2)
    eye = np.eye(dim)

    ch = _Checks()
    measured = inst.measured_observable()
    for x, E in measured.pairs():
        ch.matrix(f"measured_effect[{x}]", E, omega[x] * eye)
    product = sequential_product(inst, B)
    for (x, y), E in product.pairs():
        ch.matrix(f"product_effect[{x},{y}]", E,
                  omega[x] * _effect_at(B, y))
    cond = conditioned_observable(inst, B)
    for y, E in cond.pairs():
        ch.matrix(f"conditioned_effect[{y}]", E, _effect_at(B, y))
    f = {(x, y): float((i + 1) * (j - 1))
         for i, x in enumerate(inst.outcomes)
         for j, y in enumerate(B.outcomes)}
    fab = coarse_grain(product, f)
    direct = sum(f[(x, y)] * omega[x] * _effect_at(B, y)
                 for x in inst.outcomes for y in B.outcomes)
    ch.matrix("coarse_grained_stochastic", stochastic_operator(fab), direct)
    return ch.result("example5", {"dim": dim, "seed": seed,
                                  "outcomes": outcomes}, 1e-10)


def demo_example6(dim: int = 3, seed: int = 7, outcomes: int = 2) -> dict:
    """Holevo instrument: probability from the measured effect, output state
    reprepared from a fixed family."""
    rng = np.random.default_rng(seed)
    A = random_observable(rng, dim, outcomes)
    alphas = [random_density(rng, dim) for _ in range(outcomes)]
    inst = holevo_instrument(A, alphas)
    B = random_observable(rng, dim, 2)
    rho = random_density(rng, dim)
    C = random_hermitian(rng, dim)

    ch = _Checks()
    for i, x in enumerate(inst.outcomes):
        ch.matrix(f"apply[{x}]", inst.apply(x, rho),
                  np.trace(rho.matrix @ A.effects[i]).real * alphas[i].matrix)
        ch.matrix(f"dual[{x}]", inst.dual_apply(x, C),
                  complex(np.trace(alphas[i].matrix @ C)) * A.effects[i])
    measured = inst.measured_observable()
    for i, (x, E) in enumerate(measured.pairs()):
        ch.matrix(f"measured_effect[{x}]", E, A.effects[i])
    product = sequential_product(inst, B)
    for (x, y), E in product.pairs():
        i = inst.outcomes.index(x)
        ch.matrix(f"product_effect[{x},{y}]", E,
                  np.trace(alphas[i].matrix @ _effect_at(B, y)).real
                  * A.effects[i])
    cond = conditioned_observable(inst, B)
    for y, E in cond.pairs():
        expected = sum(np.trace(alphas[i].matrix @ _effect_at(B, y)).real
                       * A.effects[i] for i in range(outcomes))
        ch.matrix(f"conditioned_effect[{y}]", E, expected)
    return ch.result("example6", {"dim": dim, "seed": seed,
                                  "outcomes": outcomes}, 1e-10)


def demo_example7(dim: int = 2, seed: int = 7, outcomes: int = 2) -> dict:
    """Lueders instrument: square-root pinching; measures its own observable
    and dephases in the sharp case."""
    from .linalg import psd_sqrt

    rng = np.random.default_rng(seed)
    A = random_observable(rng, dim, outcomes)
    inst = lueders_instrument(A)
    B = random_observable(rng, dim, 2)
    rho = random_density(rng, dim)

    ch = _Checks()
    roots = [psd_sqrt(E) for E in A.effects]
    for i, x in enumerate(inst.outcomes):
        ch.scalar(f"probability[{x}]", np.trace(inst.apply(x, rho)).real,
                  np.trace(rho.matrix @ A.effects[i]).real)
    measured = inst.measured_observable()
    for i, (x, E) in enumerate(measured.pairs()):
        ch.matrix(f"measured_effect[{x}]", E, A.effects[i])
    product = sequential_product(inst, B)
    for (x, y), E in product.pairs():
        i = inst.outcomes.index(x)
        ch.matrix(f"product_effect[{x},{y}]", E,
                  roots[i] @ _effect_at(B, y) @ roots[i])
    cond = conditioned_observable(inst, B)
    for y, E in cond.pairs():
        expected = sum(S @ _effect_at(B, y) @ S for S in roots)
        ch.matrix(f"conditioned_effect[{y}]", E, expected)
    # Sharp special case: measuring along z dephases a Bloch state.
    sharp = RealObservable([1.0, -1.0],
                           [(np.eye(2) + SIGMA_Z) / 2.0,
                            (np.eye(2) - SIGMA_Z) / 2.0])
    rho2 = bloch_state((0.3, -0.5, 0.4))
    dephased = lueders_instrument(sharp).channel(rho2)
    ch.matrix("sharp_dephasing", dephased.matrix,
              np.diag(np.diag(rho2.matrix)))
    return ch.result("example7", {"dim": dim, "seed": seed,
                                  "outcomes": outcomes}, 1e-10)


def run_demo(name: str, **params) -> dict:
    """Dispatch a demo by CLI name."""
    table = {
        "example1": demo_example1,
        "example2": demo_example2,
        "example3": demo_example3,
        "example4": demo_example4,
        "example5": demo_example5,
        "example6": demo_example6,
        "example7": demo_example7,
    }
    if name not in table:
        raise ValidationError(f"unknown demo {name!r}; choose from {DEMO_NAMES}",
                              invariant="known-demo", field="name")
    return table[name](**params)


def sweep_noisy_spin(mu_grid, bloch_vectors, tol: float = 1e-12) -> dict:
    """Evaluate the noisy-spin uncertainty terms over a grid of (mu, r).

    Each row carries the computed effect-level terms, their deltas against
    the closed forms, and the slack identity slack = (1 - |r|^2) mu^4 / 16,
    which is asserted to hold within ``tol``.
    """
    rows = []
    for mu in mu_grid:
        A = noisy_spin(float(mu), "x")
        B = noisy_spin(float(mu), "y")
        for r in bloch_vectors:
            r = [float(v) for v in r]
            rho = bloch_state(r)
            rep = stats.uncertainty_report(rho, A, B)
            ref = noisy_spin_closed_forms(mu, r)
            computed = {
                "commutator_term": rep.commutator_term / 16.0,
                "covariance_term": rep.covariance_sq / 16.0,
                "correlation_term": rep.correlation_sq / 16.0,
                "variance_term": rep.variance_product / 16.0,
            }
            slack = rep.inequality_slack / 16.0
            slack_delta = abs(slack - ref["slack"])
            if slack_delta > tol:
                raise ValidationError(
                    f"slack identity violated by {slack_delta:.3e} at "
                    f"mu={mu}, r={r}", invariant="slack-identity",
                    violation=slack_delta)
            row = {"mu": float(mu), "r1": r[0], "r2": r[1], "r3": r[2]}
            for key, val in computed.items():
                row[key] = val
                row[f"{key}_delta"] = abs(val - ref[key])
            row["slack"] = slack
            row["slack_delta"] = slack_delta
            row["equality"] = bool(abs(slack) <= tol)
            rows.append(row)
    max_delta = max((row[k] for row in rows for k in row
                     if k.endswith("_delta")), default=0.0)
    return {"schema": SCHEMA_VERSION, "rows": rows, "max_delta": max_delta,
            "tol": tol, "pass": bool(max_delta <= tol)}
