"""Randomized property verification over the whole toolkit.

Each trial draws one bundle of random objects (states, operators,
observables, one instrument) and evaluates every registered property on it,
recording residuals against their tolerance bounds.  Trials use independent
children of a single seed sequence, so the run is deterministic for a fixed
config and the aggregation (counts and maxima) is order-independent.

The worst instance across all properties is serialized into the summary and
can be replayed bit-for-bit with ``replay_instance``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

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
from .linalg import (
    TOL_LIN,
    TOL_PSD,
    TOL_STAT,
    hermitian_eigendecomposition,
    max_abs,
    psd_sqrt,
    scale_of,
)
from .observables import (
    RealObservable,
    coarse_grain,
    conjugate,
    is_commutative,
    sharp_version,
    stochastic_operator,
)
from .sampling import (
    ginibre,
    random_bloch_vector,
    random_commutative_observable,
    random_density,
    random_hermitian,
    random_observable,
    random_outcomes,
    random_probability_vector,
)
from .serialization import (
    SCHEMA_VERSION,
    decode_matrix,
    decode_observable,
    decode_state,
    encode_matrix,
    encode_observable,
    encode_state,
)
from .states import DensityOperator, bloch_state, is_faithful, state_form

PRNG_NAME = "numpy PCG64, one SeedSequence(seed).spawn child per trial"

FAMILIES = ("trivial", "holevo", "lueders")


@dataclass(frozen=True)
class RunConfig:
    """Fuzzer configuration; identical configs give byte-identical output."""

    seed: int = 42
    trials: int = 100
    dims: tuple[int, ...] = (2, 3, 4, 5, 6)
    tol_lin: float = TOL_LIN
    tol_psd: float = TOL_PSD
    tol_stat: float = TOL_STAT
    cluster_tol: float | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValidationError("trials must be >= 1",
                                  invariant="positive-trials", field="trials")
        if not self.dims or any(d < 1 for d in self.dims):
            raise ValidationError("dims must be nonempty positive integers",
                                  invariant="positive-dims", field="dims")


def build_instance(rng: np.random.Generator, dim: int, family: str) -> dict:
    """One bundle of random objects; everything later checks against it."""
    n_a = int(rng.integers(2, 4))
    n_b = int(rng.integers(2, 4))
    inst_payload: dict = {}
    A = random_observable(rng, dim, n_a)
    B = random_observable(rng, dim, n_b)
    if family == "trivial":
        probs = random_probability_vector(rng, len(A))
        omega = {x: float(p) for x, p in zip(random_outcomes(rng, len(A)), probs)}
        inst = trivial_instrument(omega, dim)
        inst_payload = {"omega": omega}
    elif family == "holevo":
        alphas = [random_density(rng, dim) for _ in range(len(A))]
        inst = holevo_instrument(A, alphas)
        inst_payload = {"alphas": alphas}
    else:
        inst = lueders_instrument(A)
    G = ginibre(rng, dim, dim)
    return {
        "dim": dim,
        "family": family,
        "H": random_hermitian(rng, dim),
        "P": G @ G.conj().T,
        "C": random_hermitian(rng, dim),
        "D": random_hermitian(rng, dim),
        "rho": random_density(rng, dim),
        "rho_low": random_density(rng, dim, rank=max(1, dim - 1)),
        "A": A,
        "B": B,
        "A_comm": random_commutative_observable(rng, dim, 2 if dim == 1 else n_a),
        "bloch": random_bloch_vector(rng),
        "inst": inst,
        "inst_payload": inst_payload,
        "f_obs": {x: float(v) for x, v in
                  zip(A.outcomes, rng.integers(-2, 3, size=len(A)))},
        "f_inst": {x: float(v) for x, v in
                   zip(inst.outcomes, rng.integers(-2, 3, size=len(inst)))},
        "g": {x: float(v) for x, v in
              zip(inst.outcomes, rng.integers(-2, 3, size=len(inst)))},
        "h": {y: float(v) for y, v in
              zip(B.outcomes, rng.integers(-2, 3, size=len(B)))},
    }


def _matched_observable_delta(A: RealObservable, B: RealObservable) -> float:
    """Max deviation between two observables compared entry-by-entry after
    matching their (sorted) outcome lists; infinite when sizes differ."""
    if len(A) != len(B):
        return math.inf
    delta = max(abs(x - y) for x, y in zip(A.outcomes, B.outcomes))
    for Ea, Eb in zip(A.effects, B.effects):
        delta = max(delta, max_abs(Ea - Eb))
    return delta


# Property registry: name -> fn(instance, config) -> (residual, bound).

def _chk_eigen_reconstruction(inst, cfg):
    H = inst["H"]
    decomp = hermitian_eigendecomposition(H, cfg.cluster_tol, tol=cfg.tol_lin)
    return max_abs(decomp.reconstruct() - H), cfg.tol_lin * scale_of(H)


def _chk_eigen_projections(inst, cfg):
    H = inst["H"]
    decomp = hermitian_eigendecomposition(H, cfg.cluster_tol, tol=cfg.tol_lin)
    projections = decomp.projections
    eye = np.eye(H.shape[0])
    res = max_abs(sum(projections) - eye)
    for i, P in enumerate(projections):
        res = max(res, max_abs(P @ P - P), max_abs(P - P.conj().T))
        for Q in projections[i + 1:]:
            res = max(res, max_abs(P @ Q))
    return res, cfg.tol_lin


def _chk_psd_sqrt(inst, cfg):
    P = inst["P"]
    S = psd_sqrt(P, tol_psd=cfg.tol_psd, tol=cfg.tol_lin)
    res = max_abs(S @ S - P) / (1.0 + max_abs(P))
    res = max(res, max_abs(S @ P - P @ S) / scale_of(P))
    return res, cfg.tol_lin


def _chk_trace_adjoint(inst, cfg):
    D = inst["C"] + 1j * inst["H"]  # generic non-Hermitian operand
    return abs(np.trace(D.conj().T) - np.conj(np.trace(D))), cfg.tol_lin


def _chk_form_psd(inst, cfg):
    rho, C = inst["rho"], inst["C"]
    val = state_form(rho, C, C)
    res = max(abs(val.imag), max(0.0, -val.real))
    return res, cfg.tol_lin * max(1.0, max_abs(C) ** 2)


def _chk_form_cauchy_schwarz(inst, cfg):
    rho, C, D = inst["rho"], inst["C"], inst["D"]
    lhs = abs(state_form(rho, C, D)) ** 2
    rhs = state_form(rho, C, C).real * state_form(rho, D, D).real
    return max(0.0, lhs - rhs), cfg.tol_lin * max(1.0, rhs)


def _chk_form_conjugate_symmetry(inst, cfg):
    rho, C, D = inst["rho"], inst["C"], inst["D"]
    res = abs(state_form(rho, C, D) - np.conj(state_form(rho, D, C)))
    return res, cfg.tol_lin * max(1.0, max_abs(C) * max_abs(D))


def _chk_faithful_witness(inst, cfg):
    rho = inst["rho_low"]
    if is_faithful(rho, cfg.tol_psd):
        return 0.0, cfg.tol_lin  # dim 1 cannot be rank-deficient
    w, V = np.linalg.eigh(rho.matrix)
    v = V[:, 0]
    P = np.outer(v, v.conj())
    return max(0.0, state_form(rho, P, P).real), cfg.tol_lin


def _chk_bloch_eigenvalues(inst, cfg):
    r = inst["bloch"]
    rho = bloch_state(r)
    norm = float(np.linalg.norm(r))
    expected = np.array([(1.0 - norm) / 2.0, (1.0 + norm) / 2.0])
    return float(np.max(np.abs(np.array(rho.eigenvalues) - expected))), 1e-12


def _chk_observable_completeness(inst, cfg):
    A = inst["A"]
    return max_abs(sum(A.effects) - np.eye(A.dim)), cfg.tol_lin


def _chk_observable_spectrum(inst, cfg):
    A = inst["A"]
    res = 0.0
    for E in A.effects:
        w = np.linalg.eigvalsh(E)
        res = max(res, max(0.0, -float(w[0])), max(0.0, float(w[-1]) - 1.0))
    return res, cfg.tol_psd


def _chk_sharp_same_stochastic(inst, cfg):
    A = inst["A"]
    sharp = sharp_version(A, cfg.cluster_tol, tol_lin=cfg.tol_lin)
    sto = stochastic_operator(A)
    return (max_abs(stochastic_operator(sharp) - sto),
            cfg.tol_lin * scale_of(sto))


def _chk_sharp_idempotent(inst, cfg):
    A = inst["A"]
    once = sharp_version(A, cfg.cluster_tol, tol_lin=cfg.tol_lin)
    twice = sharp_version(once, cfg.cluster_tol, tol_lin=cfg.tol_lin)
    sto = stochastic_operator(A)
    bound = max(cfg.tol_lin,
                cfg.cluster_tol if cfg.cluster_tol is not None
                else 1e-8 * scale_of(sto))
    return _matched_observable_delta(once, twice), bound


def _chk_conjugate_same_sharp(inst, cfg):
    A = inst["A"]
    conj = conjugate(A, cfg.cluster_tol, tol_lin=cfg.tol_lin)
    res = max_abs(stochastic_operator(conj) - stochastic_operator(A))
    sharp_a = sharp_version(A, cfg.cluster_tol, tol_lin=cfg.tol_lin)
    sharp_c = sharp_version(conj, cfg.cluster_tol, tol_lin=cfg.tol_lin)
    res = max(res, _matched_observable_delta(sharp_a, sharp_c))
    sto = stochastic_operator(A)
    bound = max(cfg.tol_lin * scale_of(sto),
                cfg.cluster_tol if cfg.cluster_tol is not None
                else 1e-8 * scale_of(sto))
    return res, bound


def _chk_conjugate_commutative(inst, cfg):
    A = inst["A_comm"]
    if not is_commutative(A, cfg.tol_lin):  # pragma: no cover - by construction
        return math.inf, cfg.tol_lin
    conj = conjugate(A, cfg.cluster_tol, tol_lin=cfg.tol_lin)
    return _matched_observable_delta(A, conj), cfg.tol_lin


def _chk_coarse_grain_valid(inst, cfg):
    A, f = inst["A"], inst["f_obs"]
    fA = coarse_grain(A, f, tol_lin=cfg.tol_lin)
    res = max_abs(sum(fA.effects) - np.eye(A.dim))
    direct = sum(f[x] * E for x, E in A.pairs())
    res = max(res, max_abs(stochastic_operator(fA) - direct))
    return res, cfg.tol_lin * scale_of(direct)


def _uncertainty_residuals(rho, A, B, cfg):
    # Measure the residuals here; an infinite tolerance disarms the report's
    # own internal-consistency guard so violations are counted, not raised.
    rep = stats.uncertainty_report(rho, A, B, tol=math.inf)
    scale = max(1.0, rep.correlation_sq)
    eq = abs(rep.equation_residual) / scale
    ineq = max(0.0, -rep.inequality_slack) / scale
    rh = max(0.0, rep.commutator_term - rep.variance_product) / scale
    return eq, ineq, rh


def _chk_uncertainty_equation(inst, cfg):
    eq1, _, _ = _uncertainty_residuals(inst["rho"], inst["A"], inst["B"], cfg)
    eq2, _, _ = _uncertainty_residuals(inst["rho_low"], inst["C"], inst["D"], cfg)
    return max(eq1, eq2), cfg.tol_stat


def _chk_uncertainty_inequality(inst, cfg):
    _, in1, rh1 = _uncertainty_residuals(inst["rho"], inst["A"], inst["B"], cfg)
    _, in2, rh2 = _uncertainty_residuals(inst["rho_low"], inst["C"], inst["D"], cfg)
    return max(in1, in2, rh1, rh2), cfg.tol_stat


def _chk_correlation_symmetry(inst, cfg):
    rho, A, B = inst["rho"], inst["A"], inst["B"]
    res = abs(stats.correlation(rho, A, B)
              - np.conj(stats.correlation(rho, B, A)))
    return res, cfg.tol_lin * max(1.0, abs(stats.correlation(rho, A, B)))


def _chk_statistics_sharp_consistency(inst, cfg):
    rho, A, B = inst["rho"], inst["A"], inst["B"]
    sharp_a = sharp_version(A, cfg.cluster_tol, tol_lin=cfg.tol_lin)
    sharp_b = sharp_version(B, cfg.cluster_tol, tol_lin=cfg.tol_lin)
    res = abs(stats.correlation(rho, A, B)
              - stats.correlation(rho, sharp_a, sharp_b))
    res = max(res, abs(stats.average(rho, A) - stats.average(rho, sharp_a)))
    res = max(res, abs(stats.variance(rho, A) - stats.variance(rho, sharp_a)))
    scale = max(1.0, abs(stats.correlation(rho, A, B)))
    return res, cfg.tol_lin * scale


def _chk_maximally_mixed_closed_form(inst, cfg):
    C, D = inst["C"], inst["D"]
    d = C.shape[0]
    rho = DensityOperator(np.eye(d, dtype=complex) / d)
    closed = (np.trace(C @ D) / d
              - np.trace(C) * np.trace(D) / d ** 2)
    res = abs(stats.correlation(rho, C, D) - closed)
    return res, cfg.tol_lin * max(1.0, abs(closed))


def _chk_deviation_traceless(inst, cfg):
    rho, A = inst["rho"], inst["A"]
    dev = stats.deviation(rho, A)
    return abs(np.trace(rho.matrix @ dev)), cfg.tol_lin * scale_of(dev)


def _chk_commutator_identity(inst, cfg):
    rho, A, B = inst["rho"], inst["A"], inst["B"]
    comm = stats.commutator_expectation(rho, A, B)
    sto_a, sto_b = stochastic_operator(A), stochastic_operator(B)
    ident = 2j * np.trace(rho.matrix @ sto_a @ sto_b).imag
    res = max(abs(comm.real), abs(comm - ident))
    return res, cfg.tol_lin * max(1.0, abs(comm))


def _chk_instrument_adjointness(inst, cfg):
    instr, rho, C = inst["inst"], inst["rho"], inst["C"]
    res = 0.0
    for x in instr.outcomes:
        lhs = np.trace(rho.matrix @ instr.dual_apply(x, C))
        rhs = np.trace(instr.apply(x, rho) @ C)
        res = max(res, abs(lhs - rhs))
    return res, cfg.tol_lin * scale_of(C)


def _chk_instrument_probability(inst, cfg):
    instr, rho = inst["inst"], inst["rho"]
    measured = instr.measured_observable()
    res = 0.0
    for x, E in measured.pairs():
        res = max(res, abs(np.trace(instr.apply(x, rho)).real
                           - np.trace(rho.matrix @ E).real))
    return res, cfg.tol_lin


def _chk_instrument_channel(inst, cfg):
    instr, rho = inst["inst"], inst["rho"]
    out = instr.channel(rho)
    res = abs(sum(out.eigenvalues) - 1.0)
    res = max(res, max(0.0, -out.eigenvalues[0]))
    return res, cfg.tol_psd


def _chk_instrument_coarse_grain(inst, cfg):
    instr, f = inst["inst"], inst["f_inst"]
    merged = instr.coarse_grain(f)
    lhs = merged.measured_observable()
    rhs = coarse_grain(instr.measured_observable(), f, tol_lin=cfg.tol_lin)
    return _matched_observable_delta(lhs, rhs), cfg.tol_lin


def _chk_instrument_mean(inst, cfg):
    instr, rho = inst["inst"], inst["rho"]
    measured = instr.measured_observable()
    res = abs(instr.mean(rho) - stats.average(rho, measured))
    return res, cfg.tol_lin * max(1.0, abs(instr.mean(rho)))


def _chk_sequential_completeness(inst, cfg):
    instr, B = inst["inst"], inst["B"]
    product = sequential_product(instr, B, tol_lin=cfg.tol_lin)
    return max_abs(sum(product.effects) - np.eye(B.dim)), cfg.tol_lin


def _chk_sequential_marginal(inst, cfg):
    instr, B = inst["inst"], inst["B"]
    product = sequential_product(instr, B, tol_lin=cfg.tol_lin)
    measured = instr.measured_observable()
    res = 0.0
    for x, E in measured.pairs():
        marg = sum(eff for (xx, _), eff in product.pairs() if xx == x)
        res = max(res, max_abs(marg - E))
    return res, cfg.tol_lin


def _chk_conditioned_mean(inst, cfg):
    instr, B, rho = inst["inst"], inst["B"], inst["rho"]
    cond = conditioned_observable(instr, B, tol_lin=cfg.tol_lin)
    res = abs(stats.average(rho, cond)
              - stats.average(instr.channel(rho), B))
    if inst["family"] == "trivial":
        res = max(res, _matched_observable_delta(cond, B))
    return res, cfg.tol_lin * max(1.0, abs(stats.average(rho, B)))


def _chk_product_split_function(inst, cfg):
    instr, B, g, h = inst["inst"], inst["B"], inst["g"], inst["h"]
    product = sequential_product(instr, B, tol_lin=cfg.tol_lin)
    f = {(x, y): g[x] * h[y] for x in instr.outcomes for y in B.outcomes}
    lhs = stochastic_operator(coarse_grain(product, f, tol_lin=cfg.tol_lin))
    hB = sum(h[y] * E for y, E in B.pairs())
    rhs = sum(g[x] * instr.dual_apply(x, hB) for x in instr.outcomes)
    return max_abs(lhs - rhs), cfg.tol_lin * scale_of(rhs)


CHECKS = {
    "eigen.reconstruction": _chk_eigen_reconstruction,
    "eigen.projections": _chk_eigen_projections,
    "psd_sqrt.contract": _chk_psd_sqrt,
    "trace.adjoint_conjugate": _chk_trace_adjoint,
    "state_form.psd": _chk_form_psd,
    "state_form.cauchy_schwarz": _chk_form_cauchy_schwarz,
    "state_form.conjugate_symmetry": _chk_form_conjugate_symmetry,
    "state.faithful_witness": _chk_faithful_witness,
    "bloch.eigenvalues": _chk_bloch_eigenvalues,
    "observable.completeness": _chk_observable_completeness,
    "observable.effect_spectrum": _chk_observable_spectrum,
    "sharp.same_stochastic": _chk_sharp_same_stochastic,
    "sharp.idempotent": _chk_sharp_idempotent,
    "conjugate.same_sharp": _chk_conjugate_same_sharp,
    "conjugate.commutative_identity": _chk_conjugate_commutative,
    "coarse_grain.validity": _chk_coarse_grain_valid,
    "uncertainty.equation": _chk_uncertainty_equation,
    "uncertainty.inequality": _chk_uncertainty_inequality,
    "correlation.conjugate_symmetry": _chk_correlation_symmetry,
    "statistics.sharp_consistency": _chk_statistics_sharp_consistency,
    "statistics.maximally_mixed": _chk_maximally_mixed_closed_form,
    "deviation.traceless": _chk_deviation_traceless,
    "commutator.imaginary_identity": _chk_commutator_identity,
    "instrument.adjointness": _chk_instrument_adjointness,
    "instrument.probability": _chk_instrument_probability,
    "instrument.channel": _chk_instrument_channel,
    "instrument.coarse_grain_measured": _chk_instrument_coarse_grain,
    "instrument.mean": _chk_instrument_mean,
    "sequential.completeness": _chk_sequential_completeness,
    "sequential.marginal": _chk_sequential_marginal,
    "conditioned.mean": _chk_conditioned_mean,
    "product.split_function": _chk_product_split_function,
}


def encode_instance(inst: dict) -> dict:
    """Lossless serialization of a trial bundle for replay."""
    out = {
        "dim": inst["dim"],
        "family": inst["family"],
        "H": encode_matrix(inst["H"]),
        "P": encode_matrix(inst["P"]),
        "C": encode_matrix(inst["C"]),
        "D": encode_matrix(inst["D"]),
        "rho": encode_state(inst["rho"]),
        "rho_low": encode_state(inst["rho_low"]),
        "A": encode_observable(inst["A"]),
        "B": encode_observable(inst["B"]),
        "A_comm": encode_observable(inst["A_comm"]),
        "bloch": [float(v) for v in inst["bloch"]],
        "f_obs": {repr(k): v for k, v in inst["f_obs"].items()},
        "f_inst": {repr(k): v for k, v in inst["f_inst"].items()},
        "g": {repr(k): v for k, v in inst["g"].items()},
        "h": {repr(k): v for k, v in inst["h"].items()},
    }
    payload = inst["inst_payload"]
    if inst["family"] == "trivial":
        out["omega"] = {repr(k): v for k, v in payload["omega"].items()}
    elif inst["family"] == "holevo":
        out["alphas"] = [encode_state(a) for a in payload["alphas"]]
    return out


def decode_instance(obj: dict) -> dict:
    """Rebuild a trial bundle; instruments are reconstructed from their
    family payload so the arithmetic path matches the original run."""
    family = obj["family"]
    A = decode_observable(obj["A"], "A")
    if family == "trivial":
        omega = {float(k): float(v) for k, v in obj["omega"].items()}
        instr = trivial_instrument(omega, obj["dim"])
        payload = {"omega": omega}
    elif family == "holevo":
        alphas = [decode_state(s, f"alphas[{i}]")
                  for i, s in enumerate(obj["alphas"])]
        instr = holevo_instrument(A, alphas)
        payload = {"alphas": alphas}
    else:
        instr = lueders_instrument(A)
        payload = {}
    return {
        "dim": obj["dim"],
        "family": family,
        "H": decode_matrix(obj["H"], "H"),
        "P": decode_matrix(obj["P"], "P"),
        "C": decode_matrix(obj["C"], "C"),
        "D": decode_matrix(obj["D"], "D"),
        "rho": decode_state(obj["rho"], "rho"),
        "rho_low": decode_state(obj["rho_low"], "rho_low"),
        "A": A,
        "B": decode_observable(obj["B"], "B"),
        "A_comm": decode_observable(obj["A_comm"], "A_comm"),
        "bloch": np.asarray(obj["bloch"], dtype=float),
        "inst": instr,
        "inst_payload": payload,
        "f_obs": {float(k): float(v) for k, v in obj["f_obs"].items()},
        "f_inst": {float(k): float(v) for k, v in obj["f_inst"].items()},
        "g": {float(k): float(v) for k, v in obj["g"].items()},
        "h": {float(k): float(v) for k, v in obj["h"].items()},
    }


@dataclass
class _PropertyStats:
    trials: int = 0
    violations: int = 0
    errors: int = 0
    max_residual: float = 0.0
    max_ratio: float = 0.0


def run_fuzz(config: RunConfig) -> dict:
    """Run the property battery; the returned summary is deterministic in
    the config and contains the worst instance for replay.

    A check that raises counts as a violated property (an instance its
    contract could not even be evaluated on) rather than aborting the run.
    """
    root = np.random.SeedSequence(config.seed)
    children = root.spawn(config.trials)
    props: dict[str, _PropertyStats] = {name: _PropertyStats()
                                        for name in CHECKS}
    worst = {"ratio": -1.0}
    for i in range(config.trials):
        rng = np.random.default_rng(children[i])
        dim = config.dims[i % len(config.dims)]
        family = FAMILIES[i % len(FAMILIES)]
        instance = build_instance(rng, dim, family)
        encoded = None
        for name, check in CHECKS.items():
            entry = props[name]
            entry.trials += 1
            try:
                residual, bound = check(instance, config)
            except Exception as exc:
                entry.errors += 1
                entry.violations += 1
                if encoded is None:
                    encoded = encode_instance(instance)
                worst = {"ratio": None, "property": name,
                         "residual": None, "bound": None,
                         "error": f"{type(exc).__name__}: {exc}",
                         "trial": i, "instance": encoded}
                continue
            entry.max_residual = max(entry.max_residual, residual)
            ratio = residual / bound if bound > 0 else math.inf
            entry.max_ratio = max(entry.max_ratio, ratio)
            if residual > bound:
                entry.violations += 1
            if worst["ratio"] is not None and ratio > worst["ratio"]:
                if encoded is None:
                    encoded = encode_instance(instance)
                worst = {"ratio": ratio, "property": name,
                         "residual": residual, "bound": bound,
                         "trial": i, "instance": encoded}
    total = sum(p.violations for p in props.values())
    return {
        "schema": SCHEMA_VERSION,
        "prng": PRNG_NAME,
        "seed": config.seed,
        "trials": config.trials,
        "dims": list(config.dims),
        "tolerances": {"lin": config.tol_lin, "psd": config.tol_psd,
                       "stat": config.tol_stat,
                       "cluster": config.cluster_tol},
        "properties": {name: {"trials": p.trials,
                              "violations": p.violations,
                              "errors": p.errors,
                              "max_residual": p.max_residual,
                              "max_ratio": p.max_ratio}
                       for name, p in props.items()},
        "violations": total,
        "worst": worst,
    }


def replay_instance(dump: dict, config: RunConfig | None = None) -> dict:
    """Re-evaluate a dumped worst instance; deterministic arithmetic makes
    the residual reproduce bit-for-bit."""
    config = config or RunConfig()
    name = dump["property"]
    if name not in CHECKS:
        raise ValueError(f"unknown property {name!r}")
    instance = decode_instance(dump["instance"])
    try:
        residual, bound = CHECKS[name](instance, config)
    except Exception as exc:
        return {"schema": SCHEMA_VERSION, "property": name,
                "error": f"{type(exc).__name__}: {exc}"}
    return {"schema": SCHEMA_VERSION, "property": name,
            "residual": residual, "bound": bound,
            "ratio": residual / bound if bound > 0 else math.inf}
