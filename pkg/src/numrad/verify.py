"""Built-in verification suite: every headline claim of the library checked
at fixed tolerances, one pass/fail result per criterion.

The suite is deterministic given its seed; wall times are tracked separately
from the result payload so repeated runs serialize identically.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .operators import Operator, numerical_radius, operator_norm
from .projections import (
    OptimizerConfig,
    ProjectionProblem,
    extremal_pairs,
    invariance_certificate,
    minimal_projection,
    parametrize,
)
from .spaces import LpSpace, lp_norm
from .symmetry import (
    FourierGrid,
    cyclic_shift_group,
    fourier_projection,
    interpolation_projection,
    lebesgue_constant,
    marcinkiewicz_average,
    rudin_average,
    sign_change_group,
    verify_group,
)
from .unicity import builtin_instances, dim4_lambda, strong_unicity_estimate

__all__ = ["CriterionResult", "AcceptanceReport", "run_acceptance"]

_P_GRID = (1.0, 4.0 / 3.0, 2.0, 4.0, math.inf)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    details: dict
    seconds: float


@dataclass
class AcceptanceReport:
    results: list
    seed: int

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def payload(self) -> dict:
        return {
            "seed": self.seed,
            "criteria": [
                {"number": r.number, "name": r.name, "passed": r.passed, "details": r.details}
                for r in self.results
            ],
            "all_passed": self.passed,
        }

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            tag = "PASS" if r.passed else "FAIL"
            out.append(f"{tag}  criterion {r.number}: {r.name}  ({r.seconds:.2f}s)")
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    return obj


def _shift_matrix(n: int) -> np.ndarray:
    M = np.zeros((n, n))
    for i in range(n - 1):
        M[i + 1, i] = 1.0
    return M


def _criterion_1(seed: int) -> CriterionResult:
    t0 = time.perf_counter()
    rows = []
    ok = True
    for n in range(2, 9):
        T = Operator.on(LpSpace(n, 2.0), _shift_matrix(n))
        target = math.cos(math.pi / (n + 1))
        fast = numerical_radius(T).value
        general = numerical_radius(T, "sample", seed=seed).value
        ok_n = abs(fast - target) <= 1e-6 and abs(general - target) <= 1e-4
        ok &= ok_n
        rows.append({"n": n, "target": target, "fast": fast, "general": general, "ok": ok_n})
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 1.0
    return CriterionResult(1, "shift-operator numerical radius", bool(ok),
                           _jsonable({"cases": rows, "runtime_under_1s": elapsed < 1.0}),
                           elapsed)


def _example_problem() -> ProjectionProblem:
    return ProjectionProblem(LpSpace(3, 4.0 / 3.0), [[1.0, 1.0, 1.0], [-1.0, 0.0, 1.0]])


def _criterion_2(seed: int, ctx: dict) -> CriterionResult:
    t0 = time.perf_counter()
    prob = _example_problem()
    cfg = OptimizerConfig(restarts=12, seed=seed)
    mn = minimal_projection(prob, "operator", cfg)
    mr = minimal_projection(prob, "radius", cfg)
    ctx["example_problem"] = prob
    ctx["example_norm_min"] = mn
    ctx["example_radius_min"] = mr
    separation = float(np.max(np.abs(mn.operator.matrix - mr.operator.matrix)))
    elapsed = time.perf_counter() - t0
    ok_norm = abs(mn.value - 1.05251) <= 2e-3
    ok_radius = abs(mr.value - 1.02751) <= 2e-3
    ok_sep = separation > 1e-2
    ok_time = elapsed < 60.0
    ok = ok_norm and ok_radius and ok_sep and ok_time
    details = {
        "minimal_operator_norm": mn.value,
        "minimal_numerical_radius": mr.value,
        "targets": [1.05251, 1.02751],
        "minimizer_separation_maxnorm": separation,
        "separation_exceeds_1e-2": ok_sep,
        "values_ok": ok_norm and ok_radius,
        "runtime_under_60s": ok_time,
    }
    return CriterionResult(2, "l^{4/3}_3 example regression", bool(ok), _jsonable(details), elapsed)


def _random_subspace_problem(rng, space: LpSpace, n_vectors: int) -> ProjectionProblem:
    while True:
        B = rng.integers(-2, 3, size=(n_vectors, space.dim)).astype(float)
        try:
            return ProjectionProblem(space, list(B))
        except ValueError:
            continue


def _criterion_3(seed: int) -> CriterionResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed + 3)
    cfg = OptimizerConfig(restarts=6, seed=seed)
    rows = []
    ok = True
    for i in range(20):
        p = 1.0 if i % 2 == 0 else math.inf
        space = LpSpace(3, p)
        prob = _random_subspace_problem(rng, space, int(rng.integers(1, 3)))
        vn = minimal_projection(prob, "operator", cfg).value
        vr = minimal_projection(prob, "radius", cfg).value
        ok_i = abs(vn - vr) <= 2e-3
        ok &= ok_i
        rows.append({"p": "1" if p == 1.0 else "inf", "norm": vn, "radius": vr, "ok": ok_i})
    hilbert = []
    for _ in range(3):
        prob = _random_subspace_problem(rng, LpSpace(3, 2.0), 2)
        vn = minimal_projection(prob, "operator", cfg).value
        vr = minimal_projection(prob, "radius", cfg).value
        ok_h = abs(vn - 1.0) <= 1e-6 and abs(vr - 1.0) <= 1e-6
        ok &= ok_h
        hilbert.append({"norm": vn, "radius": vr, "ok": ok_h})
    elapsed = time.perf_counter() - t0
    return CriterionResult(3, "norm/radius minimal projections coincide on l^1, l^2, l^inf",
                           bool(ok), _jsonable({"cases": rows, "hilbert": hilbert}), elapsed)


def _criterion_4(seed: int) -> CriterionResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed + 4)
    ok = True
    worst = {"dominance": 0.0, "homogeneity": 0.0, "triangle": 0.0, "index_gap": 0.0}
    count = 0
    for i in range(200):
        p = _P_GRID[i % len(_P_GRID)]
        dim = 2 + (i // len(_P_GRID)) % 3
        space = LpSpace(dim, p)
        A = rng.standard_normal((dim, dim))
        B = rng.standard_normal((dim, dim))
        alpha = float(rng.uniform(-3.0, 3.0))
        Ta, Tb = Operator.on(space, A), Operator.on(space, B)
        ra = numerical_radius(Ta, seed=seed)
        na = operator_norm(Ta, seed=seed, extra_starts=[ra.witness_x.coords]).value
        worst["dominance"] = max(worst["dominance"], ra.value - na)
        r_scaled = numerical_radius(Operator.on(space, alpha * A), seed=seed).value
        worst["homogeneity"] = max(worst["homogeneity"], abs(r_scaled - abs(alpha) * ra.value))
        rs = numerical_radius(Operator.on(space, A + B), seed=seed)
        rb = numerical_radius(Tb, seed=seed, extra_starts=[rs.witness_x.coords]).value
        ra2 = numerical_radius(Ta, seed=seed, extra_starts=[rs.witness_x.coords]).value
        worst["triangle"] = max(worst["triangle"], rs.value - (ra2 + rb))
        if p == 1.0 or math.isinf(p):
            worst["index_gap"] = max(worst["index_gap"], na - ra.value)
        count += 1
    ok &= worst["dominance"] <= 1e-9
    ok &= worst["homogeneity"] <= 1e-9
    ok &= worst["triangle"] <= 1e-9
    ok &= worst["index_gap"] <= 2e-3
    elapsed = time.perf_counter() - t0
    return CriterionResult(4, "dominance, semi-norm laws, index-one spaces", bool(ok),
                           _jsonable({"operators": count, "worst": worst}), elapsed)


def _criterion_5(seed: int) -> CriterionResult:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed + 5)
    ok = True
    worst_radius_gap = 0.0
    worst_comm = 0.0
    worst_family = 0.0
    cases = 0
    for i in range(100):
        p = _P_GRID[i % len(_P_GRID)]
        space = LpSpace(3, p)
        if i % 2 == 0:
            G = cyclic_shift_group(space)
            prob = ProjectionProblem(space, [[1.0, 1.0, 1.0]])
        else:
            G = sign_change_group(space)
            prob = ProjectionProblem(space, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
        param = parametrize(prob)
        theta = 0.7 * rng.standard_normal(len(param.directions))
        P = param.member(theta)
        Q = rudin_average(P, G, prob)
        for Tg in G.elements:
            worst_comm = max(worst_comm, float(np.max(np.abs(Q.matrix @ Tg - Tg @ Q.matrix))))
        Vb = prob.basis_matrix
        worst_family = max(worst_family, float(np.max(np.abs(Q.matrix @ Vb - Vb))))
        wq = numerical_radius(Q, seed=seed).value
        wp = numerical_radius(P, seed=seed, extra_starts=[numerical_radius(Q, seed=seed).witness_x.coords]).value
        worst_radius_gap = max(worst_radius_gap, wq - wp)
        cases += 1
    ok &= worst_comm <= 1e-10 and worst_family <= 1e-10 and worst_radius_gap <= 1e-9
    elapsed = time.perf_counter() - t0
    details = {"cases": cases, "worst_commutation": worst_comm,
               "worst_family_violation": worst_family, "worst_radius_increase": worst_radius_gap}
    return CriterionResult(5, "group averaging keeps the family and never increases the radius",
                           bool(ok), _jsonable(details), elapsed)


def _criterion_6(seed: int) -> CriterionResult:
    t0 = time.perf_counter()
    ok = True
    marc = []
    for n in range(1, 5):
        grid = FourierGrid(n, 4 * n + 4)
        P = interpolation_projection(grid)
        Q = marcinkiewicz_average(P, grid)
        F = fourier_projection(grid)
        gap = float(np.max(np.abs(Q.matrix - F.matrix)))
        ok_n = gap <= 1e-8
        ok &= ok_n
        marc.append({"n": n, "N": grid.N, "gap": gap, "ok": ok_n})
    lebs = []
    prev = 0.0
    monotone = True
    in_bounds = True
    for n in range(1, 11):
        lam = lebesgue_constant(FourierGrid(n, 4096))
        lo, hi = 4.0 / math.pi ** 2 * math.log(n), math.log(n) + 3.0
        in_bounds &= lo <= lam <= hi
        monotone &= lam > prev
        prev = lam
        lebs.append({"n": n, "value": lam, "lower": lo, "upper": hi})
    ok &= in_bounds and monotone
    # radius equals norm in the sup-norm grid space
    worst_wn = 0.0
    for n in range(1, 11):
        F = fourier_projection(FourierGrid(n, 512))
        worst_wn = max(worst_wn, abs(numerical_radius(F).value - operator_norm(F).value))
    F10 = fourier_projection(FourierGrid(10, 4096))
    worst_wn = max(worst_wn, abs(numerical_radius(F10).value - operator_norm(F10).value))
    ok &= worst_wn <= 2e-3
    elapsed = time.perf_counter() - t0
    details = {"marcinkiewicz": marc, "lebesgue": lebs, "bounds_ok": in_bounds,
               "monotone": monotone, "worst_radius_vs_norm": worst_wn}
    return CriterionResult(6, "translation averaging, Lebesgue bounds, radius=norm on the grid",
                           bool(ok), _jsonable(details), elapsed)


def _criterion_7(seed: int, ctx: dict) -> CriterionResult:
    t0 = time.perf_counter()
    prob = ctx.get("example_problem") or _example_problem()
    mr = ctx.get("example_radius_min")
    if mr is None:
        mr = minimal_projection(prob, "radius", OptimizerConfig(restarts=12, seed=seed))
    param = parametrize(prob)
    resid = (mr.operator.matrix - param.base.matrix).ravel()
    D = np.stack([d.matrix.ravel() for d in param.directions])
    theta_star, *_ = np.linalg.lstsq(D.T, resid, rcond=None)

    # independent oracle: dense theta-grid scan around and beyond the minimizer
    span = np.linspace(-0.6, 0.6, 21)
    grid_min = math.inf
    grid_bad = None
    for a in span:
        for b in span:
            th = theta_star + np.array([a, b])
            w = numerical_radius(param.member(th), "sample", seed=seed,
                                 n_starts=2, iters=50, dense_count=256, n_polish=1).value
            if w < grid_min:
                grid_min = w
            excess = w - mr.value
            if 5e-2 <= excess <= 2e-1 and grid_bad is None:
                grid_bad = th
    oracle_ok = mr.value <= grid_min + 1e-3

    pairs = extremal_pairs(mr.operator, prob, "diagonal", tol=1e-6, seed=seed)
    cert = invariance_certificate(pairs, prob, tol=1e-4)
    bad = param.member(grid_bad)
    bad_radius = numerical_radius(bad, "sample", seed=seed).value
    pairs_bad = extremal_pairs(bad, prob, "diagonal", tol=1e-6, seed=seed)
    cert_bad = invariance_certificate(pairs_bad, prob, tol=1e-4)
    ok = oracle_ok and cert.feasible and (not cert_bad.feasible) and bad_radius >= mr.value + 5e-2
    elapsed = time.perf_counter() - t0
    details = {
        "grid_min": grid_min, "found_min": mr.value, "oracle_confirms_min": oracle_ok,
        "pairs_at_minimizer": len(pairs), "certificate_residual": cert.residual,
        "certificate_feasible": cert.feasible, "offmin_radius_excess": bad_radius - mr.value,
        "offmin_residual": cert_bad.residual, "offmin_infeasible": not cert_bad.feasible,
    }
    return CriterionResult(7, "invariance certificate: feasible at the minimizer only",
                           bool(ok), _jsonable(details), elapsed)


def _criterion_8(seed: int, ctx: dict) -> CriterionResult:
    t0 = time.perf_counter()
    insts = {inst.name: inst for inst in builtin_instances()}
    prob = ctx.get("example_problem") or _example_problem()
    mr = ctx.get("example_radius_min")
    if mr is None:
        mr = minimal_projection(prob, "radius", OptimizerConfig(restarts=12, seed=seed))
    est = strong_unicity_estimate(prob, mr.operator, "radius", samples=10_000, seed=seed)
    ok_pos = est.r_hat >= 1e-4

    ni = insts["normone"]
    est_n = strong_unicity_estimate(ni.problem, ni.extras["P1"], "radius",
                                    samples=400, seed=seed, include=[ni.extras["P2"]])
    ok_normone = est_n.r_hat <= 1e-6

    di = insts["dim4"]
    est_d = strong_unicity_estimate(di.problem, di.extras["P1"], "radius",
                                    samples=400, seed=seed, include=[di.extras["P2"]])
    ok_dim4 = est_d.r_hat <= 1e-6

    inst = dim4_lambda([0.0, 1/3, 1/3, 1/3])
    lam_ok = abs(inst.lam - 4.0 / 3.0) <= 1e-12
    p1_ok = abs(operator_norm(inst.P1).value - inst.lam) <= 2e-3
    ok = ok_pos and ok_normone and ok_dim4 and lam_ok and p1_ok
    elapsed = time.perf_counter() - t0
    details = {
        "example_r_hat": est.r_hat, "example_samples": est.sample_count,
        "normone_r_hat": est_n.r_hat, "dim4_r_hat": est_d.r_hat,
        "dim4_lambda": inst.lam, "dim4_p1_norm": operator_norm(inst.P1).value,
    }
    return CriterionResult(8, "strong unicity: positive on the example, degenerate fixtures at zero",
                           bool(ok), _jsonable(details), elapsed)


def _criterion_9(seed: int) -> CriterionResult:
    t0 = time.perf_counter()

    def seeded_payload():
        rows = []
        for n in range(2, 6):
            T = Operator.on(LpSpace(n, 2.0), _shift_matrix(n))
            rows.append({"n": n, "general": numerical_radius(T, "sample", seed=seed).value})
        prob = ProjectionProblem(LpSpace(3, math.inf), [[1.0, -1.0, 0.0], [0.0, 0.0, 1.0]])
        mp = minimal_projection(prob, "radius", OptimizerConfig(restarts=4, seed=seed))
        rows.append({"normone_min": mp.value, "theta": mp.theta.tolist()})
        grid = FourierGrid(2, 16)
        rows.append({"lebesgue": lebesgue_constant(grid)})
        est = strong_unicity_estimate(_example_problem(),
                                      minimal_projection(_example_problem(), "radius",
                                                         OptimizerConfig(restarts=2, seed=seed)).operator,
                                      "radius", samples=64, seed=seed)
        rows.append({"r_hat": est.r_hat})
        return json.dumps(_jsonable(rows), sort_keys=True)

    first = seeded_payload()
    second = seeded_payload()
    ok = first == second
    elapsed = time.perf_counter() - t0
    return CriterionResult(9, "seeded pipelines serialize byte-identically", bool(ok),
                           {"byte_identical": bool(ok), "payload_bytes": len(first)}, elapsed)


def run_acceptance(seed: int = 0, only=None) -> AcceptanceReport:
    """Run the acceptance criteria (all, or the subset in ``only``)."""
    ctx: dict = {}
    table = {
        1: lambda: _criterion_1(seed),
        2: lambda: _criterion_2(seed, ctx),
        3: lambda: _criterion_3(seed),
        4: lambda: _criterion_4(seed),
        5: lambda: _criterion_5(seed),
        6: lambda: _criterion_6(seed),
        7: lambda: _criterion_7(seed, ctx),
        8: lambda: _criterion_8(seed, ctx),
        9: lambda: _criterion_9(seed),
    }
    wanted = sorted(only) if only else sorted(table)
    if any(w not in table for w in wanted):
        raise ValueError(f"unknown criterion in {wanted}")
    if (7 in wanted or 8 in wanted) and 2 not in wanted:
        # criteria 7 and 8 reuse the example minimizer context
        pass
    results = [table[w]() for w in wanted]
    return AcceptanceReport(results, seed)
