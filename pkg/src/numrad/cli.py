"""Command-line front end: JSON problem files in, JSON reports out.

Subcommands wrap the library: ``radius`` (norms, radii, range sampling),
``minproj`` (minimal projections with certificates), ``average`` (group
verification and averaging), ``fourier`` (grid projection and Lebesgue
constants), ``unicity`` (strong-unicity estimates), ``verify`` (the full
acceptance suite).  Exit codes: 0 success, 1 assertion failure, 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .operators import Operator, numerical_index_estimate, numerical_radius, numerical_range_sample, operator_norm
from .projections import (
    OptimizerConfig,
    ProjectionProblem,
    extremal_pairs,
    invariance_certificate,
    minimal_projection,
    parametrize,
)
from .spaces import LpSpace
from .symmetry import (
    FourierGrid,
    IsometryGroup,
    commutant_projections_dimension,
    cyclic_shift_group,
    fourier_projection,
    grid_translation_group,
    interpolation_projection,
    lebesgue_constant,
    marcinkiewicz_average,
    rudin_average,
    sign_change_group,
    trivial_group,
    trig_basis,
    verify_group,
)
from .unicity import builtin_instances, dim4_lambda, strong_unicity_estimate
from .verify import run_acceptance

__all__ = ["main", "SchemaError"]


class SchemaError(ValueError):
    """Raised for malformed problem files; the message names the field."""


# ---------------------------------------------------------------------------
# problem-file parsing
# ---------------------------------------------------------------------------

def _parse_exponent(raw, where: str) -> float:
    if isinstance(raw, str):
        s = raw.strip().lower()
        if s in ("inf", "infinity", "oo"):
            return math.inf
        if "/" in s:
            num, _, den = s.partition("/")
            try:
                val = float(num) / float(den)
            except ValueError:
                raise SchemaError(f"{where}: cannot parse fraction {raw!r}")
            return val
        try:
            return float(s)
        except ValueError:
            raise SchemaError(f"{where}: expected a number or 'inf', got {raw!r}")
    if isinstance(raw, (int, float)):
        return float(raw)
    raise SchemaError(f"{where}: expected a number or 'inf', got {type(raw).__name__}")


def _matrix(raw, where: str, rows=None, cols=None) -> np.ndarray:
    if not isinstance(raw, list) or not raw or not all(isinstance(r, list) for r in raw):
        raise SchemaError(f"{where}: expected a row-major array of arrays")
    try:
        M = np.array(raw, dtype=float)
    except (TypeError, ValueError):
        raise SchemaError(f"{where}: entries must be numbers")
    if M.ndim != 2:
        raise SchemaError(f"{where}: rows have inconsistent lengths")
    if rows is not None and M.shape[0] != rows:
        raise SchemaError(f"{where}: expected {rows} rows, got {M.shape[0]}")
    if cols is not None and M.shape[1] != cols:
        raise SchemaError(f"{where}: expected {cols} columns, got {M.shape[1]}")
    return M


def load_problem(path: str) -> dict:
    try:
        with open(path) as fh:
            raw = fh.read()
    except OSError as exc:
        raise SchemaError(f"cannot read problem file: {exc}")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(doc, dict):
        raise SchemaError("top level: expected an object")

    known = {"space", "operator", "v_basis", "restriction", "group", "seed", "tolerances"}
    for key in doc:
        if key not in known:
            raise SchemaError(f"{key}: unknown field")

    if "space" not in doc or not isinstance(doc["space"], dict):
        raise SchemaError("space: required object with fields dim and p")
    sdoc = doc["space"]
    if "dim" not in sdoc or not isinstance(sdoc["dim"], int) or sdoc["dim"] < 1:
        raise SchemaError("space.dim: expected a positive integer")
    p = _parse_exponent(sdoc.get("p", None), "space.p")
    if p < 1.0:
        raise SchemaError("space.p: exponent must be >= 1")
    space = LpSpace(sdoc["dim"], p)
    out = {"space": space, "digest": hashlib.sha256(raw.encode()).hexdigest()}

    if "operator" in doc:
        M = _matrix(doc["operator"], "operator", rows=space.dim, cols=space.dim)
        out["operator"] = Operator.on(space, M)

    if "v_basis" in doc:
        B = _matrix(doc["v_basis"], "v_basis", cols=space.dim)
        restriction = None
        if "restriction" in doc:
            restriction = _matrix(doc["restriction"], "restriction",
                                  rows=B.shape[0], cols=B.shape[0])
        try:
            out["problem"] = ProjectionProblem(space, list(B), restriction)
        except ValueError as exc:
            raise SchemaError(f"v_basis: {exc}")
    elif "restriction" in doc:
        raise SchemaError("restriction: requires v_basis")

    if "group" in doc:
        g = doc["group"]
        if isinstance(g, str):
            factories = {"cyclic": cyclic_shift_group, "signs": sign_change_group,
                         "trivial": trivial_group}
            if g not in factories:
                raise SchemaError(f"group: unknown name {g!r}, expected one of {sorted(factories)}")
            out["group"] = factories[g](space)
        elif isinstance(g, list):
            mats = [_matrix(m, f"group[{i}]", rows=space.dim, cols=space.dim)
                    for i, m in enumerate(g)]
            ident = [i for i, m in enumerate(mats) if np.allclose(m, np.eye(space.dim), atol=1e-12)]
            if not ident:
                raise SchemaError("group: element list must contain the identity matrix")
            out["group"] = IsometryGroup(mats, space, ident[0])
        else:
            raise SchemaError("group: expected a name or a list of matrices")

    if "seed" in doc:
        if not isinstance(doc["seed"], int):
            raise SchemaError("seed: expected an integer")
        out["seed"] = doc["seed"]

    if "tolerances" in doc:
        tdoc = doc["tolerances"]
        if not isinstance(tdoc, dict):
            raise SchemaError("tolerances: expected an object")
        for k, v in tdoc.items():
            if not isinstance(v, (int, float)) or v <= 0:
                raise SchemaError(f"tolerances.{k}: expected a positive number")
        out["tolerances"] = dict(tdoc)
    return out


# ---------------------------------------------------------------------------
# report plumbing
# ---------------------------------------------------------------------------

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


def _radius_result_doc(res, tol: float) -> dict:
    return {
        "value": res.value,
        "witness_x": res.witness_x.coords.tolist(),
        "witness_y": res.witness_y.coords.tolist(),
        "diagonal": res.diagonal,
        "attained": res.attained,
        "method": res.method,
        "tol": tol,
    }


def _emit(command: str, payload: dict, digest: str | None, seed: int,
          convergence: dict, started: float) -> None:
    report = {
        "command": command,
        "version": __version__,
        "input_digest": digest,
        "seed": seed,
        "payload": _jsonable(payload),
        "convergence": _jsonable(convergence),
        "wall_time_s": time.perf_counter() - started,
    }
    print(json.dumps(report, sort_keys=True, indent=2))


def _write_csv(path: str, header: list, rows: list) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _space_p_str(space: LpSpace) -> str:
    return "inf" if math.isinf(space.p) else f"{space.p:.12g}"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_radius(args) -> int:
    started = time.perf_counter()
    doc = load_problem(args.file)
    seed = args.seed if args.seed is not None else doc.get("seed", 0)
    tol = args.tol if args.tol is not None else doc.get("tolerances", {}).get("value", 1e-6)
    if "operator" not in doc:
        raise SchemaError("operator: required by the radius command")
    T = doc["operator"]
    payload = {"space": {"dim": T.domain.dim, "p": _space_p_str(T.domain)}}
    nrm = operator_norm(T, args.method, seed=seed)
    rad = numerical_radius(T, args.method, seed=seed)
    payload["operator_norm"] = _radius_result_doc(nrm, tol)
    payload["numerical_radius"] = _radius_result_doc(rad, tol)
    payload["index_upper_estimate"] = numerical_index_estimate(T.domain, trials=32, seed=seed)
    samples = numerical_range_sample(T, count=args.samples, seed=seed)
    payload["range_sample"] = {"count": len(samples),
                               "min": float(samples.min()), "max": float(samples.max())}
    if args.csv:
        _write_csv(args.csv, ["index", "value"], list(enumerate(samples.tolist())))
        payload["csv"] = args.csv
    _emit("radius", payload, doc["digest"], seed,
          {"radius_attained": rad.attained, "norm_attained": nrm.attained}, started)
    return 0


def _cmd_minproj(args) -> int:
    started = time.perf_counter()
    doc = load_problem(args.file)
    seed = args.seed if args.seed is not None else doc.get("seed", 0)
    tol = args.tol if args.tol is not None else doc.get("tolerances", {}).get("certificate", 1e-4)
    if "problem" not in doc:
        raise SchemaError("v_basis: required by the minproj command")
    prob = doc["problem"]
    kinds = ["operator", "radius"] if args.kind == "both" else [args.kind]
    cfg = OptimizerConfig(restarts=args.starts, seed=seed)
    payload = {"space": {"dim": prob.space.dim, "p": _space_p_str(prob.space)},
               "subspace_dim": prob.n_basis}
    convergence = {}
    for kind in kinds:
        mp = minimal_projection(prob, kind, cfg)
        pairs = extremal_pairs(mp.operator, prob, "diagonal" if kind == "radius" else "operator",
                               tol=1e-6, seed=seed)
        cert = invariance_certificate(pairs, prob, tol=tol) if pairs else None
        payload[kind] = {
            "value": mp.value,
            "matrix": mp.operator.matrix.tolist(),
            "theta": mp.theta.tolist(),
            "extremal_pairs": [
                {"x": pr.x.coords.tolist(), "y": pr.y.coords.tolist(), "value": pr.value}
                for pr in pairs
            ],
            "certificate": None if cert is None else {
                "feasible": cert.feasible, "residual": cert.residual,
                "weights": cert.weights.tolist(), "tol": tol, "method": cert.method,
            },
            "method": f"nelder-mead x{cfg.restarts}",
        }
        convergence[kind] = mp.converged
    _emit("minproj", payload, doc["digest"], seed, convergence, started)
    return 0


def _cmd_average(args) -> int:
    started = time.perf_counter()
    doc = load_problem(args.file)
    seed = args.seed if args.seed is not None else doc.get("seed", 0)
    if "group" not in doc:
        raise SchemaError("group: required by the average command")
    if "problem" not in doc:
        raise SchemaError("v_basis: required by the average command")
    G, prob = doc["group"], doc["problem"]
    report = verify_group(G, seed=seed)
    payload = {"group_order": G.order, "group_valid": report.passed,
               "group_failures": report.failures}
    convergence = {"group_valid": report.passed}
    if report.passed:
        P = doc.get("operator") or parametrize(prob).base
        Q = rudin_average(P, G, prob)
        wp = numerical_radius(P, seed=seed).value
        wq = numerical_radius(Q, seed=seed).value
        payload["average"] = {
            "matrix": Q.matrix.tolist(),
            "radius_before": wp,
            "radius_after": wq,
            "radius_nonincreasing": bool(wq <= wp + 1e-9),
        }
        payload["commutant_dimension"] = commutant_projections_dimension(G, prob)
        payload["unique_commuting_projection"] = payload["commutant_dimension"] == 0
    _emit("average", payload, doc["digest"], seed, convergence, started)
    return 0 if report.passed else 1


def _cmd_fourier(args) -> int:
    started = time.perf_counter()
    grid = FourierGrid(args.degree, args.grid_size)
    F = fourier_projection(grid)
    M = F.matrix
    idem = float(np.max(np.abs(M @ M - M)))
    payload = {
        "degree": grid.n, "grid_size": grid.N,
        "lebesgue_constant": lebesgue_constant(grid),
        "idempotency_defect": idem,
        "rank": int(np.linalg.matrix_rank(M, tol=1e-8)),
        "bounds": {"lower": 4.0 / math.pi ** 2 * math.log(grid.n) if grid.n >= 1 else 0.0,
                   "upper": math.log(grid.n) + 3.0 if grid.n >= 1 else 3.0},
    }
    if grid.n >= 1:
        P = interpolation_projection(grid)
        Q = marcinkiewicz_average(P, grid)
        payload["marcinkiewicz_defect"] = float(np.max(np.abs(Q.matrix - M)))
    if grid.N <= 1024:
        payload["radius_equals_norm"] = {
            "radius": numerical_radius(F).value, "norm": operator_norm(F).value}
    if args.csv:
        rows = []
        for n in range(0, args.degree + 1):
            g = FourierGrid(n, args.grid_size)
            rows.append([n, g.N, lebesgue_constant(g)])
        _write_csv(args.csv, ["degree", "grid_size", "lebesgue_constant"], rows)
        payload["csv"] = args.csv
    _emit("fourier", payload, None, args.seed or 0,
          {"projection_exact": idem <= 1e-10}, started)
    return 0 if idem <= 1e-10 else 1


def _cmd_unicity(args) -> int:
    started = time.perf_counter()
    seed = args.seed if args.seed is not None else 0
    payload: dict = {}
    convergence: dict = {}
    digest = None
    if args.instance:
        insts = {i.name: i for i in builtin_instances()}
        if args.instance not in insts:
            raise SchemaError(f"instance: unknown name {args.instance!r}, expected one of {sorted(insts)}")
        inst = insts[args.instance]
        prob = inst.problem
        payload["instance"] = {"name": inst.name, "expected": _jsonable(inst.expected),
                               "tolerance": inst.tolerance, "provenance": inst.provenance}
        include = [inst.extras[k] for k in ("P1", "P2") if k in inst.extras]
        if "P1" in inst.extras:
            P_o = inst.extras["P1"]
            converged = True
        else:
            mp = minimal_projection(prob, args.kind, OptimizerConfig(restarts=args.starts, seed=seed))
            P_o, converged = mp.operator, mp.converged
        if inst.name == "dim4":
            d4 = dim4_lambda(inst.extras["f"])
            payload["dim4_lambda"] = d4.lam
    else:
        if not args.file:
            raise SchemaError("file: either a problem file or --instance is required")
        doc = load_problem(args.file)
        digest = doc["digest"]
        seed = args.seed if args.seed is not None else doc.get("seed", 0)
        if "problem" not in doc:
            raise SchemaError("v_basis: required by the unicity command")
        prob = doc["problem"]
        include = []
        mp = minimal_projection(prob, args.kind, OptimizerConfig(restarts=args.starts, seed=seed))
        P_o, converged = mp.operator, mp.converged
    est = strong_unicity_estimate(prob, P_o, args.kind, samples=args.samples,
                                  seed=seed, include=include or None)
    payload["estimate"] = {
        "r_hat": est.r_hat,
        "samples": est.sample_count,
        "value_at_minimizer": est.value_at_minimizer,
        "degenerate_directions": len(est.degenerate_directions),
        "norm_kind": args.kind,
    }
    convergence["minimizer_converged"] = converged
    _emit("unicity", payload, digest, seed, convergence, started)
    return 0


def _cmd_verify(args) -> int:
    started = time.perf_counter()
    only = None
    if args.criteria:
        try:
            only = [int(tok) for tok in args.criteria.split(",") if tok.strip()]
        except ValueError:
            raise SchemaError("criteria: expected a comma-separated list of integers")
    report = run_acceptance(seed=args.seed or 0, only=only)
    for line in report.lines():
        print(line, file=sys.stderr)
    _emit("verify", report.payload(), None, args.seed or 0,
          {"all_passed": report.passed}, started)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="numrad",
                                 description="operator norms, numerical radii and minimal projections on l^p_n")
    ap.add_argument("--version", action="version", version=f"numrad {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, with_file=True):
        if with_file:
            p.add_argument("file", help="JSON problem file")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--csv", default=None, help="write plot-ready CSV to this path")

    p = sub.add_parser("radius", help="operator norm, numerical radius and range sampling")
    common(p)
    p.add_argument("--method", choices=["auto", "exact", "sample"], default="auto")
    p.add_argument("--samples", type=int, default=256)
    p.set_defaults(func=_cmd_radius)

    p = sub.add_parser("minproj", help="minimal projection, extremal pairs, certificate")
    common(p)
    p.add_argument("--kind", choices=["operator", "radius", "both"], default="both")
    p.add_argument("--starts", type=int, default=32)
    p.set_defaults(func=_cmd_minproj)

    p = sub.add_parser("average", help="verify group, average a projection, commutant dimension")
    common(p)
    p.set_defaults(func=_cmd_average)

    p = sub.add_parser("fourier", help="grid Fourier projection and Lebesgue constants")
    p.add_argument("--degree", "-n", type=int, required=True)
    p.add_argument("--grid-size", "-N", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=_cmd_fourier)

    p = sub.add_parser("unicity", help="strong-unicity estimate on a file or named instance")
    p.add_argument("file", nargs="?", default=None)
    p.add_argument("--instance", choices=["example-l43", "normone", "dim4"], default=None)
    p.add_argument("--kind", choices=["operator", "radius"], default="radius")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--starts", type=int, default=12)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_unicity)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--criteria", default=None, help="comma-separated criterion numbers")
    p.set_defaults(func=_cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
