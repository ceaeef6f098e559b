"""Strong-unicity constants for minimal extensions, plus built-in instances.

A minimizer P_o is strongly unique when every competitor pays linearly:
||P||_w >= ||P_o||_w + r ||P - P_o||_w for some r > 0.  The estimator samples
the family around a certified minimizer and reports the smallest observed
growth ratio, an upper bound on the true r.  Directions that the radius
semi-norm cannot see (||P - P_o||_w ~ 0 with ||P - P_o|| > 0) are reported
separately instead of being divided by.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .operators import (
    Operator,
    _opnorm_batch,
    _radius_batch,
    numerical_radius,
    operator_norm,
)
from .projections import ProjectionProblem, parametrize
from .spaces import LpSpace, _normalize_rows, _sphere_vertices

__all__ = [
    "UnicityEstimate",
    "Dim4Instance",
    "BuiltinInstance",
    "strong_unicity_estimate",
    "dim4_lambda",
    "builtin_instances",
]


@dataclass
class UnicityEstimate:
    r_hat: float
    sample_count: int
    worst_direction: Operator
    degenerate_directions: list
    value_at_minimizer: float


def _exact_value(M: np.ndarray, space: LpSpace, norm_kind: str) -> float:
    T = Operator.on(space, M)
    res = operator_norm(T) if norm_kind == "operator" else numerical_radius(T)
    return res.value


def strong_unicity_estimate(problem: ProjectionProblem, P_o: Operator,
                            norm_kind: str = "radius", samples: int = 1000,
                            seed: int = 0, include=None) -> UnicityEstimate:
    """r_hat = min over sampled P != P_o of (||P|| - ||P_o||) / ||P - P_o||,
    both measured in the chosen norm kind.

    Samples mix local perturbations at radii 1e-3 .. 1 with global draws from
    the family; ``include`` adds explicit competitors (for instance a known
    second minimizer).  Candidate minima are re-evaluated with the strong
    estimator before the minimum is taken.
    """
    if norm_kind not in ("operator", "radius"):
        raise ValueError(f"norm_kind must be 'operator' or 'radius', got {norm_kind!r}")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    space = problem.space
    p = space.p
    param = parametrize(problem)
    dirs = np.stack([D.matrix.ravel() for D in param.directions]) if param.directions else None
    if dirs is None:
        raise ValueError("the family is a single point; no sample directions exist")
    k = len(param.directions)

    # P_o must belong to the family
    resid = (P_o.matrix - param.base.matrix).ravel()
    theta_o, *_ = np.linalg.lstsq(dirs.T, resid, rcond=None)
    if np.max(np.abs(dirs.T @ theta_o - resid)) > 1e-8:
        raise ValueError("P_o does not belong to the projection family")

    rng = np.random.default_rng(seed)
    radii = np.logspace(-3.0, 0.0, 4)
    n_local = samples // 2
    n_dirs = max(n_local // len(radii), 1)
    U = rng.standard_normal((n_dirs, k))
    U /= np.linalg.norm(U, axis=1)[:, None]
    thetas = [theta_o + rho * u for rho in radii for u in U]
    n_global = samples - len(thetas)
    thetas += [theta_o + 1.5 * rng.standard_normal(k) for _ in range(n_global)]

    mats = [param.member_matrix(th) for th in thetas]
    if include is not None:
        for Q in include:
            mats.append(Q.matrix if isinstance(Q, Operator) else np.asarray(Q, dtype=float))
    mats = np.array(mats)

    fast = p in (1.0, 2.0) or math.isinf(p)
    M_o = P_o.matrix
    diffs = mats - M_o[None, :, :]

    if fast:
        v_o = _exact_value(M_o, space, norm_kind)
        vals = np.array([_exact_value(M, space, norm_kind) for M in mats])
        dens = np.array([_exact_value(D, space, norm_kind) for D in diffs])
    else:
        starts = [_sphere_vertices(space.dim, p)]
        starts.append(_normalize_rows(rng.standard_normal((8, space.dim)), p))
        res_o = (operator_norm if norm_kind == "operator" else numerical_radius)(
            P_o, "sample", seed=seed)
        starts.append(res_o.witness_x.coords[None, :])
        starts = np.vstack(starts)
        batch = _opnorm_batch if norm_kind == "operator" else _radius_batch
        stack = np.concatenate([M_o[None, :, :], mats, diffs])
        args = (p, p, starts) if norm_kind == "operator" else (p, starts)
        out = []
        for chunk in np.array_split(stack, max(len(stack) // 2048, 1)):
            out.append(batch(chunk, *args))
        out = np.concatenate(out)
        v_o, vals, dens = out[0], out[1: 1 + len(mats)], out[1 + len(mats):]

    nums = vals - v_o
    degenerate = []
    ratios = np.full(len(mats), np.inf)
    for i in range(len(mats)):
        if dens[i] <= 1e-10:
            opn = operator_norm(Operator.on(space, diffs[i])).value if fast else \
                float(np.max(np.abs(diffs[i])))
            if opn > 1e-6:
                degenerate.append(Operator.on(space, diffs[i]))
            continue  # either degenerate direction or the sample equals P_o
        ratios[i] = nums[i] / dens[i]

    if not np.any(np.isfinite(ratios)):
        raise ValueError("no valid sample directions")

    # re-score the apparent minima with the strong per-operator evaluators
    order = np.argsort(ratios, kind="stable")[: min(50, len(mats))]
    evaluate = (lambda M: operator_norm(Operator.on(space, M), "sample", seed=seed).value) \
        if (norm_kind == "operator" and not fast) else \
        (lambda M: numerical_radius(Operator.on(space, M), "sample", seed=seed).value) \
        if not fast else (lambda M: _exact_value(M, space, norm_kind))
    v_o_ref = evaluate(M_o)
    best = (math.inf, 0)
    for i in order:
        if not np.isfinite(ratios[i]):
            continue
        den = evaluate(diffs[i])
        if den <= 1e-10:
            continue
        ratio = (evaluate(mats[i]) - v_o_ref) / den
        if ratio < best[0]:
            best = (ratio, i)
    r_hat, i_min = best
    return UnicityEstimate(float(r_hat), len(mats), Operator.on(space, diffs[i_min]),
                           degenerate, float(v_o_ref))


# ---------------------------------------------------------------------------
# built-in instances
# ---------------------------------------------------------------------------

@dataclass
class Dim4Instance:
    lam: float
    P1: Operator
    P2: Operator
    y: np.ndarray
    z: np.ndarray


def dim4_lambda(f) -> Dim4Instance:
    """Minimal-norm level for projections of l^inf_n onto the hyperplane ker f,
    f = (0, f_2, .., f_n), f_i > 0, sum f_i = 1, f_i < 1/2:

        lam = 1 + (sum_i f_i / (1 - 2 f_i))^(-1)

    Also builds the two equal-norm extensions P_i x = x - f(x) y and
    P_2 x = x - f(x) z with y_i = (lam - 1) / (1 - 2 f_i), z = (0, y_2, ..),
    which both attain lam in operator norm and numerical radius.
    """
    f = np.asarray(f, dtype=float)
    n = len(f)
    if n < 2:
        raise ValueError("f must have length >= 2")
    if f[0] != 0.0:
        raise ValueError("f_1 must be zero")
    if np.any(f[1:] <= 0.0):
        raise ValueError("f_i must be positive for i >= 2")
    if abs(f[1:].sum() - 1.0) > 1e-12:
        raise ValueError("the entries of f must sum to 1")
    if np.any(f >= 0.5):
        raise ValueError("every f_i must be < 1/2")
    lam = 1.0 + 1.0 / float(np.sum(f[1:] / (1.0 - 2.0 * f[1:])))
    y = (lam - 1.0) / (1.0 - 2.0 * f)
    z = y.copy()
    z[0] = 0.0
    space = LpSpace(n, math.inf)
    P1 = Operator.on(space, np.eye(n) - np.outer(y, f))
    P2 = Operator.on(space, np.eye(n) - np.outer(z, f))
    return Dim4Instance(lam, P1, P2, y, z)


@dataclass
class BuiltinInstance:
    name: str
    problem: ProjectionProblem
    expected: dict
    tolerance: float
    provenance: str
    extras: dict = field(default_factory=dict)


def builtin_instances() -> list[BuiltinInstance]:
    """The three reference projection problems with their expected values."""
    out = []

    sp = LpSpace(3, 4.0 / 3.0)
    prob = ProjectionProblem(sp, [[1.0, 1.0, 1.0], [-1.0, 0.0, 1.0]])
    out.append(BuiltinInstance(
        name="example-l43",
        problem=prob,
        expected={"operator": 1.05251, "radius": 1.02751},
        tolerance=2e-3,
        provenance="reference value: distinct norm and radius minimizers on l^{4/3}_3",
        extras={
            # fitted second dual coordinates of the two minimizers
            # u(d) = ((1-d)/2, d, (1-d)/2) with u1 = (-1/2, 0, 1/2) shared
            "d_norm": 0.4209425497,
            "d_radius": 0.4229699284,
        },
    ))

    spi = LpSpace(3, math.inf)
    prob1 = ProjectionProblem(spi, [[1.0, -1.0, 0.0], [0.0, 0.0, 1.0]])
    e1 = np.zeros(3); e1[0] = 1.0
    e2 = np.zeros(3); e2[1] = 1.0
    fvec = np.array([1.0, 1.0, 0.0])
    out.append(BuiltinInstance(
        name="normone",
        problem=prob1,
        expected={"operator": 1.0, "radius": 1.0},
        tolerance=1e-6,
        provenance="two distinct norm-one projections onto ker(x1 + x2) in l^inf_3",
        extras={
            "P1": Operator.on(spi, np.eye(3) - np.outer(e1, fvec)),
            "P2": Operator.on(spi, np.eye(3) - np.outer(e2, fvec)),
        },
    ))

    f = np.array([0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0])
    inst = dim4_lambda(f)
    sp4 = LpSpace(4, math.inf)
    basis = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, -1.0, 0.0], [0.0, 0.0, 1.0, -1.0]]
    prob4 = ProjectionProblem(sp4, basis)
    out.append(BuiltinInstance(
        name="dim4",
        problem=prob4,
        expected={"operator": inst.lam, "radius": inst.lam},
        tolerance=2e-3,
        provenance="hyperplane instance with two distinct minimizers in l^inf_4",
        extras={"f": f, "lambda": inst.lam, "P1": inst.P1, "P2": inst.P2},
    ))
    return out
