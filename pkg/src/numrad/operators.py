"""Operators between l^p spaces: operator norm, numerical range and radius.

The numerical radius ||T||_w is the supremum of |y(Tx)| over unit vectors x
and norm-one functionals y with y(x) = 1.  Exact paths exist for p in
{1, 2, inf}:

* p = 2: the real numerical radius equals the spectral radius of the
  symmetric part (T + T')/2.
* p = 1: the supremum over diagonal pairs is attained at a coordinate vector
  x = +-e_j with the face-extreme functional sign-aligned to column j, giving
  exactly the maximal absolute column sum (hence ||T||_w = ||T|| on l^1_n).
* p = inf: attained at a sign vector x matching a row of T with the
  coordinate functional of that row, giving the maximal absolute row sum.

For other exponents the supremum is located by deterministic multi-start
projected ascent over the unit sphere with coordinate-search polishing.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .eigen import jacobi_eigh
from .spaces import (
    Functional,
    LpSpace,
    Vector,
    _lp_norm_rows,
    _normalize_rows,
    _sphere_vertices,
    ext_functionals,
    lp_norm,
    pair,
    sphere_sample,
)

__all__ = [
    "Operator",
    "RadiusResult",
    "operator_norm",
    "numerical_radius",
    "numerical_range_sample",
    "numerical_index_estimate",
]

_ENUM_LIMIT = 20  # sign-vertex enumeration cap for exact l^inf operator norms


@dataclass(eq=False)
class Operator:
    """A dense matrix acting from ``domain`` to ``codomain``."""

    matrix: np.ndarray
    domain: LpSpace
    codomain: LpSpace

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=float)
        if M.ndim != 2:
            raise ValueError(f"operator matrix must be two-dimensional, got shape {M.shape}")
        if M.shape != (self.codomain.dim, self.domain.dim):
            raise ValueError(
                f"matrix shape {M.shape} does not match codomain dim {self.codomain.dim} "
                f"x domain dim {self.domain.dim}"
            )
        self.matrix = M

    @property
    def square(self) -> bool:
        return self.domain.dim == self.codomain.dim and self.domain.p == self.codomain.p

    def apply(self, x) -> Vector:
        coords = x.coords if isinstance(x, Vector) else np.asarray(x, dtype=float)
        return Vector(self.matrix @ coords, self.codomain)

    @staticmethod
    def on(space: LpSpace, matrix) -> "Operator":
        return Operator(np.asarray(matrix, dtype=float), space, space)

    @staticmethod
    def identity(space: LpSpace) -> "Operator":
        return Operator(np.eye(space.dim), space, space)


@dataclass
class RadiusResult:
    """A norm or radius value together with a witness pair that attains it."""

    value: float
    witness_x: Vector
    witness_y: Functional
    diagonal: bool
    attained: bool = True
    method: str = ""

    def reevaluate(self, T: Operator) -> float:
        """|y(T x)| at the stored witnesses."""
        return abs(pair(self.witness_y, T.apply(self.witness_x)))


# ---------------------------------------------------------------------------
# multi-start projected ascent engine (1 < p < inf, and generic fallback)
# ---------------------------------------------------------------------------

def _safe_pow(x: np.ndarray, e: float, floor: float = 1e-7) -> np.ndarray:
    # |x|^e with a floor guarding negative exponents at zero coordinates
    a = np.abs(x)
    if e < 0.0:
        a = np.where(a < floor, floor, a)
    return a ** e


def _diag_values(M: np.ndarray, X: np.ndarray, p: float) -> np.ndarray:
    """phi(x) = <Mx, ext x> for unit-p-norm rows of X (1 < p < inf)."""
    U = np.sign(X) * np.abs(X) ** (p - 1.0)
    return np.einsum("...i,...i->...", X @ M.T, U)


def _start_block(M: np.ndarray, p: float, objective, n_starts: int, seed: int,
                 dense_count: int, dense_top: int, extra) -> np.ndarray:
    dim = M.shape[1]
    rng = np.random.default_rng(seed)
    rows = [_sphere_vertices(dim, p)]
    if extra is not None and len(extra):
        E = np.asarray(extra, dtype=float).reshape(-1, dim)
        E = E[_lp_norm_rows(E, p) > 1e-12]
        if len(E):
            rows.append(_normalize_rows(E, p))
    if dense_count:
        D = rng.standard_normal((dense_count, dim))
        D = _normalize_rows(D[_lp_norm_rows(D, p) > 1e-12], p)
        vals = objective(D)
        rows.append(D[np.argsort(-vals, kind="stable")[:dense_top]])
    if n_starts:
        G = rng.standard_normal((n_starts, dim))
        rows.append(_normalize_rows(G[_lp_norm_rows(G, p) > 1e-12], p))
    return np.vstack(rows)


def _coord_polish(batch_fun, x: np.ndarray, p: float, h0: float = 0.1, hmin: float = 1e-10):
    """Axis-aligned sphere search; finishes ascent across nonsmooth kinks.

    ``batch_fun`` evaluates the objective on rows of a matrix.
    """
    x = x.copy()
    f = float(batch_fun(x[None, :])[0])
    h = h0
    dim = len(x)
    steps = np.vstack([np.eye(dim), -np.eye(dim)])
    while h > hmin:
        C = x[None, :] + h * steps
        nrm = _lp_norm_rows(C, p)
        C = C[nrm > 1e-12] / nrm[nrm > 1e-12][:, None]
        vals = batch_fun(C)
        j = int(np.argmax(vals))
        if vals[j] > f + 1e-18:
            x, f = C[j], float(vals[j])
        else:
            h *= 0.5
    return f, x


def _ascend(X: np.ndarray, value_fn, grad_fn, p: float, iters: int):
    """Projected subgradient ascent with per-start backtracking step control."""
    f = value_fn(X)
    alpha = np.full(len(X), 0.25)
    for _ in range(iters):
        G = grad_fn(X, f)
        gn = np.linalg.norm(G, axis=1)
        gn = np.where(gn < 1e-300, 1.0, gn)
        Xn = _normalize_rows(X + (alpha / gn)[:, None] * G, p)
        fn = value_fn(Xn)
        better = np.abs(fn) > np.abs(f)
        X = np.where(better[:, None], Xn, X)
        f = np.where(better, fn, f)
        alpha = np.where(better, np.minimum(alpha * 1.3, 1.0), alpha * 0.5)
        if np.all(alpha < 1e-13):
            break
    return X, f


def _bb_ascend(X: np.ndarray, value_fn, tangent_grad_fn, p: float, iters: int):
    """Batched projected ascent with Barzilai-Borwein spectral steps.

    ``tangent_grad_fn(X, f)`` must return ascent directions already projected
    onto the sphere tangent space; the spectral step then converges to the
    smooth branch maxima at machine accuracy within a few dozen iterations.
    """
    f = value_fn(X)
    G = tangent_grad_fn(X, f)
    alpha = np.full(X.shape[:-1], 0.1)
    for _ in range(iters):
        Xn = _normalize_rows(X + alpha[..., None] * G, p)
        fn = value_fn(Xn)
        ok = np.abs(fn) >= np.abs(f) - 1e-14
        Gn = tangent_grad_fn(Xn, fn)
        dX = Xn - X
        dG = Gn - G
        num = np.abs(np.einsum("...i,...i->...", dX, dG))
        den = np.einsum("...i,...i->...", dG, dG)
        bb = np.where(den > 1e-300, num / np.where(den < 1e-300, 1.0, den), alpha * 0.5)
        X = np.where(ok[..., None], Xn, X)
        f = np.where(ok, fn, f)
        G = np.where(ok[..., None], Gn, G)
        alpha = np.where(ok, np.clip(bb, 1e-12, 10.0), alpha * 0.25)
    return X, f


def _dedup_candidates(cands, radius: float = 1e-3):
    reps = []
    for val, x in cands:
        if all(np.max(np.abs(x - rx)) > radius for _, rx in reps):
            reps.append((val, x))
    return reps


def _tangent_project(G: np.ndarray, X: np.ndarray, p: float) -> np.ndarray:
    # remove the radial component; the sphere normal direction at x is the
    # p-norm gradient J(x) = sign(x)|x|^{p-1}
    J = np.sign(X) * np.abs(X) ** (p - 1.0)
    coef = np.einsum("...i,...i->...", G, J) / np.einsum("...i,...i->...", J, J)
    return G - coef[..., None] * J


def _radius_search(M: np.ndarray, p: float, *, seed: int = 0, n_starts: int = 4,
                   iters: int = 60, n_polish: int = 4, dense_count: int = 512,
                   dense_top: int = 8, extra_starts=None, polish_h0: float = 0.02,
                   polish_hmin: float = 1e-9):
    """Candidate maximizers of |<Mx, ext x>| on the unit p-sphere (1 < p < inf).

    Dense seeding locates the maximizing branches, batched spectral-step
    ascent drives every start to its branch maximum, and coordinate-search
    polish crosses residual kinks.  Returns (signed value, x) pairs sorted by
    decreasing |value|; deterministic given the seed.
    """
    MT = M.T

    def values(X):
        U = np.sign(X) * np.abs(X) ** (p - 1.0)
        return np.einsum("...i,...i->...", X @ MT, U)

    def tgrads(X, f):
        U = np.sign(X) * np.abs(X) ** (p - 1.0)
        TX = X @ MT
        G = U @ M + (p - 1.0) * _safe_pow(X, p - 2.0, floor=1e-12) * TX
        G = _tangent_project(G, X, p)
        return np.where(f >= 0.0, 1.0, -1.0)[..., None] * G

    X0 = _start_block(M, p, lambda D: np.abs(values(D)), n_starts, seed,
                      dense_count, dense_top, extra_starts)
    X, f = _bb_ascend(X0, values, tgrads, p, iters)
    order = np.argsort(-np.abs(f), kind="stable")
    cands = _dedup_candidates([(float(f[j]), X[j]) for j in order], radius=1e-5)

    def batch_g(C):
        return np.abs(values(C))

    polished = []
    for val, x in cands[:n_polish]:
        fb, xb = _coord_polish(batch_g, x, p, h0=polish_h0, hmin=polish_hmin)
        polished.append((float(values(xb[None, :])[0]), xb))
    polished += cands[n_polish:]
    polished.sort(key=lambda t: -abs(t[0]))
    return polished


def _opnorm_search(M: np.ndarray, p: float, r: float, *, seed: int = 0, n_starts: int = 4,
                   iters: int = 60, n_polish: int = 4, dense_count: int = 512,
                   dense_top: int = 8, extra_starts=None, polish_h0: float = 0.02,
                   polish_hmin: float = 1e-9):
    """Candidate maximizers of ||Mx||_r on the unit p-sphere."""
    MT = M.T

    def values(X):
        return _lp_norm_rows(X @ MT, r)

    X0 = _start_block(M, p, values, n_starts, seed, dense_count, dense_top, extra_starts)

    if math.isinf(r) or r == 1.0:
        # nonsmooth codomain norm: projected subgradient ascent plus polish
        def grads(X, f):
            TX = X @ MT
            if math.isinf(r):
                U = np.zeros_like(TX)
                idx = np.argmax(np.abs(TX), axis=1)
                U[np.arange(len(TX)), idx] = np.sign(TX[np.arange(len(TX)), idx])
            else:
                U = np.sign(TX)
            return U @ M

        X, f = _ascend(X0, values, grads, p, max(iters, 150))
        polish_h0 = max(polish_h0, 0.05)
    else:
        def tgrads(X, f):
            TX = X @ MT
            F = np.where(f < 1e-300, 1.0, f)
            U = np.sign(TX) * np.abs(TX) ** (r - 1.0) / F[..., None] ** (r - 1.0)
            G = U @ M
            return _tangent_project(G, X, p)

        X, f = _bb_ascend(X0, values, tgrads, p, iters)

    order = np.argsort(-f, kind="stable")
    cands = _dedup_candidates([(float(f[j]), X[j]) for j in order], radius=1e-5)

    polished = []
    for val, x in cands[:n_polish]:
        fb, xb = _coord_polish(values, x, p, h0=polish_h0, hmin=polish_hmin)
        polished.append((fb, xb))
    polished += cands[n_polish:]
    polished.sort(key=lambda t: -t[0])
    return polished


def _radius_batch(Ms: np.ndarray, p: float, starts: np.ndarray, iters: int = 80) -> np.ndarray:
    """Spectral-ascent estimates of ||M||_w for a stack of operators sharing
    one start set.

    No polishing; intended for large direction sweeps where a shared warm
    start set keeps every branch tracked.  Returns |phi| maxima per operator.
    """
    B, n, _ = Ms.shape
    K = starts.shape[0]
    X0 = np.broadcast_to(starts, (B, K, n)).copy()

    def values(X):
        TX = np.einsum("bij,bkj->bki", Ms, X)
        U = np.sign(X) * np.abs(X) ** (p - 1.0)
        return np.einsum("bki,bki->bk", TX, U)

    def tgrads(X, f):
        TX = np.einsum("bij,bkj->bki", Ms, X)
        U = np.sign(X) * np.abs(X) ** (p - 1.0)
        G = np.einsum("bki,bij->bkj", U, Ms) + (p - 1.0) * _safe_pow(X, p - 2.0, floor=1e-12) * TX
        G = _tangent_project(G, X, p)
        return np.where(f >= 0.0, 1.0, -1.0)[..., None] * G

    _, f = _bb_ascend(X0, values, tgrads, p, iters)
    return np.max(np.abs(f), axis=1)


def _opnorm_batch(Ms: np.ndarray, p: float, r: float, starts: np.ndarray,
                  iters: int = 80) -> np.ndarray:
    """Spectral-ascent estimates of ||M||_{p->r} for a stack of operators."""
    B, _, n = Ms.shape
    K = starts.shape[0]
    X0 = np.broadcast_to(starts, (B, K, n)).copy()

    def values(X):
        TX = np.einsum("bij,bkj->bki", Ms, X)
        return _lp_norm_rows(TX, r)

    def tgrads(X, f):
        TX = np.einsum("bij,bkj->bki", Ms, X)
        F = np.where(f < 1e-300, 1.0, f)
        U = np.sign(TX) * np.abs(TX) ** (r - 1.0) / F[..., None] ** (r - 1.0)
        G = np.einsum("bki,bij->bkj", U, Ms)
        return _tangent_project(G, X, p)

    _, f = _bb_ascend(X0, values, tgrads, p, iters)
    return np.max(np.abs(f), axis=1)


# ---------------------------------------------------------------------------
# exact paths
# ---------------------------------------------------------------------------

def _radius_l1_exact(M: np.ndarray):
    """Diagonal-pair supremum on l^1: max absolute column sum.

    At x = e_j the constraint y(x) = 1 pins y_j = 1 while the remaining signs
    are free face coordinates; aligning them with sign(M_jj) gives
    |y(Mx)| = |M_jj| + sum_{i != j} |M_ij|, the column sum, so the value
    equals ||M||_1.
    """
    colsums = np.abs(M).sum(axis=0)
    j = int(np.argmax(colsums))
    n = M.shape[0]
    x = np.zeros(n)
    x[j] = 1.0
    sigma = 1.0 if M[j, j] >= 0.0 else -1.0
    y = sigma * np.sign(M[:, j])
    y[y == 0.0] = sigma
    y[j] = 1.0
    return float(colsums[j]), x, y, j


def _radius_linf_exact(M: np.ndarray):
    """Diagonal-pair supremum on l^inf: max absolute row sum.

    x is the sign pattern of the maximal row, y the matching coordinate
    functional; then y(x) = 1 and |y(Mx)| is exactly the row sum, which also
    dominates ||M|| from below, forcing equality with the operator norm.
    """
    rowsums = np.abs(M).sum(axis=1)
    i = int(np.argmax(rowsums))
    x = np.sign(M[i, :]).astype(float)
    x[x == 0.0] = 1.0
    y = np.zeros(M.shape[0])
    y[i] = x[i]
    return float(rowsums[i]), x, y, i


def _radius_l2_exact(M: np.ndarray, tol: float = 1e-12):
    H = (M + M.T) / 2.0
    w, V = jacobi_eigh(H, tol=tol)
    k = int(np.argmax(np.abs(w)))
    x = V[:, k]
    return abs(float(w[k])), x, x.copy()


def _opnorm_l1_columns(M: np.ndarray, r: float):
    vals = _lp_norm_rows(M.T, r)  # ||M e_j||_r per column
    j = int(np.argmax(vals))
    x = np.zeros(M.shape[1])
    x[j] = 1.0
    return float(vals[j]), x, j


def _opnorm_linf_enumerate(M: np.ndarray, r: float):
    n = M.shape[1]
    if n > _ENUM_LIMIT:
        raise ValueError("vertex enumeration too large")
    best, best_s = -1.0, None
    # fix the first sign to +1: ||M(-s)|| = ||Ms||
    for tail in itertools.product((-1.0, 1.0), repeat=n - 1):
        s = np.array((1.0,) + tail)
        v = lp_norm(M @ s, r)
        if v > best:
            best, best_s = v, s
    return float(best), best_s


def _opnorm_linf_to_linf(M: np.ndarray):
    rowsums = np.abs(M).sum(axis=1)
    i = int(np.argmax(rowsums))
    x = np.sign(M[i, :]).astype(float)
    x[x == 0.0] = 1.0
    return float(rowsums[i]), x, i


def _opnorm_l2_gram(M: np.ndarray, tol: float = 1e-12):
    w, V = jacobi_eigh(M.T @ M, tol=tol)
    k = int(np.argmax(w))
    x = V[:, k]
    return math.sqrt(max(float(w[k]), 0.0)), x


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def _codomain_ext(Tx: np.ndarray, codomain: LpSpace) -> np.ndarray:
    """One norming functional of Tx in the codomain (extreme-point selection)."""
    nrm = lp_norm(Tx, codomain.p)
    if nrm == 0.0:
        y = np.zeros(codomain.dim)
        y[0] = 1.0
        return y
    v = Vector(Tx, codomain)
    return ext_functionals(v)[0].coords


def _zero_result(T: Operator, diagonal: bool, method: str) -> RadiusResult:
    x = np.zeros(T.domain.dim)
    x[0] = 1.0
    y = ext_functionals(Vector(x, T.domain))[0]
    return RadiusResult(0.0, Vector(x, T.domain), Functional(y.coords, T.codomain),
                        diagonal=diagonal, attained=False, method=method)


def operator_norm(T: Operator, method: str = "auto", *, seed: int = 0,
                  n_starts: int = 8, iters: int = 80, n_polish: int = 6,
                  dense_count: int = 1024, extra_starts=None) -> RadiusResult:
    """sup ||Tx|| over the unit sphere of the domain.

    method:
      "auto"   exact combinatorial paths where available (domain p in {1, inf},
               and p = 2 via the Gram spectrum), multi-start ascent otherwise;
      "exact"  force the combinatorial path, raising for unsupported exponents
               or for sign-vertex enumeration beyond dim 20;
      "sample" force the multi-start ascent / sampling path.
    """
    M = T.matrix
    p, r = T.domain.p, T.codomain.p
    if not np.any(M):
        return _zero_result(T, diagonal=False, method="zero")
    if method not in ("auto", "exact", "sample"):
        raise ValueError(f"unknown method {method!r}")

    if method in ("auto", "exact"):
        if p == 1.0:
            val, x, j = _opnorm_l1_columns(M, r)
            y = _codomain_ext(M @ x, T.codomain)
            return RadiusResult(val, Vector(x, T.domain), Functional(y, T.codomain),
                                diagonal=False, method="l1-columns")
        if math.isinf(p):
            if math.isinf(r) and method == "auto":
                val, x, i = _opnorm_linf_to_linf(M)
                y = np.zeros(T.codomain.dim)
                y[i] = math.copysign(1.0, float(M[i] @ x)) if M[i] @ x != 0 else 1.0
                return RadiusResult(val, Vector(x, T.domain), Functional(y, T.codomain),
                                    diagonal=False, method="linf-rowsum")
            if T.domain.dim > _ENUM_LIMIT:
                if method == "exact":
                    raise ValueError("vertex enumeration too large")
            else:
                val, s = _opnorm_linf_enumerate(M, r)
                y = _codomain_ext(M @ s, T.codomain)
                return RadiusResult(val, Vector(s, T.domain), Functional(y, T.codomain),
                                    diagonal=False, method="linf-vertices")
        if p == 2.0 and r == 2.0:
            val, x = _opnorm_l2_gram(M)
            y = _codomain_ext(M @ x, T.codomain)
            return RadiusResult(val, Vector(x, T.domain), Functional(y, T.codomain),
                                diagonal=False, method="gram-eig")
        if method == "exact":
            raise ValueError(f"no exact operator-norm path for domain exponent p={p}")

    cands = _opnorm_search(M, p, r, seed=seed, n_starts=n_starts, iters=iters,
                           n_polish=n_polish, dense_count=dense_count,
                           extra_starts=extra_starts)
    val, x = cands[0]
    y = _codomain_ext(M @ x, T.codomain)
    value = abs(float(np.dot(y, M @ x)))
    return RadiusResult(value, Vector(x, T.domain), Functional(y, T.codomain),
                        diagonal=False, method="ascent")


def numerical_radius(T: Operator, method: str = "auto", *, seed: int = 0,
                     n_starts: int = 8, iters: int = 80, n_polish: int = 6,
                     dense_count: int = 1024, extra_starts=None) -> RadiusResult:
    """sup |y(Tx)| over diagonal pairs (y(x) = 1) of the space of T."""
    if T.domain.dim != T.codomain.dim or T.domain.p != T.codomain.p:
        raise ValueError("numerical radius requires a square operator on a single space")
    M = T.matrix
    p = T.domain.p
    space = T.domain
    if not np.any(M):
        return _zero_result(T, diagonal=True, method="zero")
    if method not in ("auto", "exact", "sample"):
        raise ValueError(f"unknown method {method!r}")

    if method in ("auto", "exact"):
        if p == 1.0:
            val, x, y, _ = _radius_l1_exact(M)
            return RadiusResult(val, Vector(x, space), Functional(y, space),
                                diagonal=True, method="l1-columns")
        if math.isinf(p):
            val, x, y, _ = _radius_linf_exact(M)
            return RadiusResult(val, Vector(x, space), Functional(y, space),
                                diagonal=True, method="linf-rows")
        if p == 2.0:
            val, x, y = _radius_l2_exact(M)
            return RadiusResult(val, Vector(x, space), Functional(y, space),
                                diagonal=True, method="symmetric-eig")
        if method == "exact":
            raise ValueError(f"no exact numerical-radius path for p={p}")

    if p == 1.0 or math.isinf(p):
        # sampled fallback still lands on vertices, where the supremum lives
        xs = sphere_sample(space, max(n_starts * 8, 256), seed)
        best = (-1.0, None, None)
        for v in xs:
            for y in ext_functionals(v, zero_tol=1e-12):
                val = pair(y, Vector(M @ v.coords, space))
                if abs(val) > best[0]:
                    best = (abs(val), v, y)
        val, xv, yf = best
        return RadiusResult(val, xv, yf, diagonal=True, method="vertex-sample")

    cands = _radius_search(M, p, seed=seed, n_starts=n_starts, iters=iters,
                           n_polish=n_polish, dense_count=dense_count,
                           extra_starts=extra_starts)
    sval, x = cands[0]
    y = np.sign(x) * np.abs(x) ** (p - 1.0)
    value = abs(float(np.dot(M @ x, y)))
    return RadiusResult(value, Vector(x, space), Functional(y, space),
                        diagonal=True, method="ascent")


def numerical_range_sample(T: Operator, count: int = 256, seed: int = 0) -> np.ndarray:
    """Sampled points of the numerical range W(T) = {y(Tx): y(x) = 1}.

    For each sampled unit x every extreme norming functional contributes one
    value, so the output length can exceed ``count``.
    """
    if T.domain.dim != T.codomain.dim or T.domain.p != T.codomain.p:
        raise ValueError("numerical range requires a square operator on a single space")
    space = T.domain
    out = []
    for v in sphere_sample(space, count, seed):
        Tx = T.matrix @ v.coords
        for y in ext_functionals(v, zero_tol=1e-12):
            out.append(pair(y, Vector(Tx, space)))
    return np.array(out)


def numerical_index_estimate(space: LpSpace, trials: int = 64, seed: int = 0) -> float:
    """Upper bound on the numerical index n(X) = inf ||T||_w over ||T|| = 1.

    Samples norm-one operators (a rotation-like skew candidate plus Gaussian
    draws) and returns the smallest observed radius/norm ratio.  This is an
    estimate from above: the true index is an infimum over all operators.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    n = space.dim
    mats = []
    if n >= 2:
        J = np.zeros((n, n))
        for k in range(0, n - 1, 2):
            J[k, k + 1], J[k + 1, k] = -1.0, 1.0
        mats.append(J)
    mats.extend(rng.standard_normal((n, n)) for _ in range(trials))
    best = math.inf
    for M in mats:
        T = Operator.on(space, M)
        nrm = operator_norm(T, seed=seed).value
        if nrm < 1e-12:
            continue
        ratio = numerical_radius(T, seed=seed).value / nrm
        best = min(best, ratio)
    return float(best)
