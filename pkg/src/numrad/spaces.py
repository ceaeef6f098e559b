"""Finite-dimensional sequence spaces l^p_n.

Provides the space/vector/functional containers, the p-norms (p = inf is a
first-class exponent, not a large float), Hoelder-conjugate exponents, dual
pairings, the duality ("extremal") map, and deterministic unit-sphere
sampling used by the optimization routines.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LpSpace",
    "Vector",
    "Functional",
    "lp_norm",
    "dual_exponent",
    "ext_functionals",
    "pair",
    "sphere_sample",
]

INF = math.inf


def _check_exponent(p) -> float:
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise ValueError(f"exponent must satisfy 1 <= p <= inf, got {p}")
    return p


def _as_coords(x, dim=None) -> np.ndarray:
    c = np.asarray(x, dtype=float)
    if c.ndim != 1:
        raise ValueError(f"coordinates must be one-dimensional, got shape {c.shape}")
    if dim is not None and c.shape[0] != dim:
        raise ValueError(f"coordinate length {c.shape[0]} does not match dim {dim}")
    return c


@dataclass(frozen=True)
class LpSpace:
    """The space l^p_n of real n-sequences with the p-norm."""

    dim: int
    p: float

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "p", _check_exponent(self.p))

    @property
    def q(self) -> float:
        """Conjugate exponent of the dual space."""
        return dual_exponent(self.p)

    def norm(self, coords) -> float:
        return lp_norm(_as_coords(coords, self.dim), self.p)

    def vector(self, coords) -> "Vector":
        return Vector(_as_coords(coords, self.dim), self)

    def functional(self, coords) -> "Functional":
        return Functional(_as_coords(coords, self.dim), self)

    def unit_vector(self, coords) -> "Vector":
        c = _as_coords(coords, self.dim)
        n = lp_norm(c, self.p)
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return Vector(c / n, self)

    def __repr__(self):
        p = "inf" if math.isinf(self.p) else f"{self.p:g}"
        return f"LpSpace(dim={self.dim}, p={p})"


@dataclass(frozen=True, eq=False)
class Vector:
    """An element of an LpSpace."""

    coords: np.ndarray
    space: LpSpace

    def __post_init__(self):
        object.__setattr__(self, "coords", _as_coords(self.coords, self.space.dim))

    @property
    def norm(self) -> float:
        return lp_norm(self.coords, self.space.p)


@dataclass(frozen=True, eq=False)
class Functional:
    """A linear functional on an LpSpace; its natural norm is the q-norm."""

    coords: np.ndarray
    space: LpSpace

    def __post_init__(self):
        object.__setattr__(self, "coords", _as_coords(self.coords, self.space.dim))

    @property
    def norm(self) -> float:
        return lp_norm(self.coords, self.space.q)

    def __call__(self, x) -> float:
        return pair(self, x)


def lp_norm(x, p) -> float:
    """The p-norm of a vector, with max |x_i| for p = inf."""
    p = _check_exponent(p)
    c = x.coords if isinstance(x, Vector) else _as_coords(x)
    if c.size == 0:
        return 0.0
    if math.isinf(p):
        return float(np.max(np.abs(c)))
    if p == 1.0:
        return float(np.sum(np.abs(c)))
    if p == 2.0:
        return float(np.linalg.norm(c))
    return float(np.sum(np.abs(c) ** p) ** (1.0 / p))


def dual_exponent(p) -> float:
    """Hoelder conjugate q with 1/p + 1/q = 1; maps 1 <-> inf and fixes 2."""
    p = _check_exponent(p)
    if p == 1.0:
        return INF
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def pair(y, x) -> float:
    """Dual pairing <x, y> = sum_i y_i x_i."""
    yc = y.coords if isinstance(y, (Functional, Vector)) else _as_coords(y)
    xc = x.coords if isinstance(x, (Vector, Functional)) else _as_coords(x)
    if yc.shape != xc.shape:
        raise ValueError(f"dimension mismatch: functional has {yc.shape[0]}, vector has {xc.shape[0]}")
    return float(np.dot(yc, xc))


# ---------------------------------------------------------------------------
# duality (extremal) map
# ---------------------------------------------------------------------------

def _smooth_ext_coords(c: np.ndarray, p: float) -> np.ndarray:
    # unique norming functional for 1 < p < inf:
    #   y_i = sign(x_i)|x_i|^{p-1} / ||x||_p^{p-1}
    n = lp_norm(c, p)
    return np.sign(c) * np.abs(c) ** (p - 1.0) / n ** (p - 1.0)


def ext_functionals(x: Vector, zero_tol: float = 0.0) -> list[Functional]:
    """Norm-one functionals y with y(x) = ||x||_p.

    For 1 < p < inf the set is a singleton.  For p = 1 and p = inf the duality
    map is set-valued; only the extreme points of the attaining face are
    returned, which suffices for maximizing any linear functional over it.

    Raises ValueError on the zero vector, which has no extremal.
    """
    if not isinstance(x, Vector):
        raise TypeError("ext_functionals expects a Vector (the space fixes the exponent)")
    space = x.space
    c = x.coords
    nrm = lp_norm(c, space.p)
    if nrm == 0.0:
        raise ValueError("no extremal of zero")
    p = space.p
    if math.isinf(p):
        # extreme points: sign-matched coordinate functionals at maximal entries
        amax = np.max(np.abs(c))
        out = []
        for i in np.flatnonzero(np.abs(c) >= amax * (1.0 - 1e-12)):
            e = np.zeros(space.dim)
            e[i] = math.copysign(1.0, c[i])
            out.append(Functional(e, space))
        return out
    if p == 1.0:
        # sign-matched on the support, all sign choices on zero coordinates
        zeros = np.flatnonzero(np.abs(c) <= zero_tol)
        if len(zeros) > 20:
            raise ValueError(f"duality set too large to enumerate: 2^{len(zeros)} extreme points")
        base = np.sign(c)
        out = []
        for choice in itertools.product((-1.0, 1.0), repeat=len(zeros)):
            y = base.copy()
            y[zeros] = choice
            out.append(Functional(y, space))
        return out
    return [Functional(_smooth_ext_coords(c, p), space)]


# ---------------------------------------------------------------------------
# row-wise helpers shared with the optimization engine
# ---------------------------------------------------------------------------

def _lp_norm_rows(X: np.ndarray, p: float) -> np.ndarray:
    if math.isinf(p):
        return np.max(np.abs(X), axis=-1)
    if p == 1.0:
        return np.abs(X).sum(axis=-1)
    return (np.abs(X) ** p).sum(axis=-1) ** (1.0 / p)


def _normalize_rows(X: np.ndarray, p: float) -> np.ndarray:
    return X / _lp_norm_rows(X, p)[..., None]


def _sphere_vertices(dim: int, p: float) -> np.ndarray:
    """Unit coordinate vectors plus normalized sign patterns (deduplicated)."""
    rows = [np.eye(dim), -np.eye(dim)]
    if dim <= 16:
        signs = np.array(list(itertools.product((-1.0, 1.0), repeat=dim)))
        rows.append(_normalize_rows(signs, p))
    V = np.vstack(rows)
    _, keep = np.unique(np.round(V, 12), axis=0, return_index=True)
    return V[np.sort(keep)]


def sphere_sample(space: LpSpace, count: int, seed: int = 0) -> list[Vector]:
    """Deterministic unit-norm sample of the p-sphere.

    Always contains every +-e_i and every normalized sign-pattern vertex,
    padded with normalized Gaussian draws until at least ``count`` vectors.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    V = _sphere_vertices(space.dim, space.p)
    n_extra = max(count - len(V), 0)
    if n_extra:
        rng = np.random.default_rng(seed)
        G = rng.standard_normal((n_extra + 8, space.dim))
        G = G[_lp_norm_rows(G, space.p) > 1e-12][:n_extra]
        V = np.vstack([V, _normalize_rows(G, space.p)])
    return [Vector(row, space) for row in V]
