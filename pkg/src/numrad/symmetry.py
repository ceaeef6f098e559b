"""Finite isometry groups, averaging of projections, commutant uniqueness,
and the discretized Fourier projection with its Lebesgue constants.

Averaging T_{g^-1} P T_g over a finite group with uniform weights replaces a
projection onto a group-invariant subspace by one that commutes with every
group element without increasing the numerical radius.  The circle group
acting on periodic functions is realized as Z_N acting on a uniform grid,
with the grid fine enough (N >= 4n + 2) that trigonometric quadrature is
exact and the translation average of any projection onto the degree-n
polynomials reproduces the Fourier projection exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .operators import Operator, numerical_radius, operator_norm
from .projections import ProjectionProblem, parametrize
from .spaces import LpSpace, Vector, lp_norm, sphere_sample

__all__ = [
    "IsometryGroup",
    "GroupReport",
    "FourierGrid",
    "cyclic_shift_group",
    "sign_change_group",
    "trivial_group",
    "grid_translation_group",
    "verify_group",
    "rudin_average",
    "commutant_projections_dimension",
    "trig_basis",
    "fourier_projection",
    "interpolation_projection",
    "lebesgue_constant",
    "marcinkiewicz_average",
]


@dataclass(eq=False)
class IsometryGroup:
    """A finite set of isometries closed under composition and inverse.

    Uniform weights 1/|G| play the role of the invariant mean.
    """

    elements: list
    space: LpSpace
    identity_index: int = 0

    def __post_init__(self):
        mats = []
        for E in self.elements:
            M = E.matrix if isinstance(E, Operator) else np.asarray(E, dtype=float)
            if M.shape != (self.space.dim, self.space.dim):
                raise ValueError(f"group element shape {M.shape} does not match dim {self.space.dim}")
            mats.append(M)
        if not mats:
            raise ValueError("group must be nonempty")
        self.elements = mats
        if not np.allclose(mats[self.identity_index], np.eye(self.space.dim), atol=1e-12):
            raise ValueError("identity_index does not point at the identity matrix")

    @property
    def order(self) -> int:
        return len(self.elements)

    def index_of(self, M: np.ndarray, tol: float = 1e-9) -> int:
        for i, E in enumerate(self.elements):
            if np.max(np.abs(E - M)) <= tol:
                return i
        return -1

    def inverse_index(self, i: int, tol: float = 1e-9) -> int:
        n = self.space.dim
        for j, E in enumerate(self.elements):
            if np.max(np.abs(self.elements[i] @ E - np.eye(n))) <= tol:
                return j
        return -1


def cyclic_shift_group(space: LpSpace) -> IsometryGroup:
    """Coordinate rotations x_i -> x_{i+g mod n}."""
    n = space.dim
    mats = [np.roll(np.eye(n), -g, axis=1) for g in range(n)]
    return IsometryGroup(mats, space, 0)


def sign_change_group(space: LpSpace) -> IsometryGroup:
    """All diagonal +-1 matrices; order 2^n."""
    n = space.dim
    if n > 16:
        raise ValueError("sign-change group too large to enumerate")
    mats = []
    for k in range(2 ** n):
        d = np.array([1.0 if (k >> i) & 1 == 0 else -1.0 for i in range(n)])
        mats.append(np.diag(d))
    return IsometryGroup(mats, space, 0)


def trivial_group(space: LpSpace) -> IsometryGroup:
    return IsometryGroup([np.eye(space.dim)], space, 0)


@dataclass
class GroupReport:
    passed: bool
    order: int
    failures: list


def verify_group(G: IsometryGroup, sample_count: int = 64, seed: int = 0) -> GroupReport:
    """Check the group axioms and the isometry property on samples and vertices.

    Any failure names the violated axiom and the offending element index.
    """
    failures = []
    n = G.space.dim
    if G.index_of(np.eye(n)) < 0:
        failures.append("identity: no element equals the identity matrix")
    for i in range(G.order):
        for j in range(G.order):
            if G.index_of(G.elements[i] @ G.elements[j]) < 0:
                failures.append(f"closure: product of elements {i} and {j} is not in the group")
    for i in range(G.order):
        if G.inverse_index(i) < 0:
            failures.append(f"inverse: element {i} has no inverse in the group")
    xs = sphere_sample(G.space, sample_count, seed)
    X = np.stack([v.coords for v in xs])
    norms = np.array([lp_norm(row, G.space.p) for row in X])
    for i, E in enumerate(G.elements):
        out = X @ E.T
        out_norms = np.array([lp_norm(row, G.space.p) for row in out])
        if np.max(np.abs(out_norms - norms)) > 1e-9:
            failures.append(f"isometry: element {i} changes the p-norm")
    return GroupReport(not failures, G.order, failures)


def rudin_average(P: Operator, G: IsometryGroup, problem: ProjectionProblem | None = None) -> Operator:
    """Q = (1/|G|) sum_g T_{g^-1} P T_g.

    Commutation of Q with every group element is asserted post hoc; when the
    projection problem is supplied, membership of Q in the family (Q = A on V)
    is asserted as well.
    """
    if P.matrix.shape != (G.space.dim, G.space.dim):
        raise ValueError("operator dimension does not match the group's space")
    n = G.space.dim
    Q = np.zeros((n, n))
    for i, Tg in enumerate(G.elements):
        j = G.inverse_index(i)
        if j < 0:
            raise ValueError(f"group element {i} has no inverse in the element list")
        Q += G.elements[j] @ P.matrix @ Tg
    Q /= G.order
    for i, Tg in enumerate(G.elements):
        if np.max(np.abs(Q @ Tg - Tg @ Q)) > 1e-10:
            raise RuntimeError(f"averaged operator fails to commute with element {i}")
    if problem is not None:
        Vb = problem.basis_matrix
        target = Vb @ problem.restriction
        if np.max(np.abs(Q @ Vb - target)) > 1e-10:
            raise RuntimeError("averaged operator left the projection family")
    return Operator.on(G.space, Q)


def commutant_projections_dimension(G: IsometryGroup, problem: ProjectionProblem) -> int:
    """Dimension of {P in the family: P T_g = T_g P for all g}.

    Zero means the commuting projection is unique, which certifies it as
    minimal with respect to numerical radius.  Raises if V is not invariant
    under some group element, naming it.
    """
    Vb = problem.basis_matrix
    for i, Tg in enumerate(G.elements):
        for k in range(Vb.shape[1]):
            w = Tg @ Vb[:, k]
            if problem.distance_to_v(w) > 1e-8 * max(1.0, lp_norm(w, problem.space.p)):
                raise ValueError(f"subspace is not invariant under group element {i}")
    param = parametrize(problem)
    B0 = param.base.matrix
    dirs = [D.matrix for D in param.directions]
    if not dirs:
        return 0
    rows, rhs = [], []
    for Tg in G.elements:
        rows.append(np.stack([(D @ Tg - Tg @ D).ravel() for D in dirs], axis=1))
        rhs.append(-(B0 @ Tg - Tg @ B0).ravel())
    A = np.vstack(rows)
    b = np.concatenate(rhs)
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    if np.linalg.norm(A @ sol - b) > 1e-8:
        raise RuntimeError("no member of the family commutes with the whole group")
    sv = np.linalg.svd(A, compute_uv=False)
    rank = int(np.sum(sv > 1e-10 * max(sv[0], 1.0)))
    return len(dirs) - rank


# ---------------------------------------------------------------------------
# discretized Fourier projection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FourierGrid:
    """Uniform grid t_i = 2 pi i / N carrying degree-n trigonometric data.

    N >= 4n + 2 keeps the trapezoidal quadrature exact through degree 2n, so
    the sampled projection is an exact projection matrix.
    """

    n: int
    N: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("degree n must be >= 0")
        if self.N < 4 * self.n + 2:
            raise ValueError(f"grid size N={self.N} violates N >= 4n+2 = {4 * self.n + 2}")

    @property
    def nodes(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.N) / self.N

    @property
    def space(self) -> LpSpace:
        return LpSpace(self.N, math.inf)


def trig_basis(grid: FourierGrid) -> np.ndarray:
    """N x (2n+1) matrix sampling 1, cos t, sin t, ..., cos nt, sin nt."""
    t = grid.nodes
    cols = [np.ones_like(t)]
    for m in range(1, grid.n + 1):
        cols.append(np.cos(m * t))
        cols.append(np.sin(m * t))
    return np.stack(cols, axis=1)


def _dirichlet_row(grid: FourierGrid) -> np.ndarray:
    # (2/N) * (1/2 + sum_m cos(m t_j)): first row of the projection matrix
    t = grid.nodes
    row = np.full(grid.N, 0.5)
    for m in range(1, grid.n + 1):
        row += np.cos(m * t)
    return (2.0 / grid.N) * row


def fourier_projection(grid: FourierGrid) -> Operator:
    """The circulant matrix M_ij = (2/N)(1/2 + sum_m cos(m (t_i - t_j))).

    Acts on grid samples with the sup norm; idempotent with rank 2n+1 and
    commutes with the cyclic translation exactly.
    """
    t = grid.nodes
    D = t[:, None] - t[None, :]
    M = np.full((grid.N, grid.N), 0.5)
    for m in range(1, grid.n + 1):
        M += np.cos(m * D)
    return Operator.on(grid.space, (2.0 / grid.N) * M)


def interpolation_projection(grid: FourierGrid, node_indices=None) -> Operator:
    """Lagrange-type projection interpolating at 2n+1 grid nodes."""
    k = 2 * grid.n + 1
    if node_indices is None:
        node_indices = np.linspace(0, grid.N, k, endpoint=False).astype(int)
    idx = np.asarray(node_indices, dtype=int)
    if len(idx) != k or len(set(idx.tolist())) != k:
        raise ValueError(f"need {k} distinct node indices")
    B = trig_basis(grid)
    R = np.zeros((k, grid.N))
    R[np.arange(k), idx] = 1.0
    P = B @ np.linalg.solve(B[idx], R)
    return Operator.on(grid.space, P)


def lebesgue_constant(grid: FourierGrid) -> float:
    """Sup-norm of the Fourier projection: the maximal absolute row sum.

    All rows of the circulant matrix share one kernel row, so the value is
    computed from it directly; it converges to the classical Lebesgue
    constant as N grows.
    """
    return float(np.abs(_dirichlet_row(grid)).sum())


def _projects_onto_grid_poly(P: np.ndarray, grid: FourierGrid, tol: float = 1e-8) -> bool:
    B = trig_basis(grid)
    if np.max(np.abs(P @ B - B)) > tol:
        return False
    # range containment: columns of P lie in span(B)
    coef, *_ = np.linalg.lstsq(B, P, rcond=None)
    return bool(np.max(np.abs(B @ coef - P)) <= tol)


def marcinkiewicz_average(P: Operator, grid: FourierGrid) -> Operator:
    """Translation average (1/N) sum_g S_{-g} P S_g over the cyclic shifts.

    Requires P to be a projection onto the sampled degree-n polynomials; the
    average is then asserted to coincide with the Fourier projection matrix
    to 1e-8 (it does exactly, by quadrature exactness and uniqueness of the
    shift-commuting projection).
    """
    M = P.matrix
    if M.shape != (grid.N, grid.N):
        raise ValueError("operator does not act on the grid space")
    if not _projects_onto_grid_poly(M, grid):
        raise ValueError("operator is not a projection onto the grid polynomial space")
    Q = np.zeros_like(M)
    for g in range(grid.N):
        # conjugation by the cyclic shift is an index roll along both axes
        Q += np.roll(M, (-g, -g), axis=(0, 1))
    Q /= grid.N
    F = fourier_projection(grid).matrix
    if np.max(np.abs(Q - F)) > 1e-8:
        raise RuntimeError("translation average deviates from the Fourier projection")
    return Operator.on(grid.space, Q)


def grid_translation_group(grid: FourierGrid) -> IsometryGroup:
    """Z_N acting on grid samples by cyclic translation."""
    N = grid.N
    mats = [np.roll(np.eye(N), -g, axis=1) for g in range(N)]
    return IsometryGroup(mats, grid.space, 0)
