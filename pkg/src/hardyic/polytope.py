"""The 24-vertex no-signalling polytope for two inputs and two outputs."""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .box import EPS, Behavior, Local, Nonlocal, VertexId, mix, validate, vertex
from .errors import InfeasibleError

PIVOT_TOL = 1e-12


def enumerate_vertices() -> list[tuple[VertexId, Behavior]]:
    """All 16 local then all 8 nonlocal vertices, bits in lexicographic order."""
    ids = [Local(*bits) for bits in itertools.product((0, 1), repeat=4)]
    ids += [Nonlocal(*bits) for bits in itertools.product((0, 1), repeat=3)]
    return [(vid, vertex(vid)) for vid in ids]


def all_vertex_ids() -> list[VertexId]:
    return [vid for vid, _ in enumerate_vertices()]


def hardy_face_vertices() -> list[VertexId]:
    """The vertices carrying weights c1..c6 of a Hardy box, in that order."""
    return [
        Local(0, 0, 0, 1),
        Local(0, 0, 1, 1),
        Local(0, 1, 0, 0),
        Local(1, 1, 0, 0),
        Local(1, 1, 1, 1),
        Nonlocal(0, 0, 1),
    ]


def cabello_vertex_set() -> list[VertexId]:
    """Hardy face (c1..c6) followed by the extra vertices c7..c11 for Cabello boxes."""
    return hardy_face_vertices() + [
        Local(0, 0, 0, 0),
        Local(0, 0, 1, 0),
        Local(1, 0, 0, 0),
        Local(1, 0, 1, 0),
        Nonlocal(1, 1, 0),
    ]


@dataclass(frozen=True)
class LinearFunctional:
    """F(B) = sum over entries of coefficients[X, Y, a, b] * p(ab|XY)."""

    coefficients: np.ndarray

    def __call__(self, B: Behavior) -> float:
        return float(np.sum(self.coefficients * B.table))

    def __add__(self, other: LinearFunctional) -> LinearFunctional:
        return LinearFunctional(self.coefficients + other.coefficients)

    def __sub__(self, other: LinearFunctional) -> LinearFunctional:
        return LinearFunctional(self.coefficients - other.coefficients)

    def __mul__(self, k: float) -> LinearFunctional:
        return LinearFunctional(k * self.coefficients)

    __rmul__ = __mul__

    @classmethod
    def entry(cls, a: int, b: int, X: int, Y: int) -> LinearFunctional:
        c = np.zeros((2, 2, 2, 2))
        c[X, Y, a, b] = 1.0
        return cls(c)


@dataclass(frozen=True)
class ConvexDecomposition:
    weights: dict[VertexId, float]

    def behavior(self) -> Behavior:
        ids = list(self.weights)
        return mix([self.weights[v] for v in ids], [vertex(v) for v in ids])

    def get(self, vid: VertexId) -> float:
        return self.weights.get(vid, 0.0)

    def nonzero(self, tol: float = 1e-12) -> dict[VertexId, float]:
        return {v: w for v, w in self.weights.items() if abs(w) > tol}

    def to_json(self) -> dict[str, float]:
        return {str(v): w for v, w in self.weights.items()}


def _phase_one(A: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, float]:
    """Find x >= 0 with A x = b by minimizing the sum of artificial variables.

    Dense tableau, Bland's lowest-index rule for both entering and leaving
    variables, so the result is deterministic and the method cannot cycle.
    Returns ``(x, residual)`` where residual is the optimal artificial sum.
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1
    m, n = A.shape
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n : n + m] = np.eye(m)
    T[:m, -1] = b
    T[m, :n] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    basis = list(range(n, n + m))

    for _ in range(50 * (n + m)):
        entering = next((j for j in range(n + m) if T[m, j] < -PIVOT_TOL), None)
        if entering is None:
            break
        col = T[:m, entering]
        rows = [i for i in range(m) if col[i] > PIVOT_TOL]
        if not rows:
            break  # unbounded direction; cannot happen for a bounded phase-1 objective
        ratios = [T[i, -1] / col[i] for i in rows]
        best = min(ratios)
        ties = [i for i, r in zip(rows, ratios) if r <= best + PIVOT_TOL]
        leave = min(ties, key=lambda i: basis[i])
        T[leave] /= T[leave, entering]
        for i in range(m + 1):
            if i != leave and T[i, entering] != 0.0:
                T[i] -= T[i, entering] * T[leave]
        basis[leave] = entering

    x = np.zeros(n)
    for i, j in enumerate(basis):
        if j < n:
            x[j] = T[i, -1]
    return x, -T[m, -1]


def decompose(
    B: Behavior, support: Sequence[VertexId] | None = None, eps: float = EPS
) -> ConvexDecomposition:
    """Write B as a convex combination of the support vertices (all 24 by default).

    Raises InfeasibleError when B is outside the convex hull of the support,
    which covers signalling or unnormalized tables as well as a wrong support.
    """
    ids = list(support) if support is not None else all_vertex_ids()
    if not ids:
        raise InfeasibleError("empty support")
    V = np.stack([vertex(v).table.ravel() for v in ids], axis=1)  # 16 x k
    A = np.vstack([V, np.ones((1, len(ids)))])
    rhs = np.concatenate([B.table.ravel(), [1.0]])
    x, artificial = _phase_one(A, rhs)
    if artificial > 16 * eps:
        raise InfeasibleError(
            f"behavior is not in the hull of the {len(ids)} support vertices "
            f"(phase-1 residual {artificial:.3g})"
        )
    x = np.clip(x, 0.0, None)
    x /= x.sum()
    resid = float(np.max(np.abs(V @ x - B.table.ravel())))
    if resid > max(16 * eps, 1e-8):
        raise InfeasibleError(f"decomposition residual {resid:.3g} exceeds tolerance")
    return ConvexDecomposition({v: float(w) for v, w in zip(ids, x)})


def maximize_linear(F: LinearFunctional, support: Sequence[VertexId]) -> tuple[float, VertexId]:
    """Maximum of F over the hull of support; attained at a vertex, first one wins ties."""
    if not support:
        raise ValueError("support must be non-empty")
    best_val, best_id = -np.inf, None
    for vid in support:
        val = F(vertex(vid))
        if val > best_val:
            best_val, best_id = val, vid
    return best_val, best_id


def is_certified(B: Behavior, eps: float = EPS) -> bool:
    return validate(B, eps).ok(eps)
