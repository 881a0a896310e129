"""Information Causality statistics and the bounds they imply.

For a box, the two elementary-protocol success rates are

    P1 = [p(a=b|00) + p(a=b|10)] / 2
    P2 = [p(a=b|01) + p(a!=b|11)] / 2

with biases E_j = 2 P_j - 1.  IC is violated whenever E1^2 + E2^2 > 1;
this criterion is sufficient only, so boxes with Q <= 1 are not certified
to respect IC.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .box import Behavior, vertex
from .errors import DomainError
from .nonlocality import CABELLO_SUCCESS, HARDY_SUCCESS
from .polytope import (
    ConvexDecomposition,
    cabello_vertex_set,
    hardy_face_vertices,
    maximize_linear,
)

STRICT_EPS = 1e-12
SQRT2 = math.sqrt(2.0)
HARDY_IC_BOUND = (SQRT2 - 1) / 2


@dataclass(frozen=True)
class IcStatistics:
    P1: float
    P2: float
    E1: float
    E2: float
    Q: float

    def as_dict(self) -> dict:
        return {"P1": self.P1, "P2": self.P2, "E1": self.E1, "E2": self.E2, "Q": self.Q}


@dataclass(frozen=True)
class BoundResult:
    value: float
    witness_weights: ConvexDecomposition
    saturates_ic: bool
    details: dict = field(default_factory=dict)

    def witness(self) -> Behavior:
        return self.witness_weights.behavior()


def ic_stats(B: Behavior) -> IcStatistics:
    P1 = 0.5 * (B.p(0, 0, 0, 0) + B.p(1, 1, 0, 0) + B.p(0, 0, 1, 0) + B.p(1, 1, 1, 0))
    P2 = 0.5 * (B.p(0, 0, 0, 1) + B.p(1, 1, 0, 1) + B.p(0, 1, 1, 1) + B.p(1, 0, 1, 1))
    E1, E2 = 2 * P1 - 1, 2 * P2 - 1
    return IcStatistics(P1, P2, E1, E2, E1 * E1 + E2 * E2)


def violates_ic_sufficient(B: Behavior) -> bool:
    return ic_stats(B).Q > 1 + STRICT_EPS


def hardy_c6_bound(s: float) -> float:
    """Largest nonlocal weight c6 on the Hardy face compatible with Q <= 1.

    ``s`` is the total weight c4 + c5.  On the Hardy face Q <= 1 reduces to
    c6^2 + 2 s c6 + 2 s (s - 1) <= 0, whose larger root is -s + sqrt(2s - s^2).
    """
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"s must lie in [0, 1], got {s}")
    root = -s + math.sqrt(max(2 * s - s * s, 0.0))
    return max(0.0, min(root, 1.0 - s))


def hardy_witness_weights() -> ConvexDecomposition:
    """IC-saturating Hardy box: c1 = c4 = 1 - 1/sqrt2, c6 = sqrt2 - 1."""
    slack = 1 - 1 / SQRT2
    ids = hardy_face_vertices()
    w = dict.fromkeys(ids, 0.0)
    w[ids[0]] = slack
    w[ids[3]] = slack
    w[ids[5]] = SQRT2 - 1
    return ConvexDecomposition(w)


def hardy_witness() -> Behavior:
    B = hardy_witness_weights().behavior()
    return Behavior(B.table, name="hardy-ic-witness")


def scan_hardy_bound(points: int = 2001) -> tuple[float, float]:
    """Grid then bounded refinement of c6(s)/2 over s in [0, 1]; returns (value, s)."""
    grid = np.linspace(0.0, 1.0, points)
    vals = np.array([hardy_c6_bound(s) for s in grid])
    i = int(np.argmax(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, points - 1)]
    res = minimize_scalar(
        lambda s: -hardy_c6_bound(s), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12}
    )
    s = float(res.x)
    return hardy_c6_bound(s) / 2, s


def max_hardy_under_ic() -> BoundResult:
    s_star = 1 - 1 / SQRT2
    value = hardy_c6_bound(s_star) / 2
    scan_value, scan_s = scan_hardy_bound()
    weights = hardy_witness_weights()
    Q = ic_stats(weights.behavior()).Q
    return BoundResult(
        value=value,
        witness_weights=weights,
        saturates_ic=abs(Q - 1) <= 1e-9,
        details={"s_star": s_star, "c6": 2 * value, "scan_value": scan_value, "scan_s": scan_s, "Q": Q},
    )


def cabello_x_of_p2(P2: float) -> float:
    """Largest Cabello success x on the IC boundary for a given P2 in [0, 1/2]."""
    if not 0.0 <= P2 <= 0.5:
        raise DomainError(f"P2 must lie in [0, 1/2], got {P2}")
    return -P2 + math.sqrt(P2 * (1 - P2))


def numeric_cabello_under_ic(starts: int = 16, seed: int = 0) -> tuple[float, np.ndarray]:
    """Direct maximization of p(11|11) - p(00|00) over the 11 Cabello weights with Q <= 1.

    Multi-start SLSQP on the weight simplex; independent of the analytic
    reduction to a single variable.  Returns (value, weights).
    """
    ids = cabello_vertex_set()
    tables = np.stack([vertex(v).table for v in ids])
    succ = np.array([CABELLO_SUCCESS(vertex(v)) for v in ids])

    def stats(c):
        B = Behavior(np.tensordot(c, tables, axes=1))
        return ic_stats(B)

    cons = [
        {"type": "eq", "fun": lambda c: np.sum(c) - 1.0, "jac": lambda c: np.ones_like(c)},
        {"type": "ineq", "fun": lambda c: 1.0 - stats(c).Q},
    ]
    rng = np.random.default_rng(seed)
    best_val, best_c = -np.inf, None
    for _ in range(starts):
        c0 = rng.dirichlet(np.ones(len(ids)))
        res = minimize(
            lambda c: -succ @ c,
            c0,
            jac=lambda c: -succ,
            method="SLSQP",
            bounds=[(0.0, 1.0)] * len(ids),
            constraints=cons,
            options={"ftol": 1e-14, "maxiter": 500},
        )
        c = np.clip(res.x, 0.0, None)
        c /= c.sum()
        if stats(c).Q > 1 + 1e-9:
            continue
        val = float(succ @ c)
        if val > best_val:
            best_val, best_c = val, c
    return best_val, best_c


def max_cabello_under_ic(numeric: bool = True, seed: int = 0) -> BoundResult:
    """Cabello success maximized under Q <= 1.

    With x = p(11|11) - p(00|00), the IC boundary gives x = -P2 + sqrt(P2(1-P2)),
    maximized at P2 = (2 - sqrt2)/4.  The maximizing box coincides with the
    Hardy witness (c7..c11 = 0), so the Cabello bound equals the Hardy one.
    """
    p2_star = (2 - SQRT2) / 4
    value = cabello_x_of_p2(p2_star)
    ids = cabello_vertex_set()
    hw = hardy_witness_weights()
    weights = ConvexDecomposition({v: hw.get(v) for v in ids})
    st = ic_stats(weights.behavior())
    details = {"P2_star": p2_star, "E1": st.E1, "E2": st.E2, "Q": st.Q}
    if numeric:
        num_val, num_c = numeric_cabello_under_ic(seed=seed)
        details["numeric_value"] = num_val
        details["numeric_weights"] = {str(v): float(w) for v, w in zip(ids, num_c)}
    return BoundResult(value, weights, abs(st.Q - 1) <= 1e-9, details)


def max_hardy_under_ns() -> BoundResult:
    ids = hardy_face_vertices()
    value, vid = maximize_linear(HARDY_SUCCESS, ids)
    w = ConvexDecomposition({v: float(v == vid) for v in ids})
    return BoundResult(value, w, False, {"vertex": str(vid), "Q": ic_stats(vertex(vid)).Q})


def max_cabello_under_ns() -> BoundResult:
    ids = cabello_vertex_set()
    value, vid = maximize_linear(CABELLO_SUCCESS, ids)
    w = ConvexDecomposition({v: float(v == vid) for v in ids})
    return BoundResult(value, w, False, {"vertex": str(vid), "Q": ic_stats(vertex(vid)).Q})


def max_chsh_under_ic(radius: float = 1.0) -> tuple[float, tuple[float, float]]:
    """max 2(E1 + E2) subject to E1^2 + E2^2 <= radius^2.

    ``radius = sqrt2`` is the no-signalling extreme (E1 = E2 = 1).
    """
    e = min(radius / SQRT2, 1.0)
    return 2 * (e + e), (e, e)


def scan_chsh_under_ic(points: int = 100001) -> float:
    """Brute-force check of the CHSH maximum on the IC disc boundary."""
    t = np.linspace(0, 2 * np.pi, points)
    return float(np.max(2 * (np.cos(t) + np.sin(t))))
