"""Two-qubit Born-rule behaviors and numerical Hardy/Cabello optimization.

Measurements are projective and +-1 valued with outcome 0 <-> +1.  The
optimizers work on a Schmidt-form state cos(alpha)|00> + sin(alpha)|11>
and, by default, measurement directions in the x-z plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .box import Behavior
from .errors import ConvergenceError, DomainError
from .nonlocality import cabello_success, hardy_success

TWO_PI = 2 * math.pi
HARDY_QUANTUM_MAX = (5 * math.sqrt(5) - 11) / 2


@dataclass(frozen=True)
class TwoQubitState:
    """Amplitudes in the basis |00>, |01>, |10>, |11> (first qubit is Alice's)."""

    amplitudes: tuple[complex, complex, complex, complex]

    def __post_init__(self):
        amps = tuple(complex(z) for z in self.amplitudes)
        if len(amps) != 4:
            raise DomainError("a two-qubit state has four amplitudes")
        norm = sum(abs(z) ** 2 for z in amps)
        if abs(norm - 1) > 1e-12:
            raise DomainError(f"state is not normalized (norm^2 = {norm:.15g})")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def schmidt(cls, alpha: float) -> TwoQubitState:
        return cls((math.cos(alpha), 0.0, 0.0, math.sin(alpha)))

    @classmethod
    def normalized(cls, amplitudes) -> TwoQubitState:
        v = np.asarray(amplitudes, dtype=complex)
        return cls(tuple(v / np.linalg.norm(v)))

    def matrix(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex).reshape(2, 2)


@dataclass(frozen=True)
class QubitMeasurement:
    """Spin measurement along the Bloch direction (theta, phi).

    Any real theta is accepted and folded into theta in [0, pi], phi in [0, 2 pi).
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta = self.theta % TWO_PI
        phi = self.phi
        if theta > math.pi:
            theta = TWO_PI - theta
            phi = phi + math.pi
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi % TWO_PI)

    def bloch(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])

    def eigenvectors(self) -> np.ndarray:
        """Rows are the outcome-0 (+1) and outcome-1 (-1) eigenvectors."""
        c, s = math.cos(self.theta / 2), math.sin(self.theta / 2)
        e = complex(math.cos(self.phi), math.sin(self.phi))
        return np.array([[c, e * s], [s, -e * c]], dtype=complex)


@dataclass(frozen=True)
class QuantumScenario:
    state: TwoQubitState
    measA: tuple[QubitMeasurement, QubitMeasurement]
    measB: tuple[QubitMeasurement, QubitMeasurement]

    def to_json(self) -> dict:
        return {
            "amplitudes": [[z.real, z.imag] for z in self.state.amplitudes],
            "A": [{"theta": m.theta, "phi": m.phi} for m in self.measA],
            "B": [{"theta": m.theta, "phi": m.phi} for m in self.measB],
        }


def _born_table(psi: np.ndarray, UA: np.ndarray, UB: np.ndarray) -> np.ndarray:
    # UA[X, a, i]: eigenvector components; psi[i, j]
    amp = np.einsum("xai,ybj,ij->xyab", UA.conj(), UB.conj(), psi)
    return amp.real**2 + amp.imag**2


def born_probabilities(S: QuantumScenario) -> Behavior:
    UA = np.stack([m.eigenvectors() for m in S.measA])
    UB = np.stack([m.eigenvectors() for m in S.measB])
    return Behavior(_born_table(S.state.matrix(), UA, UB))


def random_scenario(rng: np.random.Generator) -> QuantumScenario:
    """Haar-like random pure state with uniformly random Bloch directions."""
    z = rng.normal(size=4) + 1j * rng.normal(size=4)
    state = TwoQubitState.normalized(z)

    def meas():
        v = rng.normal(size=3)
        v /= np.linalg.norm(v)
        return QubitMeasurement(math.acos(max(-1.0, min(1.0, v[2]))), math.atan2(v[1], v[0]))

    return QuantumScenario(state, (meas(), meas()), (meas(), meas()))


def scenario_from_params(params, full_bloch: bool = False) -> QuantumScenario:
    """Parameter vector -> scenario.

    x-z plane: (alpha, thA, thA', thB, thB'); full Bloch appends (phA, phA', phB, phB').
    """
    p = np.asarray(params, dtype=float)
    phis = p[5:9] if full_bloch else np.zeros(4)
    A = (QubitMeasurement(p[1], phis[0]), QubitMeasurement(p[2], phis[1]))
    B = (QubitMeasurement(p[3], phis[2]), QubitMeasurement(p[4], phis[3]))
    return QuantumScenario(TwoQubitState.schmidt(p[0]), A, B)


def _fast_table(p: np.ndarray, full_bloch: bool) -> np.ndarray:
    ca, sa = math.cos(p[0]), math.sin(p[0])
    psi = np.array([[ca, 0.0], [0.0, sa]], dtype=complex)
    th = p[1:5] / 2
    ph = p[5:9] if full_bloch else np.zeros(4)
    c, s, e = np.cos(th), np.sin(th), np.exp(1j * ph)
    U = np.empty((4, 2, 2), dtype=complex)
    U[:, 0, 0], U[:, 0, 1] = c, e * s
    U[:, 1, 0], U[:, 1, 1] = s, -e * c
    return _born_table(psi, U[:2], U[2:])


@dataclass
class OptimizerConfig:
    starts: int = 64
    seed: int = 0
    max_iter: int = 4000
    penalties: tuple[float, ...] = (1e2, 1e4, 1e6)
    constraint_tol: float = 1e-6
    full_bloch: bool = False
    # Exponent applied to each zero-target probability in the penalty.  The
    # probabilities are squared amplitudes, so power 1 is already a quadratic
    # penalty in the amplitudes; power 2 leaves residuals near 1e-6 at mu=1e8.
    penalty_power: int = 1


@dataclass
class QuantumOptimum:
    value: float
    scenario: QuantumScenario
    residuals: dict[str, float]
    start_index: int
    feasible_starts: int
    params: list[float] = field(default_factory=list)

    def behavior(self) -> Behavior:
        return born_probabilities(self.scenario)


def _constraints(t: np.ndarray, kind: str) -> dict[str, float]:
    r = {"p11|10": float(t[1, 0, 1, 1]), "p11|01": float(t[0, 1, 1, 1])}
    if kind == "hardy":
        r["p00|00"] = float(t[0, 0, 0, 0])
    return r


def _objective(t: np.ndarray, kind: str) -> float:
    q4 = t[1, 1, 1, 1]
    return float(q4) if kind == "hardy" else float(q4 - t[0, 0, 0, 0])


def _optimize(kind: str, config: OptimizerConfig) -> QuantumOptimum:
    if config.starts < 1:
        raise DomainError("need at least one start")
    fb = config.full_bloch
    power = config.penalty_power
    dim = 9 if fb else 5
    rng = np.random.default_rng(config.seed)
    starts = []
    for _ in range(config.starts):
        x0 = rng.uniform(0.0, TWO_PI, size=dim)
        x0[0] = rng.uniform(0.0, math.pi / 2)
        starts.append(x0)

    best = None
    feasible = 0
    for idx, x in enumerate(starts):
        for mu in config.penalties:

            def f(p, mu=mu):
                t = _fast_table(p, fb)
                pen = sum(r**power for r in _constraints(t, kind).values())
                return -(_objective(t, kind) - mu * pen)

            res = minimize(
                f,
                x,
                method="Nelder-Mead",
                options={"maxiter": config.max_iter, "xatol": 1e-10, "fatol": 1e-14, "adaptive": True},
            )
            x = res.x
        t = _fast_table(x, fb)
        resid = _constraints(t, kind)
        if max(abs(v) for v in resid.values()) >= config.constraint_tol:
            continue
        feasible += 1
        val = _objective(t, kind)
        if best is None or val > best[0]:
            best = (val, idx, x, resid)

    if best is None:
        raise ConvergenceError(
            f"no start out of {config.starts} met the constraint tolerance {config.constraint_tol:g}"
        )
    val, idx, x, resid = best
    scenario = scenario_from_params(x, fb)
    B = born_probabilities(scenario)
    check = hardy_success(B) if kind == "hardy" else cabello_success(B)
    if abs(check - val) > 1e-8:
        raise ConvergenceError(f"regenerated behavior gives {check!r}, optimizer claimed {val!r}")
    return QuantumOptimum(val, scenario, resid, idx, feasible, [float(v) for v in x])


def optimize_hardy_quantum(config: OptimizerConfig | None = None) -> QuantumOptimum:
    """Maximize p(11|11) subject to p(00|00) = p(11|10) = p(11|01) = 0."""
    return _optimize("hardy", config or OptimizerConfig())


def optimize_cabello_quantum(config: OptimizerConfig | None = None) -> QuantumOptimum:
    """Maximize p(11|11) - p(00|00) subject to p(11|10) = p(11|01) = 0."""
    return _optimize("cabello", config or OptimizerConfig())


# Constrained families: the zero conditions fix the remaining angles exactly,
# which gives an optimizer-independent cross-check on a low-dimensional grid.


def _vec(theta: float, outcome: int) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([c, s]) if outcome == 0 else np.array([-s, c])


def _angle_along(w: np.ndarray) -> float:
    """theta whose outcome-0 vector is parallel to the real 2-vector w."""
    return 2 * math.atan2(w[1], w[0])


def cabello_family(alpha: float, thA: float, thB: float) -> list[float]:
    """x-z parameters (alpha, thA, thA', thB, thB') with p(11|10) = p(11|01) = 0."""
    M = np.array([[math.cos(alpha), 0.0], [0.0, math.sin(alpha)]])
    thA1 = _angle_along(M @ _vec(thB, 1))
    thB1 = _angle_along(M.T @ _vec(thA, 1))
    return [alpha, thA, thA1, thB, thB1]


def hardy_family(alpha: float, thA: float) -> list[float]:
    """Additionally pick thB so that p(00|00) = 0."""
    M = np.array([[math.cos(alpha), 0.0], [0.0, math.sin(alpha)]])
    y = M.T @ _vec(thA, 0)
    thB = 2 * math.atan2(-y[0], y[1])  # outcome-1 vector of B parallel to y
    return cabello_family(alpha, thA, thB)


def grid_search_hardy(n_alpha: int = 60, n_theta: int = 120, refine: bool = True) -> tuple[float, list[float]]:
    """Grid over (alpha, thA) on the exact Hardy family, then local refinement."""

    def val(z):
        return _fast_table(np.array(hardy_family(*z)), False)[1, 1, 1, 1]

    best = max(
        ((val((a, t)), (a, t)) for a in np.linspace(0, math.pi / 2, n_alpha) for t in np.linspace(0, TWO_PI, n_theta)),
        key=lambda vt: vt[0],
    )
    z = np.array(best[1])
    if refine:
        z = minimize(lambda z: -val(z), z, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-15}).x
    return float(val(z)), hardy_family(*z)


def grid_search_cabello(n: int = 24, refine: bool = True) -> tuple[float, list[float]]:
    """Grid over (alpha, thA, thB) on the exact two-zero family, then local refinement."""

    def val(z):
        t = _fast_table(np.array(cabello_family(*z)), False)
        return t[1, 1, 1, 1] - t[0, 0, 0, 0]

    grid_a = np.linspace(0, math.pi / 2, n)
    grid_t = np.linspace(0, TWO_PI, 2 * n, endpoint=False)
    best = max(((val((a, s, t)), (a, s, t)) for a in grid_a for s in grid_t for t in grid_t), key=lambda vt: vt[0])
    z = np.array(best[1])
    if refine:
        z = minimize(lambda z: -val(z), z, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-15}).x
    return float(val(z)), cabello_family(*z)
