"""Exact and sampled simulation of the Information Causality game.

Alice holds N = 2**n uniform bits, Bob a uniform index K, and one classical
bit travels from Alice to Bob.  The protocol nests the two-bit primitive:

* Alice feeds X = a0 xor a1 into a box, obtains A, and forms x = a0 xor A;
* Bob feeds Y = (which bit he wants) and outputs x xor B.

Level by level, Alice's would-be messages become the next level's data, so
N - 1 boxes reduce her string to a single bit.  Bob queries only the n boxes
on the path to his index, XOR-ing their outputs onto the received bit.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .box import Behavior, Local, Nonlocal, mix, vertex
from .errors import BudgetError, DomainError

EXACT_MAX_LEVELS = 3


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def mutual_information_bits(joint) -> float:
    """I(X:Y) in bits for a 2x2 joint table, with 0 log 0 = 0."""
    P = np.asarray(joint, dtype=float)
    if P.shape != (2, 2):
        raise DomainError(f"joint table must be 2x2, got shape {P.shape}")
    if np.any(P < 0):
        raise DomainError("joint table has negative entries")
    if abs(P.sum() - 1.0) > 1e-12:
        raise DomainError(f"joint table sums to {P.sum():.15g}")
    px, py = P.sum(axis=1), P.sum(axis=0)
    total = 0.0
    for i in range(2):
        for j in range(2):
            if P[i, j] > 0:
                total += P[i, j] * math.log2(P[i, j] / (px[i] * py[j]))
    return max(total, 0.0)


def elementary_round(box: Behavior) -> tuple[float, float]:
    """Success probabilities of the N = 2 primitive for Bob asking bit 0 and bit 1."""
    t = box.table
    success = [0.0, 0.0]
    for b in (0, 1):
        for a0, a1, A, B in itertools.product((0, 1), repeat=4):
            X = a0 ^ a1
            beta = a0 ^ A ^ B
            if beta == (a0, a1)[b]:
                success[b] += 0.25 * t[X, b, A, B]
    return float(success[0]), float(success[1])


@dataclass(frozen=True)
class GameConfig:
    levels: int
    box: Behavior
    mode: str = "exact"  # "exact" or "monte_carlo"
    samples: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if self.levels < 1:
            raise DomainError("levels must be >= 1")
        if self.mode not in ("exact", "monte_carlo"):
            raise DomainError(f"unknown mode {self.mode!r}")
        if self.mode == "exact" and self.levels > EXACT_MAX_LEVELS:
            raise BudgetError(f"exact enumeration is limited to {EXACT_MAX_LEVELS} levels, got {self.levels}")

    @property
    def N(self) -> int:
        return 2**self.levels


@dataclass
class GameResult:
    per_index_success: list[float]
    per_index_information: list[float]
    total_I: float
    m: int = 1
    joints: list[list[list[float]]] = field(default_factory=list, repr=False)

    @property
    def violates_ic(self) -> bool:
        return self.total_I > self.m + 1e-12


def _result_from_joints(joints: np.ndarray) -> GameResult:
    success = [float(J[0, 0] + J[1, 1]) for J in joints]
    info = [mutual_information_bits(J / J.sum()) for J in joints]
    return GameResult(success, info, float(sum(info)), 1, joints.tolist())


def _alice_marginal(t: np.ndarray) -> np.ndarray:
    """pA[X, A] from Bob's input 0; input-independent for no-signalling boxes."""
    return t[:, 0, :, :].sum(axis=2)


def _exact(config: GameConfig) -> GameResult:
    t = config.box.table
    pA = _alice_marginal(t)
    N = config.N

    def off_path(data, lo, size):
        # P(message = 1) for the subtree covering data[lo:lo+size]
        if size == 1:
            return float(data[lo])
        half = size // 2
        pl, pr = off_path(data, lo, half), off_path(data, lo + half, half)
        p1 = 0.0
        for l, r in itertools.product((0, 1), repeat=2):
            w = (pl if l else 1 - pl) * (pr if r else 1 - pr)
            if w:
                p1 += w * pA[l ^ r, 1 - l]  # message l xor A equals 1
        return p1

    def on_path(data, K, lo, size):
        # joint J[m, s] of the on-path message and the XOR of Bob's outputs below it
        J = np.zeros((2, 2))
        if size == 1:
            J[data[lo], 0] = 1.0
            return J
        half = size // 2
        Y = int(K >= lo + half)
        on_lo, off_lo = (lo + half, lo) if Y else (lo, lo + half)
        Jon = on_path(data, K, on_lo, half)
        poff = off_path(data, off_lo, half)
        for m_on, s, m_off in itertools.product((0, 1), repeat=3):
            w = Jon[m_on, s] * (poff if m_off else 1 - poff)
            if not w:
                continue
            l, r = (m_off, m_on) if Y else (m_on, m_off)
            X = l ^ r
            for A, B in itertools.product((0, 1), repeat=2):
                J[l ^ A, s ^ B] += w * t[X, Y, A, B]
        return J

    joints = np.zeros((N, 2, 2))
    weight = 1.0 / 2**N
    for data in itertools.product((0, 1), repeat=N):
        for K in range(N):
            J = on_path(data, K, 0, N)
            p_beta1 = J[0, 1] + J[1, 0]
            joints[K, data[K], 0] += weight * (1 - p_beta1)
            joints[K, data[K], 1] += weight * p_beta1
    return _result_from_joints(joints)


def _monte_carlo(config: GameConfig, chunk: int = 1 << 16) -> GameResult:
    t = config.box.table
    pA = _alice_marginal(t)
    with np.errstate(divide="ignore", invalid="ignore"):
        # P(B = 1 | A, X, Y), zero where A never occurs
        pB1 = np.nan_to_num(t[:, :, :, 1] / t.sum(axis=3))
    n, N = config.levels, config.N
    rng = np.random.default_rng(config.seed)
    counts = np.zeros((N, 2, 2))
    remaining = config.samples
    while remaining > 0:
        S = min(chunk, remaining)
        remaining -= S
        data = rng.integers(0, 2, size=(S, N), dtype=np.int8)
        # Alice: per level, inputs X, outcomes A, and messages passed upward
        levels = []
        cur = data
        for _ in range(n):
            l, r = cur[:, 0::2], cur[:, 1::2]
            X = l ^ r
            A = (rng.random(l.shape) < pA[X, 1]).astype(np.int8)
            levels.append((X, A))
            cur = l ^ A
        top = cur[:, 0]
        u = rng.random((S, N, n))
        for K in range(N):
            beta = top.copy()
            for j in range(n):
                node = K >> (j + 1)
                Y = (K >> j) & 1
                X, A = levels[j][0][:, node], levels[j][1][:, node]
                B = (u[:, K, j] < pB1[X, Y, A]).astype(np.int8)
                beta ^= B
            aK = data[:, K]
            for a, b in itertools.product((0, 1), repeat=2):
                counts[K, a, b] += np.count_nonzero((aK == a) & (beta == b))
    return _result_from_joints(counts / config.samples)


def play(config: GameConfig) -> GameResult:
    if config.mode == "exact":
        return _exact(config)
    return _monte_carlo(config)


def e_plane_box(E1: float, E2: float) -> Behavior:
    """Box with biases (E1, E2), for E1, E2 in [0, 1].

    Built as a mixture: weight min(E1, E2) on the PR box, the excess on a
    component biased only in E1 (or only in E2), and the rest white noise
    (uniform over the local vertices).
    """
    if not (0.0 <= E1 <= 1.0 and 0.0 <= E2 <= 1.0):
        raise DomainError("E1 and E2 must lie in [0, 1]")
    both = min(E1, E2)
    only1, only2 = E1 - both, E2 - both
    rest = 1.0 - both - only1 - only2
    # a = b whenever Y = 0, uncorrelated at Y = 1
    e1_vertices = [(0, 0, 0, 0), (0, 0, 1, 0), (0, 1, 0, 1), (0, 1, 1, 1)]
    # b = a at (X,Y) = (0,1), b != a at (1,1), uncorrelated at Y = 0
    e2_vertices = [(1, 0, 0, 0), (1, 0, 1, 1), (1, 1, 1, 0), (1, 1, 0, 1)]
    all_local = list(itertools.product((0, 1), repeat=4))
    weights = [both]
    boxes = [vertex(Nonlocal(0, 0, 0))]
    for w, group in ((only1, e1_vertices), (only2, e2_vertices), (rest, all_local)):
        for bits in group:
            weights.append(w / len(group))
            boxes.append(vertex(Local(*bits)))
    B = mix(weights, boxes)
    return Behavior(B.table, name=f"E({E1:.6g},{E2:.6g})")


@dataclass(frozen=True)
class SweepPoint:
    E1: float
    E2: float
    total_I: float
    result: GameResult


def sweep_E_plane(grid: int, levels: int) -> list[SweepPoint]:
    """Exact game value on a grid x grid lattice over [0, 1]^2 of (E1, E2)."""
    if grid < 2:
        raise DomainError("grid resolution must be >= 2")
    out = []
    for E1 in np.linspace(0.0, 1.0, grid):
        for E2 in np.linspace(0.0, 1.0, grid):
            res = play(GameConfig(levels, e_plane_box(float(E1), float(E2))))
            out.append(SweepPoint(float(E1), float(E2), res.total_I, res))
    return out
