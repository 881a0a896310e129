"""Bipartite two-input/two-output behaviors p(ab|XY).

A behavior is stored as a read-only float array indexed ``[X][Y][a][b]``.
Outcome 0 corresponds to the eigenvalue +1 and outcome 1 to -1.
"""

from __future__ import annotations

import functools
import itertools
import json
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import DomainError, NegativeWeightError, WeightSumError

EPS = 1e-9


class VertexId(NamedTuple):
    """Label of a no-signalling polytope vertex.

    ``kind`` is ``"local"`` (four bits alpha, beta, gamma, delta) or
    ``"nonlocal"`` (three bits alpha, beta, gamma).
    """

    kind: str
    bits: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.kind}:{''.join(map(str, self.bits))}"

    @classmethod
    def parse(cls, text: str) -> VertexId:
        kind, _, bits = text.partition(":")
        nbits = {"local": 4, "nonlocal": 3}.get(kind)
        if nbits is None or len(bits) != nbits or set(bits) - {"0", "1"}:
            raise DomainError(f"bad vertex id {text!r}")
        return cls(kind, tuple(int(c) for c in bits))


def Local(alpha: int, beta: int, gamma: int, delta: int) -> VertexId:
    return VertexId("local", (alpha, beta, gamma, delta))


def Nonlocal(alpha: int, beta: int, gamma: int) -> VertexId:
    return VertexId("nonlocal", (alpha, beta, gamma))


class Behavior:
    """Immutable conditional probability table ``p[X, Y, a, b]``."""

    __slots__ = ("_table", "name")

    def __init__(self, table, name: str | None = None):
        arr = np.array(table, dtype=float)
        if arr.shape != (2, 2, 2, 2):
            raise DomainError(f"behavior table must have shape (2,2,2,2), got {arr.shape}")
        arr.setflags(write=False)
        self._table = arr
        self.name = name

    @property
    def table(self) -> np.ndarray:
        return self._table

    def p(self, a: int, b: int, X: int, Y: int) -> float:
        """Entry p(ab|XY) with the conventional argument order."""
        return float(self._table[X, Y, a, b])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Behavior):
            return NotImplemented
        return bool(np.array_equal(self._table, other._table))

    def __hash__(self) -> int:
        return hash(self._table.tobytes())

    def allclose(self, other: Behavior, atol: float = 1e-8) -> bool:
        return bool(np.allclose(self._table, other._table, rtol=0.0, atol=atol))

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<Behavior{label}>"

    def to_json(self) -> dict:
        out: dict = {}
        if self.name is not None:
            out["name"] = self.name
        out["table"] = self._table.tolist()
        return out


@dataclass(frozen=True)
class NoSignallingCertificate:
    aToB_deviation: float
    bToA_deviation: float
    normalization_deviation: float
    min_entry: float
    max_entry: float

    def ok(self, eps: float = EPS) -> bool:
        return (
            self.aToB_deviation <= eps
            and self.bToA_deviation <= eps
            and self.normalization_deviation <= eps
            and self.min_entry >= -eps
            and self.max_entry <= 1 + eps
        )

    def as_dict(self) -> dict:
        return {
            "aToB_deviation": self.aToB_deviation,
            "bToA_deviation": self.bToA_deviation,
            "normalization_deviation": self.normalization_deviation,
            "min_entry": self.min_entry,
            "max_entry": self.max_entry,
        }


def make_local_vertex(alpha: int, beta: int, gamma: int, delta: int) -> Behavior:
    """Deterministic box with a = alpha*X + beta, b = gamma*Y + delta (mod 2)."""
    t = np.zeros((2, 2, 2, 2))
    for X in (0, 1):
        for Y in (0, 1):
            t[X, Y, (alpha * X) ^ beta, (gamma * Y) ^ delta] = 1.0
    return Behavior(t, name=str(Local(alpha, beta, gamma, delta)))


def make_nonlocal_vertex(alpha: int, beta: int, gamma: int) -> Behavior:
    """PR-type box: p = 1/2 whenever a+b = XY + alpha*X + beta*Y + gamma (mod 2)."""
    t = np.zeros((2, 2, 2, 2))
    for X in (0, 1):
        for Y in (0, 1):
            parity = (X & Y) ^ (alpha * X) ^ (beta * Y) ^ gamma
            t[X, Y, 0, parity] = t[X, Y, 1, 1 ^ parity] = 0.5
    return Behavior(t, name=str(Nonlocal(alpha, beta, gamma)))


@functools.cache
def vertex(vid: VertexId) -> Behavior:
    if vid.kind == "local":
        return make_local_vertex(*vid.bits)
    if vid.kind == "nonlocal":
        return make_nonlocal_vertex(*vid.bits)
    raise DomainError(f"unknown vertex kind {vid.kind!r}")


def pr_box() -> Behavior:
    return Behavior(make_nonlocal_vertex(0, 0, 0).table, name="pr")


def white_noise() -> Behavior:
    return Behavior(np.full((2, 2, 2, 2), 0.25), name="white")


def correlator_box(E: np.ndarray | Sequence[Sequence[float]]) -> Behavior:
    """Box with uniform marginals and correlators <(-1)^(a+b)> = E[X][Y]."""
    E = np.asarray(E, dtype=float)
    t = np.empty((2, 2, 2, 2))
    for a, b in itertools.product((0, 1), repeat=2):
        t[:, :, a, b] = (1 + (-1) ** (a ^ b) * E) / 4
    return Behavior(t)


def mix(weights: Sequence[float], behaviors: Sequence[Behavior], eps: float = EPS) -> Behavior:
    """Convex combination sum_i w_i B_i."""
    w = np.asarray(weights, dtype=float)
    if len(w) != len(behaviors):
        raise DomainError("weights and behaviors differ in length")
    if len(w) == 0:
        raise WeightSumError("empty mixture")
    if np.any(w < -eps):
        raise NegativeWeightError(f"negative weight {w.min():.3g}")
    if abs(w.sum() - 1.0) > eps:
        raise WeightSumError(f"weights sum to {w.sum():.12g}")
    t = np.tensordot(w, np.stack([B.table for B in behaviors]), axes=1)
    return Behavior(t)


def validate(B: Behavior, eps: float = EPS) -> NoSignallingCertificate:
    """Report positivity, normalization and no-signalling deviations.

    ``eps`` is accepted for interface symmetry; the caller compares the
    returned deviations against it (see ``NoSignallingCertificate.ok``).
    """
    t = B.table.tolist()  # plain floats: faster than numpy reductions at this size
    flat = [t[X][Y][a][b] for X in (0, 1) for Y in (0, 1) for a in (0, 1) for b in (0, 1)]
    norm_dev = max(abs(sum(flat[4 * k : 4 * k + 4]) - 1.0) for k in range(4))
    alice = [[[t[X][Y][a][0] + t[X][Y][a][1] for a in (0, 1)] for Y in (0, 1)] for X in (0, 1)]
    bob = [[[t[X][Y][0][b] + t[X][Y][1][b] for b in (0, 1)] for Y in (0, 1)] for X in (0, 1)]
    # Bob's input showing up in Alice's marginal is signalling from B to A
    b_dev = max(abs(alice[X][0][a] - alice[X][1][a]) for X in (0, 1) for a in (0, 1))
    a_dev = max(abs(bob[0][Y][b] - bob[1][Y][b]) for Y in (0, 1) for b in (0, 1))
    return NoSignallingCertificate(
        aToB_deviation=a_dev,
        bToA_deviation=b_dev,
        normalization_deviation=norm_dev,
        min_entry=min(flat),
        max_entry=max(flat),
    )


def marginal(B: Behavior, party: str, input: int, outcome: int) -> float:
    """One-party marginal, taking the other party's input to be 0."""
    t = B.table
    if party == "A":
        return float(t[input, 0, outcome, :].sum())
    if party == "B":
        return float(t[0, input, :, outcome].sum())
    raise DomainError(f"party must be 'A' or 'B', got {party!r}")


def resolve_box(spec: str) -> Behavior:
    """Built-in name or JSON file path.

    Built-ins: ``pr``, ``white``, ``hardy-witness``, ``local:abgd``, ``nonlocal:abg``.
    """
    if spec == "pr":
        return pr_box()
    if spec == "white":
        return white_noise()
    if spec == "hardy-witness":
        from .ic_bounds import hardy_witness

        return hardy_witness()
    if spec.startswith(("local:", "nonlocal:")):
        return vertex(VertexId.parse(spec))
    path = Path(spec)
    if not path.exists():
        raise DomainError(f"unknown box {spec!r} (not a built-in name or existing file)")
    return load_behavior(path)


def load_behavior(path: str | Path) -> Behavior:
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict) or "table" not in data:
        raise DomainError("behavior file must be a JSON object with a 'table' key")
    return Behavior(data["table"], name=data.get("name"))


def save_behavior(B: Behavior, path: str | Path) -> None:
    Path(path).write_text(json.dumps(B.to_json()))
