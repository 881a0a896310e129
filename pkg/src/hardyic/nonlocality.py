"""Hardy and Cabello conditions, their success functionals, and CHSH.

In the 0/1 outcome convention the four Hardy/Cabello probabilities are

    q1 = p(00|00)         P(A=+1, B=+1)
    p(11|10) = 0          P(A'=-1, B=-1)
    p(11|01) = 0          P(A=-1, B'=-1)
    q4 = p(11|11)         P(A'=-1, B'=-1)
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .box import EPS, Behavior
from .polytope import LinearFunctional

HARDY_SUCCESS = LinearFunctional.entry(1, 1, 1, 1)
CABELLO_SUCCESS = LinearFunctional.entry(1, 1, 1, 1) - LinearFunctional.entry(0, 0, 0, 0)


def _chsh_coefficients() -> np.ndarray:
    c = np.empty((2, 2, 2, 2))
    for X in (0, 1):
        for Y in (0, 1):
            sign = -1.0 if X == Y == 1 else 1.0
            for a in (0, 1):
                for b in (0, 1):
                    c[X, Y, a, b] = sign * (-1) ** (a ^ b)
    return c


CHSH = LinearFunctional(_chsh_coefficients())


@dataclass(frozen=True)
class HardyCertificate:
    q1: float
    q4: float
    zero_residuals: tuple[float, float]
    hardy_holds: bool
    cabello_holds: bool

    def as_dict(self) -> dict:
        d = asdict(self)
        d["zero_residuals"] = list(self.zero_residuals)
        return d


def hardy_check(B: Behavior, eps: float = EPS) -> HardyCertificate:
    q1 = B.p(0, 0, 0, 0)
    q4 = B.p(1, 1, 1, 1)
    r = (B.p(1, 1, 1, 0), B.p(1, 1, 0, 1))
    zeros_ok = r[0] <= eps and r[1] <= eps
    return HardyCertificate(
        q1=q1,
        q4=q4,
        zero_residuals=r,
        hardy_holds=zeros_ok and q1 <= eps and q4 > eps,
        cabello_holds=zeros_ok and q4 - q1 > eps,
    )


def hardy_success(B: Behavior) -> float:
    """p(11|11); only meaningful as a Hardy success when ``hardy_check`` holds."""
    return HARDY_SUCCESS(B)


def cabello_success(B: Behavior) -> float:
    """p(11|11) - p(00|00), reported whether or not the zero conditions hold."""
    return CABELLO_SUCCESS(B)


def correlator(B: Behavior, X: int, Y: int) -> float:
    t = B.table[X, Y]
    return float(t[0, 0] + t[1, 1] - t[0, 1] - t[1, 0])


def chsh_value(B: Behavior) -> float:
    """E(0,0) + E(0,1) + E(1,0) - E(1,1)."""
    return CHSH(B)
