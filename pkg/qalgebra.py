"""
qalgebra.py
q-integers, the linear deformation law alpha(q) and the so(3)_q Casimir factor.
"""
import math
import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

from exceptions import DeformationError, QuantumNumberError

logger = logging.getLogger(__name__)

# q at which alpha(q) vanishes and the model collapses to the hydrogen spectrum
HYDROGEN_Q = 9.0 / 5.0


@dataclass(frozen=True)
class Deformation:
    """
    The deformation parameter q of su(2)_q.

    q = 1 is an ordinary interior point: nothing in this module divides by
    q - 1/q.
    """
    q: float

    def __post_init__(self):
        if isinstance(self.q, bool) or not isinstance(self.q, (int, float, np.floating, np.integer)):
            raise DeformationError(f"q must be a real number, got {self.q!r}")
        if not math.isfinite(self.q) or self.q <= 0:
            raise DeformationError(f"q must be positive and finite, got {self.q}")
        object.__setattr__(self, "q", float(self.q))

    @classmethod
    def of(cls, value: Union["Deformation", float]) -> "Deformation":
        """Coerce a bare float into a Deformation, passing Deformations through."""
        if isinstance(value, Deformation):
            return value
        return cls(value)

    def __str__(self) -> str:
        return f"q={self.q:g}"


def q_integer(x: int, d: Deformation) -> float:
    """
    Evaluate [x]_q with the finite sum q^(x-1) + q^(x-3) + ... + q^(-x+1).

    Args:
        x: Non-negative integer
        d: Deformation

    Returns:
        float: [x]_q, which is exactly x at q = 1 and 0 for x = 0
    """
    d = Deformation.of(d)
    if isinstance(x, bool) or int(x) != x or x < 0:
        raise QuantumNumberError(f"q-integer argument must be a non-negative integer, got {x!r}")
    x = int(x)
    exponents = np.arange(x - 1, -x, -2, dtype=float)
    return float(np.sum(np.power(d.q, exponents)))


def alpha(d: Deformation) -> float:
    """Linear deformation law alpha(q) = 3 - (5/3) q."""
    d = Deformation.of(d)
    return 3.0 - (5.0 / 3.0) * d.q


def casimir_factor(l: int, d: Deformation) -> float:
    """
    Eigenvalue [l]_q [l+1]_q of the so(3)_q Casimir operator.

    Reduces to l(l+1) at q = 1.
    """
    return q_integer(l, d) * q_integer(l + 1, d)
