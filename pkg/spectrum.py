"""
spectrum.py
Orbitals and the energy functionals of the deformed rotor model.
"""
import re
import math
import logging
from dataclasses import dataclass
from typing import Union

from exceptions import (
    DegenerateDenominatorError,
    NonFiniteEvaluationError,
    QuantumNumberError,
    RotorParameterError,
)
from qalgebra import Deformation, alpha, casimir_factor

logger = logging.getLogger(__name__)

L_LETTERS = "spdfghiklmnoq"
LABEL_PATTERN = re.compile(r"^\s*(\d+)\s*([spdfghiklmnoq])\s*$")


@dataclass(frozen=True, order=True)
class Orbital:
    """An (n, l) shell. Instances compare lexicographically on (n, l)."""
    n: int
    l: int

    def __post_init__(self):
        for name, value in (("n", self.n), ("l", self.l)):
            if isinstance(value, bool) or not isinstance(value, int):
                raise QuantumNumberError(f"{name} must be an integer, got {value!r}")
        if self.n < 1:
            raise QuantumNumberError(f"n must be >= 1, got {self.n}")
        if not 0 <= self.l <= self.n - 1:
            raise QuantumNumberError(f"l must satisfy 0 <= l <= n-1, got n={self.n}, l={self.l}")
        if self.l >= len(L_LETTERS):
            raise QuantumNumberError(f"l={self.l} has no spectroscopic letter (max {len(L_LETTERS) - 1})")

    @property
    def label(self) -> str:
        """Spectroscopic label such as '3d'."""
        return f"{self.n}{L_LETTERS[self.l]}"

    @property
    def capacity(self) -> int:
        """Number of electrons the shell holds when full, 2(2l+1)."""
        return 2 * (2 * self.l + 1)

    @classmethod
    def parse(cls, label: str) -> "Orbital":
        """
        Parse a label of the form <n><letter>.

        Args:
            label: e.g. '4f'

        Returns:
            Orbital: The parsed orbital

        Raises:
            QuantumNumberError: If the label is malformed or violates l <= n-1
        """
        match = LABEL_PATTERN.match(label)
        if not match:
            raise QuantumNumberError(f"Invalid orbital label: {label!r}")
        return cls(int(match.group(1)), L_LETTERS.index(match.group(2)))

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class RotorParameters:
    """Moment of inertia I and energy scale E0 of the rotor Hamiltonian."""
    inertia: float = 0.5
    ground_energy: float = -13.6

    def __post_init__(self):
        if not math.isfinite(self.inertia) or self.inertia <= 0:
            raise RotorParameterError(f"inertia must be positive, got {self.inertia}")
        if not math.isfinite(self.ground_energy) or self.ground_energy >= 0:
            raise RotorParameterError(f"ground_energy must be negative, got {self.ground_energy}")


DEFAULT_ROTOR = RotorParameters()


@dataclass(frozen=True)
class EnergyKey:
    """The ordering quantity eps_q(n, l) + 1 of one orbital."""
    orbital: Orbital
    value: float


def as_orbital(o: Union[Orbital, str]) -> Orbital:
    """Accept either an Orbital or its label."""
    return o if isinstance(o, Orbital) else Orbital.parse(o)


def epsilon_key(o: Union[Orbital, str], d: Deformation) -> EnergyKey:
    """
    Ordering key n^2 + alpha(q) [l]_q [l+1]_q.

    The square root in front of the key is omitted; it does not change the
    ordering.
    """
    o = as_orbital(o)
    value = o.n * o.n + alpha(d) * casimir_factor(o.l, d)
    if not math.isfinite(value):
        raise NonFiniteEvaluationError(f"Energy key of {o.label} at {Deformation.of(d)} is {value}")
    return EnergyKey(o, value)


def novaro_key(o: Union[Orbital, str], alpha_const: float) -> float:
    """Undeformed ordering key n^2 + alpha l(l+1)."""
    o = as_orbital(o)
    return float(o.n * o.n + alpha_const * o.l * (o.l + 1))


def h_q_eigenvalue(o: Union[Orbital, str], d: Deformation,
                   p: RotorParameters = DEFAULT_ROTOR) -> float:
    """
    Eigenvalue of the deformed rotor Hamiltonian h_q.

    Args:
        o: Orbital
        d: Deformation
        p: Rotor parameters, only the inertia is used

    Returns:
        float: ((n-1)(n+1) + alpha(q) [l]_q [l+1]_q) / (2I)
    """
    o = as_orbital(o)
    return ((o.n - 1) * (o.n + 1) + alpha(d) * casimir_factor(o.l, d)) / (2.0 * p.inertia)


def novaro_h_eigenvalue(o: Union[Orbital, str], alpha_const: float,
                        p: RotorParameters = DEFAULT_ROTOR) -> float:
    """Eigenvalue of the undeformed asymmetric rotor h = (Lambda^2 + alpha L^2) / 2I."""
    o = as_orbital(o)
    return ((o.n - 1) * (o.n + 1) + alpha_const * (o.l * (o.l + 1))) / (2.0 * p.inertia)


def spectral_energy(o: Union[Orbital, str], d: Deformation,
                    p: RotorParameters = DEFAULT_ROTOR) -> float:
    """
    Shell energy E0 / (h_q + 1).

    Raises:
        DegenerateDenominatorError: If h_q + 1 <= 0, which needs alpha(q) < 0
    """
    o = as_orbital(o)
    denominator = h_q_eigenvalue(o, d, p) + 1.0
    if denominator <= 0:
        raise DegenerateDenominatorError(
            f"h_q + 1 = {denominator} for {o.label} at {Deformation.of(d)}; spectral map undefined"
        )
    return p.ground_energy / denominator
