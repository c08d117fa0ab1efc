"""
ordering.py
Orbital filling sequences, the reference series they are measured against,
and the comparison report between the two.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from exceptions import BoundsError, MissingOrbitalError, UnknownSeriesError
from qalgebra import Deformation
from spectrum import EnergyKey, Orbital, as_orbital, epsilon_key, novaro_key

logger = logging.getLogger(__name__)

TIE_TOLERANCE = 1e-9
MAX_N = 12
MAX_L = 5

MADELUNG = "madelung"
ION = "ion"
HYDROGENIC = "hydrogenic"
CUSTOM = "custom"

_MADELUNG_LABELS = ("1s 2s 2p 3s 3p 4s 3d 4p 5s 4d 5p 6s 4f 5d 6p 7s 5f 6d").split()
# positions preceded by the rare-gas separator
_MADELUNG_RARE_GAS_MARKS = frozenset({1, 3, 5, 8, 11, 15})
_ION_LABELS = ("1s 2s 2p 3s 3p 3d 4s 4p 4d 5s 5p 4f 5d 6s 6p 5f 6d 7s").split()


def keys_tie(a: float, b: float, tolerance: float = TIE_TOLERANCE) -> bool:
    """True when two key values are equal within the relative tie tolerance."""
    return abs(a - b) <= tolerance * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class OrbitalSequence:
    """
    Orbitals sorted by ascending energy key.

    Keys that tie within tolerance are chained into groups and ordered by
    (n, l) inside each group. `tie_groups` lists the index sets of groups with
    more than one member.
    """
    q: Optional[Deformation]
    entries: Tuple[EnergyKey, ...]
    tie_groups: Tuple[Tuple[int, ...], ...]
    tie_tolerance: float = TIE_TOLERANCE
    _group_ids: Tuple[int, ...] = field(default=(), repr=False, compare=False)

    @classmethod
    def from_keys(cls, keys: Iterable[EnergyKey], q: Optional[Deformation] = None,
                  tie_tolerance: float = TIE_TOLERANCE) -> "OrbitalSequence":
        """
        Sort energy keys and build the tie groups.

        Args:
            keys: Energy keys, one per orbital
            q: Deformation the keys were evaluated at, None for constant-alpha keys
            tie_tolerance: Relative tolerance under which two keys tie

        Returns:
            OrbitalSequence: Sorted sequence
        """
        keys = list(keys)
        if len({k.orbital for k in keys}) != len(keys):
            raise BoundsError("Each orbital may appear in a sequence at most once")
        if not keys:
            return cls(q, (), (), tie_tolerance, ())

        values = np.array([k.value for k in keys], dtype=float)
        ns = np.array([k.orbital.n for k in keys])
        ls = np.array([k.orbital.l for k in keys])
        ranked = [keys[i] for i in np.lexsort((ls, ns, values))]

        groups: List[List[EnergyKey]] = [[ranked[0]]]
        for previous, current in zip(ranked, ranked[1:]):
            if keys_tie(previous.value, current.value, tie_tolerance):
                groups[-1].append(current)
            else:
                groups.append([current])

        entries: List[EnergyKey] = []
        group_ids: List[int] = []
        tie_groups: List[Tuple[int, ...]] = []
        for group_id, group in enumerate(groups):
            group.sort(key=lambda k: (k.orbital.n, k.orbital.l))
            start = len(entries)
            entries.extend(group)
            group_ids.extend([group_id] * len(group))
            if len(group) > 1:
                tie_groups.append(tuple(range(start, len(entries))))

        return cls(q, tuple(entries), tuple(tie_groups), tie_tolerance, tuple(group_ids))

    @property
    def orbitals(self) -> Tuple[Orbital, ...]:
        return tuple(k.orbital for k in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, orbital) -> bool:
        return as_orbital(orbital) in self.group_index()

    def key_of(self, orbital) -> float:
        """Key value of an orbital in this sequence."""
        orbital = as_orbital(orbital)
        for k in self.entries:
            if k.orbital == orbital:
                return k.value
        raise MissingOrbitalError(f"{orbital.label} is not part of the sequence")

    def group_index(self) -> Dict[Orbital, int]:
        """Map each orbital to the index of its tie group; equal indices mean a tie."""
        return {k.orbital: g for k, g in zip(self.entries, self._group_ids)}

    def restricted_to(self, orbitals: Iterable) -> "OrbitalSequence":
        """
        Keep only the given orbitals, recomputing tie groups.

        Raises:
            MissingOrbitalError: If an orbital is not in the sequence
        """
        wanted = {as_orbital(o) for o in orbitals}
        missing = wanted - set(self.orbitals)
        if missing:
            labels = ", ".join(o.label for o in sorted(missing))
            raise MissingOrbitalError(f"Sequence lacks orbitals: {labels}")
        kept = [k for k in self.entries if k.orbital in wanted]
        return OrbitalSequence.from_keys(kept, self.q, self.tie_tolerance)

    def render(self) -> str:
        """Render as '1s < 2s = 2p < ...' with '=' joining tied orbitals."""
        if not self.entries:
            return ""
        parts = [self.entries[0].orbital.label]
        for i in range(1, len(self.entries)):
            separator = "=" if self._group_ids[i] == self._group_ids[i - 1] else "<"
            parts.append(f"{separator} {self.entries[i].orbital.label}")
        return " ".join(parts)


def _validate_bounds(n_max: int, l_max: int) -> None:
    for name, value in (("n_max", n_max), ("l_max", l_max)):
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            raise BoundsError(f"{name} must be an integer, got {value!r}")
    if not 1 <= n_max <= MAX_N:
        raise BoundsError(f"n_max must be in 1..{MAX_N}, got {n_max}")
    if not 0 <= l_max <= MAX_L:
        raise BoundsError(f"l_max must be in 0..{MAX_L}, got {l_max}")


def orbital_universe(n_max: int, l_max: int) -> List[Orbital]:
    """All orbitals with n <= n_max and l <= min(n-1, l_max), in (n, l) order."""
    _validate_bounds(n_max, l_max)
    return [Orbital(n, l) for n in range(1, n_max + 1) for l in range(min(n - 1, l_max) + 1)]


def generate_sequence(d: Deformation, n_max: int, l_max: int,
                      tie_tolerance: float = TIE_TOLERANCE) -> OrbitalSequence:
    """
    Order every orbital of the (n_max, l_max) box by its energy key at q.

    Args:
        d: Deformation
        n_max: Largest principal quantum number, 1..12
        l_max: Largest orbital quantum number, 0..5
        tie_tolerance: Relative tolerance under which keys tie

    Returns:
        OrbitalSequence: The model's filling order
    """
    d = Deformation.of(d)
    universe = orbital_universe(n_max, l_max)
    sequence = OrbitalSequence.from_keys((epsilon_key(o, d) for o in universe), d, tie_tolerance)
    logger.debug(f"Generated {len(sequence)} orbitals at {d}: {sequence.render()}")
    return sequence


def novaro_sequence(alpha_const: float, n_max: int, l_max: int,
                    tie_tolerance: float = TIE_TOLERANCE) -> OrbitalSequence:
    """Filling order of the undeformed rotor with a constant asymmetry alpha."""
    universe = orbital_universe(n_max, l_max)
    keys = (EnergyKey(o, novaro_key(o, alpha_const)) for o in universe)
    return OrbitalSequence.from_keys(keys, None, tie_tolerance)


@dataclass(frozen=True)
class ReferenceSeries:
    """A canonical filling order, optionally carrying rare-gas separators."""
    name: str
    entries: Tuple[Orbital, ...]
    rare_gas_marks: FrozenSet[int] = frozenset()

    def __len__(self) -> int:
        return len(self.entries)

    def render(self) -> str:
        """Render as '1s << 2s < 2p << ...', '<<' standing for a rare-gas mark."""
        if not self.entries:
            return ""
        parts = [self.entries[0].label]
        for i in range(1, len(self.entries)):
            separator = "<<" if i in self.rare_gas_marks else "<"
            parts.append(f"{separator} {self.entries[i].label}")
        return " ".join(parts)

    @classmethod
    def from_sequence(cls, sequence: OrbitalSequence) -> "ReferenceSeries":
        """Freeze a generated sequence's order into a custom reference."""
        return cls(CUSTOM, sequence.orbitals)


def reference_series(name: str, n_max: int = 7, l_max: int = 3) -> ReferenceSeries:
    """
    Look up one of the canonical series.

    Args:
        name: 'madelung', 'ion' or 'hydrogenic'
        n_max: Shell bound, hydrogenic series only
        l_max: Angular bound, hydrogenic series only

    Returns:
        ReferenceSeries: The series

    Raises:
        UnknownSeriesError: If the name is not registered
    """
    key = str(name).strip().lower()
    if key == MADELUNG:
        return ReferenceSeries(MADELUNG, tuple(Orbital.parse(s) for s in _MADELUNG_LABELS),
                               _MADELUNG_RARE_GAS_MARKS)
    if key == ION:
        return ReferenceSeries(ION, tuple(Orbital.parse(s) for s in _ION_LABELS))
    if key == HYDROGENIC:
        return ReferenceSeries(HYDROGENIC, tuple(orbital_universe(n_max, l_max)))
    raise UnknownSeriesError(f"Unknown reference series {name!r}; expected one of "
                             f"{MADELUNG}, {ION}, {HYDROGENIC}")


@dataclass(frozen=True)
class ComparisonReport:
    """Agreement between a generated sequence and a reference series."""
    reference: str
    reference_length: int
    matched_prefix_len: int
    inversions: Tuple[Tuple[Orbital, Orbital], ...]
    pair_deviations: Tuple[float, ...]
    exact_match: bool

    @property
    def max_deviation(self) -> float:
        return max(self.pair_deviations, default=0.0)

    def to_dict(self) -> Dict:
        return {
            "reference": self.reference,
            "reference_length": self.reference_length,
            "matched_prefix_len": self.matched_prefix_len,
            "exact_match": self.exact_match,
            "inversions": [
                {"pair": [a.label, b.label], "deviation_percent": dev}
                for (a, b), dev in zip(self.inversions, self.pair_deviations)
            ],
            "max_deviation_percent": self.max_deviation,
        }


def pair_deviation(a: float, b: float) -> float:
    """Symmetric relative difference of two key values, in percent."""
    return 100.0 * abs(a - b) / ((a + b) / 2.0)


def compare(seq: OrbitalSequence, ref: ReferenceSeries) -> ComparisonReport:
    """
    Compare a generated sequence, restricted to the reference's orbitals,
    with the reference order.

    A pair (a, b) listed a-before-b in the reference is an inversion when a
    sits in a strictly later tie group than b. Ties are never inversions.

    Raises:
        MissingOrbitalError: If the sequence lacks a reference orbital
    """
    groups = seq.group_index()
    missing = [o for o in ref.entries if o not in groups]
    if missing:
        raise MissingOrbitalError(
            f"Sequence lacks reference orbitals for {ref.name}: {', '.join(o.label for o in missing)}"
        )

    keys = {k.orbital: k.value for k in seq.entries}
    # stable sort keeps reference order inside tie groups
    restricted = sorted(ref.entries, key=lambda o: groups[o])
    prefix = 0
    for generated, expected in zip(restricted, ref.entries):
        if generated != expected:
            break
        prefix += 1

    inversions: List[Tuple[Orbital, Orbital]] = []
    deviations: List[float] = []
    for i, a in enumerate(ref.entries):
        for b in ref.entries[i + 1:]:
            if groups[a] > groups[b]:
                inversions.append((a, b))
                deviations.append(pair_deviation(keys[a], keys[b]))

    report = ComparisonReport(
        reference=ref.name,
        reference_length=len(ref),
        matched_prefix_len=prefix,
        inversions=tuple(inversions),
        pair_deviations=tuple(deviations),
        exact_match=not inversions,
    )
    logger.debug(f"Compared against {ref.name}: prefix {prefix}/{len(ref)}, {len(inversions)} inversions")
    return report


def sequence_for_reference(seq: OrbitalSequence, names: Sequence[str] = (MADELUNG, ION)) -> OrbitalSequence:
    """Restrict a sequence to the union of the orbitals printed in the named series."""
    wanted = set()
    for name in names:
        wanted.update(reference_series(name).entries)
    return seq.restricted_to(wanted)
