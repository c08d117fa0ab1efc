"""
aufbau.py
Electron configurations by sequential filling, reference ground-state ingestion
and exception counting.
"""
import re
import logging
import warnings
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import BinaryIO, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import pandas as pd

from exceptions import (
    BoundsError,
    CapacityExceededError,
    ConfigurationParseError,
    ElectronTotalMismatchError,
    InputValidationError,
    QuantumNumberError,
    ReferenceDataError,
    UnknownCoreError,
)
from ordering import OrbitalSequence, ReferenceSeries, generate_sequence, reference_series, MADELUNG
from qalgebra import Deformation
from spectrum import Orbital
from utils.elements import NOBLE_GAS_CORES, get_element_symbol

logger = logging.getLogger(__name__)

Occupancy = Tuple[Orbital, int]

CORE_TOKEN = re.compile(r"^\[([A-Z][a-z]?)\]$")
SHELL_TOKEN = re.compile(r"^(\d+)([a-z])(\d+)$")
CSV_COLUMNS = ["z", "symbol", "configuration"]

# largest core first
_CORE_SEARCH_ORDER = ("Rn", "Xe", "Kr", "Ar", "Ne", "He")


def _shell_token(token: str, line: Optional[int]) -> Occupancy:
    match = SHELL_TOKEN.match(token)
    if not match:
        raise ConfigurationParseError(f"Malformed shell token {token!r}", line)
    try:
        orbital = Orbital.parse(match.group(1) + match.group(2))
    except QuantumNumberError as e:
        raise ConfigurationParseError(f"Malformed shell token {token!r}: {e}", line) from e
    occupancy = int(match.group(3))
    if not 1 <= occupancy <= orbital.capacity:
        raise ConfigurationParseError(
            f"Occupancy {occupancy} of {orbital.label} outside 1..{orbital.capacity}", line
        )
    return orbital, occupancy


@lru_cache(maxsize=None)
def noble_core(symbol: str) -> Tuple[Occupancy, ...]:
    """
    Expand a noble-gas core recursively, in Madelung order.

    Raises:
        UnknownCoreError: If the symbol is not one of He Ne Ar Kr Xe Rn
    """
    if symbol not in NOBLE_GAS_CORES:
        raise UnknownCoreError(f"Unknown noble-gas core [{symbol}]")
    return tuple(parse_configuration(NOBLE_GAS_CORES[symbol]))


def parse_configuration(text: str, fill_order: Optional[Sequence[Orbital]] = None,
                        line: Optional[int] = None) -> List[Occupancy]:
    """
    Parse `[X] 3d5 4s1` style notation.

    Args:
        text: Configuration string, optionally starting with a bracketed core
        fill_order: Order in which to list the core's orbitals; Madelung order
            when None. Orbitals absent from fill_order keep Madelung order
            after the ones present.
        line: Source line number, attached to any error

    Returns:
        List[Occupancy]: (orbital, occupancy) pairs, core first

    Raises:
        ConfigurationParseError: On malformed tokens or repeated orbitals
        UnknownCoreError: On a core symbol that is not a noble gas
    """
    tokens = str(text).split()
    if not tokens:
        raise ConfigurationParseError("Empty configuration", line)

    occupancies: List[Occupancy] = []
    core_match = CORE_TOKEN.match(tokens[0])
    if core_match:
        try:
            core = list(noble_core(core_match.group(1)))
        except UnknownCoreError as e:
            raise UnknownCoreError(str(e), line) from e
        if fill_order is not None:
            position = {o: i for i, o in enumerate(fill_order)}
            core.sort(key=lambda occ: position.get(occ[0], len(position)))
        occupancies.extend(core)
        tokens = tokens[1:]

    for token in tokens:
        if CORE_TOKEN.match(token):
            raise ConfigurationParseError(f"Core {token} must come first", line)
        occupancies.append(_shell_token(token, line))

    seen = Counter(orbital for orbital, _ in occupancies)
    repeated = [o.label for o, count in seen.items() if count > 1]
    if repeated:
        raise ConfigurationParseError(f"Orbital listed more than once: {', '.join(repeated)}", line)
    return occupancies


def find_noble_core(occupancies: Sequence[Occupancy]) -> Optional[str]:
    """
    Largest noble gas whose full shells are exactly the leading entries of the
    occupancy list, with at least one entry left over.
    """
    for symbol in _CORE_SEARCH_ORDER:
        core = noble_core(symbol)
        if len(occupancies) > len(core) and set(occupancies[:len(core)]) == set(core):
            return symbol
    return None


@dataclass(frozen=True)
class ElectronConfiguration:
    """Occupied orbitals of a Z atom or ion, in fill order."""
    z: int
    electron_count: int
    occupancies: Tuple[Occupancy, ...]
    noble_core: Optional[str] = None

    @property
    def symbol(self) -> Optional[str]:
        return get_element_symbol(self.z)

    @property
    def fill_order(self) -> Tuple[Orbital, ...]:
        return tuple(orbital for orbital, _ in self.occupancies)

    def occupancy_map(self) -> Dict[Orbital, int]:
        return dict(self.occupancies)

    def render(self, compact: bool = True) -> str:
        """
        Render as space separated `<n><letter><occupancy>` tokens, with a
        leading `[X]` core when compact and a core applies.
        """
        occupancies = self.occupancies
        parts = []
        if compact and self.noble_core:
            parts.append(f"[{self.noble_core}]")
            occupancies = occupancies[len(noble_core(self.noble_core)):]
        parts.extend(f"{orbital.label}{occupancy}" for orbital, occupancy in occupancies)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.render()


FillOrder = Union[OrbitalSequence, ReferenceSeries, Sequence[Orbital]]


def _fill_orbitals(order: FillOrder) -> Tuple[Orbital, ...]:
    if isinstance(order, OrbitalSequence):
        return order.orbitals
    if isinstance(order, ReferenceSeries):
        return order.entries
    return tuple(order)


def _resolve_order(d: Optional[Deformation], order: Optional[FillOrder],
                   n_max: int, l_max: int) -> Tuple[Orbital, ...]:
    if order is not None:
        return _fill_orbitals(order)
    if d is None:
        raise InputValidationError("Either a deformation or an explicit fill order is required")
    return generate_sequence(Deformation.of(d), n_max, l_max).orbitals


def build_configuration(z: int, electron_count: int, d: Optional[Deformation] = None, *,
                        order: Optional[FillOrder] = None, n_max: int = 8, l_max: int = 3) -> ElectronConfiguration:
    """
    Fill orbitals strictly in sequence order, 2(2l+1) electrons per orbital.

    Args:
        z: Atomic number, >= 1
        electron_count: Electrons to place, 0..z
        d: Deformation selecting the model's order
        order: Explicit fill order used instead of the model's
        n_max: Shell bound of the orbital universe
        l_max: Angular bound of the orbital universe

    Returns:
        ElectronConfiguration: The filled configuration

    Raises:
        CapacityExceededError: If the universe cannot hold electron_count electrons
    """
    if isinstance(z, bool) or not isinstance(z, int) or z < 1:
        raise BoundsError(f"z must be a positive integer, got {z!r}")
    if isinstance(electron_count, bool) or not isinstance(electron_count, int) or not 0 <= electron_count <= z:
        raise BoundsError(f"electron_count must be an integer in 0..{z}, got {electron_count!r}")

    orbitals = _resolve_order(d, order, n_max, l_max)
    capacity = sum(o.capacity for o in orbitals)
    if electron_count > capacity:
        raise CapacityExceededError(
            f"{electron_count} electrons exceed the capacity {capacity} of the orbital universe"
        )

    occupancies: List[Occupancy] = []
    remaining = electron_count
    for orbital in orbitals:
        if remaining == 0:
            break
        placed = min(orbital.capacity, remaining)
        occupancies.append((orbital, placed))
        remaining -= placed

    return ElectronConfiguration(z, electron_count, tuple(occupancies), find_noble_core(occupancies))


@dataclass(frozen=True)
class ReferenceConfigRecord:
    z: int
    symbol: str
    configuration: Tuple[Occupancy, ...]
    line: Optional[int] = None

    def occupancy_map(self) -> Dict[Orbital, int]:
        return dict(self.configuration)

    def render(self) -> str:
        return ElectronConfiguration(self.z, self.z, self.configuration,
                                     find_noble_core(self.configuration)).render()


def load_reference_configs(source: Union[BinaryIO, str]) -> List[ReferenceConfigRecord]:
    """
    Read reference ground states from CSV with header `z,symbol,configuration`.

    Args:
        source: Binary stream or path

    Returns:
        List[ReferenceConfigRecord]: One record per data row

    Raises:
        ReferenceDataError: On malformed CSV, unknown cores or electron totals
            that differ from z; the message carries the line number
    """
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", pd.errors.ParserWarning)
            frame = pd.read_csv(source, header=None, dtype=str, keep_default_na=False,
                                skipinitialspace=True, skip_blank_lines=False)
    except pd.errors.EmptyDataError as e:
        raise ReferenceDataError("Reference data is empty", 1) from e
    except (pd.errors.ParserError, pd.errors.ParserWarning) as e:
        raise ConfigurationParseError(f"Malformed CSV: {e}") from e
    except UnicodeDecodeError as e:
        raise ReferenceDataError(f"Reference data is not valid UTF-8: {e}") from e

    frame = frame.fillna("")
    if frame.shape[1] != len(CSV_COLUMNS):
        raise ConfigurationParseError(
            f"Expected {len(CSV_COLUMNS)} fields per row, got {frame.shape[1]}", 1)
    columns = [str(c).strip() for c in frame.iloc[0]]
    if columns != CSV_COLUMNS:
        raise ReferenceDataError(f"Expected header {','.join(CSV_COLUMNS)}, got {','.join(columns)}", 1)

    records: List[ReferenceConfigRecord] = []
    for line, row in enumerate(frame.iloc[1:].itertuples(index=False), start=2):
        z_text, symbol, configuration = (str(v).strip() for v in row)
        if not (z_text or symbol or configuration):
            continue
        if not z_text.isdigit() or int(z_text) < 1:
            raise ReferenceDataError(f"Invalid atomic number {z_text!r}", line)
        z = int(z_text)
        expected_symbol = get_element_symbol(z)
        if expected_symbol is not None and symbol != expected_symbol:
            raise ReferenceDataError(f"Symbol {symbol!r} does not match z={z} ({expected_symbol})", line)

        occupancies = parse_configuration(configuration, line=line)
        total = sum(occupancy for _, occupancy in occupancies)
        if total != z:
            raise ElectronTotalMismatchError(f"{symbol} configuration holds {total} electrons, expected {z}", line)
        records.append(ReferenceConfigRecord(z, symbol, tuple(occupancies), line))

    logger.info(f"Loaded {len(records)} reference configurations")
    return records


@dataclass(frozen=True)
class ConfigurationException:
    """One element whose reference ground state differs from the model's filling."""
    z: int
    symbol: str
    model: ElectronConfiguration
    reference: ReferenceConfigRecord

    def to_dict(self) -> Dict:
        return {
            "z": self.z,
            "symbol": self.symbol,
            "model": self.model.render(),
            "reference": self.reference.render(),
        }


@dataclass(frozen=True)
class ExceptionReport:
    q: Optional[float]
    fill_order_name: str
    total: int
    exceptions: Tuple[ConfigurationException, ...]

    @property
    def count(self) -> int:
        return len(self.exceptions)

    @property
    def mismatched_z(self) -> Tuple[int, ...]:
        return tuple(e.z for e in self.exceptions)

    def to_dict(self) -> Dict:
        return {
            "q": self.q,
            "fill_order": self.fill_order_name,
            "total": self.total,
            "count": self.count,
            "exceptions": [e.to_dict() for e in self.exceptions],
        }


def count_exceptions(records: Iterable[ReferenceConfigRecord], d: Optional[Deformation] = None, *,
                     order: Optional[FillOrder] = None, n_max: int = 8, l_max: int = 3) -> ExceptionReport:
    """
    Compare each record with the sequential filling of its atomic number.

    Occupancies are compared as multisets; the order orbitals are listed in
    does not matter.

    Args:
        records: Reference ground states, non-empty
        d: Deformation selecting the model's order
        order: Explicit fill order used instead of the model's
        n_max: Shell bound of the orbital universe
        l_max: Angular bound of the orbital universe

    Returns:
        ExceptionReport: Mismatching elements and their count
    """
    records = list(records)
    if not records:
        raise InputValidationError("No reference records to compare against")

    orbitals = _resolve_order(d, order, n_max, l_max)
    if order is None:
        name = f"q={Deformation.of(d).q:g}"
    elif isinstance(order, ReferenceSeries):
        name = order.name
    else:
        name = "custom"

    exceptions = []
    for record in sorted(records, key=lambda r: r.z):
        model = build_configuration(record.z, record.z, order=orbitals)
        if model.occupancy_map() != record.occupancy_map():
            exceptions.append(ConfigurationException(record.z, record.symbol, model, record))

    report = ExceptionReport(
        q=Deformation.of(d).q if order is None else None,
        fill_order_name=name,
        total=len(records),
        exceptions=tuple(exceptions),
    )
    logger.info(f"{report.count} exceptions among {report.total} records ({name})")
    return report


def madelung_order() -> ReferenceSeries:
    """Fill order of the neutral-atom series."""
    return reference_series(MADELUNG)
