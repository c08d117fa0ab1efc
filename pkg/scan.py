"""
scan.py
Deformation sweeps: level crossings and the regime profile of q-space.
"""
import math
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from config_manager import ScanConfig
from exceptions import BoundsError, BracketError
from ordering import (
    ComparisonReport,
    OrbitalSequence,
    compare,
    generate_sequence,
    novaro_sequence,
    orbital_universe,
    reference_series,
    HYDROGENIC,
    ION,
    MADELUNG,
)
from qalgebra import Deformation, alpha
from spectrum import Orbital, as_orbital, epsilon_key

logger = logging.getLogger(__name__)

MADELUNG_LIKE = "madelung-like"
ION_LIKE = "ion-like"
HYDROGENLIKE = "hydrogenlike"
INVERTED = "inverted"
TRANSITIONAL = "transitional"

RECOMMENDED_Q = {
    "neutral": 0.85,
    "ion": 1.225,
    "highly-ionized": 1.7,
}

MAX_SCAN_Q = 2.0
MAX_SCAN_STEP = 0.05


@dataclass(frozen=True)
class CrossingEvent:
    """A deformation q* at which two orbitals exchange order."""
    pair: Tuple[Orbital, Orbital]
    q_star: float
    bracket: Tuple[float, float]
    residual: float

    def to_dict(self) -> Dict:
        return {
            "pair": [self.pair[0].label, self.pair[1].label],
            "q_star": self.q_star,
            "q_lo": self.bracket[0],
            "q_hi": self.bracket[1],
            "residual": self.residual,
        }


def key_difference(a: Orbital, b: Orbital, q: float) -> float:
    """eps_q(a) - eps_q(b)."""
    d = Deformation(q)
    return epsilon_key(a, d).value - epsilon_key(b, d).value


def find_crossing(a, b, q_lo: float, q_hi: float,
                  tolerance: float = 1e-13, max_iterations: int = 200) -> Optional[CrossingEvent]:
    """
    Bisect the key difference of two orbitals for a sign change in [q_lo, q_hi].

    When the bracket holds several roots any one of them is returned.

    Args:
        a: First orbital (or label)
        b: Second orbital (or label)
        q_lo: Lower end of the bracket, > 0
        q_hi: Upper end of the bracket, > q_lo
        tolerance: Final bracket width
        max_iterations: Hard cap on bisection steps

    Returns:
        Optional[CrossingEvent]: The crossing, or None when the endpoint
        differences do not have strictly opposite signs
    """
    a, b = as_orbital(a), as_orbital(b)
    if not (math.isfinite(q_lo) and math.isfinite(q_hi)) or not 0 < q_lo < q_hi:
        raise BracketError(f"Invalid bracket [{q_lo}, {q_hi}]; need 0 < q_lo < q_hi")

    f_lo = key_difference(a, b, q_lo)
    f_hi = key_difference(a, b, q_hi)
    if not (f_lo < 0 < f_hi or f_hi < 0 < f_lo):
        return None

    lo, hi = q_lo, q_hi
    for _ in range(max_iterations):
        if hi - lo <= tolerance:
            break
        mid = 0.5 * (lo + hi)
        f_mid = key_difference(a, b, mid)
        if f_mid == 0.0:
            lo = hi = mid
            break
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid

    q_star = 0.5 * (lo + hi)
    event = CrossingEvent((a, b), q_star, (q_lo, q_hi), abs(key_difference(a, b, q_star)))
    logger.debug(f"Crossing {a.label}/{b.label} at q*={q_star!r} (residual {event.residual:.3g})")
    return event


@dataclass(frozen=True)
class RegimeInterval:
    q_lo: float
    q_hi: float
    label: str
    witness: ComparisonReport

    def to_dict(self) -> Dict:
        return {"q_lo": self.q_lo, "q_hi": self.q_hi, "label": self.label, "witness": self.witness.to_dict()}


@dataclass(frozen=True)
class RegimeProfile:
    """Labelled partition of a q range, with the crossings found inside it."""
    intervals: Tuple[RegimeInterval, ...]
    crossings: Tuple[CrossingEvent, ...]
    recommended_q: Dict[str, float] = field(default_factory=lambda: dict(RECOMMENDED_Q))

    def label_at(self, q: float) -> Optional[str]:
        for interval in self.intervals:
            if interval.q_lo <= q <= interval.q_hi:
                return interval.label
        return None

    def to_dict(self) -> Dict:
        return {
            "intervals": [i.to_dict() for i in self.intervals],
            "crossings": [c.to_dict() for c in self.crossings],
            "recommended_q": dict(self.recommended_q),
        }


def is_hydrogenlike(seq: OrbitalSequence) -> bool:
    """
    True when every orbital of shell n precedes (or ties) every orbital of
    shell n+1.
    """
    groups = seq.group_index()
    shells: Dict[int, List[int]] = {}
    for orbital, group in groups.items():
        shells.setdefault(orbital.n, []).append(group)
    for n in sorted(shells):
        if n + 1 in shells and max(shells[n]) > min(shells[n + 1]):
            return False
    return True


def classify_point(q: float, settings: Optional[ScanConfig] = None) -> Tuple[str, ComparisonReport, OrbitalSequence]:
    """
    Label a single deformation value.

    Labels are tried in the order ion-like, hydrogenlike, madelung-like,
    inverted; a point matching none is transitional.

    Returns:
        Tuple[str, ComparisonReport, OrbitalSequence]: label, the witness
        report backing it, and the sequence it was computed from
    """
    settings = settings or ScanConfig()
    d = Deformation(q)
    seq = generate_sequence(d, settings.regime_n_max, settings.regime_l_max, settings.tie_tolerance)

    ion_report = compare(seq, reference_series(ION))
    if ion_report.exact_match:
        return ION_LIKE, ion_report, seq

    hydrogenic_report = compare(seq, reference_series(HYDROGENIC, settings.regime_n_max, settings.regime_l_max))
    a = alpha(d)
    if a >= 0 and is_hydrogenlike(seq):
        return HYDROGENLIKE, hydrogenic_report, seq

    madelung_report = compare(seq, reference_series(MADELUNG))
    if all(dev < settings.madelung_deviation_limit for dev in madelung_report.pair_deviations):
        return MADELUNG_LIKE, madelung_report, seq

    if a < 0:
        return INVERTED, hydrogenic_report, seq
    return TRANSITIONAL, madelung_report, seq


def q_grid(q_lo: float, q_hi: float, step: float) -> np.ndarray:
    """Grid q_lo + i*step rounded to 12 decimals, closed by q_hi."""
    count = int(math.floor((q_hi - q_lo) / step + 1e-9))
    grid = np.round(q_lo + step * np.arange(count + 1), 12)
    if grid[-1] < q_hi - 1e-12:
        grid = np.append(grid, q_hi)
    return grid


def _validate_scan(q_lo: float, q_hi: float, step: float) -> None:
    if not all(math.isfinite(v) for v in (q_lo, q_hi, step)):
        raise BoundsError("Scan range and step must be finite")
    if not 0 < q_lo < q_hi <= MAX_SCAN_Q:
        raise BoundsError(f"Invalid scan range [{q_lo}, {q_hi}]; need 0 < q_min < q_max <= {MAX_SCAN_Q}")
    if not 0 < step <= MAX_SCAN_STEP:
        raise BoundsError(f"Invalid scan step {step}; need 0 < step <= {MAX_SCAN_STEP}")


def _pair_crossings(orbitals: List[Orbital], keys_lo: np.ndarray, keys_hi: np.ndarray,
                    q_lo: float, q_hi: float, tolerance: float) -> List[CrossingEvent]:
    """Crossings of every pair whose key difference changes sign between two grid points."""
    diff_lo = keys_lo[:, None] - keys_lo[None, :]
    diff_hi = keys_hi[:, None] - keys_hi[None, :]
    flips = np.argwhere(np.triu(diff_lo * diff_hi < 0, k=1))
    events = []
    for i, j in flips:
        event = find_crossing(orbitals[i], orbitals[j], q_lo, q_hi, tolerance)
        if event is None:
            logger.warning(f"Skipping degenerate bracket for {orbitals[i].label}/{orbitals[j].label} "
                           f"in [{q_lo}, {q_hi}]")
            continue
        events.append(event)
    return events


def _refine_boundary(q_a: float, label_a: str, q_b: float, settings: ScanConfig) -> float:
    """Bisect the point between two grid values at which the label stops being label_a."""
    lo, hi = q_a, q_b
    while hi - lo > settings.boundary_tolerance:
        mid = 0.5 * (lo + hi)
        if classify_point(mid, settings)[0] == label_a:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def classify_regimes(q_lo: float, q_hi: float, step: float,
                     settings: Optional[ScanConfig] = None) -> RegimeProfile:
    """
    Partition [q_lo, q_hi] into labelled regimes.

    Grid points are classified independently (concurrently when
    settings.workers > 1) and merged in ascending q. Each label change is
    bisected; if a level crossing of a pair flipping between the two grid
    points lies within snap tolerance, the boundary is placed at that crossing.

    Args:
        q_lo: Lower end, > 0
        q_hi: Upper end, <= 2.0
        step: Grid step, in (0, 0.05]
        settings: Scan settings, defaults when None

    Returns:
        RegimeProfile: Intervals, crossings and recommended q values
    """
    settings = settings or ScanConfig()
    _validate_scan(q_lo, q_hi, step)
    grid = [float(q) for q in q_grid(q_lo, q_hi, step)]

    if settings.workers > 1:
        with ThreadPoolExecutor(max_workers=settings.workers) as pool:
            points = list(pool.map(lambda q: classify_point(q, settings), grid))
    else:
        points = [classify_point(q, settings) for q in grid]

    orbitals = orbital_universe(settings.regime_n_max, settings.regime_l_max)
    key_rows = []
    for _, _, seq in points:
        keys = {k.orbital: k.value for k in seq.entries}
        key_rows.append(np.array([keys[o] for o in orbitals]))

    crossings: List[CrossingEvent] = []
    intervals: List[RegimeInterval] = []
    start_q, (start_label, start_witness, _) = grid[0], points[0]
    for i in range(1, len(grid)):
        segment_crossings = _pair_crossings(orbitals, key_rows[i - 1], key_rows[i],
                                            grid[i - 1], grid[i], settings.bisection_tolerance)
        crossings.extend(segment_crossings)

        label = points[i][0]
        if label == start_label:
            continue
        boundary = _refine_boundary(grid[i - 1], start_label, grid[i], settings)
        nearest = min(segment_crossings, key=lambda c: abs(c.q_star - boundary), default=None)
        if nearest is not None and abs(nearest.q_star - boundary) <= settings.snap_tolerance:
            boundary = nearest.q_star
        intervals.append(RegimeInterval(start_q, boundary, start_label, start_witness))
        logger.info(f"Regime boundary {start_label} -> {label} at q={boundary:.10f}")
        start_q, start_label, start_witness = boundary, label, points[i][1]

    intervals.append(RegimeInterval(start_q, grid[-1], start_label, start_witness))
    crossings.sort(key=lambda c: (c.q_star, c.pair))
    logger.info(f"Scanned {len(grid)} points in [{q_lo}, {q_hi}]: "
                f"{len(intervals)} intervals, {len(crossings)} crossings")
    return RegimeProfile(tuple(intervals), tuple(crossings))


def novaro_alpha_windows(reference: str, alpha_lo: float, alpha_hi: float, step: float,
                         settings: Optional[ScanConfig] = None) -> List[Tuple[float, float]]:
    """
    Grid windows of constant alpha on which the undeformed rotor ordering
    matches a reference series exactly.

    Returns:
        List[Tuple[float, float]]: (first, last) grid alpha of each matching run
    """
    settings = settings or ScanConfig()
    if not all(math.isfinite(v) for v in (alpha_lo, alpha_hi, step)) or not alpha_lo < alpha_hi:
        raise BoundsError(f"Invalid alpha range [{alpha_lo}, {alpha_hi}]")
    if not 0 < step or (alpha_hi - alpha_lo) / step > 100000:
        raise BoundsError(f"Invalid alpha step {step}")

    ref = reference_series(reference, settings.regime_n_max, settings.regime_l_max)
    windows: List[Tuple[float, float]] = []
    run_start: Optional[float] = None
    previous: Optional[float] = None
    for value in q_grid(alpha_lo, alpha_hi, step):
        value = float(value)
        seq = novaro_sequence(value, settings.regime_n_max, settings.regime_l_max, settings.tie_tolerance)
        if compare(seq, ref).exact_match:
            if run_start is None:
                run_start = value
        elif run_start is not None:
            windows.append((run_start, previous))
            run_start = None
        previous = value
    if run_start is not None:
        windows.append((run_start, previous))
    logger.info(f"Constant-alpha windows reproducing {ref.name}: {windows}")
    return windows
