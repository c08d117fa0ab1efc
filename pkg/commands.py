"""
commands.py
Command handlers behind the qaufbau command line.
"""
import logging
from typing import Dict, List, Optional

from aufbau import build_configuration, count_exceptions, load_reference_configs
from config_manager import ConfigManager
from ordering import (
    OrbitalSequence,
    compare,
    generate_sequence,
    novaro_sequence,
    reference_series,
    sequence_for_reference,
    MADELUNG,
    ION,
)
from qalgebra import Deformation
from scan import classify_regimes, novaro_alpha_windows
from spectrum import RotorParameters, spectral_energy
from utils.output import format_float, render_csv, render_json, render_table

logger = logging.getLogger(__name__)

ENERGY_COLUMNS = ["orbital", "n", "l", "epsilon_plus_one", "energy"]
ORDER_COLUMNS = ["orbital", "n", "l", "epsilon_plus_one", "tie_group"]
INVERSION_COLUMNS = ["reference", "first", "second", "deviation_percent"]
SCAN_COLUMNS = ["record", "label", "q_lo", "q_hi", "q_star", "pair", "residual"]
OCCUPANCY_COLUMNS = ["orbital", "occupancy"]
EXCEPTION_COLUMNS = ["z", "symbol", "model", "reference"]

# undeformed limit of alpha(q) at q = 1
NOVARO_ALPHA = 4.0 / 3.0


class CommandHandler:
    """Formats the library's results for the command line."""
    def __init__(self, config_manager: ConfigManager):
        """
        Initialize the command handler.

        Args:
            config_manager: Configuration manager
        """
        self.config = config_manager.config
        self.rotor = RotorParameters(
            inertia=self.config.rotor.inertia,
            ground_energy=self.config.rotor.ground_energy
        )
        self.digits = self.config.output.significant_digits

    def _sequence(self, q: float, n_max: Optional[int], l_max: Optional[int]) -> OrbitalSequence:
        """
        Model sequence for the CLI's orbital universe.

        Without explicit bounds the sequence is restricted to the orbitals
        printed in the neutral-atom and ion series.
        """
        ordering = self.config.ordering
        d = Deformation(q)
        if n_max is None and l_max is None:
            full = generate_sequence(d, ordering.n_max, ordering.l_max, ordering.tie_tolerance)
            return sequence_for_reference(full)
        return generate_sequence(
            d,
            ordering.n_max if n_max is None else n_max,
            ordering.l_max if l_max is None else l_max,
            ordering.tie_tolerance,
        )

    def energies(self, q: float, n_max: Optional[int] = None, l_max: Optional[int] = None,
                 fmt: str = "table") -> str:
        """One row per orbital: label, n, l, eps+1 and the spectral energy."""
        seq = self._sequence(q, n_max, l_max)
        rows = [
            {
                "orbital": key.orbital.label,
                "n": key.orbital.n,
                "l": key.orbital.l,
                "epsilon_plus_one": key.value,
                "energy": spectral_energy(key.orbital, seq.q, self.rotor),
            }
            for key in seq.entries
        ]
        if fmt == "json":
            return render_json({
                "q": q,
                "inertia": self.rotor.inertia,
                "ground_energy": self.rotor.ground_energy,
                "orbitals": rows,
            })
        if fmt == "csv":
            return render_csv(rows, ENERGY_COLUMNS)
        return render_table(rows, ENERGY_COLUMNS, self.digits)

    def order(self, q: float, n_max: Optional[int] = None, l_max: Optional[int] = None,
              fmt: str = "table") -> str:
        """The filling sequence, ties joined with '='."""
        seq = self._sequence(q, n_max, l_max)
        groups = seq.group_index()
        rows = [
            {
                "orbital": key.orbital.label,
                "n": key.orbital.n,
                "l": key.orbital.l,
                "epsilon_plus_one": key.value,
                "tie_group": groups[key.orbital],
            }
            for key in seq.entries
        ]
        if fmt == "json":
            return render_json({
                "q": q,
                "sequence": seq.render(),
                "entries": rows,
                "tie_groups": [[seq.entries[i].orbital.label for i in group] for group in seq.tie_groups],
            })
        if fmt == "csv":
            return render_csv(rows, ORDER_COLUMNS)
        return seq.render()

    def compare(self, q: float, reference: str, n_max: Optional[int] = None,
                l_max: Optional[int] = None, fmt: str = "table") -> str:
        """Comparison report of the model sequence against a reference series."""
        ordering = self.config.ordering
        ref = reference_series(reference, ordering.n_max, ordering.l_max)
        seq = generate_sequence(
            Deformation(q),
            ordering.n_max if n_max is None else n_max,
            ordering.l_max if l_max is None else l_max,
            ordering.tie_tolerance,
        )
        report = compare(seq, ref)
        if fmt == "json":
            return render_json({"q": q, **report.to_dict()})
        rows = [
            {"reference": report.reference, "first": a.label, "second": b.label, "deviation_percent": dev}
            for (a, b), dev in zip(report.inversions, report.pair_deviations)
        ]
        if fmt == "csv":
            return render_csv(rows, INVERSION_COLUMNS)

        lines = [
            f"reference: {report.reference}",
            f"q: {format_float(q, self.digits)}",
            f"exact_match: {str(report.exact_match).lower()}",
            f"matched_prefix: {report.matched_prefix_len}/{report.reference_length}",
            f"inversions: {len(report.inversions)}",
        ]
        for row in rows:
            lines.append(f"  {row['first']} > {row['second']}  "
                         f"{format_float(row['deviation_percent'], self.digits)}%")
        lines.append(f"max_deviation: {format_float(report.max_deviation, self.digits)}%")
        return "\n".join(lines)

    def scan(self, q_min: float, q_max: float, step: Optional[float] = None, fmt: str = "table") -> str:
        """Regime profile of [q_min, q_max] with its crossing list."""
        settings = self.config.scan
        profile = classify_regimes(q_min, q_max, settings.step if step is None else step, settings)
        if fmt == "json":
            return render_json(profile.to_dict())

        rows: List[Dict] = [
            {"record": "interval", "label": i.label, "q_lo": i.q_lo, "q_hi": i.q_hi,
             "q_star": None, "pair": None, "residual": None}
            for i in profile.intervals
        ]
        rows.extend(
            {"record": "crossing", "label": None, "q_lo": c.bracket[0], "q_hi": c.bracket[1],
             "q_star": c.q_star, "pair": f"{c.pair[0].label}/{c.pair[1].label}", "residual": c.residual}
            for c in profile.crossings
        )
        if fmt == "csv":
            return render_csv(rows, SCAN_COLUMNS)

        interval_rows = [{k: r[k] for k in ("label", "q_lo", "q_hi")} for r in rows if r["record"] == "interval"]
        crossing_rows = [{k: r[k] for k in ("pair", "q_star", "residual")} for r in rows if r["record"] == "crossing"]
        sections = [
            "regimes:",
            render_table(interval_rows, ["label", "q_lo", "q_hi"], self.digits),
            "crossings:",
            render_table(crossing_rows, ["pair", "q_star", "residual"], self.digits),
            "recommended q:",
        ]
        sections.extend(f"  {case}: {format_float(value, self.digits)}"
                        for case, value in profile.recommended_q.items())
        return "\n".join(sections)

    def configuration(self, z: int, q: float, electrons: Optional[int] = None, fmt: str = "table") -> str:
        """Electron configuration of Z with `electrons` electrons (neutral by default)."""
        aufbau = self.config.aufbau
        electron_count = z if electrons is None else electrons
        config = build_configuration(z, electron_count, Deformation(q), n_max=aufbau.n_max, l_max=aufbau.l_max)
        rows = [{"orbital": o.label, "occupancy": occ} for o, occ in config.occupancies]
        if fmt == "json":
            return render_json({
                "z": config.z,
                "symbol": config.symbol,
                "electron_count": config.electron_count,
                "q": q,
                "noble_core": config.noble_core,
                "configuration": config.render(),
                "occupancies": rows,
            })
        if fmt == "csv":
            return render_csv(rows, OCCUPANCY_COLUMNS)
        return config.render()

    def exceptions(self, q: Optional[float], data_path: Optional[str] = None,
                   reference: Optional[str] = None, fmt: str = "table") -> str:
        """Elements whose reference ground state differs from sequential filling."""
        aufbau = self.config.aufbau
        path = data_path or aufbau.reference_data
        logger.info(f"Reading reference configurations from {path}")
        with open(path, "rb") as source:
            records = load_reference_configs(source)

        if reference is not None:
            report = count_exceptions(records, order=reference_series(reference),
                                      n_max=aufbau.n_max, l_max=aufbau.l_max)
        else:
            report = count_exceptions(records, Deformation(q), n_max=aufbau.n_max, l_max=aufbau.l_max)

        rows = [e.to_dict() for e in report.exceptions]
        if fmt == "json":
            return render_json(report.to_dict())
        if fmt == "csv":
            return render_csv(rows, EXCEPTION_COLUMNS)
        lines = [f"{r['z']:>3} {r['symbol']:<2}  model: {r['model']}  reference: {r['reference']}" for r in rows]
        lines.append(f"exceptions: {report.count} of {report.total} ({report.fill_order_name})")
        return "\n".join(lines)

    def novaro(self, alpha_min: float, alpha_max: float, step: float, fmt: str = "table") -> str:
        """
        Constant-alpha windows reproducing the neutral-atom and ion series,
        plus the neutral-atom report at alpha = 4/3.
        """
        settings = self.config.scan
        windows = {
            name: novaro_alpha_windows(name, alpha_min, alpha_max, step, settings)
            for name in (MADELUNG, ION)
        }
        seq = novaro_sequence(NOVARO_ALPHA, settings.regime_n_max, settings.regime_l_max, settings.tie_tolerance)
        report = compare(seq, reference_series(MADELUNG))
        if fmt == "json":
            return render_json({
                "windows": {name: [list(w) for w in found] for name, found in windows.items()},
                "alpha": NOVARO_ALPHA,
                "report": report.to_dict(),
            })
        rows = [
            {"reference": name, "alpha_lo": lo, "alpha_hi": hi}
            for name, found in windows.items() for lo, hi in found
        ]
        if fmt == "csv":
            return render_csv(rows, ["reference", "alpha_lo", "alpha_hi"])
        lines = []
        for name, found in windows.items():
            spans = ", ".join(f"[{format_float(lo, self.digits)}, {format_float(hi, self.digits)}]"
                              for lo, hi in found)
            lines.append(f"{name}: {spans or 'none'}")
        lines.append(
            f"alpha {format_float(NOVARO_ALPHA, self.digits)} vs {MADELUNG}: "
            f"exact_match {str(report.exact_match).lower()}, "
            f"prefix {report.matched_prefix_len}/{report.reference_length}, "
            f"max_deviation {format_float(report.max_deviation, self.digits)}%"
        )
        return "\n".join(lines)
