"""Sweep execution and plain-text table emission.

A sweep evaluates one metric along one axis, producing one table per
requested antenna count (or a single table when the antenna count itself
is the axis). Tables are two or three numeric columns behind a '#' header
that echoes every effective parameter; stripping the single-hash prefix
recovers a loadable configuration, so every emitted file doubles as the
recipe that produced it. Double-hash lines are annotations and are not
part of the round trip.
"""

from __future__ import annotations

import dataclasses
import logging
import math
import os
from dataclasses import dataclass

from ._version import __version__
from .config import SweepSpec, parse_config_text
from .metrics import (
    MetricResult,
    NumericalDiagnosticError,
    continuous_rate,
    ergodic_rate,
    outage_probability,
)
from .montecarlo import SimulationSpec, simulate_outage
from .regions import RegionPartition, optimize_partition
from .system import PaLayout, SystemConfig, make_layout

__all__ = ["OutputTable", "run_sweep", "emit_table", "header_config_text"]

logger = logging.getLogger(__name__)

_ROW_FORMAT = "%.12g"


@dataclass(frozen=True)
class OutputTable:
    """Numeric rows plus the self-describing header they are emitted under."""

    name: str
    header: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        for line in self.header:
            if not line.startswith("#"):
                raise ValueError(f"header lines must start with '#', got {line!r}")
        widths = {len(row) for row in self.rows}
        if len(widths) > 1:
            raise ValueError(f"rows must all have the same width, got {sorted(widths)}")
        for row in self.rows:
            if len(row) < 2:
                raise ValueError(f"rows need at least two columns, got {row!r}")
            for value in row:
                if not math.isfinite(value):
                    raise ValueError(f"row values must be finite, got {row!r}")


def _echo_lines(config: SystemConfig, spec: SweepSpec) -> list[str]:
    """Single-hash key = value lines that re-load to this exact run."""
    lines = [
        f"# {name} = {getattr(config, name)!r}"
        for name in (
            "d_x",
            "d_y",
            "h",
            "alpha",
            "f_c",
            "n_eff",
            "noise_dbm",
            "gamma_t_db",
            "gamma_thr_db",
        )
    ]
    lines.append(f"# metric = {spec.metric}")
    if spec.metric != "regions":
        lines.append(f"# sweep_axis = {spec.sweep_axis}")
        lines.append(
            "# axis_values = " + ",".join(repr(v) for v in spec.axis_values)
        )
    lines.append("# m_values = " + ",".join(str(m) for m in spec.m_values))
    return lines


def _table_header(
    config: SystemConfig,
    spec: SweepSpec,
    columns: str,
    note: str,
    sim: SimulationSpec | None = None,
) -> tuple[str, ...]:
    lines = [f"## pinchpas {__version__}", f"## table: {note}", f"## columns: {columns}"]
    if sim is not None:
        lines.append(f"## seed = {sim.seed}")
        lines.append(f"## n_samples = {sim.n_samples}")
        lines.append(f"## chunk_size = {sim.chunk_size}")
    lines.extend(_echo_lines(config, spec))
    return tuple(lines)


def _point_config(base: SystemConfig, axis: str, value: float) -> SystemConfig:
    if axis == "m":
        return base
    return dataclasses.replace(base, **{axis: value})


class _PartitionCache:
    """Memoizes optimized partitions across sweep points.

    The partition depends only on the geometry and the attenuation, not on
    transmit power or threshold, so gamma sweeps reuse a single partition
    per antenna count.
    """

    def __init__(self):
        self._store: dict[tuple, tuple[PaLayout, RegionPartition]] = {}

    def get(self, config: SystemConfig, m: int) -> tuple[PaLayout, RegionPartition]:
        key = (config.d_x, config.d_y, config.h, config.alpha, m)
        if key not in self._store:
            layout = make_layout(config, m)
            self._store[key] = (layout, optimize_partition(config, layout))
        return self._store[key]


class _ContinuousRateCache:
    """Memoizes the continuous baseline, which is independent of m."""

    def __init__(self):
        self._store: dict[SystemConfig, MetricResult] = {}

    def get(self, config: SystemConfig) -> MetricResult:
        if config not in self._store:
            self._store[config] = continuous_rate(config)
        return self._store[config]


def _metric_point(
    metric: str,
    config: SystemConfig,
    m: int,
    partitions: _PartitionCache,
    baselines: _ContinuousRateCache,
    sim: SimulationSpec,
) -> tuple[tuple[float, ...], tuple[str, ...]]:
    """One row's trailing columns plus any numerical flags raised there."""
    if metric == "simulate":
        layout, _ = partitions.get(config, m)
        estimate = simulate_outage(config, layout, sim)
        return (estimate.mean, estimate.std_error), ()
    layout, partition = partitions.get(config, m)
    if metric == "outage":
        result = outage_probability(config, layout, partition)
        return (result.value,), result.flags
    if metric == "rate":
        result = ergodic_rate(config, layout, partition)
        return (result.value,), result.flags
    if metric == "pde":
        discrete = ergodic_rate(config, layout, partition)
        baseline = baselines.get(config)
        if baseline.value <= 0.0:
            raise NumericalDiagnosticError("continuous baseline rate is not positive")
        ratio = discrete.value / baseline.value
        if ratio > 1.0 + 1e-9:
            raise NumericalDiagnosticError(
                f"discretization efficiency {ratio!r} exceeds 1"
            )
        return (min(ratio, 1.0),), discrete.flags
    raise ValueError(f"unknown metric {metric!r}")


def run_sweep(spec: SweepSpec, sim: SimulationSpec | None = None) -> list[OutputTable]:
    """Evaluate the sweep and return its output tables.

    Points are evaluated in a fixed order so repeated runs are
    byte-identical; each point is independent of the others. Numerical
    flags raised at any point (for example the attenuation underflow
    clamp) are collected onto the affected table for the caller to
    surface.
    """
    config = spec.fixed_params
    sim = sim if sim is not None else SimulationSpec()
    partitions = _PartitionCache()
    baselines = _ContinuousRateCache()
    tables: list[OutputTable] = []

    if spec.metric == "regions":
        for m in spec.m_values:
            layout, partition = partitions.get(config, m)
            rows = tuple(
                (
                    float(k + 1),
                    layout.x_k[k],
                    partition.left_limits[k],
                    partition.right_limits[k],
                    partition.boundaries_b[k + 1],
                )
                for k in range(m)
            )
            header = _table_header(
                config,
                spec,
                columns="k x_k left_limit right_limit right_cut",
                note=f"serving-region partition, m = {m}",
            )
            tables.append(OutputTable(name=f"regions_m{m}", header=header, rows=rows))
        return tables

    sim_note = sim if spec.metric == "simulate" else None
    columns = {
        "outage": f"{spec.sweep_axis} outage",
        "rate": f"{spec.sweep_axis} rate_bits_per_hz",
        "pde": f"{spec.sweep_axis} efficiency",
        "simulate": f"{spec.sweep_axis} outage_estimate std_error",
    }[spec.metric]

    per_m = spec.sweep_axis != "m"
    for m in spec.m_values if per_m else (0,):
        rows = []
        flags: set[str] = set()
        for value in spec.axis_values:
            point = _point_config(config, spec.sweep_axis, value)
            point_m = m if per_m else int(value)
            tail, point_flags = _metric_point(
                spec.metric, point, point_m, partitions, baselines, sim
            )
            rows.append((float(value),) + tail)
            flags.update(point_flags)
        if per_m:
            name = f"{spec.metric}_m{m}"
            note = f"{spec.metric} vs {spec.sweep_axis}, m = {m}"
        else:
            name = spec.metric
            note = f"{spec.metric} vs number of antennas"
        header = _table_header(config, spec, columns=columns, note=note, sim=sim_note)
        tables.append(
            OutputTable(
                name=name,
                header=header,
                rows=tuple(rows),
                flags=tuple(sorted(flags)),
            )
        )
    return tables


def emit_table(table: OutputTable, path: str | os.PathLike) -> None:
    """Write a table as deterministic text: 12 significant digits, LF endings."""
    if not table.rows:
        logger.warning("table %s has no rows; writing header only to %s", table.name, path)
    lines = list(table.header)
    for row in table.rows:
        lines.append(" ".join(_ROW_FORMAT % value for value in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def header_config_text(path: str | os.PathLike) -> str:
    """Recover configuration text from an emitted table's header.

    Lines beginning '# ' (single hash) are the parameter echo; '##' lines
    are annotations and are skipped. The returned text re-parses to the
    (SystemConfig, SweepSpec) pair that produced the table, which is the
    round-trip property the test suite pins down.
    """
    config_lines = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if line.startswith("##"):
                continue
            if line.startswith("# "):
                config_lines.append(line[2:])
    return "\n".join(config_lines) + "\n"


def reload_run(path: str | os.PathLike):
    """Parse an emitted table's header back into (SystemConfig, SweepSpec)."""
    return parse_config_text(header_config_text(path))
