"""Analysis toolkit for waveguide-fed discrete ("pinching") antenna systems.

Closed-form outage probability and ergodic rate for a line of antennas on
a lossy dielectric waveguide, the optimal serving-region partition, the
continuously-placed baseline rate, and the resulting discretization
efficiency, with Monte Carlo estimators for validation and a sweep CLI
that emits plot-ready text tables.
"""

from ._version import __version__
from .config import ConfigError, SweepSpec, load_config, parse_config_text
from .metrics import (
    MetricResult,
    NumericalDiagnosticError,
    OutageInputs,
    c_l,
    continuous_optimal_position,
    continuous_rate,
    ergodic_rate,
    i_i,
    i_j,
    outage_probability,
    p_l,
    pde,
)
from .montecarlo import (
    SimEstimate,
    SimulationSpec,
    simulate_continuous_rate,
    simulate_outage,
    simulate_rate,
)
from .regions import (
    BoundaryCircle,
    DegenerateBoundaryError,
    ImaginaryRadiusError,
    RegionPartition,
    boundary_circle,
    exact_boundary_x,
    optimize_partition,
)
from .specfun import CATALAN, DEFAULT_TOLERANCE, SpecFunTolerance, dilog, ti2
from .sweep import OutputTable, emit_table, header_config_text, reload_run, run_sweep
from .system import (
    SPEED_OF_LIGHT,
    DerivedRf,
    PaLayout,
    SystemConfig,
    UserPosition,
    db_to_linear,
    derive_rf,
    linear_to_db,
    make_layout,
    select_pa,
    snr_linear,
)

__all__ = [
    "__version__",
    "CATALAN",
    "SPEED_OF_LIGHT",
    "BoundaryCircle",
    "ConfigError",
    "DEFAULT_TOLERANCE",
    "DegenerateBoundaryError",
    "DerivedRf",
    "ImaginaryRadiusError",
    "MetricResult",
    "NumericalDiagnosticError",
    "OutageInputs",
    "OutputTable",
    "PaLayout",
    "RegionPartition",
    "SimEstimate",
    "SimulationSpec",
    "SpecFunTolerance",
    "SweepSpec",
    "SystemConfig",
    "UserPosition",
    "boundary_circle",
    "c_l",
    "continuous_optimal_position",
    "continuous_rate",
    "db_to_linear",
    "derive_rf",
    "dilog",
    "emit_table",
    "ergodic_rate",
    "exact_boundary_x",
    "header_config_text",
    "i_i",
    "i_j",
    "linear_to_db",
    "load_config",
    "make_layout",
    "optimize_partition",
    "outage_probability",
    "p_l",
    "parse_config_text",
    "pde",
    "reload_run",
    "run_sweep",
    "select_pa",
    "simulate_continuous_rate",
    "simulate_outage",
    "simulate_rate",
    "snr_linear",
    "ti2",
]
