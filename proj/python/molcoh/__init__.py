"""Few-body variational solver with nuclear density-matrix analysis."""

from molcoh._core import (
    ConvergenceReport,
    CoordinateFrame,
    DensityScan,
    GrowthStep,
    OracleCheck,
    Particle,
    RunConfig,
    RunResult,
    ScanExtremum,
    ScanFeatures,
    ScanSummary,
    SystemDefinition,
    Wavefunction,
    build_frame,
    build_system,
    build_system_h2z,
    converge_report,
    density_diag,
    density_offdiag,
    extract_features,
    load_wavefunction,
    make_system,
    parse_config,
    radial_argmax,
    run_oracle_suite,
    run_preset,
    save_wavefunction,
    scan_particles,
    solve,
    suppression_scan,
)

__all__ = [
    "ConvergenceReport",
    "CoordinateFrame",
    "DensityScan",
    "GrowthStep",
    "OracleCheck",
    "Particle",
    "RunConfig",
    "RunResult",
    "ScanExtremum",
    "ScanFeatures",
    "ScanSummary",
    "SystemDefinition",
    "Wavefunction",
    "build_frame",
    "build_system",
    "build_system_h2z",
    "converge_report",
    "density_diag",
    "density_offdiag",
    "extract_features",
    "load_wavefunction",
    "make_system",
    "parse_config",
    "radial_argmax",
    "run_oracle_suite",
    "run_preset",
    "save_wavefunction",
    "scan_particles",
    "solve",
    "suppression_scan",
]

__version__ = "1.0.0"
