"""Regional employment growth panel estimator.

Thin wrapper over the C++ core: panel ingestion, feature construction,
the LSDV / first-difference / random-effects estimators, diagnostics,
and the synthetic data generator.
"""

from ._core import (
    PanelDataset,
    load_panel,
    save_panel,
    validate,
    generate,
    build_features,
    estimate,
    monte_carlo,
    solve_ols,
    adjusted_r2,
    durbin_watson,
    hausman_critical_95,
    default_synthetic_config,
    __version__,
)

__all__ = [
    "PanelDataset",
    "load_panel",
    "save_panel",
    "validate",
    "generate",
    "build_features",
    "estimate",
    "monte_carlo",
    "solve_ols",
    "adjusted_r2",
    "durbin_watson",
    "hausman_critical_95",
    "default_synthetic_config",
    "__version__",
]
