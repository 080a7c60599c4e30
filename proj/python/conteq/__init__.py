"""Python interface to the continuity-equation laboratory."""

from ._core import (
    __version__,
    catalog,
    ddbar_log_omega_residual,
    equivalence_eps,
    explicit_solution_residual,
    maclaurin_residuals,
    omega_hat,
    ot_forms,
    run_preset,
    torus_continuation,
    verify_identities,
)

__all__ = [
    "__version__",
    "catalog",
    "ddbar_log_omega_residual",
    "equivalence_eps",
    "explicit_solution_residual",
    "maclaurin_residuals",
    "omega_hat",
    "ot_forms",
    "run_preset",
    "torus_continuation",
    "verify_identities",
]
