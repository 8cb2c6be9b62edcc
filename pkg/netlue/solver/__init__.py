from netlue.solver.closed_forms import (
    cell_variances,
    ht_scale,
    solve_nia_uncorrelated,
    solve_sania_uncorrelated,
    solve_sanasia,
)
from netlue.solver.general import is_nonsingular, solve_general, solve_nonsingular
from netlue.solver.kkt import (
    KKTSystem,
    build_kkt_system,
    kkt_residual,
    recover_multipliers,
    residual_at,
)
from netlue.solver.report import SolvePath, SolveReport
from netlue.solver.routing import solve_auto
from netlue.solver.vertex_transitive import cycle_order, solve_vertex_transitive

__all__ = [
    "KKTSystem",
    "SolvePath",
    "SolveReport",
    "build_kkt_system",
    "cell_variances",
    "cycle_order",
    "ht_scale",
    "is_nonsingular",
    "kkt_residual",
    "recover_multipliers",
    "residual_at",
    "solve_auto",
    "solve_general",
    "solve_nia_uncorrelated",
    "solve_nonsingular",
    "solve_sania_uncorrelated",
    "solve_sanasia",
    "solve_vertex_transitive",
]
