from .base import (
    CFLViolation,
    NoiseSource,
    PropagatorHistory,
    export_history,
    load_history,
)
from .dispersive import (
    benjamin_ono_periodic_wave,
    kdv_soliton,
    solve_benjamin_ono_wick,
    solve_kdv_wick,
)
from .heat import (
    KPZViews,
    kpz_views,
    solve_heat_wick,
    solve_kpz_pathwise,
    solve_nonlinear_heat_wick,
)
from .schrodinger import (
    solve_nls_wick,
    solve_schrodinger_additive,
    solve_schrodinger_mult_wick,
)
from .transport import eval_transport_characteristic, solve_transport_wick

__all__ = [
    "CFLViolation",
    "KPZViews",
    "NoiseSource",
    "PropagatorHistory",
    "benjamin_ono_periodic_wave",
    "eval_transport_characteristic",
    "export_history",
    "kdv_soliton",
    "kpz_views",
    "load_history",
    "solve_benjamin_ono_wick",
    "solve_heat_wick",
    "solve_kdv_wick",
    "solve_kpz_pathwise",
    "solve_nls_wick",
    "solve_nonlinear_heat_wick",
    "solve_schrodinger_additive",
    "solve_schrodinger_mult_wick",
    "solve_transport_wick",
]
