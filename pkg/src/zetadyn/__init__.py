"""Exact dynamical zeta functions of finitely generated group actions."""

from .series import (
    DirichletSeries,
    PowerSeries,
    binomial_factor,
    counts_from_delta,
    delta_coefficients,
    euler_product,
    format_rational,
    is_integer_series,
    p_series,
    parse_rational,
    partition_series,
    q_series,
)
from .groups import (
    GroupModel,
    Subgroup,
    conjugacy_class,
    contains,
    delta_series,
    group_model,
    iso_class,
    iso_delta,
    normalizer_index,
    subgroup_count,
    subgroups_of_index,
    zeta_counts,
)
from .lattice import (
    LatticeSlice,
    build_slice,
    fix_from_orbits,
    main_term_diagnostic,
    orbit_counts_by_size,
    orbit_counts_from_fix,
    pi_alpha,
)
from .actions import (
    ActionModel,
    dinf_torus_action,
    fix_count,
    fix_table,
    full_shift,
    pm_projected,
    projected_shift,
    toral_action,
    toral_fix,
    zx3_torus_action,
)
from .zeta import (
    GrowthReport,
    IntegralityReport,
    ZetaResult,
    growth_estimate,
    integrality_report,
    rational_fit,
    zeta_def,
    zeta_def_from_fix,
    zeta_full_shift,
    zeta_iso_class_product,
    zeta_orbit_product,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
