"""Recurrent subgroups, shadowing and entropy for endomorphisms of finite abelian groups."""

__version__ = "0.1.0"

from .endo import (  # noqa: E402
    Endomorphism,
    apply,
    automorphism_inverse,
    compose_maps,
    conjugate_system,
    identity_map,
    induced_quotient_map,
    is_automorphism,
    validate_endomorphism,
)
from .entropy import (  # noqa: E402
    addition_report,
    entropy_estimate,
    entropy_table,
    max_separated,
    min_spanning,
    restricted_entropy,
)
from .errors import EntropyError, RecgroupError, ResourceCapError, TheoremViolation, ValidationError  # noqa: E402
from .group import (  # noqa: E402
    FiniteAbelianGroup,
    QuotientGroup,
    Subgroup,
    as_subgroup,
    element_op,
    enumerate_group,
    quotient_group,
    solve_linear,
    subgroup_closure,
)
from .recurrence import (  # noqa: E402
    SetKind,
    build_chain_graph,
    chain_component_identity,
    chain_recurrent_set,
    eventually_periodic,
    fixed_points,
    nonwandering_set,
    over_base,
    periodic_points,
    periodic_set,
    verify_recurrent_subgroup,
)
from .shadowing import (  # noqa: E402
    check_pseudo_orbit,
    check_quotient_shadowing,
    decide_shadowing,
    lift_quotient_pseudo_orbit,
    shadow_set,
)
from .uniformity import Entourage, EntourageBase, halving_base  # noqa: E402
