"""Rate-region toolkit for the two-user cognitive interference channel.

The package computes, for finite-alphabet channels and explicitly sampled
input distributions, the unified achievable rate region and the prior
comparator regions, projects them onto the (R1, R2) plane, and runs the
per-distribution identity and containment suites that connect them.
"""

from .channel import Alphabet, Channel, canonical_channel, validate_channel  # noqa: F401
from .polytope import (  # noqa: F401
    HalfPlane,
    Polytope2D,
    fme_project,
    membership_oracle,
    polytope_contains,
    polytope_equal,
    to_linear_system,
)
from .probability import (  # noqa: F401
    FactorizationSpec,
    JointDistribution,
    MIExpr,
    MITerm,
    RandomVariableSet,
    evaluate_expr,
    extend_through_channel,
    marginalize,
    mi,
    mutual_information,
    sample_factored,
)
from .regions import (  # noqa: F401
    RegionSchema,
    builtin_schema,
    droppable_constraints,
    instantiate,
    schema_manifest,
)
from .verify import (  # noqa: F401
    check_cc_reduction,
    check_devroye_identities,
    check_jiang_containment,
    check_maric_wlog,
    sampled_region_containment,
    trace_frontier,
)

__version__ = "0.1.0"
