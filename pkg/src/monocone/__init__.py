"""Monotone and completely monotone Markov generators on finite posets.

The monotone generators of a poset form a cone cut out by finitely many
inequalities; the completely monotone ones are spanned by the indicator rays
of increasing maps.  This package builds both cones exactly, decides whether
they coincide, and emits certificates for every verdict.
"""

from .cones import (
    RateVector,
    build_increasing_indicators,
    build_monotonicity_inequalities,
    is_monotone,
)
from .equivalence import (
    check_equivalence,
    classify,
    coupling_decomposition,
    discrete_time_equivalence,
    subposet_propagation,
    verify_counterexample,
)
from .errors import MonoconeError
from .io import Catalog
from .polyhedral import HCone, VCone, dd_h_to_v, dd_v_to_h, extremal_rays, membership
from .poset import (
    Poset,
    canonical_form,
    dual,
    enumerate_increasing_maps,
    enumerate_posets,
    enumerate_upsets,
    induced_subposet_search,
    is_acyclic,
)

__version__ = "0.1.0"

__all__ = [
    "Catalog",
    "HCone",
    "MonoconeError",
    "Poset",
    "RateVector",
    "VCone",
    "build_increasing_indicators",
    "build_monotonicity_inequalities",
    "canonical_form",
    "check_equivalence",
    "classify",
    "coupling_decomposition",
    "dd_h_to_v",
    "dd_v_to_h",
    "discrete_time_equivalence",
    "dual",
    "enumerate_increasing_maps",
    "enumerate_posets",
    "enumerate_upsets",
    "extremal_rays",
    "induced_subposet_search",
    "is_acyclic",
    "is_monotone",
    "membership",
    "subposet_propagation",
    "verify_counterexample",
]
