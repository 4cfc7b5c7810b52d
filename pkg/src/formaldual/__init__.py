"""Formal-dual subsets of finite cyclic groups Z/nZ.

Exact verification of formal duality, gcd-class profile enumeration,
prime-power restrictions, and an exhaustive search for primitive pairs.
"""

__version__ = "0.1.0"

from .duality import (
    DualityCertificate,
    ForcedDualProfile,
    Route,
    SizeMismatchError,
    Verdict,
    forced_dual_profile,
    is_primitive_pair,
    verify_pair_exact,
    verify_pair_fast,
)
from .profiles import (
    GateVerdict,
    ObstructionWitness,
    admissible_profiles,
    enumerate_profiles,
    odd_prime_obstruction,
    prime_power_gate,
)
from .search import (
    SearchLimits,
    SearchReport,
    brute_force_oracle,
    realize_profile,
    search_primitive_pairs,
)
from .sets import (
    ClassProfile,
    CyclicGroup,
    Subset,
    WeightEnumerator,
    canonical_form,
    class_profile,
    gcd_class_profile,
    weight_enumerator,
)

__all__ = [
    "ClassProfile", "CyclicGroup", "DualityCertificate", "ForcedDualProfile", "GateVerdict",
    "ObstructionWitness", "Route", "SearchLimits", "SearchReport", "SizeMismatchError",
    "Subset", "Verdict", "WeightEnumerator", "admissible_profiles", "brute_force_oracle",
    "canonical_form", "class_profile", "enumerate_profiles", "forced_dual_profile",
    "gcd_class_profile", "is_primitive_pair", "odd_prime_obstruction", "prime_power_gate",
    "realize_profile", "search_primitive_pairs", "verify_pair_exact", "verify_pair_fast",
    "weight_enumerator",
]
