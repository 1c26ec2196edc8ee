"""Approval-based committee elections with exact arithmetic.

Counting rules and their winners, divisor apportionment, and a harness that
checks axioms of committee rules on small instances.
"""

from .model import (
    CapacityError,
    DomainError,
    Party,
    PartyList,
    Profile,
    add_profiles,
    committees,
    detect_party_list,
    party_list_profile,
    permute_profile,
    restrict,
    scale_profile,
)
from .scoring import (
    CountingFunction,
    ValidationError,
    equivalent,
    from_function,
    from_table,
    make_counting_function,
    normalize,
    relevant_domain,
    score,
)
from .winners import RankedTiers, WinnerSet, bnb_winners, enumerate_tiers, reverse_sequential_thiele, sequential_thiele, winners
from .apportionment import (
    check_dhondt_axiom,
    check_lower_quota,
    divisor_apportion,
    is_dhondt_proportional,
    lower_quota_band,
)
from .rules import Rule, counting_rule, pathological_rule, resolve_rule
from .verdict import AxiomVerdict
from .axioms import (
    alpha_profile,
    check_consistency,
    check_continuity,
    check_disjoint_diversity,
    check_disjoint_equality,
    check_efficiency,
    check_symmetry,
    check_weak_efficiency,
    induced_comparison,
    verify_two_nonimposition,
)
from .search import SearchConfig, replay, search_counterexample

__version__ = "0.1.0"
