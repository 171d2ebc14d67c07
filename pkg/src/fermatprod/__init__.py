"""Exact prime-order accounting for products of generalized Fermat values.

For P(m, n) = prod_{x <= m} (x^(2^n) + 1), this package computes exact
prime-power valuations, certifies the congruence-system bound p <= 2(x+1),
verifies the anchored chain showing every P(m, 2) has a prime of order at
most 4 for m up to 2.87e12, and spot-checks the analytic estimates that
extend the statement beyond that range.
"""

from .analytic import (
    check_bt_bound,
    check_logsum_bound,
    check_pi_bound,
    check_theta_window,
    final_inequality_crossing,
    final_inequality_margin,
    pi,
    pi_ap,
    theta_ap,
)
from .cyclotomic import (
    CongruenceSystem,
    CycInt,
    check_prime_bound,
    counterexample_search,
    cyc_add,
    cyc_mul,
    iter_realizable_systems,
    norm,
    pigeonhole_witness,
    primitive_roots_integrally_independent,
    single_entry_search,
)
from .ntcore import (
    RootSet,
    count_roots_upto,
    hensel_lift,
    is_prime,
    roots_of_minus_one,
)
from .partitions import (
    Partition,
    big_n,
    enumerate_partitions,
    extreme_partition,
    r_bound,
    satisfies_condition,
    verify_minimality,
)
from .prodorders import (
    ChainLink,
    ValuationTable,
    alpha_p,
    alpha_two,
    anchor_chain_search,
    beta_p,
    bound_checks,
    build_valuation_table,
    is_qth_power_obstructed,
    min_order,
    min_order_scan,
    product_value,
    validate_chain_link,
    verify_chain_link,
    verify_quartic_chain,
)

__version__ = "0.1.0"

__all__ = [
    "CongruenceSystem",
    "ChainLink",
    "CycInt",
    "Partition",
    "RootSet",
    "ValuationTable",
    "alpha_p",
    "alpha_two",
    "anchor_chain_search",
    "beta_p",
    "big_n",
    "bound_checks",
    "build_valuation_table",
    "check_bt_bound",
    "check_logsum_bound",
    "check_pi_bound",
    "check_prime_bound",
    "check_theta_window",
    "count_roots_upto",
    "counterexample_search",
    "cyc_add",
    "cyc_mul",
    "enumerate_partitions",
    "extreme_partition",
    "final_inequality_crossing",
    "final_inequality_margin",
    "hensel_lift",
    "is_prime",
    "is_qth_power_obstructed",
    "iter_realizable_systems",
    "min_order",
    "min_order_scan",
    "norm",
    "pi",
    "pi_ap",
    "pigeonhole_witness",
    "primitive_roots_integrally_independent",
    "product_value",
    "r_bound",
    "roots_of_minus_one",
    "satisfies_condition",
    "single_entry_search",
    "theta_ap",
    "validate_chain_link",
    "verify_chain_link",
    "verify_minimality",
    "verify_quartic_chain",
]
