"""Cyclic even-free Steiner 2-designs and maximum cyclic packings."""

__version__ = "0.1.0"

from .algebra import FieldTable, crt_map, gf, gf_table  # noqa: E402
from .compose import compose_dm, compose_oa, compose_odd_prime, compose_sts  # noqa: E402
from .construct import (  # noqa: E402
    DifferenceMatrix,
    OrthogonalArray,
    ag_packing,
    bose,
    dm_product,
    normalize_dm,
    oa_odd_prime,
    oa_prime_power,
    singer_pg,
    vandermonde_dm,
)
from .core import CyclicDesign, SetSystem, develop, orbit_reps, pair_index  # noqa: E402
from .search import SearchSpec, multiplier_reduce, search_difference_family  # noqa: E402
from .verify import (  # noqa: E402
    BudgetExhausted,
    EvenConfiguration,
    EvenFreenessReport,
    brute_force_even_minimum,
    check_difference_coverage,
    check_dm,
    check_oa,
    check_steiner,
    even_freeness,
    find_generalized_pasch,
    two_orbit_witness,
)
