import json

import pytest

from evenfree.compose import (
    EVEN_K_NOTE,
    CompositionError,
    _oa_difference_matrix,
    _odd_prime_short_matrix,
    compose_dm,
    compose_oa,
    compose_odd_prime,
    compose_sts,
)
from evenfree.construct import bose, oa_odd_prime, oa_prime_power, singer_pg, vandermonde_dm
from evenfree.core import CyclicDesign, develop
from evenfree.io import DesignDocument, dumps
from evenfree.verify import check_difference_coverage, check_dm, even_freeness, find_generalized_pasch, two_orbit_witness

PG23 = singer_pg(2, 3)
BOSE5 = bose(5)
STS13 = CyclicDesign(13, 3, ((0, 1, 4), (0, 2, 7)))  # contains a Pasch


@pytest.fixture(scope="module")
def d169():
    return compose_dm(PG23, PG23, vandermonde_dm(13, 4))


def test_compose_dm_169(d169):
    assert (d169.v, d169.k) == (169, 4)
    assert len(d169.base_blocks) == 13 * 1 + 1
    assert len(develop(d169)) == 2366
    assert check_difference_coverage(d169)
    assert find_generalized_pasch(develop(d169)) is None
    assert even_freeness(develop(d169), 5).verdict


def test_compose_dm_two_orbit_witness(d169):
    s = develop(d169)
    w = two_orbit_witness(d169)
    assert len(w) == 8 and w.is_valid_in(s)


def test_compose_dm_rejects_odd_k():
    with pytest.raises(CompositionError, match="even"):
        compose_dm(BOSE5, BOSE5, vandermonde_dm(15, 3))


def test_compose_dm_rejects_wrong_congruence():
    with pytest.raises(CompositionError, match="mod 12"):
        compose_dm(singer_pg(3, 3), PG23, vandermonde_dm(13, 4))


def test_compose_dm_accepts_unnormalized_matrix():
    m = vandermonde_dm(13, 4)
    shifted = type(m)(13, 4, tuple(tuple((x + j) % 13 for j, x in enumerate(row)) for row in m.entries))
    assert compose_dm(PG23, PG23, shifted) == compose_dm(PG23, PG23, m)


def test_compose_oa_k3(sts19):
    d = compose_oa(sts19, sts19, oa_odd_prime(3))
    s = develop(d)
    assert (d.v, len(s)) == (361, 21660)
    assert len(d.base_blocks) == 19 * 3 + 3
    assert check_difference_coverage(d)
    assert find_generalized_pasch(s) is None


def test_compose_oa_internal_matrix_is_dm(sts19):
    m = _oa_difference_matrix(oa_odd_prime(3), sts19)
    assert (m.v, m.k) == (19, 3) and check_dm(m)
    m4 = _oa_difference_matrix(oa_prime_power(4), PG23)
    assert (m4.v, m4.k) == (13, 4) and check_dm(m4)


def test_compose_oa_k4_valid_and_flagged():
    # the even-freeness claim for this instance is exercised by the acceptance suite
    d = compose_oa(PG23, PG23, oa_prime_power(4))
    assert (d.v, d.k, len(develop(d))) == (169, 4, 2366)
    assert check_difference_coverage(d)
    assert EVEN_K_NOTE in d.notes


def test_compose_oa_rejects_pasch_ingredient(sts19):
    with pytest.raises(CompositionError, match="generalized Pasch"):
        compose_oa(STS13, sts19, oa_odd_prime(3))


def test_compose_odd_prime_285(sts19):
    d = compose_odd_prime(sts19, BOSE5)
    s = develop(d)
    assert d.v == 285 and check_difference_coverage(d)
    assert d.short_block is not None
    assert find_generalized_pasch(s) is None


def test_compose_odd_prime_short_matrix():
    m = _odd_prime_short_matrix(3, BOSE5)
    assert (m.v, m.k) == (15, 3) and check_dm(m)


def test_compose_odd_prime_trust_skips_ingredient_check():
    with pytest.raises(CompositionError):
        compose_odd_prime(STS13, BOSE5)
    d = compose_odd_prime(STS13, BOSE5, trust=True)
    assert d.v == 195 and check_difference_coverage(d)


def test_compose_odd_prime_k5_missing_ingredient():
    pg24 = singer_pg(2, 4)  # S(2,5,21), not 6-even-free
    with pytest.raises(CompositionError, match="first ingredient"):
        compose_odd_prime(pg24, pg24)


def test_compose_odd_prime_rejects_even_k():
    with pytest.raises(CompositionError, match="odd prime"):
        compose_odd_prime(PG23, PG23)


def test_compose_sts_75():
    d = compose_sts(BOSE5, BOSE5)
    assert d.v == 75 and len(d.base_blocks) == (75 - 3) // 6 + 1 == 13
    assert check_difference_coverage(d)
    assert find_generalized_pasch(develop(d)) is None


def test_compose_sts_165():
    d = compose_sts(BOSE5, bose(11))
    assert d.v == 165 and check_difference_coverage(d)
    assert find_generalized_pasch(develop(d)) is None


def test_compose_sts_rejects_bad_order():
    with pytest.raises(CompositionError, match="13"):
        compose_sts(BOSE5, STS13)


def test_compose_is_deterministic(sts19):
    a = dumps(DesignDocument(compose_odd_prime(sts19, BOSE5)).to_dict())
    b = dumps(DesignDocument(compose_odd_prime(sts19, BOSE5)).to_dict())
    assert a == b and json.loads(a)["v"] == 285
