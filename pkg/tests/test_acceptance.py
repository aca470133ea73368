"""Acceptance criteria, one test per criterion.

A PASS/FAIL line per criterion is printed in the pytest terminal summary
(see conftest.py).  All checks are exact; each also asserts its runtime target.
"""

import time
from contextlib import contextmanager

import pytest

from evenfree.compose import _oa_difference_matrix, _odd_prime_short_matrix, compose_dm, compose_oa, compose_odd_prime, compose_sts
from evenfree.construct import (
    ag_packing,
    bose,
    dm_product,
    oa_odd_prime,
    oa_prime_power,
    singer_pg,
    vandermonde_dm,
)
from evenfree.core import CyclicDesign, develop
from evenfree.search import SearchSpec, search_difference_family
from evenfree.verify import (
    brute_force_even_minimum,
    check_difference_coverage,
    check_dm,
    check_oa,
    check_steiner,
    even_freeness,
    find_generalized_pasch,
    is_even,
    two_orbit_witness,
)

from conftest import oracle_corpus


@contextmanager
def within(seconds: float):
    start = time.monotonic()
    yield
    elapsed = time.monotonic() - start
    assert elapsed < seconds, f"took {elapsed:.1f}s, target {seconds}s"


@pytest.fixture(scope="module")
def sts19():
    res = search_difference_family(SearchSpec(19, 3, 5, limit=1))
    return res.designs[0]


def test_c01_bose_family_five_even_free():
    with within(10):
        for x in (5, 11, 13, 17, 19, 25):
            d = bose(x)
            s = develop(d)
            assert check_steiner(s), x
            assert check_difference_coverage(d), x
            rep = even_freeness(s, 5)
            assert rep.verdict and rep.minimal_witness is None, x


def test_c02_fano_minimum_four():
    with within(1):
        s = develop(CyclicDesign(7, 3, ((0, 1, 3),)))
        rep = even_freeness(s, 7)
        brute = brute_force_even_minimum(s)
        assert rep.minimum_size == 4 == len(brute)
        assert rep.minimal_witness == brute


def test_c03_pg23_minimum_is_full_plane():
    with within(1):
        d = singer_pg(2, 3)
        s = develop(d)
        assert (d.v, d.k) == (13, 4) and check_difference_coverage(d)
        brute = brute_force_even_minimum(s)
        assert brute.indices == tuple(range(13))
        assert even_freeness(s, 12).verdict


def test_c04_pg33_seven_even_free():
    with within(300):
        d = singer_pg(3, 3)
        s = develop(d)
        assert (d.v, d.k, len(s)) == (40, 4, 130)
        assert check_steiner(s)
        assert even_freeness(s, 7).verdict


def test_c05_ag_packings():
    with within(120):
        small = ag_packing(2, 3)
        s = develop(small)
        assert (small.v, len(s)) == (8, 8) and check_steiner(s)
        w = brute_force_even_minimum(s)
        assert w is None or len(w) > 5
        big = ag_packing(2, 5)
        s = develop(big)
        assert (big.v, len(s)) == (24, 24) and check_steiner(s)
        assert even_freeness(s, 9).verdict


def test_c06_compose_dm_169():
    with within(300):
        pg = singer_pg(2, 3)
        d = compose_dm(pg, pg, vandermonde_dm(13, 4))
        s = develop(d)
        assert (d.v, len(s)) == (169, 2366)
        assert check_difference_coverage(d)
        assert find_generalized_pasch(s) is None


def test_c07_compose_oa_k4_169():
    with within(300):
        pg = singer_pg(2, 3)
        d = compose_oa(pg, pg, oa_prime_power(4))
        s = develop(d)
        assert (d.v, len(s)) == (169, 2366)
        assert check_difference_coverage(d)
        assert find_generalized_pasch(s) is None


def test_c08_search_ingredients():
    with within(600):
        found = search_difference_family(SearchSpec(19, 3, 5))
        assert found.status == "found" and len(found) >= 1
        for v, r in ((13, 5), (7, 5), (9, 3)):
            res = search_difference_family(SearchSpec(v, 3, r))
            assert res.status == "exhausted" and res.complete and len(res) == 0, v
        for v in (21, 27):
            res = search_difference_family(SearchSpec(v, 3, 5, limit=1))
            assert res.status == "found" and len(res) >= 1, v
            assert even_freeness(develop(res.designs[0]), 5).verdict


def test_c09_compose_oa_k3_361(sts19):
    with within(300):
        d = compose_oa(sts19, sts19, oa_odd_prime(3))
        s = develop(d)
        assert (d.v, len(s)) == (361, 21660)
        assert check_difference_coverage(d)
        assert find_generalized_pasch(s) is None


def test_c10_compose_odd_prime_285(sts19):
    with within(120):
        d = compose_odd_prime(sts19, bose(5))
        s = develop(d)
        assert d.v == 285 and check_difference_coverage(d)
        assert find_generalized_pasch(s) is None


def test_c11_compose_sts():
    with within(60):
        b5 = bose(5)
        d = compose_sts(b5, b5)
        assert d.v == 75 and len(d.base_blocks) == 13
        assert check_difference_coverage(d) and find_generalized_pasch(develop(d)) is None
        d = compose_sts(b5, bose(11))
        assert d.v == 165
        assert check_difference_coverage(d) and find_generalized_pasch(develop(d)) is None


def test_c12_two_orbit_witness_bound(sts19):
    with within(60):
        pg = singer_pg(2, 3)
        b5 = bose(5)
        corpus = [bose(x) for x in (5, 11, 13, 17, 19, 25)]
        corpus += [sts19, singer_pg(3, 3), compose_dm(pg, pg, vandermonde_dm(13, 4)),
                   compose_oa(sts19, sts19, oa_odd_prime(3)), compose_odd_prime(sts19, b5),
                   compose_sts(b5, b5), compose_sts(b5, bose(11))]
        for d in corpus:
            assert len(d.base_blocks) >= 2
            s = develop(d)
            w = two_orbit_witness(d)
            assert len(w) == 2 * d.k and is_even(s, w.indices), d.v
            if len(s) <= 2400:
                # the bounded search confirms the design is not 2k-even-free
                rep = even_freeness(s, 2 * d.k)
                assert not rep.verdict and rep.minimum_size <= 2 * d.k, d.v


def test_c13_matrix_layer(sts19):
    with within(10):
        assert check_dm(vandermonde_dm(13, 4))
        m = dm_product(vandermonde_dm(7, 3), vandermonde_dm(13, 3))
        assert (m.v, m.k) == (91, 3) and check_dm(m)
        assert check_oa(oa_odd_prime(5))
        assert check_oa(oa_prime_power(4))
        assert check_dm(_oa_difference_matrix(oa_odd_prime(3), sts19))
        assert check_dm(_oa_difference_matrix(oa_prime_power(4), singer_pg(2, 3)))
        assert check_dm(_odd_prime_short_matrix(3, bose(5)))


def test_c14_oracle_agreement():
    with within(120):
        corpus = oracle_corpus()
        assert len(corpus) >= 20
        assert sum(1 for name, _ in corpus if "mut" in name or "drop" in name) >= 5
        for name, s in corpus:
            assert len(s) <= 26
            brute = brute_force_even_minimum(s)
            rep = even_freeness(s, len(s))
            assert rep.minimal_witness == brute, name
