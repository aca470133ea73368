from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from evenfree.algebra import units
from evenfree.core import CyclicDesign, canonical_translate, develop
from evenfree.search import SearchSpec, multiplier_reduce, multiply, search_difference_family
from evenfree.verify import check_difference_coverage, check_steiner, even_freeness, find_generalized_pasch


@pytest.fixture(scope="module")
def all_sts19():
    res = search_difference_family(SearchSpec(19, 3, 5))
    assert res.status == "found" and res.complete
    return res.designs


def test_sts19_found(all_sts19):
    assert len(all_sts19) >= 1
    for d in all_sts19:
        assert check_difference_coverage(d) and check_steiner(develop(d))
        assert even_freeness(develop(d), 5).verdict


def test_sts19_multiplier_classes(all_sts19):
    reps = multiplier_reduce(all_sts19)
    assert 1 <= len(reps) <= len(all_sts19)
    assert len(reps) == 2


@pytest.mark.parametrize("v,k,r", [(13, 3, 5), (7, 3, 5), (9, 3, 3)])
def test_exhausts_to_none(v, k, r):
    res = search_difference_family(SearchSpec(v, k, r))
    assert res.status == "exhausted" and res.complete and len(res) == 0


def test_sts13_exists_without_even_freeness_demand():
    res = search_difference_family(SearchSpec(13, 3, 3))
    assert res.status == "found" and len(res) == 4
    assert len(multiplier_reduce(res.designs)) == 1


def test_limit_stops_early():
    res = search_difference_family(SearchSpec(19, 3, 5, limit=1))
    assert res.status == "found" and len(res) == 1 and not res.complete


def test_short_orbit_orders():
    res = search_difference_family(SearchSpec(21, 3, 5, limit=1))
    assert res.status == "found"
    (d,) = res.designs
    assert d.short_block == (0, 7, 14)
    assert even_freeness(develop(d), 5).verdict


def test_block_size_four_matches_enumeration():
    res = search_difference_family(SearchSpec(13, 4, 4))
    brute = set()
    for b in combinations(range(13), 4):
        if sorted((x - y) % 13 for x in b for y in b if x != y) == list(range(1, 13)):
            brute.add(canonical_translate(b, 13))
    assert {d.base_blocks[0] for d in res} == brute and len(brute) == 4
    assert [d.base_blocks for d in multiplier_reduce(res.designs)] == [((0, 1, 3, 9),)]


def test_timeout_is_reported():
    res = search_difference_family(SearchSpec(37, 4, 5, budget=0.0))
    assert res.status == "timeout" and not res.complete


@pytest.mark.parametrize("v,k,r", [(11, 3, 5), (8, 3, 5), (13, 3, 2), (13, 1, 3)])
def test_spec_validation(v, k, r):
    with pytest.raises(ValueError):
        SearchSpec(v, k, r)


def test_multiplier_reduce_examples():
    d = CyclicDesign(19, 3, ((0, 1, 4), (0, 2, 12), (0, 5, 13)))
    image = multiply(d, 2)
    assert image != d
    assert multiplier_reduce([d, image]) == multiplier_reduce([d])
    assert len(multiplier_reduce([d, image])) == 1
    assert multiplier_reduce([d]) == [min((multiply(d, u) for u in units(19)), key=lambda x: x.base_blocks)]
    assert multiplier_reduce([]) == []


def test_multiplier_reduce_mixed_parameters():
    with pytest.raises(ValueError):
        multiplier_reduce([CyclicDesign(7, 3, ((0, 1, 3),)), CyclicDesign(13, 3, ((0, 1, 4), (0, 2, 7)))])


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(units(19)))
def test_reduction_commutes_with_multipliers(all_sts19, u):
    # the exhaustive solution set is closed under units, and reducing images gives the same classes
    images = [multiply(d, u) for d in all_sts19]
    assert {d.base_blocks for d in images} == {d.base_blocks for d in all_sts19}
    assert multiplier_reduce(images) == multiplier_reduce(all_sts19)


def test_reduce_flag(all_sts19):
    res = search_difference_family(SearchSpec(19, 3, 5, reduce_multipliers=True))
    assert res.designs == multiplier_reduce(all_sts19)


def test_sts19_matches_enumeration(all_sts19):
    v = 19
    triples = {canonical_translate(b, v) for b in combinations(range(v), 3)}
    diffsets = {t: frozenset((x - y) % v for x in t for y in t if x != y) for t in triples}
    families = []
    for fam in combinations(sorted(triples), 3):
        if len(frozenset().union(*(diffsets[t] for t in fam))) == v - 1:
            families.append(CyclicDesign(v, 3, fam))
    assert all(check_steiner(develop(d)) for d in families)
    free = [d for d in families if find_generalized_pasch(develop(d)) is None]
    assert sorted(d.base_blocks for d in free) == sorted(d.base_blocks for d in all_sts19)
