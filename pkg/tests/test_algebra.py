import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lingroth import AxiomError, MalformedError
from lingroth.algebra import (
    GroupHom,
    RingHom,
    cyclic_group,
    enumerate_group_homs,
    enumerate_ring_homs,
    identity_hom,
    modular_ring,
    product_group,
    product_ring,
    quotient,
    replay_hom,
    subgroup,
    table_ring,
    trivial_ring,
    validate_group_hom,
    validate_ring,
    validate_ring_hom,
    zero_hom,
)

small = st.integers(min_value=1, max_value=12)


@given(small)
def test_modular_rings_satisfy_axioms(n):
    assert validate_ring(modular_ring(n)).ok


@given(small, small)
@settings(max_examples=25)
def test_products_satisfy_axioms(m, n):
    R = product_ring(modular_ring(m), modular_ring(n))
    assert R.order == m * n
    assert validate_ring(R).ok


@given(st.integers(1, 5), st.integers(1, 5))
@settings(max_examples=30, deadline=None)
def test_ring_hom_count_matches_divisibility(m, n):
    # unital homs Z/m -> Z/n exist (exactly one) iff n divides m
    homs = enumerate_ring_homs(modular_ring(m), modular_ring(n))
    assert len(homs) == (1 if m % n == 0 else 0)


@given(st.integers(1, 5), st.integers(1, 5))
@settings(max_examples=30, deadline=None)
def test_group_hom_count_is_gcd(m, n):
    assert len(enumerate_group_homs(cyclic_group(m), cyclic_group(n))) == np.gcd(m, n)


def test_trivial_ring_has_zero_equal_one():
    T = trivial_ring()
    assert T.is_trivial and T.order == 1
    assert validate_ring(T).ok
    assert modular_ring(1).is_trivial


def test_table_ring_rejects_broken_distributivity():
    # Z/2 with multiplication replaced by "always 1" is not a ring
    with pytest.raises(AxiomError) as e:
        table_ring(["0", "1"], {"0": {"0": "0", "1": "1"}, "1": {"0": "1", "1": "0"}},
                   {a: {b: "1" for b in "01"} for a in "01"}, "0", "1")
    assert not e.value.report.ok


def test_reduction_is_a_ring_hom():
    h = RingHom(modular_ring(4), modular_ring(2), {"0": "0", "1": "1", "2": "0", "3": "1"})
    assert validate_ring_hom(h).ok


def test_zero_map_fails_one_and_replays():
    Z2 = modular_ring(2)
    h = RingHom(Z2, Z2, {"0": "0", "1": "0"})
    rep = validate_ring_hom(h)
    assert rep.laws() == {"preserves_one"}
    assert all(replay_hom(h, v) for v in rep.violations)


def test_non_additive_map_replays():
    G = cyclic_group(3)
    h = GroupHom(G, G, {"0": "0", "1": "1", "2": "1"})
    rep = validate_group_hom(h)
    assert rep.laws() == {"preserves_add"}
    assert replay_hom(h, rep.violations[0])


def test_nontotal_map_is_malformed():
    with pytest.raises(MalformedError, match="not total"):
        GroupHom(cyclic_group(2), cyclic_group(2), {"0": "0"})


@given(st.integers(1, 10), st.data())
@settings(max_examples=40)
def test_hom_arithmetic(n, data):
    G = cyclic_group(n)
    k = data.draw(st.integers(0, n - 1))
    h = GroupHom(G, G, [(k * a) % n for a in range(n)])
    assert validate_group_hom(h).ok
    assert (h + zero_hom(G, G)) == h
    assert h.times(n) == zero_hom(G, G)
    assert identity_hom(G).then(h) == h
    assert len(h.kernel()) * len(h.image()) == n


def test_subgroup_and_quotient():
    G = cyclic_group(4)
    H, inc = subgroup(G, [0, 2])
    assert H.elements == ("0", "2") and inc.map.tolist() == [0, 2]
    Q, proj = quotient(G, [0, 2])
    assert Q.order == 2
    assert proj.kernel() == [0, 2]
    assert validate_group_hom(proj).ok and validate_group_hom(inc).ok


def test_subgroup_must_be_closed():
    with pytest.raises(MalformedError):
        subgroup(cyclic_group(4), [0, 1])


def test_product_group_elements():
    P = product_group(cyclic_group(2), cyclic_group(2))
    assert P.elements == ("(0,0)", "(0,1)", "(1,0)", "(1,1)")
