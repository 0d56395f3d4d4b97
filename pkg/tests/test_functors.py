import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lingroth import MalformedError
from lingroth.algebra import cyclic_group, modular_ring, product_ring, zero_group, enumerate_ring_homs
from lingroth.fincat import arrow_category, terminal_category
from lingroth.functors import (
    ModuleStructure,
    constant_functor,
    enumerate_ab_functors,
    enumerate_actions,
    enumerate_module_structures,
    image_endpoints,
    replay_functor,
    replay_module,
    ring_as_module,
    validate_functor,
    validate_module_structure,
    zero_module,
)


def test_variance_fixes_direction():
    A = arrow_category()
    assert image_endpoints(A, "covariant", "f") == ("x", "y")
    assert image_endpoints(A, "contravariant", "f") == ("y", "x")


def test_constant_functors_are_functors():
    for variance in ("covariant", "contravariant"):
        F = constant_functor(arrow_category(), modular_ring(6), variance)
        assert validate_functor(F).ok


def test_corrupted_one_fails_before_functoriality(corpus):
    F = corpus["FUNCTOR_BAD_ONE"]
    rep = validate_functor(F)
    assert rep.laws() == {"hom.preserves_one"}
    assert rep.violations[0].witness["f"] == "f"
    assert all(replay_functor(F, v) for v in rep.violations)


def test_unknown_variance_is_malformed():
    with pytest.raises(MalformedError):
        constant_functor(arrow_category(), modular_ring(2), "sideways")


def _count_functors_oracle(orders, variance):
    # arrow category; groups cyclic of the given orders; Hom(C_a, C_b) has gcd(a, b) elements
    total = 0
    for a in orders:
        for b in orders:
            total += np.gcd(a, b)
    return total


@pytest.mark.parametrize("variance", ["covariant", "contravariant"])
def test_functor_count_on_arrow(variance):
    groups = [zero_group(), cyclic_group(2), cyclic_group(3)]
    got = enumerate_ab_functors(arrow_category(), variance, groups, 10**6)
    assert len(got) == _count_functors_oracle([1, 2, 3], variance)


@given(st.integers(1, 6), st.integers(1, 6))
@settings(max_examples=30, deadline=None)
def test_actions_are_ring_homs_into_endomorphisms(m, n):
    # End(C_n) is Z/n, so Z/m-module structures on C_n are ring homs Z/m -> Z/n
    expected = len(enumerate_ring_homs(modular_ring(m), modular_ring(n)))
    assert len(enumerate_actions(modular_ring(m), cyclic_group(n), 10**6)) == expected


def test_klein_ring_acts_on_c2_two_ways():
    V = product_ring(modular_ring(2), modular_ring(2))
    assert len(enumerate_actions(V, cyclic_group(2), 10**6)) == 2


def test_ring_as_module_and_zero_module():
    R = constant_functor(arrow_category(), modular_ring(4), "contravariant")
    assert validate_module_structure(ring_as_module(R)).ok
    assert validate_module_structure(zero_module(R)).ok


def test_module_bad_trivial_ring(corpus):
    M = corpus["MOD_BAD"]
    rep = validate_module_structure(M)
    assert rep.laws() == {"zero_scalar", "scalar_additivity"}
    assert all(replay_module(M, v) for v in rep.violations)


def test_module_naturality_failure_replays(corpus):
    M = corpus["MOD_NAT_BAD"]
    rep = validate_module_structure(M)
    assert rep.laws() == {"naturality"}
    v = rep.violations[0]
    assert replay_module(M, v)
    # the witness is concrete: (a, b) at y pulls back to (b, a) at x
    assert set(v.witness) == {"f", "m", "r"}


def test_modules_over_constant_z2_on_arrow():
    R = constant_functor(arrow_category(), modular_ring(2), "contravariant")
    mods = enumerate_module_structures(R, [zero_group(), cyclic_group(2)], 10**6)
    # every group of order <= 2 carries exactly one Z/2 action, so modules = functors
    assert len(mods) == 5


def test_action_table_shape_checked():
    R = constant_functor(terminal_category(), modular_ring(2), "contravariant")
    C = constant_functor(terminal_category(), cyclic_group(2), "contravariant")
    with pytest.raises(MalformedError):
        ModuleStructure(R, C, {"*": np.zeros((2, 3), dtype=np.int64)})
