import itertools

import pytest

from lingroth.algebra import cyclic_group, zero_group
from lingroth.bipresheaf import (
    compose_bipresheaf_morphisms,
    enumerate_ab_bipresheaves,
    enumerate_module_bipresheaves,
    enumerate_morphisms,
    identity_morphism,
    is_zero,
    replay_bipresheaf,
    validate_bipresheaf,
    validate_bipresheaf_morphism,
    zero_bipresheaf,
    zero_morphism,
)
from lingroth.fincat import arrow_category


def _count_arrow_bipresheaves_oracle():
    # groups of order 1 or 2 on the arrow; every hom is multiplication by k in {0, 1},
    # forced to 0 when either side is trivial. Coherence: eta_y = a2f * eta_x * a1f.
    def homs(a, b):
        return [0, 1] if a == b == 2 else [0]

    total = 0
    for a1x, a1y, a2x, a2y in itertools.product([1, 2], repeat=4):
        for a1f in homs(a1y, a1x):
            for a2f in homs(a2x, a2y):
                for ex in homs(a1x, a2x):
                    for ey in homs(a1y, a2y):
                        total += ey == (a2f * ex * a1f) % 2
    return total


def test_ab_bipresheaf_count_matches_oracle():
    got = enumerate_ab_bipresheaves(arrow_category(), [zero_group(), cyclic_group(2)], 10**6)
    assert len(got) == _count_arrow_bipresheaves_oracle() == 34


def test_module_bipresheaf_counts(corpus):
    groups = [zero_group(), cyclic_group(2)]
    # over FIX3 every Z/2-action and compatibility is forced, so modules = ab bipresheaves
    assert len(enumerate_module_bipresheaves(corpus["FIX3"], groups, 10**6)) == 34
    # over FIX2 the trivial ring forces M2 = 0; M1 is any of the 5 contravariant functors
    assert len(enumerate_module_bipresheaves(corpus["FIX2"], groups, 10**6)) == 5


@pytest.mark.parametrize("name", ["FIX1", "FIX2", "FIX3", "FIX3_RED", "FIX5", "FIX5B", "AB_C2", "FIX4", "MOD1", "MOD3", "ZERO1", "ZERO3"])
def test_valid_bipresheaves(corpus, name):
    assert validate_bipresheaf(corpus[name]).ok


def test_theta_corruption_single_violation(corpus):
    B = corpus["FIX3_THETA"]
    rep = validate_bipresheaf(B)
    assert rep.laws() == {"coherence"}
    assert rep.violations[0].witness["f"] == "f"
    assert all(replay_bipresheaf(B, v) for v in rep.violations)


def test_corrupted_r2_coherence(corpus):
    B = corpus["BIP_BAD_R2"]
    rep = validate_bipresheaf(B)
    assert rep.laws() == {"coherence"}
    v = rep.violations[0]
    assert (v.witness, v.lhs, v.rhs) == ({"f": "f", "a": "1"}, "1", "0")
    assert replay_bipresheaf(B, v)


def _naive_square(B, f="f"):
    # a plausible but wrong check: A2(f)∘eta_x == eta_y∘A1(f), treating both as covariant
    A1, A2, eta = B.parts()
    x, y = B.base.morphisms[f]
    return (A2.morphisms[f].map[eta[x].map] == eta[y].map[A1.morphisms[f].map]).all()


def test_naturality_traps(corpus):
    coherent, incoherent = corpus["TRAP_COHERENT"], corpus["TRAP_INCOHERENT"]
    assert validate_bipresheaf(coherent).ok and not _naive_square(coherent)
    assert not validate_bipresheaf(incoherent).ok and _naive_square(incoherent)


def test_morphism_laws(corpus):
    for name in ("ID_C2", "ZERO_C2", "Q42", "ID_FIX4"):
        assert validate_bipresheaf_morphism(corpus[name]).ok, name
    rep = validate_bipresheaf_morphism(corpus["MOR_BAD_ETA"])
    assert rep.laws() == {"eta_compat"}


def test_identity_and_zero_morphisms(corpus):
    B = corpus["AB_C2"]
    i = identity_morphism(B)
    z = zero_morphism(B, B)
    assert validate_bipresheaf_morphism(i).ok and validate_bipresheaf_morphism(z).ok
    assert compose_bipresheaf_morphisms(i, z).key() == z.key()
    assert compose_bipresheaf_morphisms(z, i).key() == z.key()
    assert is_zero(zero_bipresheaf(B.base)) and not is_zero(B)


def test_endomorphisms_of_ab_c2(corpus):
    # phi1, phi2 are multipliers k at each object; naturality forces k constant per side,
    # eta_compat forces phi1 == phi2: two endomorphisms
    assert len(enumerate_morphisms(corpus["AB_C2"], corpus["AB_C2"], 10**6)) == 2
