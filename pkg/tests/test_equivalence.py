import pytest

from lingroth.algebra import cyclic_group, zero_group
from lingroth.bipresheaf import enumerate_module_bipresheaves, enumerate_morphisms
from lingroth.equivalence import (
    StructureFailureReport,
    check_gr_coherence,
    check_gr_functoriality,
    check_morphism_transport,
    compare_gr,
    generators,
    phi,
    psi,
    replay_gr,
    replay_phi_failure,
    roundtrip_check,
    roundtrip_gr,
    validate_gr_bipresheaf,
)
from lingroth.grothendieck import check_sum_id

SUM_ID = {"FIX1": [0, 2, 4], "FIX2": [0, 2], "FIX5": [0, 2], "FIX5B": [0, 2], "FIXV": [0, 2]}
CORPUS_MODULES = [("FIX4", "FIX2"), ("MOD1", "FIX1"), ("ZERO1", "FIX1"), ("MOD3", "FIX3"), ("ZERO3", "FIX3")]


def _groups(orders):
    return [zero_group() if n == 0 else cyclic_group(n) for n in orders]


def test_sum_id_list_is_right(gr):
    for name in SUM_ID:
        assert check_sum_id(gr(name)).ok
    assert not check_sum_id(gr("FIX3")).ok


def test_psi_on_fix4(corpus, gr):
    G = gr("FIX2")
    F = psi(corpus["FIX4"], G)
    unit = G.morphism("x", "y", [("f", "1", "e")])
    assert F.first(unit).as_dict() == {"0": "0", "1": "1"}
    assert F.first(G.morphism("x", "y", [("f", "0", "e")])).as_dict() == {"0": "0", "1": "0"}
    assert F.second(unit).as_dict() == {"0": "0"}


def test_generators_skip_the_zero_pair(gr):
    G = gr("FIX3")
    assert generators(G, "x", "y") == [("f", 0, 1), ("f", 1, 0), ("f", 1, 1)]


@pytest.mark.parametrize("name", sorted(SUM_ID))
def test_psi_valid_for_every_enumerated_module(corpus, gr, name):
    G = gr(name)
    mods = enumerate_module_bipresheaves(corpus[name], _groups(SUM_ID[name]), 10**6)
    assert mods
    for M in mods:
        F = psi(M, G)
        assert check_gr_functoriality(F).ok
        assert check_gr_coherence(F).ok


def test_psi_coherence_fails_without_sum_id(corpus, gr):
    G = gr("FIX3")
    F = psi(corpus["MOD3"], G)
    assert check_gr_functoriality(F).ok
    rep = check_gr_coherence(F)
    assert len(rep.violations) >= 1
    assert all(replay_gr(F, v) for v in rep.violations)


def test_psi_fails_when_module_naturality_is_broken(corpus, gr):
    F = psi(corpus["MODV_NAT_BAD"], gr("FIXV"))
    rep = check_gr_functoriality(F)
    assert rep.laws() == {"first.composition"}
    assert all(replay_gr(F, v) for v in rep.violations)


@pytest.mark.parametrize("module,over", CORPUS_MODULES)
def test_roundtrip_on_corpus_modules(corpus, gr, module, over):
    rep = roundtrip_check(corpus[module], gr(over))
    assert rep.forward_exact and rep.backward_exact
    assert rep.vacuous == (over == "FIX3")


@pytest.mark.parametrize("name", sorted(SUM_ID))
def test_roundtrip_on_enumerated_modules(corpus, gr, name):
    G = gr(name)
    for M in enumerate_module_bipresheaves(corpus[name], _groups(SUM_ID[name]), 10**6):
        back = phi(psi(M, G))
        assert not isinstance(back, StructureFailureReport)
        assert back.M1.carrier == M.M1.carrier and back.M2.carrier == M.M2.carrier
        for x in G.objects:
            assert (back.M1.action[x] == M.M1.action[x]).all()
            assert (back.M2.action[x] == M.M2.action[x]).all()
            assert back.eta[x] == M.eta[x]
        assert compare_gr(psi(M, G), psi(back, G)) is None


def test_phi_action_laws_pass_on_image_of_psi(corpus, gr):
    # phi validates unit and associativity of both actions before returning a module
    for module, over in CORPUS_MODULES:
        assert not isinstance(phi(psi(corpus[module], gr(over))), StructureFailureReport)


def test_trivial_ring_collapse(corpus):
    F = corpus["GR_TRIVIAL"]
    assert validate_gr_bipresheaf(F).ok
    out = phi(F)
    assert isinstance(out, StructureFailureReport)
    assert "M2.zero_scalar" in out.laws()
    v = next(v for v in out.violations if v.law == "M2.zero_scalar")
    # e is both 0 and 1 in the trivial ring, so 1 = e·1 = 0·1 must equal 0
    assert (v.lhs, v.rhs) == ("1", "0")
    assert all(replay_phi_failure(F, v) for v in out.violations)


def test_roundtrip_gr_reports_failure(corpus):
    rep = roundtrip_gr(corpus["GR_TRIVIAL"])
    assert not rep.ok and rep.failure["structure_failure"]


def test_gr_identity_corruption(corpus):
    F = corpus["GR_BAD_IDENTITY"]
    rep = validate_gr_bipresheaf(F)
    assert rep.laws() == {"first.identity"}
    assert all(replay_gr(F, v) for v in rep.violations)


def test_morphisms_transport(corpus, gr):
    rep = check_morphism_transport(corpus["ID_FIX4"], gr("FIX2"))
    assert rep.ok
    mods = enumerate_module_bipresheaves(corpus["FIX2"], _groups([0, 2]), 10**6)
    for A in mods:
        for B in mods:
            for m in enumerate_morphisms(A, B, 10**6):
                assert check_morphism_transport(m, gr("FIX2")).ok
