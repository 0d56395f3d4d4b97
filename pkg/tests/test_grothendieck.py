import itertools
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lingroth import MalformedError
from lingroth.grothendieck import (
    GrMorphism,
    check_category_laws,
    check_sum_id,
    check_well_definedness,
    count_pure,
    distinct_pure_morphisms,
    enumerate_pure_morphisms,
    gr_compose,
    gr_equal,
    gr_identity,
    replay_sum_id_witness,
    replay_well_definedness,
    summary,
)

VALID = ["FIX1", "FIX2", "FIX3", "FIX3_RED", "FIX5", "FIX5B", "FIXV", "TRIV_T"]


# -- an oracle working on element names and brute-force factorizations ---------------


def _name_compose(B, psi, phi):
    """psi∘phi from names: Σ over f, g with g∘f = h of (R1(f)(s1)·r1, R2(g)(r2)·s2)."""
    base = B.base
    out = Counter()
    zeros = set()
    for (f, r1, r2), n in phi.items():
        for (g, s1, s2), m in psi.items():
            if base.cod(f) != base.dom(g):
                continue
            x, z = base.dom(f), base.cod(g)
            R1x, R2z = B.R1.objects[x], B.R2.objects[z]
            a = R1x.elements[R1x.mul[R1x.index(B.R1.morphisms[f].as_dict()[s1]), R1x.index(r1)]]
            b = R2z.elements[R2z.mul[R2z.index(B.R2.morphisms[g].as_dict()[r2]), R2z.index(s2)]]
            out[(base.compose(g, f), a, b)] += n * m
            if a == R1x.elements[R1x.zero] and b == R2z.elements[R2z.zero]:
                zeros.add((base.compose(g, f), a, b))
    return {k: v for k, v in out.items() if k not in zeros}


def _names(G, phi):
    return {(t["f"], t["r1"], t["r2"]): t["n"] for t in G.term_names(phi)}


def test_fix1_composition_table(gr):
    G = gr("FIX1")
    three, two = G.morphism("*", "*", [("1*", "3", "e")]), G.morphism("*", "*", [("1*", "2", "e")])
    assert gr_compose(G, three, two) == two
    assert G.describe(gr_identity(G, "*")) == "(1, e)@1*"
    assert gr_compose(G, two, two).is_zero()


@pytest.mark.parametrize("name", ["FIX1", "FIX2", "FIX3", "FIX3_RED", "FIX5", "FIX5B"])
def test_composition_matches_name_oracle(gr, corpus, name):
    G, B = gr(name), corpus[name]
    obs = G.objects
    for x, y, z in itertools.product(obs, repeat=3):
        if not (G.base.hom(x, y) and G.base.hom(y, z)):
            continue
        for phi in distinct_pure_morphisms(G, x, y):
            for psi in distinct_pure_morphisms(G, y, z):
                got = _names(G, gr_compose(G, psi, phi))
                assert got == _name_compose(B, _names(G, psi), _names(G, phi))


@pytest.mark.parametrize("name", ["FIX1", "FIX2", "FIX3", "FIX5", "FIX5B"])
def test_pure_counts_match_formula(gr, name):
    G = gr(name)
    for x, y in itertools.product(G.objects, repeat=2):
        expected = (1 + G.R1(x).order * G.R2(y).order) ** len(G.base.hom(x, y))
        assert len(enumerate_pure_morphisms(G, x, y)) == count_pure(G, x, y) == expected


def test_fix1_has_five_pure_morphisms(gr):
    assert len(enumerate_pure_morphisms(gr("FIX1"), "*", "*")) == 5


def test_square_composite(gr):
    G = gr("FIX5")
    a = G.morphism("x", "y1", [("f1", "1", "e")])
    b = G.morphism("y1", "z", [("g1", "1", "e")])
    assert G.term_names(gr_compose(G, b, a)) == [{"f": "d", "r1": "1", "r2": "e", "n": 1}]


def test_two_paths_give_multiplicity_two(gr):
    G = gr("FIX5B")
    phi = G.morphism("x", "y", [("f1", "1", "e"), ("f2", "1", "e")])
    psi = G.morphism("y", "z", [("g1", "1", "e"), ("g2", "1", "e")])
    comp = gr_compose(G, psi, phi)
    assert G.describe(comp) == "2*(1, e)@d + 2*(1, e)@e"


def test_normal_form_merges_and_drops_only_zero_pair(gr):
    G = gr("FIX3_RED")
    phi = G.morphism("x", "y", [("f", "1", "1"), ("f", "1", "1"), ("f", "0", "0"), ("f", "0", "1")])
    assert G.term_names(phi) == [{"f": "f", "r1": "0", "r2": "1", "n": 1}, {"f": "f", "r1": "1", "r2": "1", "n": 2}]


def test_tensor_mode_sees_only_the_written_tensor(gr):
    G = gr("FIX3_RED")
    # 2 reduces to 0 in Z/2, so 2 ⊗ 2θ·r2 is 2 ⊗ 0 whatever r2 is
    a = G.morphism("x", "y", [("f", "2", "1")])
    b = G.morphism("x", "y", [("f", "2", "0")])
    assert not gr_equal(G, a, b, "strict")
    assert gr_equal(G, a, b, "tensor")


def test_malformed_terms_raise(gr):
    G = gr("FIX2")
    with pytest.raises(MalformedError):
        G.morphism("y", "x", [("f", "1", "e")])
    with pytest.raises(MalformedError):
        gr_compose(G, gr_identity(G, "x"), gr_identity(G, "y"))


@pytest.mark.parametrize("name", ["FIX1", "FIX2", "FIX3", "FIX5", "FIX5B", "FIX3_RED"])
def test_category_laws(gr, name):
    rep = check_category_laws(gr(name))
    assert rep.ok and rep.checked > 0


# -- laws on arbitrary (non-pure) morphisms ----------------------------------------------


def _sums(G, x, y):
    homs = G.base.hom(x, y)
    term = st.tuples(st.sampled_from(homs), st.integers(0, G.R1(x).order - 1), st.integers(0, G.R2(y).order - 1), st.integers(1, 3))
    return st.lists(term, max_size=4).map(lambda ts: G.normalize(x, y, ts))


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_composition_is_bilinear_and_associative(gr, data):
    G = gr("FIX5B")
    a = data.draw(_sums(G, "x", "y"))
    a2 = data.draw(_sums(G, "x", "y"))
    b = data.draw(_sums(G, "y", "z"))
    c = data.draw(_sums(G, "z", "z"))
    both = G.normalize("x", "y", a.terms + a2.terms)
    lhs = gr_compose(G, b, both)
    rhs = G.normalize("x", "z", gr_compose(G, b, a).terms + gr_compose(G, b, a2).terms)
    assert lhs == rhs
    assert gr_compose(G, c, gr_compose(G, b, a)) == gr_compose(G, gr_compose(G, c, b), a)
    assert gr_compose(G, gr_identity(G, "y"), a) == a


# -- sum-id ----------------------------------------------------------------------------


def _sum_id_oracle(B, include_zero):
    """Brute force over families with r1 != 0, in element names."""
    base = B.base
    failures = []
    for x, y in itertools.product(base.objects, repeat=2):
        homs = base.hom(x, y)
        if not homs:
            continue
        R1x, R2y = B.R1.objects[x], B.R2.objects[y]
        pairs = [(a, b) for a in R1x.elements if a != R1x.elements[R1x.zero] for b in R2y.elements]
        for pick in itertools.product([None] + pairs, repeat=len(homs)):
            if not include_zero and all(p is None for p in pick):
                continue
            total = R2y.zero
            for f, p in zip(homs, pick):
                if p is None:
                    continue
                th = B.R2.morphisms[f].as_dict()[B.theta[x].as_dict()[p[0]]]
                total = R2y.add[total, R2y.mul[R2y.index(th), R2y.index(p[1])]]
            if total != R2y.one:
                failures.append((x, y, pick))
    return failures


@pytest.mark.parametrize("name", VALID)
@pytest.mark.parametrize("include", [False, True])
def test_sum_id_matches_oracle(gr, corpus, name, include):
    rep = check_sum_id(gr(name), "include_zero_morphism" if include else "exclude_zero_morphism")
    assert rep.ok == (not _sum_id_oracle(corpus[name], include))


def test_sum_id_examples(gr):
    for name in ("FIX1", "FIX2"):
        for mode in ("exclude_zero_morphism", "include_zero_morphism"):
            assert check_sum_id(gr(name), mode).ok
    rep = check_sum_id(gr("FIX3"))
    assert not rep.ok
    assert rep.per_pair[("x", "y")]["witness"]["components"] == [{"f": "f", "r1": "1", "r2": "0"}]
    for entry in rep.per_pair.values():
        assert replay_sum_id_witness(gr("FIX3"), entry["witness"])


def test_include_zero_fails_by_empty_sum_when_r2_nontrivial(gr, corpus):
    for name in VALID:
        G = gr(name)
        nontrivial = any(not G.R2(x).is_trivial for x in G.objects)
        rep = check_sum_id(G, "include_zero_morphism")
        assert rep.ok == (not nontrivial)
        if nontrivial:
            assert not rep.ok and rep.witness["components"] == []
            assert rep.witness_sum == "0"


def test_sum_id_budget(gr):
    from lingroth import BudgetExceeded

    with pytest.raises(BudgetExceeded):
        check_sum_id(gr("FIX3"), budget=2)


# -- well-definedness -------------------------------------------------------------------


@pytest.mark.parametrize("name", VALID)
def test_well_definedness_on_valid(gr, name):
    rep = check_well_definedness(gr(name))
    assert rep.ok and rep.checked > 0


def test_well_definedness_fails_on_theta_corruption(gr):
    G = gr("FIX3_THETA")
    rep = check_well_definedness(G)
    assert len(rep.violations) >= 1
    assert all(replay_well_definedness(G, v.witness) for v in rep.violations)


def test_summary_is_serializable(gr):
    import json

    s = summary(gr("FIX2"))
    assert json.loads(json.dumps(s)) == s
    assert s["homs"]["x->y"]["pure_families"] == 3
