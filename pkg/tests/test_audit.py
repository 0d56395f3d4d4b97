import json

import pytest

from lingroth import MalformedError
from lingroth.algebra import cyclic_group
from lingroth.audit import (
    AXIOMS,
    Universe,
    classify_morphism,
    compute_cokernel,
    compute_kernel,
    find_nonabelian_witness,
    replay_finding,
)
from lingroth.bipresheaf import validate_bipresheaf, validate_bipresheaf_morphism


def _fresh(u, workers=1):
    # a new Universe object, so nothing is shared with earlier runs
    return find_nonabelian_witness(Universe(u.base, u.groups, u.budget, name=u.name, objects=u.objects), workers=workers)


@pytest.fixture(scope="module")
def arrow_report(corpus):
    return _fresh(corpus["U_ARROW"])


def test_kernel_of_reduction(corpus):
    m = corpus["Q42"]
    K, inc = compute_kernel(m)
    assert validate_bipresheaf(K).ok and validate_bipresheaf_morphism(inc).ok
    for x in ("x", "y"):
        assert K.A1.objects[x].elements == ("0", "2")
        assert K.A2.objects[x].order == 1


def test_cokernel_of_reduction_is_zero(corpus):
    Q, proj = compute_cokernel(corpus["Q42"])
    assert all(Q.A1.objects[x].order == 1 and Q.A2.objects[x].order == 1 for x in ("x", "y"))
    assert validate_bipresheaf_morphism(proj).ok


def test_cokernel_of_inclusion(corpus):
    # S_Y -> P_C2 is the identity at y and 0 -> C2 at x; the cokernel keeps C2 at x only
    from lingroth.bipresheaf import BipresheafMorphism
    from lingroth.algebra import GroupHom

    S, P = corpus["S_Y"], corpus["P_C2"]
    zero = S.A1.objects["x"]
    m = BipresheafMorphism(
        S,
        P,
        {x: GroupHom(zero, zero, [0]) for x in ("x", "y")},
        {"x": GroupHom(S.A2.objects["x"], P.A2.objects["x"], [0]), "y": GroupHom(S.A2.objects["y"], P.A2.objects["y"], [0, 1])},
    )
    assert validate_bipresheaf_morphism(m).ok
    Q, proj = compute_cokernel(m)
    assert (Q.A2.objects["x"].order, Q.A2.objects["y"].order) == (2, 1)
    assert validate_bipresheaf(Q).ok


def test_full_arrow_universe(arrow_report):
    r = arrow_report
    assert r.exhaustive and r.truncation is None
    assert (r.objects, r.morphisms) == (34, 2678)
    assert r.findings == []
    assert r.checked["kernel_exists"] == r.checked["coimage_image_iso"] == 2678
    # mono = injective and epi = surjective in the complete universe
    imp = r.implications
    assert imp["mono"] == imp["injective"] == imp["injective_and_mono"]
    assert imp["epi"] == imp["surjective"] == imp["surjective_and_epi"]
    assert imp["mono_not_injective"] == imp["epi_not_surjective"] == 0


def test_report_is_serializable(arrow_report):
    d = arrow_report.to_dict()
    assert json.loads(json.dumps(d)) == d
    assert set(d["checked"]) == set(AXIOMS)
    assert "truncation" in d["limitation"]


def test_truncated_universe_findings_replay(corpus):
    u = corpus["U_TRUNC"]
    r = _fresh(u)
    assert r.findings
    assert {f.axiom for f in r.findings} <= set(AXIOMS)
    assert "epi_is_conormal" in {f.axiom for f in r.findings}
    assert all(replay_finding(u, f.to_dict()) for f in r.findings)


def test_truncated_universe_is_deterministic(corpus):
    u = corpus["U_TRUNC"]
    a, b, c = _fresh(u).to_dict(), _fresh(u).to_dict(), _fresh(u, workers=2).to_dict()
    assert a == b == c


def test_tampered_finding_does_not_replay(corpus):
    u = corpus["U_TRUNC"]
    f = _fresh(u).findings[0].to_dict()
    f["witness"]["index"] += 1
    assert not replay_finding(u, f)


def test_classification_in_truncated_universe(corpus):
    u = corpus["U_TRUNC"]
    r = _fresh(u)
    f = next(f for f in r.findings if f.axiom == "epi_is_conormal")
    assert f.detail == {"surjective": False}


def test_budget_overflow_clears_exhaustive(corpus):
    u = corpus["U_ARROW"]
    r = find_nonabelian_witness(Universe(u.base, u.groups, 10, name="tiny"))
    assert not r.exhaustive and r.truncation


def test_universe_rejects_bad_budget(corpus):
    with pytest.raises(MalformedError):
        Universe(corpus["arrow"], [cyclic_group(2)], 0)


def test_classify_identity(corpus):
    from lingroth.bipresheaf import identity_morphism

    u = corpus["U_TRUNC"]
    cls = classify_morphism(identity_morphism(corpus["P_C2"]), u)
    assert cls.iso and cls.mono and cls.epi and cls.injective and cls.surjective
