import itertools

import pytest

from lingroth import MalformedError
from lingroth.fincat import (
    FinCategory,
    arrow_category,
    factorizations,
    make_category,
    opposite,
    replay,
    terminal_category,
    validate_category,
)


def _poset(n):
    # the chain 0 < 1 < ... < n-1 as a category; a morphism i->j is "i<j"
    objects = [str(i) for i in range(n)]
    arrows = {f"{i}<{j}": (str(i), str(j)) for i in range(n) for j in range(i + 1, n)}
    comps = {(f"{j}<{k}", f"{i}<{j}"): f"{i}<{k}" for i in range(n) for j in range(i + 1, n) for k in range(j + 1, n)}
    return make_category(objects, arrows, comps, name=f"chain{n}")


def test_terminal_and_arrow_are_categories():
    for cat in (terminal_category(), arrow_category()):
        rep = validate_category(cat)
        assert rep.ok and rep.checked > 0


def test_chains_are_categories():
    for n in range(1, 6):
        assert validate_category(_poset(n)).ok


def test_hom_and_identity():
    A = arrow_category()
    assert A.hom("x", "y") == ("f",)
    assert A.hom("y", "x") == ()
    assert A.identity("x") == "1x"
    assert A.compose("f", "1x") == "f"
    assert A.compose("1y", "f") == "f"


def test_bad_unit_is_reported_and_replays(corpus):
    cat = corpus["CAT_BAD_UNIT"]
    rep = validate_category(cat)
    assert rep.laws() == {"right_unit"}
    assert all(replay(cat, v) for v in rep.violations)
    assert rep.violations[0].witness == {"f": "f"}


def test_nonassociative_table_detected():
    # two endomorphisms a, b of one object with a·a = b, everything else a
    # composes to a; (a∘a)∘... differs from a∘(a∘...)
    morph = {"1": ("o", "o"), "a": ("o", "o"), "b": ("o", "o")}
    table = {}
    for g, f in itertools.product(morph, repeat=2):
        table[(g, f)] = f if g == "1" else g if f == "1" else "a"
    table[("a", "a")] = "b"
    cat = FinCategory(["o"], morph, {"o": "1"}, table, name="bad")
    rep = validate_category(cat)
    assert "associativity" in rep.laws()
    assert all(replay(cat, v) for v in rep.violations)


def test_missing_composite_is_malformed():
    with pytest.raises(MalformedError):
        FinCategory(["x", "y"], {"1x": ("x", "x"), "1y": ("y", "y"), "f": ("x", "y")}, {"x": "1x", "y": "1y"}, {})


def test_dangling_endpoint_is_malformed():
    with pytest.raises(MalformedError, match="dangling"):
        make_category(["x"], {"f": ("x", "z")})


def test_opposite_is_involutive():
    C = _poset(4)
    assert opposite(opposite(C)) == C
    assert validate_category(opposite(C)).ok
    assert opposite(C).hom("3", "0") == ("0<3",)


def test_factorizations_in_square(corpus):
    S = corpus["square"]
    assert sorted(factorizations(S, "d")) == sorted([("f1", "g1"), ("f2", "g2"), ("d", "1z"), ("1x", "d")])


def test_factorizations_count_matches_oracle(corpus):
    for name in ("square", "twopath", "arrow", "terminal"):
        C = corpus[name]
        for h in C.morphisms:
            brute = [(f, g) for f in C.morphisms for g in C.morphisms if C.cod(f) == C.dom(g) and C.compose(g, f) == h]
            assert sorted(factorizations(C, h)) == sorted(brute)
