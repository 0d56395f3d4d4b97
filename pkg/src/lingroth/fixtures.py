"""The shipped fixture corpus, written as data.

``corpus_data()`` is the source of truth; ``data/corpus.json`` is its
canonical serialization and is regenerated with ``python -m lingroth.fixtures``.
``EXPECTED`` labels every entry with the set of laws that
:func:`lingroth.cli.validate_object` must report for it (empty means valid).
"""

from __future__ import annotations

import sys
from importlib import resources
from pathlib import Path

from .specfile import SpecDocument, build_document, parse_spec, serialize


def _ident(elements):
    return {e: e for e in elements}


def _const(elements, value):
    return {e: value for e in elements}


Z2 = ["0", "1"]
Z4 = ["0", "1", "2", "3"]
V = ["(0,0)", "(0,1)", "(1,0)", "(1,1)"]
SWAP = {"(0,0)": "(0,0)", "(0,1)": "(1,0)", "(1,0)": "(0,1)", "(1,1)": "(1,1)"}
REDUCE = {"0": "0", "1": "1", "2": "0", "3": "1"}


def _mult_table(n):
    return {str(m): {str(r): str(m * r % n) for r in range(n)} for m in range(n)}


def _first_projection_action():
    # (a, b) acts on Z/2 through a
    return {m: {r: str(int(m) * int(r[1])) for r in V} for m in Z2}


def _category(objects, arrows, composites=(), identities=None):
    identities = identities or {x: f"1{x}" for x in objects}
    morphisms = {identities[x]: [x, x] for x in objects}
    morphisms.update({f: list(e) for f, e in arrows.items()})
    return {"objects": list(objects), "morphisms": morphisms, "identities": identities, "composition": [list(c) for c in composites]}


def _functor(kind, base, variance, objects, morphisms=None):
    return {"kind": kind, "base": base, "variance": variance, "objects": objects, "morphisms": morphisms or {}}


def corpus_data() -> dict:
    cats = {
        "terminal": _category(["*"], {}),
        "arrow": _category(["x", "y"], {"f": ("x", "y")}),
        # commuting square: both paths x -> z equal d
        "square": _category(
            ["x", "y1", "y2", "z"],
            {"f1": ("x", "y1"), "f2": ("x", "y2"), "g1": ("y1", "z"), "g2": ("y2", "z"), "d": ("x", "z")},
            [("g1", "f1", "d"), ("g2", "f2", "d")],
        ),
        # two parallel pairs; d = g1f1 = g2f2 and e = g1f2 = g2f1
        "twopath": _category(
            ["x", "y", "z"],
            {"f1": ("x", "y"), "f2": ("x", "y"), "g1": ("y", "z"), "g2": ("y", "z"), "d": ("x", "z"), "e": ("x", "z")},
            [("g1", "f1", "d"), ("g2", "f2", "d"), ("g1", "f2", "e"), ("g2", "f1", "e")],
        ),
        "CAT_BAD_UNIT": _category(["x", "y"], {"f": ("x", "y")}, [("f", "1x", "1x")]),
    }
    rings = {
        "Z2": {"modular": 2},
        "Z4": {"modular": 4},
        "T": {"trivial": True},
        "V": {"product": ["Z2", "Z2"]},
    }
    groups = {"0": {"cyclic": 1}, "C2": {"cyclic": 2}, "C4": {"cyclic": 4}}

    term, arr = {"*": None}, {"x": None, "y": None}

    def on(objs, value):
        return {x: value for x in objs}

    fun = {
        # ring functors
        "T_Z4_op": _functor("ring", "terminal", "contravariant", on(term, "Z4")),
        "T_T_co": _functor("ring", "terminal", "covariant", on(term, "T")),
        "T_T_op": _functor("ring", "terminal", "contravariant", on(term, "T")),
        "A_Z2_op": _functor("ring", "arrow", "contravariant", on(arr, "Z2"), {"f": _ident(Z2)}),
        "A_Z2_co": _functor("ring", "arrow", "covariant", on(arr, "Z2"), {"f": _ident(Z2)}),
        "A_T_co": _functor("ring", "arrow", "covariant", on(arr, "T"), {"f": {"e": "e"}}),
        "A_Z4_op": _functor("ring", "arrow", "contravariant", on(arr, "Z4"), {"f": _ident(Z4)}),
        "A_V_op": _functor("ring", "arrow", "contravariant", on(arr, "V"), {"f": _ident(V)}),
        "A_V_co": _functor("ring", "arrow", "covariant", on(arr, "V"), {"f": _ident(V)}),
        "A_V_swap_op": _functor("ring", "arrow", "contravariant", on(arr, "V"), {"f": SWAP}),
        "FUNCTOR_BAD_ONE": _functor("ring", "arrow", "covariant", on(arr, "Z2"), {"f": _const(Z2, "0")}),
        "S_Z2_op": _functor(
            "ring", "square", "contravariant", on(["x", "y1", "y2", "z"], "Z2"), {f: _ident(Z2) for f in ("f1", "f2", "g1", "g2", "d")}
        ),
        "S_T_co": _functor("ring", "square", "covariant", on(["x", "y1", "y2", "z"], "T"), {f: {"e": "e"} for f in ("f1", "f2", "g1", "g2", "d")}),
        "P_Z2_op": _functor(
            "ring", "twopath", "contravariant", on(["x", "y", "z"], "Z2"), {f: _ident(Z2) for f in ("f1", "f2", "g1", "g2", "d", "e")}
        ),
        "P_T_co": _functor("ring", "twopath", "covariant", on(["x", "y", "z"], "T"), {f: {"e": "e"} for f in ("f1", "f2", "g1", "g2", "d", "e")}),
        # group functors
        "T_C4_op": _functor("group", "terminal", "contravariant", on(term, "C4")),
        "T_C2_op": _functor("group", "terminal", "contravariant", on(term, "C2")),
        "T_0_op": _functor("group", "terminal", "contravariant", on(term, "0")),
        "T_0_co": _functor("group", "terminal", "covariant", on(term, "0")),
        "A_C2_op": _functor("group", "arrow", "contravariant", on(arr, "C2"), {"f": _ident(Z2)}),
        "A_C2_co": _functor("group", "arrow", "covariant", on(arr, "C2"), {"f": _ident(Z2)}),
        "A_C2_op_zero": _functor("group", "arrow", "contravariant", on(arr, "C2"), {"f": _const(Z2, "0")}),
        "A_C2_co_zero": _functor("group", "arrow", "covariant", on(arr, "C2"), {"f": _const(Z2, "0")}),
        "A_C4_op": _functor("group", "arrow", "contravariant", on(arr, "C4"), {"f": _ident(Z4)}),
        "A_0_op": _functor("group", "arrow", "contravariant", on(arr, "0"), {"f": {"0": "0"}}),
        "A_0_co": _functor("group", "arrow", "covariant", on(arr, "0"), {"f": {"0": "0"}}),
        "A_0C2_co": _functor("group", "arrow", "covariant", {"x": "0", "y": "C2"}, {"f": {"0": "0"}}),
    }

    to_t = {"Z2": _const(Z2, "e"), "Z4": _const(Z4, "e"), "V": _const(V, "e")}
    bip = {
        "FIX1": {"kind": "ring", "first": "T_Z4_op", "second": "T_T_co", "connecting": {"*": to_t["Z4"]}},
        "FIX2": {"kind": "ring", "first": "A_Z2_op", "second": "A_T_co", "connecting": on(arr, to_t["Z2"])},
        "FIX3": {"kind": "ring", "first": "A_Z2_op", "second": "A_Z2_co", "connecting": on(arr, _ident(Z2))},
        # R1 = Z/4, R2 = Z/2, theta = reduction: 2 has zero image
        "FIX3_RED": {"kind": "ring", "first": "A_Z4_op", "second": "A_Z2_co", "connecting": on(arr, REDUCE)},
        # theta_y corrupted to the swap automorphism: every component valid, coherence fails at f
        "FIX3_THETA": {"kind": "ring", "first": "A_V_op", "second": "A_V_co", "connecting": {"x": _ident(V), "y": SWAP}},
        "FIX5": {"kind": "ring", "first": "S_Z2_op", "second": "S_T_co", "connecting": on(["x", "y1", "y2", "z"], to_t["Z2"])},
        "FIX5B": {"kind": "ring", "first": "P_Z2_op", "second": "P_T_co", "connecting": on(["x", "y", "z"], to_t["Z2"])},
        "FIXV": {"kind": "ring", "first": "A_V_swap_op", "second": "A_T_co", "connecting": on(arr, to_t["V"])},
        # R2(f) replaced by the zero map; theta_y(1) = 1 but the triangle gives 0
        "BIP_BAD_R2": {"kind": "ring", "first": "A_Z2_op", "second": "FUNCTOR_BAD_ONE", "connecting": on(arr, _ident(Z2))},
        "TRIV_T": {"kind": "ring", "first": "T_T_op", "second": "T_T_co", "connecting": {"*": {"e": "e"}}},
        # group bipresheaves
        "AB_C2": {"kind": "group", "first": "A_C2_op", "second": "A_C2_co", "connecting": on(arr, _ident(Z2))},
        "AB_0": {"kind": "group", "first": "A_0_op", "second": "A_0_co", "connecting": on(arr, {"0": "0"})},
        "AB_C4": {"kind": "group", "first": "A_C4_op", "second": "A_0_co", "connecting": on(arr, _const(Z4, "0"))},
        "AB_C2_0": {"kind": "group", "first": "A_C2_op", "second": "A_0_co", "connecting": on(arr, _const(Z2, "0"))},
        # the triangle holds although the naive square A2(f)∘eta_x = eta_y∘A1(f) fails
        "TRAP_COHERENT": {
            "kind": "group",
            "first": "A_C2_op_zero",
            "second": "A_C2_co",
            "connecting": {"x": _ident(Z2), "y": _const(Z2, "0")},
        },
        # the naive square holds although the triangle fails
        "TRAP_INCOHERENT": {"kind": "group", "first": "A_C2_op_zero", "second": "A_C2_co_zero", "connecting": on(arr, _ident(Z2))},
        # C2 in the second slot at y only, and everywhere; the inclusion between them
        # looks epi when the cokernel (C2 at x only) is left out of the universe
        "S_Y": {"kind": "group", "first": "A_0_op", "second": "A_0C2_co", "connecting": on(arr, {"0": "0"})},
        "P_C2": {"kind": "group", "first": "A_0_op", "second": "A_C2_co", "connecting": on(arr, {"0": "0"})},
        # gr bipresheaves
        "GR_TRIVIAL": {
            "kind": "gr",
            "over": "FIX1",
            "first": {"objects": {"*": "0"}, "maps": []},
            "second": {
                "objects": {"*": "C2"},
                "maps": [{"f": "1*", "r1": r, "r2": "e", "map": _ident(Z2)} for r in ("1", "3")],
            },
            "connecting": {"*": {"0": "0"}},
        },
        "GR_BAD_IDENTITY": {
            "kind": "gr",
            "over": "FIX2",
            "first": {"objects": on(arr, "C2"), "maps": []},
            "second": {"objects": on(arr, "0"), "maps": []},
            "connecting": on(arr, _const(Z2, "0")),
        },
    }

    mods = {
        "M1_FIX4": {"kind": "presheaf", "scalars": "A_Z2_op", "carrier": "A_C2_op", "side": "right", "action": on(arr, _mult_table(2))},
        "M2_FIX4": {"kind": "presheaf", "scalars": "A_T_co", "carrier": "A_0_co", "side": "left", "action": on(arr, {"0": {"e": "0"}})},
        "FIX4": {"kind": "bipresheaf", "over": "FIX2", "first": "M1_FIX4", "second": "M2_FIX4", "connecting": on(arr, _const(Z2, "0"))},
        "M1_MOD1": {"kind": "presheaf", "scalars": "T_Z4_op", "carrier": "T_C4_op", "side": "right", "action": {"*": _mult_table(4)}},
        "M2_ZERO_T": {"kind": "presheaf", "scalars": "T_T_co", "carrier": "T_0_co", "side": "left", "action": {"*": {"0": {"e": "0"}}}},
        "MOD1": {"kind": "bipresheaf", "over": "FIX1", "first": "M1_MOD1", "second": "M2_ZERO_T", "connecting": {"*": _const(Z4, "0")}},
        "M1_ZERO1": {"kind": "presheaf", "scalars": "T_Z4_op", "carrier": "T_0_op", "side": "right", "action": {"*": {"0": _const(Z4, "0")}}},
        "ZERO1": {"kind": "bipresheaf", "over": "FIX1", "first": "M1_ZERO1", "second": "M2_ZERO_T", "connecting": {"*": {"0": "0"}}},
        "M2_MOD3": {"kind": "presheaf", "scalars": "A_Z2_co", "carrier": "A_C2_co", "side": "left", "action": on(arr, _mult_table(2))},
        "MOD3": {"kind": "bipresheaf", "over": "FIX3", "first": "M1_FIX4", "second": "M2_MOD3", "connecting": on(arr, _ident(Z2))},
        "M1_ZERO3": {"kind": "presheaf", "scalars": "A_Z2_op", "carrier": "A_0_op", "side": "right", "action": on(arr, {"0": _const(Z2, "0")})},
        "M2_ZERO3": {"kind": "presheaf", "scalars": "A_Z2_co", "carrier": "A_0_co", "side": "left", "action": on(arr, {"0": _const(Z2, "0")})},
        "ZERO3": {"kind": "bipresheaf", "over": "FIX3", "first": "M1_ZERO3", "second": "M2_ZERO3", "connecting": on(arr, {"0": "0"})},
        # a nonzero group over the trivial ring: e·m = m forces 0·m = m
        "MOD_BAD": {"kind": "presheaf", "scalars": "T_T_op", "carrier": "T_C2_op", "side": "right", "action": {"*": {"0": {"e": "0"}, "1": {"e": "1"}}}},
        # (a, b) acts through a at both objects, but R1(f) swaps the factors
        "MOD_NAT_BAD": {"kind": "presheaf", "scalars": "A_V_swap_op", "carrier": "A_C2_op", "side": "right", "action": on(arr, _first_projection_action())},
        "M2_ZERO_AT": {"kind": "presheaf", "scalars": "A_T_co", "carrier": "A_0_co", "side": "left", "action": on(arr, {"0": {"e": "0"}})},
        "MODV_NAT_BAD": {
            "kind": "bipresheaf",
            "over": "FIXV",
            "first": "MOD_NAT_BAD",
            "second": "M2_ZERO_AT",
            "connecting": on(arr, _const(Z2, "0")),
        },
    }

    mors = {
        "ID_C2": {"source": "AB_C2", "target": "AB_C2", "first": on(arr, _ident(Z2)), "second": on(arr, _ident(Z2))},
        "ZERO_C2": {"source": "AB_C2", "target": "AB_C2", "first": on(arr, _const(Z2, "0")), "second": on(arr, _const(Z2, "0"))},
        "Q42": {"source": "AB_C4", "target": "AB_C2_0", "first": on(arr, {"0": "0", "1": "1", "2": "0", "3": "1"}), "second": on(arr, {"0": "0"})},
        # phi2 ∘ eta = 0 but eta' ∘ phi1 = id
        "MOR_BAD_ETA": {"source": "AB_C2", "target": "AB_C2", "first": on(arr, _ident(Z2)), "second": on(arr, _const(Z2, "0"))},
        "ID_FIX4": {"source": "FIX4", "target": "FIX4", "first": on(arr, _ident(Z2)), "second": on(arr, {"0": "0"})},
    }

    universes = {
        "U_TERMINAL": {"base": "terminal", "groups": ["0"], "budget": 1_000_000},
        "U_ARROW": {"base": "arrow", "groups": ["0", "C2"], "budget": 1_000_000},
        "U_TRUNC": {"base": "arrow", "groups": ["0", "C2"], "budget": 1_000_000, "objects": ["S_Y", "P_C2"]},
    }
    return {
        "categories": cats,
        "rings": rings,
        "groups": groups,
        "functors": fun,
        "bipresheaves": bip,
        "modules": mods,
        "morphisms": mors,
        "universes": universes,
    }


def fix1_data() -> dict:
    """The smallest document: one category, two rings, their functors and one ring bipresheaf."""
    full = corpus_data()
    return {
        "categories": {"terminal": full["categories"]["terminal"]},
        "rings": {"Z4": full["rings"]["Z4"], "T": full["rings"]["T"]},
        "functors": {k: full["functors"][k] for k in ("T_Z4_op", "T_T_co")},
        "bipresheaves": {"FIX1": full["bipresheaves"]["FIX1"]},
    }


# Laws each entry must violate under validate_object; anything unlisted is valid.
EXPECTED: dict[str, set[str]] = {
    "CAT_BAD_UNIT": {"right_unit"},
    "FUNCTOR_BAD_ONE": {"hom.preserves_one"},
    "FIX3_THETA": {"coherence"},
    "BIP_BAD_R2": {"R2.hom.preserves_one", "coherence"},
    "TRAP_INCOHERENT": {"coherence"},
    "MOD_BAD": {"zero_scalar", "scalar_additivity"},
    "MOD_NAT_BAD": {"naturality"},
    "MODV_NAT_BAD": {"M1.naturality"},
    "MOR_BAD_ETA": {"eta_compat"},
    "GR_BAD_IDENTITY": {"first.identity"},
    # not sum-id: coherence on Gr fails under psi, which validate_object does not run
}


def expected_laws(name: str) -> set[str]:
    return EXPECTED.get(name, set())


def _read(resource: str) -> str:
    return resources.files("lingroth").joinpath("data", resource).read_text(encoding="utf-8")


def load_corpus() -> SpecDocument:
    return parse_spec(_read("corpus.json"))


def build_corpus() -> SpecDocument:
    return build_document(corpus_data())


def regenerate(directory: Path | None = None) -> None:
    directory = directory or Path(__file__).with_name("data")
    directory.mkdir(exist_ok=True)
    (directory / "corpus.json").write_text(serialize(build_document(corpus_data())), encoding="utf-8")
    (directory / "fix1.json").write_text(serialize(build_document(fix1_data())), encoding="utf-8")


if __name__ == "__main__":
    regenerate(Path(sys.argv[1]) if len(sys.argv) > 1 else None)
