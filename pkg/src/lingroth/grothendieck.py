"""The linear Grothendieck construction of a ring bipresheaf.

A morphism ``x -> y`` is a family, indexed by base morphisms ``f: x -> y``, of
formal sums of raw pairs ``(r1, r2)`` with ``r1`` in R1(x) and ``r2`` in R2(y).
Pairs are stored raw rather than as classes in a tensor product: the second
slot is read bare by the module functors, so quotienting it away would lose
information. The derived slot ``r1θ(f) = R2(f)(θ_x(r1))`` is available on
demand and drives the ``tensor`` equality mode.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ._report import DEFAULT_BUDGET, MalformedError, ValidationReport, guard
from .bipresheaf import RingBipresheaf
from .fincat import factorizations

# A term is (f, r1, r2, n): base morphism id, element indices, positive multiplicity.
Term = tuple[str, int, int, int]


@dataclass(frozen=True)
class TensorPair:
    """One raw pair ``(r1, r2)`` sitting over the base morphism ``f``."""

    f: str
    r1: int
    r2: int


@dataclass(frozen=True)
class GrMorphism:
    """A morphism of Gr in normal form.

    ``terms`` is sorted by (declaration order of f, r1, r2); identical pairs
    are merged and the pair (0, 0), which every construction treats as inert,
    is dropped.
    """

    source: str
    target: str
    terms: tuple[Term, ...] = ()

    def components(self) -> dict[str, list[tuple[int, int, int]]]:
        out: dict[str, list[tuple[int, int, int]]] = defaultdict(list)
        for f, r1, r2, n in self.terms:
            out[f].append((r1, r2, n))
        return dict(out)

    def is_zero(self) -> bool:
        return not self.terms


class GrCategory:
    """Gr(R) for a ring bipresheaf R; objects are the base objects.

    The bipresheaf is not validated here so that corrupted fixtures can still
    be probed by :func:`check_well_definedness`.
    """

    def __init__(self, R: RingBipresheaf, name: str = ""):
        self.R = R
        self.name = name or f"Gr({R.name})"
        self._order = {f: i for i, f in enumerate(R.base.morphisms)}
        # derived-slot tables: theta_f[r1] = R2(f)(theta_x(r1))
        self._theta_f = {
            f: R.R2.morphisms[f].map[R.theta[x].map] for f, (x, _) in R.base.morphisms.items()
        }

    @property
    def base(self):
        return self.R.base

    @property
    def objects(self):
        return self.R.base.objects

    def R1(self, x):
        return self.R.R1.objects[x]

    def R2(self, x):
        return self.R.R2.objects[x]

    def derived(self, f: str, r1: int) -> int:
        """``r1θ(f)`` in R2(cod f)."""
        return int(self._theta_f[f][r1])

    # -- construction -----------------------------------------------------------

    def normalize(self, x: str, y: str, terms: Iterable[Sequence]) -> GrMorphism:
        """Merge identical pairs, drop (0, 0), and sort. Terms are (f, r1, r2[, n])."""
        if x not in self.R.R1.objects or y not in self.R.R1.objects:
            raise MalformedError(f"unknown object in {x!r} -> {y!r}")
        acc: dict[tuple[str, int, int], int] = defaultdict(int)
        for t in terms:
            f, r1, r2 = t[0], int(t[1]), int(t[2])
            n = int(t[3]) if len(t) > 3 else 1
            if self.base.morphisms.get(f) != (x, y):
                raise MalformedError(f"term at {f!r} does not live in Hom({x}, {y})")
            if not (0 <= r1 < self.R1(x).order and 0 <= r2 < self.R2(y).order):
                raise MalformedError(f"term ({r1}, {r2}) at {f!r} is out of range")
            if n < 1:
                raise MalformedError("multiplicities must be positive")
            if r1 == self.R1(x).zero and r2 == self.R2(y).zero:
                continue
            acc[(f, r1, r2)] += n
        terms = sorted(((f, r1, r2, n) for (f, r1, r2), n in acc.items()), key=lambda t: (self._order[t[0]], t[1], t[2]))
        return GrMorphism(x, y, tuple(terms))

    def morphism(self, x: str, y: str, terms: Iterable[Sequence]) -> GrMorphism:
        """Like :meth:`normalize` but with element names instead of indices."""
        raw = []
        for t in terms:
            f = t[0]
            if f not in self.base.morphisms:
                raise MalformedError(f"unknown base morphism {f!r}")
            raw.append((f, self.R1(x).index(str(t[1])), self.R2(y).index(str(t[2])), *t[3:]))
        return self.normalize(x, y, raw)

    def term_names(self, phi: GrMorphism) -> list[dict]:
        out = []
        for f, r1, r2, n in phi.terms:
            out.append({"f": f, "r1": self.R1(phi.source).elements[r1], "r2": self.R2(phi.target).elements[r2], "n": n})
        return out

    def to_dict(self, phi: GrMorphism) -> dict:
        return {"source": phi.source, "target": phi.target, "terms": self.term_names(phi)}

    def from_dict(self, d: dict) -> GrMorphism:
        return self.morphism(d["source"], d["target"], [(t["f"], t["r1"], t["r2"], t.get("n", 1)) for t in d["terms"]])

    def describe(self, phi: GrMorphism) -> str:
        if phi.is_zero():
            return f"0: {phi.source} -> {phi.target}"
        parts = []
        for t in self.term_names(phi):
            mult = f"{t['n']}*" if t["n"] != 1 else ""
            parts.append(f"{mult}({t['r1']}, {t['r2']})@{t['f']}")
        return " + ".join(parts)


def gr_identity(G: GrCategory, x: str) -> GrMorphism:
    if x not in G.objects:
        raise MalformedError(f"unknown object {x!r}")
    return G.normalize(x, x, [(G.base.identity(x), G.R1(x).one, G.R2(x).one)])


def _composite_pair(G: GrCategory, f, g, r1, r2, s1, s2):
    """(R1(f)(s1)·r1, R2(g)(r2)·s2) for pairs (r1, r2) at f and (s1, s2) at g."""
    x, y = G.base.morphisms[f]
    z = G.base.cod(g)
    a = G.R1(x).mul[G.R.R1.morphisms[f](s1), r1]
    b = G.R2(z).mul[G.R.R2.morphisms[g](r2), s2]
    return int(a), int(b)


def gr_compose(G: GrCategory, psi: GrMorphism, phi: GrMorphism) -> GrMorphism:
    """``psi ∘ phi``: for each h, sum over factorizations h = g∘f of the term products."""
    if phi.target != psi.source:
        raise MalformedError(f"cannot compose {phi.source}->{phi.target} with {psi.source}->{psi.target}")
    x, z = phi.source, psi.target
    left, right = phi.components(), psi.components()
    terms = []
    for h in G.base.morphisms:
        if G.base.morphisms[h] != (x, z):
            continue
        for f, g in factorizations(G.base, h):
            for r1, r2, n in left.get(f, ()):
                for s1, s2, m in right.get(g, ()):
                    a, b = _composite_pair(G, f, g, r1, r2, s1, s2)
                    terms.append((h, a, b, n * m))
    return G.normalize(x, z, terms)


def gr_equal(G: GrCategory, a: GrMorphism, b: GrMorphism, mode: str = "strict") -> bool:
    """``strict`` compares normal forms; ``tensor`` first rewrites each pair to
    ``(r1, r1θ(f)·r2)``, keeping only what the written tensor ``r1 ⊗ r1θ r2`` shows."""
    if (a.source, a.target) != (b.source, b.target):
        raise MalformedError("gr_equal: endpoint mismatch")
    if mode == "strict":
        return a == b
    if mode == "tensor":
        return tensor_form(G, a) == tensor_form(G, b)
    raise ValueError(f"unknown equality mode {mode!r}")


def tensor_form(G: GrCategory, phi: GrMorphism) -> GrMorphism:
    R2y = G.R2(phi.target)
    return G.normalize(phi.source, phi.target, [(f, r1, R2y.mul[G.derived(f, r1), r2], n) for f, r1, r2, n in phi.terms])


# -- enumeration of pure families ------------------------------------------------


def _pure_choices(G: GrCategory, x: str, y: str, tensor_nonzero: bool):
    r1s = [r for r in range(G.R1(x).order) if not (tensor_nonzero and r == G.R1(x).zero)]
    pairs = [(r1, r2) for r1 in r1s for r2 in range(G.R2(y).order)]
    return G.base.hom(x, y), [None] + pairs


def count_pure(G: GrCategory, x: str, y: str, tensor_nonzero: bool = False) -> int:
    homs, choices = _pure_choices(G, x, y, tensor_nonzero)
    return len(choices) ** len(homs)


def iter_pure_families(G: GrCategory, x: str, y: str, tensor_nonzero: bool = False):
    """Yield raw families: tuples with, per f in Hom(x, y), None or a pair (r1, r2).

    Order is lexicographic, None first, f in declaration order. With
    ``tensor_nonzero`` only pairs with r1 != 0 are used.
    """
    homs, choices = _pure_choices(G, x, y, tensor_nonzero)
    for pick in itertools.product(choices, repeat=len(homs)):
        yield tuple(zip(homs, pick))


def family_morphism(G: GrCategory, x: str, y: str, family) -> GrMorphism:
    return G.normalize(x, y, [(f, p[0], p[1]) for f, p in family if p is not None])


def enumerate_pure_morphisms(
    G: GrCategory, x: str, y: str, budget: int = DEFAULT_BUDGET, tensor_nonzero: bool = False
) -> list[GrMorphism]:
    """Every pure family ``x -> y`` as a morphism, one per raw family.

    The list has exactly prod_f (1 + |R1(x)|·|R2(y)|) entries; a family whose
    chosen pairs are all (0, 0) normalizes to the zero morphism, so entries
    may repeat.
    """
    guard(f"pure families {x}->{y}", count_pure(G, x, y, tensor_nonzero), budget)
    return [family_morphism(G, x, y, fam) for fam in iter_pure_families(G, x, y, tensor_nonzero)]


def distinct_pure_morphisms(G: GrCategory, x: str, y: str, budget: int = DEFAULT_BUDGET, tensor_nonzero: bool = False):
    seen = {}
    for phi in enumerate_pure_morphisms(G, x, y, budget, tensor_nonzero):
        seen.setdefault(phi, None)
    return list(seen)


# -- sum-id ----------------------------------------------------------------------

SUM_ID_MODES = ("exclude_zero_morphism", "include_zero_morphism")


def family_sum(G: GrCategory, y: str, family) -> int:
    """Σ r1θ(f)·r2 over the nonzero components, in R2(y)."""
    R = G.R2(y)
    total = R.zero
    for f, p in family:
        if p is not None:
            total = int(R.add[total, R.mul[G.derived(f, p[0]), p[1]]])
    return total


def family_to_dict(G: GrCategory, x: str, y: str, family) -> dict:
    return {
        "source": x,
        "target": y,
        "components": [
            {"f": f, "r1": G.R1(x).elements[p[0]], "r2": G.R2(y).elements[p[1]]} for f, p in family if p is not None
        ],
    }


def family_from_dict(G: GrCategory, d: dict):
    x, y = d["source"], d["target"]
    chosen = {c["f"]: (G.R1(x).index(c["r1"]), G.R2(y).index(c["r2"])) for c in d["components"]}
    return x, y, tuple((f, chosen.get(f)) for f in G.base.hom(x, y))


@dataclass
class SumIdReport:
    bipresheaf: str
    mode: str
    ok: bool = True
    checked: int = 0
    witness: dict | None = None
    witness_sum: str | None = None
    per_pair: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "bipresheaf": self.bipresheaf,
            "mode": self.mode,
            "ok": self.ok,
            "checked": self.checked,
            "witness": self.witness,
            "witness_sum": self.witness_sum,
            "per_pair": {f"{x}->{y}": v for (x, y), v in self.per_pair.items()},
        }


def check_sum_id(G: GrCategory, mode: str = "exclude_zero_morphism", budget: int = DEFAULT_BUDGET) -> SumIdReport:
    """Test Σ r1θ(f)·r2 == 1 over every pure family, for every (x, y) with Hom(x, y) nonempty.

    The domain is families whose components are absent or carry r1 != 0
    (pairs with r1 = 0 are the zero tensor). The all-absent family has the
    empty sum 0 and is included only in ``include_zero_morphism`` mode, where
    it is tried first for each pair.
    """
    if mode not in SUM_ID_MODES:
        raise ValueError(f"unknown sum-id mode {mode!r}")
    include = mode == "include_zero_morphism"
    pairs = [(x, y) for x in G.objects for y in G.objects if G.base.hom(x, y)]
    total = sum(count_pure(G, x, y, tensor_nonzero=True) - (0 if include else 1) for x, y in pairs)
    guard("sum-id families", total, budget)
    report = SumIdReport(G.R.name, mode)
    for x, y in pairs:
        one = G.R2(y).one
        checked, first = 0, None
        for fam in iter_pure_families(G, x, y, tensor_nonzero=True):
            if not include and all(p is None for _, p in fam):
                continue
            checked += 1
            s = family_sum(G, y, fam)
            if s != one and first is None:
                first = (fam, s)
        report.checked += checked
        entry = {"checked": checked, "ok": first is None}
        if first is not None:
            fam, s = first
            entry["witness"] = family_to_dict(G, x, y, fam)
            entry["sum"] = G.R2(y).elements[s]
            if report.ok:
                report.ok = False
                report.witness = entry["witness"]
                report.witness_sum = entry["sum"]
        report.per_pair[(x, y)] = entry
    return report


def replay_sum_id_witness(G: GrCategory, witness: dict) -> bool:
    """True if the stored family still sums to something other than 1."""
    _, y, fam = family_from_dict(G, witness)
    return family_sum(G, y, fam) != G.R2(y).one


# -- well-definedness ------------------------------------------------------------


def check_well_definedness(G: GrCategory, budget: int = DEFAULT_BUDGET) -> ValidationReport:
    """Evaluate both ends of the equality chain behind the composition rule.

    For f: x -> y, g: y -> z and pairs (r1, r2) at f, (s1, s2) at g:
    ``R2(g)(r1θ(f)·r2) · (s1θ(g)·s2) == (R1(f)(s1)·r1)θ(gf) · (R2(g)(r2)·s2)``.
    Only the step using coherence of θ can fail.
    """
    report = ValidationReport(f"well-definedness {G.R.name}")
    R = G.R
    sizes = 0
    for g, f in G.base.composable_pairs():
        x, y = G.base.morphisms[f]
        z = G.base.cod(g)
        sizes += G.R1(x).order * G.R2(y).order * G.R1(y).order * G.R2(z).order
    guard("well-definedness tuples", sizes, budget)

    for g, f in G.base.composable_pairs():
        x, y = G.base.morphisms[f]
        z = G.base.cod(g)
        gf = G.base.compose(g, f)
        A, B, C = G.R1(x), G.R2(y), G.R2(z)
        R2g, R1f = R.R2.morphisms[g].map, R.R1.morphisms[f].map
        tf, tg, tgf = G._theta_f[f], G._theta_f[g], G._theta_f[gf]
        # axes: r1, r2, s1, s2
        r1 = np.arange(A.order)[:, None, None, None]
        r2 = np.arange(B.order)[None, :, None, None]
        s1 = np.arange(G.R1(y).order)[None, None, :, None]
        s2 = np.arange(C.order)[None, None, None, :]
        lhs = C.mul[R2g[B.mul[tf[r1], r2]], C.mul[tg[s1], s2]]
        rhs = C.mul[tgf[A.mul[R1f[s1], r1]], C.mul[R2g[r2], s2]]
        report.checked += lhs.size
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            i, j, k, l = (int(v) for v in bad[0])
            report.add(
                "chain",
                C.elements[lhs[i, j, k, l]],
                C.elements[rhs[i, j, k, l]],
                f=f,
                g=g,
                r1=A.elements[i],
                r2=B.elements[j],
                s1=G.R1(y).elements[k],
                s2=C.elements[l],
            )
    return report


def replay_well_definedness(G: GrCategory, witness: dict) -> bool:
    f, g = witness["f"], witness["g"]
    x, y = G.base.morphisms[f]
    z = G.base.cod(g)
    R = G.R
    r1, r2 = G.R1(x).index(witness["r1"]), G.R2(y).index(witness["r2"])
    s1, s2 = G.R1(y).index(witness["s1"]), G.R2(z).index(witness["s2"])
    C = G.R2(z)
    lhs = C.mul[R.R2.morphisms[g](int(G.R2(y).mul[G.derived(f, r1), r2])), C.mul[G.derived(g, s1), s2]]
    a, b = _composite_pair(G, f, g, r1, r2, s1, s2)
    rhs = C.mul[G.derived(G.base.compose(g, f), a), b]
    return int(lhs) != int(rhs)


# -- category laws ---------------------------------------------------------------


def check_category_laws(G: GrCategory, budget: int = DEFAULT_BUDGET) -> ValidationReport:
    """Unit laws and associativity over every distinct pure morphism."""
    report = ValidationReport(f"category laws {G.name}")
    obs = G.objects
    need = 0
    counts = {(x, y): count_pure(G, x, y) for x in obs for y in obs}
    for x, y in counts:
        need += counts[(x, y)]
    for x, y, z, w in itertools.product(obs, repeat=4):
        need += counts[(x, y)] * counts[(y, z)] * counts[(z, w)]
    guard("category-law instances", need, budget)

    pure = {(x, y): distinct_pure_morphisms(G, x, y, budget) for x in obs for y in obs}
    ids = {x: gr_identity(G, x) for x in obs}
    for (x, y), homs in pure.items():
        for phi in homs:
            report.checked += 2
            if gr_compose(G, ids[y], phi) != phi:
                report.add("left_unit", G.describe(gr_compose(G, ids[y], phi)), G.describe(phi), phi=G.to_dict(phi))
            if gr_compose(G, phi, ids[x]) != phi:
                report.add("right_unit", G.describe(gr_compose(G, phi, ids[x])), G.describe(phi), phi=G.to_dict(phi))
    for x, y, z, w in itertools.product(obs, repeat=4):
        for a in pure[(x, y)]:
            for b in pure[(y, z)]:
                ba = gr_compose(G, b, a)
                for c in pure[(z, w)]:
                    report.checked += 1
                    lhs = gr_compose(G, c, ba)
                    rhs = gr_compose(G, gr_compose(G, c, b), a)
                    if lhs != rhs:
                        report.add(
                            "associativity", G.describe(lhs), G.describe(rhs), a=G.to_dict(a), b=G.to_dict(b), c=G.to_dict(c)
                        )
    return report


def summary(G: GrCategory, budget: int = DEFAULT_BUDGET, samples: int = 3) -> dict:
    """Objects, hom-set sizes, pure-family counts and a few composites, for display."""
    obs = G.objects
    out = {"name": G.name, "objects": list(obs), "homs": {}, "identities": {}, "compositions": []}
    for x in obs:
        out["identities"][x] = G.term_names(gr_identity(G, x))
        for y in obs:
            hom = G.base.hom(x, y)
            if hom:
                out["homs"][f"{x}->{y}"] = {"base": list(hom), "pure_families": count_pure(G, x, y)}
    for x, y, z in itertools.product(obs, repeat=3):
        if not (G.base.hom(x, y) and G.base.hom(y, z)):
            continue
        a = [p for p in distinct_pure_morphisms(G, x, y, budget) if not p.is_zero()]
        b = [p for p in distinct_pure_morphisms(G, y, z, budget) if not p.is_zero()]
        for phi, psi in itertools.islice(itertools.product(a, b), samples):
            out["compositions"].append(
                {"psi": G.describe(psi), "phi": G.describe(phi), "composite": G.describe(gr_compose(G, psi, phi))}
            )
    return out
