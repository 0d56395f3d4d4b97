"""Passing between module bipresheaves over R and group bipresheaves over Gr(R).

``psi`` turns a module bipresheaf into a bipresheaf of groups on Gr(R) by
letting a pair (r1, r2) at f act through the structure maps and the two
actions. ``phi`` goes back by restricting along unit pairs. Neither
direction is assumed to land where it should: both outputs are checked.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from . import algebra
from ._report import DEFAULT_BUDGET, MalformedError, ValidationReport, Violation, guard
from .algebra import FinAbGroup, GroupHom
from .bipresheaf import (
    BipresheafMorphism,
    ModuleBipresheaf,
    replay_bipresheaf,
    validate_bipresheaf,
    validate_bipresheaf_morphism,
)
from .functors import AbValuedFunctor, ModuleStructure, replay_functor, replay_module, validate_functor, validate_module_structure
from .grothendieck import (
    GrCategory,
    GrMorphism,
    check_sum_id,
    count_pure,
    distinct_pure_morphisms,
    gr_compose,
    gr_identity,
)

# A generator is a single pair at one base morphism: (f, r1, r2) with indices.
Generator = tuple[str, int, int]


def generators(G: GrCategory, x: str, y: str) -> list[Generator]:
    """Single-pair morphisms x -> y, excluding the inert pair (0, 0)."""
    out = []
    for f in G.base.hom(x, y):
        for r1 in range(G.R1(x).order):
            for r2 in range(G.R2(y).order):
                if r1 == G.R1(x).zero and r2 == G.R2(y).zero:
                    continue
                out.append((f, r1, r2))
    return out


def all_generators(G: GrCategory) -> list[Generator]:
    return [g for x in G.objects for y in G.objects for g in generators(G, x, y)]


class GrAbBipresheaf:
    """A bipresheaf of groups on Gr(R).

    Values on morphisms are given on generators and extended additively:
    F(Σ n_i·t_i) = Σ n_i·F(t_i), and the zero morphism goes to the zero map.
    ``first`` is contravariant (F1(t): F1(y) -> F1(x) for t: x -> y) and
    ``second`` covariant.
    """

    def __init__(
        self,
        G: GrCategory,
        first_objects: Mapping[str, FinAbGroup],
        second_objects: Mapping[str, FinAbGroup],
        first: Mapping[Generator, GroupHom],
        second: Mapping[Generator, GroupHom],
        eta: Mapping[str, GroupHom],
        name: str = "",
    ):
        self.G, self.name = G, name
        self.F1, self.F2 = dict(first_objects), dict(second_objects)
        self.gen1, self.gen2 = dict(first), dict(second)
        self.eta = dict(eta)
        for x in G.objects:
            if x not in self.F1 or x not in self.F2 or x not in self.eta:
                raise MalformedError(f"gr bipresheaf {name!r}: missing data at object {x!r}")
            if self.eta[x].source != self.F1[x] or self.eta[x].target != self.F2[x]:
                raise MalformedError(f"gr bipresheaf {name!r}: connecting map at {x!r} has wrong endpoints")
        for x in G.objects:
            for y in G.objects:
                for t in generators(G, x, y):
                    h1, h2 = self.gen1.get(t), self.gen2.get(t)
                    if h1 is None or h2 is None:
                        raise MalformedError(f"gr bipresheaf {name!r}: no value on generator {self.generator_name(t)}")
                    if h1.source != self.F1[y] or h1.target != self.F1[x]:
                        raise MalformedError(f"gr bipresheaf {name!r}: first value on {self.generator_name(t)} has wrong endpoints")
                    if h2.source != self.F2[x] or h2.target != self.F2[y]:
                        raise MalformedError(f"gr bipresheaf {name!r}: second value on {self.generator_name(t)} has wrong endpoints")
        extra = (set(self.gen1) | set(self.gen2)) - set(all_generators(G))
        if extra:
            raise MalformedError(f"gr bipresheaf {name!r}: values on unknown generators {sorted(extra)}")

    def generator_name(self, t: Generator) -> str:
        f, r1, r2 = t
        x, y = self.G.base.morphisms[f]
        return f"({self.G.R1(x).elements[r1]}, {self.G.R2(y).elements[r2]})@{f}"

    def _extend(self, gens, phi: GrMorphism, source: FinAbGroup, target: FinAbGroup) -> GroupHom:
        out = algebra.zero_hom(source, target)
        for f, r1, r2, n in phi.terms:
            out = out + gens[(f, r1, r2)].times(n)
        return out

    def first(self, phi: GrMorphism) -> GroupHom:
        return self._extend(self.gen1, phi, self.F1[phi.target], self.F1[phi.source])

    def second(self, phi: GrMorphism) -> GroupHom:
        return self._extend(self.gen2, phi, self.F2[phi.source], self.F2[phi.target])

    def __eq__(self, other):
        if not isinstance(other, GrAbBipresheaf):
            return NotImplemented
        return (self.F1, self.F2, self.gen1, self.gen2, self.eta) == (other.F1, other.F2, other.gen1, other.gen2, other.eta)

    __hash__ = None

    def __repr__(self):
        return f"GrAbBipresheaf({self.name!r}, over={self.G.R.name!r})"


# -- validation on Gr --------------------------------------------------------------


def _hom_diff(report, law, lhs: GroupHom, rhs: GroupHom, **w):
    report.checked += len(lhs.map)
    bad = np.flatnonzero(lhs.map != rhs.map)
    if len(bad):
        a = int(bad[0])
        report.add(law, lhs.target.elements[lhs.map[a]], rhs.target.elements[rhs.map[a]], m=lhs.source.elements[a], **w)
        return False
    return True


def check_gr_functoriality(F: GrAbBipresheaf, budget: int = DEFAULT_BUDGET) -> ValidationReport:
    """Identities go to identities and composites to composites, for all pure pairs.

    Quantifies over every distinct pure morphism phi: x -> y and psi: y -> z;
    composites are typically not pure and are evaluated through the
    additive extension.
    """
    G = F.G
    report = ValidationReport(f"gr functoriality {F.name}")
    obs = G.objects
    need = sum(count_pure(G, x, y) * count_pure(G, y, z) for x, y, z in itertools.product(obs, repeat=3))
    guard("functoriality pairs", need, budget)
    for x in obs:
        one = gr_identity(G, x)
        _hom_diff(report, "first.identity", F.first(one), algebra.identity_hom(F.F1[x]), phi=G.to_dict(one))
        _hom_diff(report, "second.identity", F.second(one), algebra.identity_hom(F.F2[x]), phi=G.to_dict(one))
    pure = {(x, y): distinct_pure_morphisms(G, x, y, budget) for x in obs for y in obs}
    for x, y, z in itertools.product(obs, repeat=3):
        for phi in pure[(x, y)]:
            for psi in pure[(y, z)]:
                comp = gr_compose(G, psi, phi)
                w = {"phi": G.to_dict(phi), "psi": G.to_dict(psi)}
                _hom_diff(report, "first.composition", F.first(comp), F.first(psi).then(F.first(phi)), **w)
                _hom_diff(report, "second.composition", F.second(comp), F.second(phi).then(F.second(psi)), **w)
    return report


def check_gr_coherence(F: GrAbBipresheaf, budget: int = DEFAULT_BUDGET, include_zero: bool = False) -> ValidationReport:
    """eta_y == F2(phi) ∘ eta_x ∘ F1(phi) for every pure phi: x -> y.

    Uses the same domain as the sum-id check: components absent or with
    r1 != 0, the all-absent family only when ``include_zero``.
    """
    G = F.G
    report = ValidationReport(f"gr coherence {F.name}")
    pairs = [(x, y) for x in G.objects for y in G.objects if G.base.hom(x, y)]
    guard("coherence families", sum(count_pure(G, x, y, tensor_nonzero=True) for x, y in pairs), budget)
    for x, y in pairs:
        for phi in distinct_pure_morphisms(G, x, y, budget, tensor_nonzero=True):
            if phi.is_zero() and not include_zero:
                continue
            rhs = F.first(phi).then(F.eta[x]).then(F.second(phi))
            _hom_diff(report, "coherence", F.eta[y], rhs, phi=G.to_dict(phi))
    return report


def validate_gr_bipresheaf(F: GrAbBipresheaf, budget: int = DEFAULT_BUDGET) -> ValidationReport:
    report = ValidationReport(f"gr bipresheaf {F.name}")
    for label, gens in (("first", F.gen1), ("second", F.gen2)):
        for t, h in gens.items():
            sub = algebra.validate_group_hom(h)
            report.checked += sub.checked
            for v in sub.violations:
                report.violations.append(Violation(f"{label}.hom.{v.law}", {"generator": F.generator_name(t), **v.witness}, v.lhs, v.rhs))
    for x, h in F.eta.items():
        sub = algebra.validate_group_hom(h)
        report.extend(sub, prefix="connecting.")
    if not report.ok:
        return report
    report.extend(check_gr_functoriality(F, budget))
    report.extend(check_gr_coherence(F, budget))
    return report


def replay_gr(F: GrAbBipresheaf, v: Violation) -> bool:
    """Re-evaluate a functoriality or coherence violation from its witness."""
    G = F.G
    w = v.witness
    if v.law == "coherence":
        phi = G.from_dict(w["phi"])
        x, y = phi.source, phi.target
        a = F.F1[y].index(w["m"])
        return F.eta[y](a) != F.second(phi)(F.eta[x](F.first(phi)(a)))
    if v.law.endswith(".identity"):
        phi = G.from_dict(w["phi"])
        ev = F.first if v.law.startswith("first") else F.second
        grp = F.F1 if v.law.startswith("first") else F.F2
        a = grp[phi.source].index(w["m"])
        return ev(phi)(a) != a
    if v.law.endswith(".composition"):
        phi, psi = G.from_dict(w["phi"]), G.from_dict(w["psi"])
        comp = gr_compose(G, psi, phi)
        if v.law.startswith("first"):
            a = F.F1[psi.target].index(w["m"])
            return F.first(comp)(a) != F.first(phi)(F.first(psi)(a))
        a = F.F2[phi.source].index(w["m"])
        return F.second(comp)(a) != F.second(psi)(F.second(phi)(a))
    raise KeyError(v.law)


# -- psi -------------------------------------------------------------------------


def psi(M: ModuleBipresheaf, G: GrCategory, name: str = "") -> GrAbBipresheaf:
    """F1(t)(m) = M1(f)(m)·r1 and F2(t)(m) = r2·M2(f)(m) on a pair t = (r1, r2) at f."""
    if M.over != G.R:
        raise MalformedError("psi: module is not over the ring bipresheaf of this Gr")
    M1, M2 = M.M1, M.M2
    gen1, gen2 = {}, {}
    for f, r1, r2 in all_generators(G):
        x, y = G.base.morphisms[f]
        m1f, m2f = M1.carrier.morphisms[f].map, M2.carrier.morphisms[f].map
        gen1[(f, r1, r2)] = GroupHom(M1.carrier.objects[y], M1.carrier.objects[x], M1.action[x][m1f, r1])
        gen2[(f, r1, r2)] = GroupHom(M2.carrier.objects[x], M2.carrier.objects[y], M2.action[y][m2f, r2])
    return GrAbBipresheaf(
        G,
        M1.carrier.objects,
        M2.carrier.objects,
        gen1,
        gen2,
        M.eta,
        name=name or f"psi({M.name})",
    )


# -- phi -------------------------------------------------------------------------


@dataclass
class StructureFailureReport:
    """Returned by :func:`phi` when the restricted data is not a module bipresheaf."""

    subject: str
    report: ValidationReport
    candidate: dict = field(default_factory=dict, repr=False)

    @property
    def violations(self):
        return self.report.violations

    def laws(self):
        return self.report.laws()

    def to_dict(self) -> dict:
        return {"subject": self.subject, "structure_failure": True, **self.report.to_dict()}


def _unit(G: GrCategory, f: str, r1: int, r2: int) -> GrMorphism:
    x, y = G.base.morphisms[f]
    return G.normalize(x, y, [(f, r1, r2)])


def _phi_candidate(F: GrAbBipresheaf) -> dict:
    """Carriers and action tables read off F along unit pairs, before any checking."""
    G = F.G
    R = G.R
    m1, m2 = {}, {}
    for f, (x, y) in G.base.morphisms.items():
        m1[f] = F.first(_unit(G, f, G.R1(x).one, G.R2(y).one))
        m2[f] = F.second(_unit(G, f, G.R1(x).one, G.R2(y).one))
    base = G.base
    C1 = AbValuedFunctor(base, "contravariant", F.F1, m1)
    C2 = AbValuedFunctor(base, "covariant", F.F2, m2)
    a1, a2 = {}, {}
    for x in G.objects:
        i = base.identity(x)
        a1[x] = np.stack([F.first(_unit(G, i, r, G.R2(x).one)).map for r in range(G.R1(x).order)], axis=1)
        a2[x] = np.stack([F.second(_unit(G, i, G.R1(x).one, s)).map for s in range(G.R2(x).order)], axis=1)
    return {
        "M1": ModuleStructure(R.R1, C1, a1, side="right"),
        "M2": ModuleStructure(R.R2, C2, a2, side="left"),
    }


def phi(F: GrAbBipresheaf, name: str = "") -> ModuleBipresheaf | StructureFailureReport:
    """Restrict F along unit pairs.

    M1(f) = F1((1, 1)@f), M2(f) = F2((1, 1)@f), m·r1 = F1((r1, 1)@1x)(m) and
    s·m = F2((1, s)@1y)(m). The carriers must be functors, both actions must
    satisfy every module axiom plus naturality, and eta must intertwine them;
    any failure comes back as a :class:`StructureFailureReport`.
    """
    name = name or f"phi({F.name})"
    cand = _phi_candidate(F)
    M1, M2 = cand["M1"], cand["M2"]
    report = ValidationReport(f"phi {F.name}")
    report.extend(validate_functor(M1.carrier), prefix="M1.functor.")
    report.extend(validate_functor(M2.carrier), prefix="M2.functor.")
    if report.ok:
        report.extend(validate_module_structure(M1), prefix="M1.")
        report.extend(validate_module_structure(M2), prefix="M2.")
    if report.ok:
        M = ModuleBipresheaf(F.G.R, M1, M2, F.eta, name=name)
        report.extend(validate_bipresheaf(M))
        if report.ok:
            return M
    return StructureFailureReport(name, report, cand)


def replay_phi_failure(F: GrAbBipresheaf, v: Violation) -> bool:
    """Rebuild the candidate from F and re-evaluate one reported violation."""
    cand = _phi_candidate(F)
    side, _, law = v.law.partition(".")
    if side not in ("M1", "M2"):
        M = ModuleBipresheaf(F.G.R, cand["M1"], cand["M2"], F.eta)
        return replay_bipresheaf(M, v)
    M = cand[side]
    if law.startswith("functor."):
        return replay_functor(M.carrier, Violation(law[len("functor."):], v.witness))
    return replay_module(M, Violation(law, v.witness))


# -- round trip ------------------------------------------------------------------


def _first_difference(a: ModuleBipresheaf, b: ModuleBipresheaf) -> str | None:
    if a.M1.carrier != b.M1.carrier:
        return "M1 carrier"
    if a.M2.carrier != b.M2.carrier:
        return "M2 carrier"
    for x in a.base.objects:
        if not np.array_equal(a.M1.action[x], b.M1.action[x]):
            return f"M1 action at {x}"
        if not np.array_equal(a.M2.action[x], b.M2.action[x]):
            return f"M2 action at {x}"
        if a.eta[x] != b.eta[x]:
            return f"eta at {x}"
    return None


def compare_gr(F: GrAbBipresheaf, H: GrAbBipresheaf, budget: int = DEFAULT_BUDGET) -> str | None:
    """First disagreement between two gr bipresheaves on objects, eta, generators
    and every distinct pure morphism; None if they agree everywhere."""
    G = F.G
    for x in G.objects:
        if F.F1[x] != H.F1[x] or F.F2[x] != H.F2[x]:
            return f"objects at {x}"
        if F.eta[x] != H.eta[x]:
            return f"eta at {x}"
    for x in G.objects:
        for y in G.objects:
            for p in distinct_pure_morphisms(G, x, y, budget):
                if F.first(p) != H.first(p):
                    return f"first on {G.describe(p)}"
                if F.second(p) != H.second(p):
                    return f"second on {G.describe(p)}"
    return None


@dataclass
class RoundtripReport:
    subject: str
    sum_id: bool
    forward_exact: bool | None = None
    forward_difference: str | None = None
    backward_exact: bool | None = None
    backward_difference: str | None = None
    failure: dict | None = None

    @property
    def vacuous(self) -> bool:
        """Without sum-id the equivalence is not claimed, so agreement proves nothing."""
        return not self.sum_id

    @property
    def ok(self) -> bool:
        return bool(self.forward_exact) and self.backward_exact is not False

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "sum_id": self.sum_id,
            "vacuous": self.vacuous,
            "ok": self.ok,
            "phi_psi_exact": self.forward_exact,
            "phi_psi_difference": self.forward_difference,
            "psi_phi_exact": self.backward_exact,
            "psi_phi_difference": self.backward_difference,
            "failure": self.failure,
        }


def _sum_id(G, budget):
    return check_sum_id(G, budget=budget).ok


def roundtrip_check(M: ModuleBipresheaf, G: GrCategory, budget: int = DEFAULT_BUDGET) -> RoundtripReport:
    """phi(psi(M)) == M exactly, then psi(phi(F)) == F for F = psi(M)."""
    rep = RoundtripReport(M.name, _sum_id(G, budget))
    F = psi(M, G)
    back = phi(F)
    if isinstance(back, StructureFailureReport):
        rep.forward_exact = False
        rep.forward_difference = "phi failed"
        rep.failure = back.to_dict()
        return rep
    rep.forward_difference = _first_difference(back, M)
    rep.forward_exact = rep.forward_difference is None
    rep.backward_difference = compare_gr(F, psi(back, G), budget)
    rep.backward_exact = rep.backward_difference is None
    return rep


def roundtrip_gr(F: GrAbBipresheaf, budget: int = DEFAULT_BUDGET) -> RoundtripReport:
    """psi(phi(F)) against F, for any F; reports agreement or the first discrepancy."""
    rep = RoundtripReport(F.name, _sum_id(F.G, budget))
    back = phi(F)
    if isinstance(back, StructureFailureReport):
        rep.backward_exact = False
        rep.backward_difference = "phi failed"
        rep.failure = back.to_dict()
        return rep
    rep.backward_difference = compare_gr(F, psi(back, F.G), budget)
    rep.backward_exact = rep.backward_difference is None
    rep.forward_exact = True
    return rep


# -- morphisms -------------------------------------------------------------------


class GrAbMorphism:
    """Componentwise maps between two gr bipresheaves over the same Gr."""

    def __init__(self, source: GrAbBipresheaf, target: GrAbBipresheaf, phi1, phi2):
        if source.G is not target.G and source.G.R != target.G.R:
            raise MalformedError("gr morphism endpoints live over different categories")
        self.source, self.target = source, target
        self.phi1, self.phi2 = dict(phi1), dict(phi2)


def validate_gr_morphism(m: GrAbMorphism, budget: int = DEFAULT_BUDGET) -> ValidationReport:
    """Naturality against every generator, and compatibility with eta."""
    S, T, G = m.source, m.target, m.source.G
    report = ValidationReport("gr morphism")
    guard("generators", len(all_generators(G)), budget)
    for t in all_generators(G):
        f = t[0]
        x, y = G.base.morphisms[f]
        name = S.generator_name(t)
        _hom_diff(report, "naturality1", S.gen1[t].then(m.phi1[x]), m.phi1[y].then(T.gen1[t]), generator=name)
        _hom_diff(report, "naturality2", S.gen2[t].then(m.phi2[y]), m.phi2[x].then(T.gen2[t]), generator=name)
    for x in G.objects:
        _hom_diff(report, "eta_compat", S.eta[x].then(m.phi2[x]), m.phi1[x].then(T.eta[x]), x=x)
    return report


def psi_morphism(m: BipresheafMorphism, G: GrCategory) -> GrAbMorphism:
    """Componentwise: the same maps, now between psi(source) and psi(target)."""
    return GrAbMorphism(psi(m.source, G), psi(m.target, G), m.phi1, m.phi2)


def phi_morphism(m: GrAbMorphism) -> BipresheafMorphism | StructureFailureReport:
    s, t = phi(m.source), phi(m.target)
    for side in (s, t):
        if isinstance(side, StructureFailureReport):
            return side
    return BipresheafMorphism(s, t, m.phi1, m.phi2)


def check_morphism_transport(m: BipresheafMorphism, G: GrCategory, budget: int = DEFAULT_BUDGET) -> ValidationReport:
    """Validity of psi(m) and of phi(psi(m)), with the latter compared to m."""
    report = ValidationReport(f"morphism transport {m.name}")
    pm = psi_morphism(m, G)
    report.extend(validate_gr_morphism(pm, budget), prefix="psi.")
    back = phi_morphism(pm)
    if isinstance(back, StructureFailureReport):
        report.extend(back.report, prefix="phi.")
        return report
    report.extend(validate_bipresheaf_morphism(back), prefix="phi.")
    report.checked += 1
    if back.phi1 != m.phi1 or back.phi2 != m.phi2:
        report.add("phi.roundtrip")
    return report
