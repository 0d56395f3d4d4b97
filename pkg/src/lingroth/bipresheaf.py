"""Bipresheaves of rings, abelian groups and modules, and morphisms between them.

A bipresheaf pairs a contravariant functor with a covariant one on the same
base, joined by per-object maps ``c_x`` subject to the triangle condition
``c_y = second(f) ∘ c_x ∘ first(f)`` for every ``f: x -> y``.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping
from typing import Union

import numpy as np

from . import algebra, functors
from ._report import MalformedError, ValidationReport, Violation, guard
from .algebra import FinAbGroup, GroupHom, RingHom
from .fincat import FinCategory
from .functors import AbValuedFunctor, ModuleStructure, RingValuedFunctor


def _check_pair(first, second, maps, hom_type, name):
    if first.variance != "contravariant" or second.variance != "covariant":
        raise MalformedError(f"bipresheaf {name!r}: first component must be contravariant, second covariant")
    if first.base != second.base:
        raise MalformedError(f"bipresheaf {name!r}: components live on different categories")
    for x in first.base.objects:
        if x not in maps:
            raise MalformedError(f"bipresheaf {name!r}: no connecting map at {x!r}")
        h = maps[x]
        if not isinstance(h, hom_type):
            raise MalformedError(f"bipresheaf {name!r}: connecting map at {x!r} is not a {hom_type.__name__}")
        if h.source != first.objects[x] or h.target != second.objects[x]:
            raise MalformedError(f"bipresheaf {name!r}: connecting map at {x!r} has wrong endpoints")


class RingBipresheaf:
    def __init__(self, R1: RingValuedFunctor, R2: RingValuedFunctor, theta: Mapping[str, RingHom], name: str = ""):
        _check_pair(R1, R2, theta, RingHom, name)
        self.R1, self.R2, self.theta, self.name = R1, R2, dict(theta), name

    @property
    def base(self) -> FinCategory:
        return self.R1.base

    def parts(self):
        return self.R1, self.R2, self.theta

    def __eq__(self, other):
        if not isinstance(other, RingBipresheaf):
            return NotImplemented
        return (self.R1, self.R2, self.theta) == (other.R1, other.R2, other.theta)

    __hash__ = None

    def __repr__(self):
        return f"RingBipresheaf({self.name!r}, base={self.base.name!r})"


class AbBipresheaf:
    def __init__(self, A1: AbValuedFunctor, A2: AbValuedFunctor, eta: Mapping[str, GroupHom], name: str = ""):
        _check_pair(A1, A2, eta, GroupHom, name)
        self.A1, self.A2, self.eta, self.name = A1, A2, dict(eta), name

    @property
    def base(self) -> FinCategory:
        return self.A1.base

    def parts(self):
        return self.A1, self.A2, self.eta

    def key(self):
        """Hashable identity of the tables; used to index enumerated universes."""
        return (
            tuple((x, self.A1.objects[x].key(), self.A2.objects[x].key(), self.eta[x].map.tobytes()) for x in self.base.objects),
            tuple((f, self.A1.morphisms[f].map.tobytes(), self.A2.morphisms[f].map.tobytes()) for f in self.base.morphisms),
        )

    def __eq__(self, other):
        if not isinstance(other, AbBipresheaf):
            return NotImplemented
        return (self.A1, self.A2, self.eta) == (other.A1, other.A2, other.eta)

    __hash__ = None

    def __repr__(self):
        return f"AbBipresheaf({self.name!r}, base={self.base.name!r})"


class ModuleBipresheaf:
    """``(M1, M2, eta)`` over a ring bipresheaf; ``M1`` is acted on by R1, ``M2`` by R2."""

    def __init__(self, over: RingBipresheaf, M1: ModuleStructure, M2: ModuleStructure, eta: Mapping[str, GroupHom], name: str = ""):
        if M1.scalars != over.R1 or M2.scalars != over.R2:
            raise MalformedError(f"module {name!r}: scalars do not match the ring bipresheaf")
        _check_pair(M1.carrier, M2.carrier, eta, GroupHom, name)
        self.over, self.M1, self.M2, self.eta, self.name = over, M1, M2, dict(eta), name

    @property
    def base(self) -> FinCategory:
        return self.over.base

    def parts(self):
        return self.M1.carrier, self.M2.carrier, self.eta

    def underlying(self) -> AbBipresheaf:
        return AbBipresheaf(self.M1.carrier, self.M2.carrier, self.eta, name=self.name)

    def __eq__(self, other):
        if not isinstance(other, ModuleBipresheaf):
            return NotImplemented
        return (self.over, self.M1, self.M2, self.eta) == (other.over, other.M1, other.M2, other.eta)

    __hash__ = None

    def __repr__(self):
        return f"ModuleBipresheaf({self.name!r}, over={self.over.name!r})"


AnyBipresheaf = Union[RingBipresheaf, AbBipresheaf, ModuleBipresheaf]


# -- coherence ---------------------------------------------------------------------


def _coherence(B, f, a):
    """(c_y(a), second(f)(c_x(first(f)(a)))) for ``a`` in first(y)."""
    first, second, c = B.parts()
    x, y = B.base.morphisms[f]
    return c[y](a), second.morphisms[f](c[x](first.morphisms[f](a)))


def _compatibility(M, x, r, m):
    """(eta_x(m ·1 r), theta_x(r) ·2 eta_x(m))."""
    eta, theta = M.eta[x], M.over.theta[x]
    return eta(M.M1.act(x, m, r)), M.M2.act(x, eta(m), theta(r))


def validate_bipresheaf(B: AnyBipresheaf) -> ValidationReport:
    """Connecting maps are homs, the triangle holds for every base morphism,
    and in the module case ``eta`` intertwines the two actions through theta.
    """
    first, second, c = B.parts()
    report = ValidationReport(f"bipresheaf {B.name}")
    for x in B.base.objects:
        h = c[x]
        sub = algebra.validate_ring_hom(h) if isinstance(h, RingHom) else algebra.validate_group_hom(h)
        report.checked += sub.checked
        for v in sub.violations:
            report.violations.append(Violation("connecting." + v.law, {"x": x, **v.witness}, v.lhs, v.rhs))

    for f, (x, y) in B.base.morphisms.items():
        lhs = c[y].map
        rhs = second.morphisms[f].map[c[x].map[first.morphisms[f].map]]
        report.checked += len(lhs)
        bad = np.flatnonzero(lhs != rhs)
        if len(bad):
            a = int(bad[0])
            tgt = second.objects[y].elements
            report.add("coherence", tgt[lhs[a]], tgt[rhs[a]], f=f, a=first.objects[y].elements[a])

    if isinstance(B, ModuleBipresheaf):
        for x in B.base.objects:
            A1, A2 = B.M1.action[x], B.M2.action[x]
            eta, theta = B.eta[x].map, B.over.theta[x].map
            lhs = eta[A1].T  # [r, m]
            rhs = A2[eta[None, :], theta[:, None]]
            report.checked += lhs.size
            bad = algebra._first(lhs != rhs)
            if bad is not None:
                r, m = bad
                tgt = B.M2.carrier.objects[x].elements
                report.add(
                    "compatibility",
                    tgt[lhs[r, m]],
                    tgt[rhs[r, m]],
                    x=x,
                    r=B.over.R1.objects[x].elements[r],
                    m=B.M1.carrier.objects[x].elements[m],
                )
    return report


def replay_bipresheaf(B: AnyBipresheaf, v: Violation) -> bool:
    w = v.witness
    first, second, c = B.parts()
    if v.law.startswith("connecting."):
        inner = {k: val for k, val in w.items() if k != "x"}
        return algebra.replay_hom(c[w["x"]], Violation(v.law[len("connecting."):], inner))
    if v.law == "coherence":
        y = B.base.cod(w["f"])
        lhs, rhs = _coherence(B, w["f"], first.objects[y].index(w["a"]))
        return lhs != rhs
    if v.law == "compatibility":
        x = w["x"]
        lhs, rhs = _compatibility(B, x, B.over.R1.objects[x].index(w["r"]), B.M1.carrier.objects[x].index(w["m"]))
        return lhs != rhs
    raise KeyError(v.law)


# -- morphisms ---------------------------------------------------------------------


class BipresheafMorphism:
    """Componentwise maps ``phi1_x: A1(x) -> B1(x)`` and ``phi2_x: A2(x) -> B2(x)``.

    Valid when both families are natural, they commute with the connecting
    maps, and (between module bipresheaves) they commute with the actions.
    """

    def __init__(self, source, target, phi1: Mapping[str, GroupHom], phi2: Mapping[str, GroupHom], name: str = ""):
        if type(source) is not type(target) or not isinstance(source, (AbBipresheaf, ModuleBipresheaf)):
            raise MalformedError("morphism endpoints must both be group bipresheaves or both module bipresheaves")
        if source.base != target.base:
            raise MalformedError("morphism endpoints live on different categories")
        if isinstance(source, ModuleBipresheaf) and source.over != target.over:
            raise MalformedError("module morphism endpoints are modules over different ring bipresheaves")
        s1, s2, _ = source.parts()
        t1, t2, _ = target.parts()
        for label, phi, a, b in (("phi1", phi1, s1, t1), ("phi2", phi2, s2, t2)):
            for x in source.base.objects:
                h = phi.get(x)
                if not isinstance(h, GroupHom):
                    raise MalformedError(f"morphism {name!r}: {label} has no group hom at {x!r}")
                if h.source != a.objects[x] or h.target != b.objects[x]:
                    raise MalformedError(f"morphism {name!r}: {label} at {x!r} has wrong endpoints")
        self.source, self.target = source, target
        self.phi1, self.phi2 = dict(phi1), dict(phi2)
        self.name = name

    @property
    def base(self) -> FinCategory:
        return self.source.base

    def key(self):
        return tuple((x, self.phi1[x].map.tobytes(), self.phi2[x].map.tobytes()) for x in self.base.objects)

    def __eq__(self, other):
        if not isinstance(other, BipresheafMorphism):
            return NotImplemented
        return (self.source, self.target, self.phi1, self.phi2) == (other.source, other.target, other.phi1, other.phi2)

    __hash__ = None

    def __repr__(self):
        return f"BipresheafMorphism({self.name!r})"


def _morphism_checks(m: BipresheafMorphism):
    """Yield (law, witness-without-element, lhs array, rhs array, source group, target group)."""
    s1, s2, se = m.source.parts()
    t1, t2, te = m.target.parts()
    for f, (x, y) in m.base.morphisms.items():
        # A1(y) -> B1(x)
        yield "naturality1", {"f": f}, m.phi1[x].map[s1.morphisms[f].map], t1.morphisms[f].map[m.phi1[y].map], s1.objects[y], t1.objects[x]
        # A2(x) -> B2(y)
        yield "naturality2", {"f": f}, m.phi2[y].map[s2.morphisms[f].map], t2.morphisms[f].map[m.phi2[x].map], s2.objects[x], t2.objects[y]
    for x in m.base.objects:
        yield "eta_compat", {"x": x}, m.phi2[x].map[se[x].map], te[x].map[m.phi1[x].map], s1.objects[x], t2.objects[x]


def validate_bipresheaf_morphism(m: BipresheafMorphism) -> ValidationReport:
    report = ValidationReport(f"morphism {m.name}")
    for label, phi in (("phi1", m.phi1), ("phi2", m.phi2)):
        for x, h in phi.items():
            sub = algebra.validate_group_hom(h)
            report.checked += sub.checked
            for v in sub.violations:
                report.violations.append(Violation(f"{label}." + v.law, {"x": x, **v.witness}, v.lhs, v.rhs))
    for law, w, lhs, rhs, src, tgt in _morphism_checks(m):
        report.checked += len(lhs)
        bad = np.flatnonzero(lhs != rhs)
        if len(bad):
            a = int(bad[0])
            report.add(law, tgt.elements[lhs[a]], tgt.elements[rhs[a]], a=src.elements[a], **w)
    if isinstance(m.source, ModuleBipresheaf):
        for law, phi, sm, tm in (("action1", m.phi1, m.source.M1, m.target.M1), ("action2", m.phi2, m.source.M2, m.target.M2)):
            for x in m.base.objects:
                lhs = phi[x].map[sm.action[x]]
                rhs = tm.action[x][phi[x].map, :]
                report.checked += lhs.size
                bad = algebra._first(lhs != rhs)
                if bad is not None:
                    a, r = bad
                    tgt = tm.carrier.objects[x].elements
                    report.add(
                        law, tgt[lhs[a, r]], tgt[rhs[a, r]], x=x, m=sm.carrier.objects[x].elements[a], r=sm.scalars.objects[x].elements[r]
                    )
    return report


def replay_bipresheaf_morphism(m: BipresheafMorphism, v: Violation) -> bool:
    w = v.witness
    head, _, rest = v.law.partition(".")
    if head in ("phi1", "phi2") and rest:
        inner = {k: val for k, val in w.items() if k != "x"}
        return algebra.replay_hom((m.phi1 if head == "phi1" else m.phi2)[w["x"]], Violation(rest, inner))
    if v.law in ("action1", "action2"):
        phi, sm, tm = (m.phi1, m.source.M1, m.target.M1) if v.law == "action1" else (m.phi2, m.source.M2, m.target.M2)
        x = w["x"]
        a, r = sm.carrier.objects[x].index(w["m"]), sm.scalars.objects[x].index(w["r"])
        return phi[x](int(sm.action[x][a, r])) != int(tm.action[x][phi[x](a), r])
    for law, wit, lhs, rhs, src, _ in _morphism_checks(m):
        if law == v.law and all(w.get(k) == val for k, val in wit.items()):
            a = src.index(w["a"])
            return bool(lhs[a] != rhs[a])
    raise KeyError(v.law)


def compose_bipresheaf_morphisms(g: BipresheafMorphism, f: BipresheafMorphism) -> BipresheafMorphism:
    """``g ∘ f``, componentwise."""
    if f.target != g.source:
        raise MalformedError("cannot compose: target of f is not the source of g")
    xs = f.base.objects
    return BipresheafMorphism(
        f.source,
        g.target,
        {x: f.phi1[x].then(g.phi1[x]) for x in xs},
        {x: f.phi2[x].then(g.phi2[x]) for x in xs},
    )


def identity_morphism(B) -> BipresheafMorphism:
    A1, A2, _ = B.parts()
    xs = B.base.objects
    return BipresheafMorphism(
        B, B, {x: algebra.identity_hom(A1.objects[x]) for x in xs}, {x: algebra.identity_hom(A2.objects[x]) for x in xs}
    )


def zero_morphism(A, B) -> BipresheafMorphism:
    a1, a2, _ = A.parts()
    b1, b2, _ = B.parts()
    xs = A.base.objects
    return BipresheafMorphism(
        A,
        B,
        {x: algebra.zero_hom(a1.objects[x], b1.objects[x]) for x in xs},
        {x: algebra.zero_hom(a2.objects[x], b2.objects[x]) for x in xs},
    )


def zero_bipresheaf(base: FinCategory, name: str = "0") -> AbBipresheaf:
    z = algebra.zero_group()
    A1 = functors.constant_functor(base, z, "contravariant")
    A2 = functors.constant_functor(base, z, "covariant")
    return AbBipresheaf(A1, A2, {x: algebra.identity_hom(z) for x in base.objects}, name=name)


def is_zero(B) -> bool:
    A1, A2, _ = B.parts()
    return all(A1.objects[x].order == 1 and A2.objects[x].order == 1 for x in B.base.objects)


# -- enumeration -------------------------------------------------------------------


def _connecting_choices(first, second, objects, hom_lists):
    return [hom_lists(first.objects[x], second.objects[x]) for x in objects]


def enumerate_ab_bipresheaves(base: FinCategory, groups, budget: int) -> list[AbBipresheaf]:
    """Every bipresheaf of groups whose values are drawn from ``groups``.

    Order: first functor, then second functor, then connecting maps, each
    lexicographic in enumeration order.
    """
    homs = functors._hom_cache(budget)
    firsts = functors.enumerate_ab_functors(base, "contravariant", groups, budget)
    seconds = functors.enumerate_ab_functors(base, "covariant", groups, budget)
    out = []
    count = 0
    for A1 in firsts:
        for A2 in seconds:
            choices = _connecting_choices(A1, A2, base.objects, homs)
            count += functors._product_size(len(c) for c in choices)
            guard("bipresheaf candidates", count, budget)
            for eta in itertools.product(*choices):
                B = AbBipresheaf(A1, A2, dict(zip(base.objects, eta)))
                if validate_bipresheaf(B).ok:
                    out.append(B)
    return out


def enumerate_module_bipresheaves(R: RingBipresheaf, groups, budget: int) -> list[ModuleBipresheaf]:
    """Every module bipresheaf over ``R`` with carrier values drawn from ``groups``."""
    homs = functors._hom_cache(budget)
    firsts = functors.enumerate_module_structures(R.R1, groups, budget, side="right")
    seconds = functors.enumerate_module_structures(R.R2, groups, budget, side="left")
    out = []
    count = 0
    for M1 in firsts:
        for M2 in seconds:
            choices = _connecting_choices(M1.carrier, M2.carrier, R.base.objects, homs)
            count += functors._product_size(len(c) for c in choices)
            guard("module bipresheaf candidates", count, budget)
            for eta in itertools.product(*choices):
                M = ModuleBipresheaf(R, M1, M2, dict(zip(R.base.objects, eta)))
                if validate_bipresheaf(M).ok:
                    out.append(M)
    return out


def enumerate_morphisms(A, B, budget: int) -> list[BipresheafMorphism]:
    """All valid morphisms ``A -> B``, lexicographic over (phi1 per object, phi2 per object)."""
    homs = functors._hom_cache(budget)
    a1, a2, _ = A.parts()
    b1, b2, _ = B.parts()
    xs = A.base.objects
    choices = [homs(a1.objects[x], b1.objects[x]) for x in xs] + [homs(a2.objects[x], b2.objects[x]) for x in xs]
    guard("morphism candidates", functors._product_size(len(c) for c in choices), budget)
    out = []
    n = len(xs)
    for pick in itertools.product(*choices):
        m = BipresheafMorphism(A, B, dict(zip(xs, pick[:n])), dict(zip(xs, pick[n:])))
        if validate_bipresheaf_morphism(m).ok:
            out.append(m)
    return out
