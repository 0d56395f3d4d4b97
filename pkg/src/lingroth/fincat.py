"""Small finite categories given by explicit tables."""

from __future__ import annotations

from collections.abc import Iterable, Mapping

from ._report import MalformedError, ValidationReport, Violation


class FinCategory:
    """A finite category with a dense composition table.

    ``composition[(g, f)]`` is ``g ∘ f`` and must be present for every pair
    with ``cod f == dom g``. Identifiers are opaque strings.
    """

    def __init__(
        self,
        objects: Iterable[str],
        morphisms: Mapping[str, tuple[str, str]],
        identities: Mapping[str, str],
        composition: Mapping[tuple[str, str], str],
        name: str = "",
    ):
        self.objects = tuple(objects)
        self.morphisms = {m: (d, c) for m, (d, c) in morphisms.items()}
        self.identities = dict(identities)
        self.composition = dict(composition)
        self.name = name
        self._check_structure()
        self._homs: dict[tuple[str, str], tuple[str, ...]] = {}
        for m, (d, c) in self.morphisms.items():
            self._homs.setdefault((d, c), ())
            self._homs[(d, c)] += (m,)

    def _check_structure(self) -> None:
        if len(set(self.objects)) != len(self.objects):
            raise MalformedError(f"category {self.name!r}: duplicate object ids")
        obs = set(self.objects)
        for m, (d, c) in self.morphisms.items():
            if d not in obs or c not in obs:
                raise MalformedError(f"category {self.name!r}: morphism {m!r} has dangling endpoint")
        for x in self.objects:
            if x not in self.identities:
                raise MalformedError(f"category {self.name!r}: object {x!r} has no identity")
        for x, i in self.identities.items():
            if x not in obs:
                raise MalformedError(f"category {self.name!r}: identity for unknown object {x!r}")
            if i not in self.morphisms:
                raise MalformedError(f"category {self.name!r}: identity {i!r} is not a morphism")
        for (g, f), h in self.composition.items():
            for m in (g, f, h):
                if m not in self.morphisms:
                    raise MalformedError(f"category {self.name!r}: composition mentions unknown morphism {m!r}")
            if self.morphisms[f][1] != self.morphisms[g][0]:
                raise MalformedError(f"category {self.name!r}: composition entry ({g}, {f}) is not composable")
        for g, (dg, _) in self.morphisms.items():
            for f, (_, cf) in self.morphisms.items():
                if cf == dg and (g, f) not in self.composition:
                    raise MalformedError(f"category {self.name!r}: composition missing for ({g}, {f})")

    def dom(self, f: str) -> str:
        return self.morphisms[f][0]

    def cod(self, f: str) -> str:
        return self.morphisms[f][1]

    def identity(self, x: str) -> str:
        return self.identities[x]

    def is_identity(self, f: str) -> bool:
        return self.identities.get(self.dom(f)) == f

    def compose(self, g: str, f: str) -> str:
        """Return ``g ∘ f``."""
        try:
            return self.composition[(g, f)]
        except KeyError:
            raise MalformedError(f"({g}, {f}) is not a composable pair") from None

    def hom(self, x: str, y: str) -> tuple[str, ...]:
        return self._homs.get((x, y), ())

    def composable_pairs(self) -> Iterable[tuple[str, str]]:
        """All (g, f) with cod f == dom g, in declaration order of f then g."""
        for f in self.morphisms:
            for g in self.morphisms:
                if self.cod(f) == self.dom(g):
                    yield g, f

    def _key(self):
        return (
            self.objects,
            tuple(sorted(self.morphisms.items())),
            tuple(sorted(self.identities.items())),
            tuple(sorted(self.composition.items())),
        )

    def __eq__(self, other):
        if not isinstance(other, FinCategory):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"FinCategory({self.name!r}, objects={list(self.objects)}, morphisms={len(self.morphisms)})"


def make_category(
    objects: Iterable[str],
    arrows: Mapping[str, tuple[str, str]],
    composites: Mapping[tuple[str, str], str] | None = None,
    name: str = "",
) -> FinCategory:
    """Build a category from non-identity arrows plus their composites.

    Identities are named ``"1" + x`` and all compositions with identities
    are filled in.
    """
    objects = tuple(objects)
    morphisms = {f"1{x}": (x, x) for x in objects}
    morphisms.update(arrows)
    identities = {x: f"1{x}" for x in objects}
    table = dict(composites or {})
    for m, (d, c) in morphisms.items():
        if d in identities and c in identities:  # dangling ends are reported below
            table.setdefault((m, identities[d]), m)
            table.setdefault((identities[c], m), m)
    return FinCategory(objects, morphisms, identities, table, name=name)


def terminal_category(name: str = "terminal") -> FinCategory:
    return make_category(["*"], {}, name=name)


def arrow_category(name: str = "arrow") -> FinCategory:
    return make_category(["x", "y"], {"f": ("x", "y")}, name=name)


# -- law evaluators; each returns (lhs, rhs) and is used for both checking and replay


def _identity_type(cat, x):
    i = cat.identities[x]
    return cat.morphisms[i], (x, x)


def _left_unit(cat, f):
    return cat.composition.get((cat.identity(cat.cod(f)), f)), f


def _right_unit(cat, f):
    return cat.composition.get((f, cat.identity(cat.dom(f)))), f


def _composite_type(cat, g, f):
    h = cat.composition[(g, f)]
    return cat.morphisms[h], (cat.dom(f), cat.cod(g))


def _associativity(cat, h, g, f):
    return cat.composition[(h, cat.composition[(g, f)])], cat.composition[(cat.composition[(h, g)], f)]


LAWS = {
    "identity_type": _identity_type,
    "left_unit": _left_unit,
    "right_unit": _right_unit,
    "composite_type": _composite_type,
    "associativity": _associativity,
}


def validate_category(cat: FinCategory) -> ValidationReport:
    """Check identity typing, unit laws, composite typing and associativity.

    Associativity is only evaluated on triples whose intermediate composites
    are well typed; mistyped composites are reported once, under the unit law
    when the pair involves an identity and ``composite_type`` otherwise.
    """
    report = ValidationReport(f"category {cat.name}")

    def check(law, **w):
        report.checked += 1
        lhs, rhs = LAWS[law](cat, **w)
        if lhs != rhs:
            report.violations.append(Violation(law, w, lhs, rhs))
            return False
        return True

    for x in cat.objects:
        check("identity_type", x=x)
    for f in cat.morphisms:
        check("left_unit", f=f)
        check("right_unit", f=f)

    well_typed = {}
    for g, f in cat.composable_pairs():
        h = cat.composition[(g, f)]
        ok = cat.morphisms[h] == (cat.dom(f), cat.cod(g))
        well_typed[(g, f)] = ok
        unit_pair = cat.is_identity(g) or cat.is_identity(f)
        if not unit_pair:
            check("composite_type", g=g, f=f)

    for g, f in cat.composable_pairs():
        if not well_typed[(g, f)]:
            continue
        for h in cat.morphisms:
            if cat.dom(h) != cat.cod(g) or not well_typed[(h, g)]:
                continue
            check("associativity", h=h, g=g, f=f)
    return report


def replay(cat: FinCategory, violation: Violation) -> bool:
    """Re-evaluate a reported violation; True if it still fails."""
    lhs, rhs = LAWS[violation.law](cat, **violation.witness)
    return lhs != rhs


def opposite(cat: FinCategory) -> FinCategory:
    morphisms = {m: (c, d) for m, (d, c) in cat.morphisms.items()}
    composition = {(f, g): h for (g, f), h in cat.composition.items()}
    name = cat.name[:-3] if cat.name.endswith("^op") else cat.name + "^op"
    return FinCategory(cat.objects, morphisms, cat.identities, composition, name=name)


def factorizations(cat: FinCategory, h: str) -> list[tuple[str, str]]:
    """All (f, g) with ``g ∘ f == h``, ordered by declaration of f then g."""
    if h not in cat.morphisms:
        raise MalformedError(f"unknown morphism {h!r}")
    x, z = cat.morphisms[h]
    out = []
    for f in cat.morphisms:
        if cat.dom(f) != x:
            continue
        for g in cat.hom(cat.cod(f), z):
            if cat.composition[(g, f)] == h:
                out.append((f, g))
    return out
