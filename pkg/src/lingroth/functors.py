"""Ring- and group-valued (co)presheaves on a finite category, and module structures on them."""

from __future__ import annotations

import itertools
from collections.abc import Mapping

import numpy as np

from . import algebra
from ._report import MalformedError, ValidationReport, Violation, guard
from .algebra import FinAbGroup, FinCommRing, GroupHom, RingHom
from .fincat import FinCategory

VARIANCES = ("contravariant", "covariant")


class _Functor:
    value_type: type = object
    hom_type: type = object

    def __init__(self, base: FinCategory, variance: str, objects: Mapping, morphisms: Mapping, name: str = ""):
        if variance not in VARIANCES:
            raise MalformedError(f"variance must be one of {VARIANCES}, got {variance!r}")
        self.base = base
        self.variance = variance
        self.objects = dict(objects)
        self.morphisms = dict(morphisms)
        self.name = name
        for x in base.objects:
            if x not in self.objects:
                raise MalformedError(f"functor {name!r}: no value at object {x!r}")
            if not isinstance(self.objects[x], self.value_type):
                raise MalformedError(f"functor {name!r}: value at {x!r} is not a {self.value_type.__name__}")
        for f in base.morphisms:
            if f not in self.morphisms:
                raise MalformedError(f"functor {name!r}: no value at morphism {f!r}")
            if not isinstance(self.morphisms[f], self.hom_type):
                raise MalformedError(f"functor {name!r}: value at {f!r} is not a {self.hom_type.__name__}")
        extra = (set(self.objects) - set(base.objects)) | (set(self.morphisms) - set(base.morphisms))
        if extra:
            raise MalformedError(f"functor {name!r}: values for unknown ids {sorted(extra)}")

    @property
    def contravariant(self) -> bool:
        return self.variance == "contravariant"

    def endpoints(self, f: str) -> tuple[str, str]:
        """(source object, target object) of the image of ``f``."""
        return image_endpoints(self.base, self.variance, f)

    def composite_map(self, g: str, f: str) -> np.ndarray:
        """Map expected for the image of ``g ∘ f``, from the images of g and f."""
        Fg, Ff = self.morphisms[g].map, self.morphisms[f].map
        return Ff[Fg] if self.contravariant else Fg[Ff]

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (
            self.base == other.base
            and self.variance == other.variance
            and self.objects == other.objects
            and self.morphisms == other.morphisms
        )

    __hash__ = None

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r}, {self.variance}, base={self.base.name!r})"


def image_endpoints(base: FinCategory, variance: str, f: str) -> tuple[str, str]:
    x, y = base.morphisms[f]
    return (y, x) if variance == "contravariant" else (x, y)


class RingValuedFunctor(_Functor):
    value_type = FinCommRing
    hom_type = RingHom


class AbValuedFunctor(_Functor):
    value_type = FinAbGroup
    hom_type = GroupHom


def constant_functor(base: FinCategory, value, variance: str, name: str = ""):
    """Constant functor with identity structure maps; ring or group valued by ``value``'s type."""
    if isinstance(value, FinCommRing):
        hom = algebra.identity_ring_hom(value)
        cls = RingValuedFunctor
    else:
        hom = algebra.identity_hom(value)
        cls = AbValuedFunctor
    return cls(base, variance, {x: value for x in base.objects}, {f: hom for f in base.morphisms}, name=name)


def _validate_hom(h):
    return algebra.validate_ring_hom(h) if isinstance(h, RingHom) else algebra.validate_group_hom(h)


def validate_functor(F: _Functor) -> ValidationReport:
    """Structure maps are homs with the right endpoints, then identities and composition.

    Functoriality is only tested once every structure map is a valid hom
    pointing in the variance-appropriate direction.
    """
    report = ValidationReport(f"functor {F.name}")
    for f, h in F.morphisms.items():
        sub = _validate_hom(h)
        report.checked += sub.checked
        for v in sub.violations:
            report.violations.append(Violation("hom." + v.law, {"f": f, **v.witness}, v.lhs, v.rhs))
        s, t = F.endpoints(f)
        report.checked += 1
        if h.source != F.objects[s] or h.target != F.objects[t]:
            report.add("direction", f"{h.source.name} -> {h.target.name}", f"{F.objects[s].name} -> {F.objects[t].name}", f=f)
    if not report.ok:
        return report

    for x in F.base.objects:
        i = F.base.identity(x)
        m = F.morphisms[i].map
        report.checked += len(m)
        bad = np.flatnonzero(m != np.arange(len(m)))
        if len(bad):
            a = int(bad[0])
            el = F.objects[x].elements
            report.add("identity", el[m[a]], el[a], x=x, a=el[a])
    for g, f in F.base.composable_pairs():
        h = F.base.compose(g, f)
        if F.base.morphisms[h] != (F.base.dom(f), F.base.cod(g)):
            continue
        expected = F.composite_map(g, f)
        actual = F.morphisms[h].map
        report.checked += len(actual)
        bad = np.flatnonzero(actual != expected)
        if len(bad):
            a = int(bad[0])
            src = F.morphisms[h].source.elements
            tgt = F.morphisms[h].target.elements
            report.add("composition", tgt[actual[a]], tgt[expected[a]], g=g, f=f, a=src[a])
    return report


def replay_functor(F: _Functor, v: Violation) -> bool:
    w = v.witness
    if v.law.startswith("hom."):
        inner = {k: val for k, val in w.items() if k != "f"}
        return algebra.replay_hom(F.morphisms[w["f"]], Violation(v.law[4:], inner))
    if v.law == "direction":
        s, t = F.endpoints(w["f"])
        h = F.morphisms[w["f"]]
        return h.source != F.objects[s] or h.target != F.objects[t]
    if v.law == "identity":
        G = F.objects[w["x"]]
        a = G.index(w["a"])
        return F.morphisms[F.base.identity(w["x"])](a) != a
    if v.law == "composition":
        g, f = w["g"], w["f"]
        h = F.base.compose(g, f)
        a = F.morphisms[h].source.index(w["a"])
        Fg, Ff = F.morphisms[g], F.morphisms[f]
        expected = Ff(Fg(a)) if F.contravariant else Fg(Ff(a))
        return F.morphisms[h](a) != expected
    raise KeyError(v.law)


class ModuleStructure:
    """A presheaf (or copresheaf) of modules: ``carrier`` with an action of ``scalars``.

    ``action[x][m, r]`` is the index of ``m · r`` in ``carrier(x)``. ``side``
    only records notation: ``"right"`` prints m·r, ``"left"`` prints r·m; the
    rings are commutative so the table semantics coincide.
    """

    def __init__(
        self,
        scalars: RingValuedFunctor,
        carrier: AbValuedFunctor,
        action: Mapping[str, object],
        side: str = "right",
        name: str = "",
    ):
        if scalars.base != carrier.base:
            raise MalformedError(f"module {name!r}: scalars and carrier live on different categories")
        if scalars.variance != carrier.variance:
            raise MalformedError(f"module {name!r}: scalars and carrier have different variance")
        if side not in ("left", "right"):
            raise MalformedError(f"module {name!r}: side must be 'left' or 'right'")
        self.scalars = scalars
        self.carrier = carrier
        self.side = side
        self.name = name
        self.action: dict[str, np.ndarray] = {}
        for x in scalars.base.objects:
            if x not in action:
                raise MalformedError(f"module {name!r}: no action table at {x!r}")
            self.action[x] = _action_table(action[x], carrier.objects[x], scalars.objects[x], f"module {name!r} at {x!r}")

    @property
    def base(self) -> FinCategory:
        return self.scalars.base

    @property
    def variance(self) -> str:
        return self.scalars.variance

    def act(self, x: str, m: int, r: int) -> int:
        return int(self.action[x][m, r])

    def action_dict(self, x: str) -> dict[str, dict[str, str]]:
        M, R, A = self.carrier.objects[x], self.scalars.objects[x], self.action[x]
        return {M.elements[m]: {R.elements[r]: M.elements[A[m, r]] for r in range(R.order)} for m in range(M.order)}

    def __eq__(self, other):
        if not isinstance(other, ModuleStructure):
            return NotImplemented
        return (
            self.scalars == other.scalars
            and self.carrier == other.carrier
            and self.action.keys() == other.action.keys()
            and all(np.array_equal(self.action[x], other.action[x]) for x in self.action)
        )

    __hash__ = None

    def __repr__(self):
        return f"ModuleStructure({self.name!r}, {self.variance}, side={self.side})"


def _action_table(raw, M: FinAbGroup, R: FinCommRing, what: str) -> np.ndarray:
    if isinstance(raw, Mapping):
        out = np.zeros((M.order, R.order), dtype=np.int64)
        for m in M.elements:
            row = raw.get(m)
            if row is None:
                raise MalformedError(f"{what}: action table has no row for {m!r}")
            for r in R.elements:
                if r not in row:
                    raise MalformedError(f"{what}: action not total, missing ({m}, {r})")
                out[M.index(m), R.index(r)] = M.index(row[r])
        return out
    out = np.asarray(raw, dtype=np.int64)
    if out.shape != (M.order, R.order):
        raise MalformedError(f"{what}: action table shape {out.shape}, expected {(M.order, R.order)}")
    if out.min() < 0 or out.max() >= M.order:
        raise MalformedError(f"{what}: action table entries out of range")
    return out


def ring_as_module(F: RingValuedFunctor, side: str = "right", name: str = "") -> ModuleStructure:
    """``F`` acting on its own additive groups by multiplication."""
    groups = {x: R.additive_group() for x, R in F.objects.items()}
    carrier = AbValuedFunctor(
        F.base, F.variance, groups, {f: GroupHom(groups[F.endpoints(f)[0]], groups[F.endpoints(f)[1]], h.map) for f, h in F.morphisms.items()}
    )
    return ModuleStructure(F, carrier, {x: R.mul for x, R in F.objects.items()}, side=side, name=name)


def zero_module(F: RingValuedFunctor, side: str = "right", name: str = "") -> ModuleStructure:
    z = algebra.zero_group()
    carrier = AbValuedFunctor(F.base, F.variance, {x: z for x in F.base.objects}, {f: algebra.identity_hom(z) for f in F.base.morphisms})
    return ModuleStructure(F, carrier, {x: np.zeros((1, R.order), dtype=np.int64) for x, R in F.objects.items()}, side=side, name=name)


# -- module laws ----------------------------------------------------------------
# Each evaluator returns (lhs, rhs) as carrier element indices at one witness.


def _unit(M, x, m):
    return M.act(x, m, M.scalars.objects[x].one), m


def _zero_scalar(M, x, m):
    return M.act(x, m, M.scalars.objects[x].zero), M.carrier.objects[x].zero


def _scalar_additivity(M, x, m, r, r2):
    R, G = M.scalars.objects[x], M.carrier.objects[x]
    return M.act(x, m, R.add[r, r2]), int(G.add[M.act(x, m, r), M.act(x, m, r2)])


def _module_additivity(M, x, m, m2, r):
    G = M.carrier.objects[x]
    return M.act(x, int(G.add[m, m2]), r), int(G.add[M.act(x, m, r), M.act(x, m2, r)])


def _associativity(M, x, m, r, r2):
    R = M.scalars.objects[x]
    return M.act(x, m, R.mul[r, r2]), M.act(x, M.act(x, m, r), r2)


def _naturality(M, f, m, r):
    s, t = M.scalars.endpoints(f)
    Mf, Rf = M.carrier.morphisms[f], M.scalars.morphisms[f]
    return Mf(M.act(s, m, r)), M.act(t, Mf(m), Rf(r))


_OBJECT_LAWS = {
    "unit": (_unit, ("m",)),
    "zero_scalar": (_zero_scalar, ("m",)),
    "scalar_additivity": (_scalar_additivity, ("m", "r", "r2")),
    "module_additivity": (_module_additivity, ("m", "m2", "r")),
    "associativity": (_associativity, ("m", "r", "r2")),
}

# witness slot -> which structure names its elements
_SLOT_IS_SCALAR = {"m": False, "m2": False, "r": True, "r2": True}


def validate_module_structure(M: ModuleStructure) -> ValidationReport:
    """Per-object module axioms plus naturality of the action, checked exhaustively.

    One violation is reported per (law, object) or (naturality, morphism),
    citing the first failing elements.
    """
    report = ValidationReport(f"module {M.name}")
    for x in M.base.objects:
        R, G, A = M.scalars.objects[x], M.carrier.objects[x], M.action[x]
        mi, ri = np.arange(G.order), np.arange(R.order)
        checks = {
            "unit": (A[:, R.one], mi),
            "zero_scalar": (A[:, R.zero], np.full(G.order, G.zero)),
            "scalar_additivity": (A[mi[:, None, None], R.add[None, :, :]], G.add[A[:, :, None], A[:, None, :]]),
            "module_additivity": (A[G.add[:, :, None], ri[None, None, :]], G.add[A[:, None, :], A[None, :, :]]),
            "associativity": (A[mi[:, None, None], R.mul[None, :, :]], A[A[:, :, None], ri[None, None, :]]),
        }
        for law, (lhs, rhs) in checks.items():
            report.checked += lhs.size
            bad = algebra._first(lhs != rhs)
            if bad is None:
                continue
            slots = _OBJECT_LAWS[law][1]
            w = {"x": x}
            for slot, i in zip(slots, bad):
                w[slot] = (R if _SLOT_IS_SCALAR[slot] else G).elements[i]
            report.violations.append(Violation(law, w, G.elements[lhs[bad]], G.elements[rhs[bad]]))

    for f in M.base.morphisms:
        s, t = M.scalars.endpoints(f)
        Mf, Rf = M.carrier.morphisms[f].map, M.scalars.morphisms[f].map
        lhs = Mf[M.action[s]]
        rhs = M.action[t][Mf[:, None], Rf[None, :]]
        report.checked += lhs.size
        bad = algebra._first(lhs != rhs)
        if bad is not None:
            m, r = bad
            Gt = M.carrier.objects[t]
            report.add(
                "naturality",
                Gt.elements[lhs[m, r]],
                Gt.elements[rhs[m, r]],
                f=f,
                m=M.carrier.objects[s].elements[m],
                r=M.scalars.objects[s].elements[r],
            )
    return report


def replay_module(M: ModuleStructure, v: Violation) -> bool:
    w = dict(v.witness)
    if v.law == "naturality":
        s, _ = M.scalars.endpoints(w["f"])
        lhs, rhs = _naturality(M, w["f"], M.carrier.objects[s].index(w["m"]), M.scalars.objects[s].index(w["r"]))
        return lhs != rhs
    fn, slots = _OBJECT_LAWS[v.law]
    x = w["x"]
    R, G = M.scalars.objects[x], M.carrier.objects[x]
    args = [(R if _SLOT_IS_SCALAR[s] else G).index(w[s]) for s in slots]
    lhs, rhs = fn(M, x, *args)
    return lhs != rhs


# -- enumeration ------------------------------------------------------------------


def _hom_cache(budget):
    cache: dict = {}

    def homs(s, t):
        key = (s.key(), t.key())
        if key not in cache:
            cache[key] = algebra.enumerate_group_homs(s, t, budget)
        return cache[key]

    return homs


def _product_size(sizes) -> int:
    out = 1
    for s in sizes:
        out *= s
    return out


def enumerate_ab_functors(
    base: FinCategory,
    variance: str,
    groups,
    budget: int,
    fixed_objects: Mapping[str, FinAbGroup] | None = None,
) -> list[AbValuedFunctor]:
    """All group-valued functors with object values drawn from ``groups``.

    Lexicographic over object assignments, then over structure maps of the
    non-identity morphisms in declaration order.
    """
    homs = _hom_cache(budget)
    arrows = [f for f in base.morphisms if not base.is_identity(f)]
    if fixed_objects is not None:
        assignments = [tuple(fixed_objects[x] for x in base.objects)]
    else:
        guard("object assignments", len(groups) ** len(base.objects), budget)
        assignments = itertools.product(groups, repeat=len(base.objects))
    out = []
    seen = 0
    for values in assignments:
        objs = dict(zip(base.objects, values))
        candidates = []
        for f in arrows:
            s, t = image_endpoints(base, variance, f)
            candidates.append(homs(objs[s], objs[t]))
        n = _product_size(len(c) for c in candidates)
        seen += n
        guard("functor candidates", seen, budget)
        ids = {base.identity(x): algebra.identity_hom(objs[x]) for x in base.objects}
        for choice in itertools.product(*candidates):
            maps = dict(ids)
            maps.update(zip(arrows, choice))
            F = AbValuedFunctor(base, variance, objs, {f: maps[f] for f in base.morphisms})
            if validate_functor(F).ok:
                out.append(F)
    return out


def enumerate_actions(R: FinCommRing, G: FinAbGroup, budget: int) -> list[np.ndarray]:
    """Every module structure of ``G`` over ``R``, as action tables.

    Scans all assignments of an endomorphism of ``G`` to each scalar, in
    lexicographic order, keeping those satisfying the module axioms.
    """
    ends = algebra.enumerate_group_homs(G, G, budget)
    guard(f"actions of {R.name} on {G.name}", len(ends) ** R.order, budget)
    out = []
    for choice in itertools.product(ends, repeat=R.order):
        table = np.stack([e.map for e in choice], axis=1)
        if _object_laws_hold(R, G, table):
            out.append(table)
    return out


def _object_laws_hold(R, G, A) -> bool:
    mi, ri = np.arange(G.order), np.arange(R.order)
    return bool(
        (A[:, R.one] == mi).all()
        and (A[:, R.zero] == G.zero).all()
        and (A[mi[:, None, None], R.add[None, :, :]] == G.add[A[:, :, None], A[:, None, :]]).all()
        and (A[G.add[:, :, None], ri[None, None, :]] == G.add[A[:, None, :], A[None, :, :]]).all()
        and (A[mi[:, None, None], R.mul[None, :, :]] == A[A[:, :, None], ri[None, None, :]]).all()
    )


def enumerate_module_structures(scalars: RingValuedFunctor, groups, budget: int, side: str = "right") -> list[ModuleStructure]:
    """All modules over ``scalars`` whose carrier values are drawn from ``groups``."""
    out = []
    count = 0
    for carrier in enumerate_ab_functors(scalars.base, scalars.variance, groups, budget):
        per_object = [enumerate_actions(scalars.objects[x], carrier.objects[x], budget) for x in scalars.base.objects]
        count += _product_size(len(p) for p in per_object)
        guard("module structure candidates", count, budget)
        for tables in itertools.product(*per_object):
            M = ModuleStructure(scalars, carrier, dict(zip(scalars.base.objects, tables)), side=side)
            if validate_module_structure(M).ok:
                out.append(M)
    return out
