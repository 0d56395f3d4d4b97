"""Brute-force probe of the abelian-category axioms on a finite universe of bipresheaves.

Everything here is relative to the universe: mono and epi are decided by
cancellation against the enumerated morphisms only, so a finding may be an
artifact of the truncation rather than a fact about the full category. Each
report says so, and every finding carries enough data to be replayed.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import algebra
from ._report import DEFAULT_BUDGET, BudgetExceeded, LingrothError, MalformedError, ValidationReport, guard
from .algebra import GroupHom
from .bipresheaf import (
    AbBipresheaf,
    BipresheafMorphism,
    enumerate_ab_bipresheaves,
    enumerate_morphisms,
    validate_bipresheaf,
    validate_bipresheaf_morphism,
)
from .fincat import FinCategory
from .functors import AbValuedFunctor, validate_functor

LIMITATION = (
    "mono, epi, normality and isomorphism are decided against the enumerated universe only; "
    "findings may be truncation artifacts and their absence proves nothing about the full category"
)

AXIOMS = (
    "kernel_exists",
    "kernel_universal",
    "cokernel_exists",
    "cokernel_universal",
    "mono_is_normal",
    "epi_is_conormal",
    "bimorphism_is_iso",
    "coimage_image_iso",
)


@dataclass(eq=False)
class Universe:
    """A base category plus the groups allowed as component values.

    ``objects`` may pin an explicit list of bipresheaves instead of
    enumerating all of them; that is how deliberately truncated universes
    are built.
    """

    base: FinCategory
    groups: list
    budget: int = DEFAULT_BUDGET
    name: str = ""
    objects: list | None = None

    def __post_init__(self):
        if isinstance(self.budget, bool) or not isinstance(self.budget, int) or self.budget <= 0:
            raise MalformedError("universe budget must be a positive integer")
        for g in self.groups:
            if not algebra.validate_group(g).ok:
                raise MalformedError(f"universe group {g.name!r} is not a group")


# -- kernels and cokernels ---------------------------------------------------------


class ConstructionError(LingrothError):
    """A componentwise kernel or cokernel does not inherit its structure maps."""

    def __init__(self, what: str, witness: dict):
        self.what, self.witness = what, witness
        super().__init__(f"{what} at {witness}")


def _restrict(h: GroupHom, src_members, src, tgt_members, tgt, what, **w) -> GroupHom:
    pos = {m: i for i, m in enumerate(tgt_members)}
    images = []
    for a in src_members:
        b = int(h.map[a])
        if b not in pos:
            raise ConstructionError(what, {**w, "element": h.source.elements[a]})
        images.append(pos[b])
    return GroupHom(src, tgt, images)


def _induce(h: GroupHom, src_proj: GroupHom, src, tgt_proj: GroupHom, tgt, what, **w) -> GroupHom:
    images = [None] * src.order
    for a in range(h.source.order):
        q, b = int(src_proj.map[a]), int(tgt_proj.map[h.map[a]])
        if images[q] is None:
            images[q] = b
        elif images[q] != b:
            raise ConstructionError(what, {**w, "coset": src.elements[q]})
    return GroupHom(src, tgt, images)


def compute_kernel(m: BipresheafMorphism) -> tuple[AbBipresheaf, BipresheafMorphism]:
    """Componentwise kernels with restricted structure maps and eta, plus the inclusion.

    Raises :class:`ConstructionError` if a structure map or eta leaves the
    kernel; with a valid ``m`` that cannot happen, but it is checked.
    """
    A = m.source
    A1, A2, eta = A.parts()
    base = A.base
    sub1, sub2, inc1, inc2, mem1, mem2 = {}, {}, {}, {}, {}, {}
    for x in base.objects:
        mem1[x], mem2[x] = m.phi1[x].kernel(), m.phi2[x].kernel()
        sub1[x], inc1[x] = algebra.subgroup(A1.objects[x], mem1[x], name=f"ker1({x})")
        sub2[x], inc2[x] = algebra.subgroup(A2.objects[x], mem2[x], name=f"ker2({x})")
    maps1, maps2 = {}, {}
    for f, (x, y) in base.morphisms.items():
        maps1[f] = _restrict(A1.morphisms[f], mem1[y], sub1[y], mem1[x], sub1[x], "first structure map leaves the kernel", f=f)
        maps2[f] = _restrict(A2.morphisms[f], mem2[x], sub2[x], mem2[y], sub2[y], "second structure map leaves the kernel", f=f)
    e = {x: _restrict(eta[x], mem1[x], sub1[x], mem2[x], sub2[x], "eta leaves the kernel", x=x) for x in base.objects}
    K = AbBipresheaf(
        AbValuedFunctor(base, "contravariant", sub1, maps1),
        AbValuedFunctor(base, "covariant", sub2, maps2),
        e,
        name=f"ker({m.name})",
    )
    return K, BipresheafMorphism(K, A, inc1, inc2, name="inclusion")


def compute_cokernel(m: BipresheafMorphism) -> tuple[AbBipresheaf, BipresheafMorphism]:
    """Componentwise quotients by the image, induced structure maps and eta, plus the projection.

    Well-definedness of every induced map is checked; a clash raises
    :class:`ConstructionError` naming the coset.
    """
    B = m.target
    B1, B2, eta = B.parts()
    base = B.base
    q1, q2, p1, p2 = {}, {}, {}, {}
    for x in base.objects:
        q1[x], p1[x] = algebra.quotient(B1.objects[x], m.phi1[x].image(), name=f"coker1({x})")
        q2[x], p2[x] = algebra.quotient(B2.objects[x], m.phi2[x].image(), name=f"coker2({x})")
    maps1, maps2 = {}, {}
    for f, (x, y) in base.morphisms.items():
        maps1[f] = _induce(B1.morphisms[f], p1[y], q1[y], p1[x], q1[x], "first structure map not well defined", f=f)
        maps2[f] = _induce(B2.morphisms[f], p2[x], q2[x], p2[y], q2[y], "second structure map not well defined", f=f)
    e = {x: _induce(eta[x], p1[x], q1[x], p2[x], q2[x], "induced eta not well defined", x=x) for x in base.objects}
    Q = AbBipresheaf(
        AbValuedFunctor(base, "contravariant", q1, maps1),
        AbValuedFunctor(base, "covariant", q2, maps2),
        e,
        name=f"coker({m.name})",
    )
    return Q, BipresheafMorphism(B, Q, p1, p2, name="projection")


def _construction_report(obj: AbBipresheaf, arrow: BipresheafMorphism) -> ValidationReport:
    rep = ValidationReport(obj.name)
    rep.extend(validate_functor(obj.A1), prefix="first.")
    rep.extend(validate_functor(obj.A2), prefix="second.")
    rep.extend(validate_bipresheaf(obj))
    rep.extend(validate_bipresheaf_morphism(arrow), prefix="arrow.")
    return rep


# -- flat morphisms ----------------------------------------------------------------
# The components A1(x), A2(x) of a bipresheaf are laid end to end, so a morphism
# is one index array and composition is array indexing.


class _Layout:
    def __init__(self, B):
        A1, A2, _ = B.parts()
        self.parts = [(1, x, A1.objects[x]) for x in B.base.objects] + [(2, x, A2.objects[x]) for x in B.base.objects]
        self.offsets = [0]
        for _, _, g in self.parts:
            self.offsets.append(self.offsets[-1] + g.order)
        self.size = self.offsets[-1]
        self.zero_pos = np.array([o + g.zero for (_, _, g), o in zip(self.parts, self.offsets)], dtype=np.int64)
        self.part_of = np.repeat(np.arange(len(self.parts)), [g.order for _, _, g in self.parts])


def _flat(m: BipresheafMorphism, src: _Layout, tgt: _Layout) -> np.ndarray:
    out = np.empty(src.size, dtype=np.int64)
    for k, (side, x, _) in enumerate(src.parts):
        h = (m.phi1 if side == 1 else m.phi2)[x]
        out[src.offsets[k] : src.offsets[k + 1]] = h.map + tgt.offsets[k]
    return out


def _kernel_set(a: np.ndarray, src: _Layout, tgt: _Layout) -> frozenset:
    return frozenset(np.flatnonzero(a == tgt.zero_pos[src.part_of]).tolist())


class _Context:
    """The enumerated universe: objects, every hom-set, and their flat forms."""

    def __init__(self, u: Universe):
        self.u = u
        self.exhaustive = True
        self.truncation: str | None = None
        try:
            if u.objects is not None:
                self.objects = list(u.objects)
            else:
                self.objects = enumerate_ab_bipresheaves(u.base, u.groups, u.budget)
        except BudgetExceeded as e:
            self.objects, self.exhaustive, self.truncation = [], False, str(e)
        n = len(self.objects)
        self.layouts = [_Layout(B) for B in self.objects]
        self.homs: dict[tuple[int, int], list[BipresheafMorphism]] = {}
        self.flat: dict[tuple[int, int], list[np.ndarray]] = {}
        spent = 0
        for i, j in itertools.product(range(n), repeat=2):
            homs = []
            if self.exhaustive:
                try:
                    homs = enumerate_morphisms(self.objects[i], self.objects[j], u.budget)
                    spent += len(homs)
                    guard("universe morphisms", spent, u.budget)
                except BudgetExceeded as e:
                    self.exhaustive, self.truncation, homs = False, str(e), []
            self.homs[(i, j)] = homs
            self.flat[(i, j)] = [_flat(h, self.layouts[i], self.layouts[j]) for h in homs]
        # kernels of arrows out of each object and images of arrows into it
        # universal-property results depend only on the kernel (image) subset
        self.cache: dict = {}
        self.kernels_from = {i: set() for i in range(n)}
        self.images_into = {i: set() for i in range(n)}
        for (i, j), arrs in self.flat.items():
            for a in arrs:
                self.kernels_from[i].add(_kernel_set(a, self.layouts[i], self.layouts[j]))
                self.images_into[j].add(frozenset(a.tolist()))

    def ids(self):
        for (i, j), homs in self.homs.items():
            for k in range(len(homs)):
                yield i, j, k

    def index_of(self, B) -> int:
        for i, C in enumerate(self.objects):
            if C == B:
                return i
        raise LingrothError(f"{B!r} is not an object of the universe")

    def locate(self, m: BipresheafMorphism) -> tuple[int, int, int]:
        i, j = self.index_of(m.source), self.index_of(m.target)
        a = _flat(m, self.layouts[i], self.layouts[j])
        for k, b in enumerate(self.flat[(i, j)]):
            if np.array_equal(a, b):
                return i, j, k
        raise LingrothError("morphism is not in the universe")


_CONTEXTS: dict[int, tuple[Universe, _Context]] = {}


def _context(u: Universe) -> _Context:
    hit = _CONTEXTS.get(id(u))
    if hit is None or hit[0] is not u:
        hit = (u, _Context(u))
        _CONTEXTS[id(u)] = hit
    return hit[1]


# -- classification ----------------------------------------------------------------


@dataclass
class Classification:
    mono: bool
    epi: bool
    iso: bool
    normal: bool
    conormal: bool
    injective: bool
    surjective: bool
    coimage_image_iso: bool | None
    exhaustive: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _classify(ctx: _Context, i: int, j: int, k: int) -> tuple[Classification, dict]:
    """Classification plus the raw evidence the findings are built from."""
    a = ctx.flat[(i, j)][k]
    src, tgt = ctx.layouts[i], ctx.layouts[j]
    n = len(ctx.objects)
    injective = len(set(a.tolist())) == len(a)
    surjective = len(set(a.tolist())) == tgt.size

    mono_fail = None
    for c in range(n):
        seen = {}
        for t, u in enumerate(ctx.flat[(c, i)]):
            key = a[u].tobytes()
            if key in seen:
                mono_fail = {"test_object": c, "u": seen[key], "v": t}
                break
            seen[key] = t
        if mono_fail:
            break
    epi_fail = None
    for c in range(n):
        seen = {}
        for t, u in enumerate(ctx.flat[(j, c)]):
            key = u[a].tobytes()
            if key in seen:
                epi_fail = {"test_object": c, "u": seen[key], "v": t}
                break
            seen[key] = t
        if epi_fail:
            break
    inverse = None
    ident_src, ident_tgt = np.arange(src.size), np.arange(tgt.size)
    for t, v in enumerate(ctx.flat[(j, i)]):
        if np.array_equal(v[a], ident_src) and np.array_equal(a[v], ident_tgt):
            inverse = t
            break
    image = frozenset(a.tolist())
    kernel = _kernel_set(a, src, tgt)
    normal = injective and image in ctx.kernels_from[j]
    conormal = surjective and kernel in ctx.images_into[i]

    comparison = None
    m = ctx.homs[(i, j)][k]
    try:
        comparison = _coimage_image(m)
    except ConstructionError:
        comparison = None
    cls = Classification(
        mono=mono_fail is None,
        epi=epi_fail is None,
        iso=inverse is not None,
        normal=normal,
        conormal=conormal,
        injective=injective,
        surjective=surjective,
        coimage_image_iso=comparison,
        exhaustive=ctx.exhaustive,
    )
    return cls, {"mono_fail": mono_fail, "epi_fail": epi_fail, "inverse": inverse}


def _coimage_image(m: BipresheafMorphism) -> bool:
    """Whether the canonical map coker(ker m) -> ker(coker m) is a valid isomorphism."""
    K, inc = compute_kernel(m)
    coim, p = compute_cokernel(inc)
    Q, proj = compute_cokernel(m)
    im, j = compute_kernel(proj)
    # induced map: class of a in A/ker goes to m(a), viewed inside the image
    phi = {}
    for side, comps in ((1, m.phi1), (2, m.phi2)):
        out = {}
        for x in m.base.objects:
            P = (p.phi1 if side == 1 else p.phi2)[x]
            J = (j.phi1 if side == 1 else j.phi2)[x]
            src = P.target
            tgt = J.source
            pos = {int(b): t for t, b in enumerate(J.map)}
            images = [None] * src.order
            for aa in range(P.source.order):
                b = pos.get(int(comps[x].map[aa]))
                q = int(P.map[aa])
                if b is None or (images[q] is not None and images[q] != b):
                    return False
                images[q] = b
            out[x] = GroupHom(src, tgt, images)
        phi[side] = out
    c = BipresheafMorphism(coim, im, phi[1], phi[2])
    if not validate_bipresheaf_morphism(c).ok:
        return False
    return all(len(set(h.map.tolist())) == h.source.order == h.target.order for h in list(c.phi1.values()) + list(c.phi2.values()))


def classify_morphism(m: BipresheafMorphism, u: Universe) -> Classification:
    """Mono/epi by cancellation over the universe, iso by a two-sided inverse in it,
    normal/conormal by matching a kernel/cokernel of some universe morphism, and the
    coimage-to-image comparison."""
    ctx = _context(u)
    i, j, k = ctx.locate(m)
    return _classify(ctx, i, j, k)[0]


# -- universal properties ----------------------------------------------------------


def _kernel_universal(ctx, i, j, k, K, inc) -> dict | None:
    """Every u: C -> A with m∘u = 0 factors uniquely through the inclusion."""
    a = ctx.flat[(i, j)][k]
    src, tgt = ctx.layouts[i], ctx.layouts[j]
    if any(len(set(h.map.tolist())) != h.source.order for h in list(inc.phi1.values()) + list(inc.phi2.values())):
        return {"reason": "inclusion is not injective"}
    kernel = _kernel_set(a, src, tgt)
    for c in range(len(ctx.objects)):
        for t, u in enumerate(ctx.flat[(c, i)]):
            if not set(u.tolist()) <= kernel:
                continue
            # the factorization exists as a function; confirm it is a morphism
            C = ctx.objects[c]
            U = ctx.homs[(c, i)][t]
            phi1 = {x: GroupHom(C.A1.objects[x], K.A1.objects[x], [inc.phi1[x].map.tolist().index(int(v)) for v in U.phi1[x].map]) for x in C.base.objects}
            phi2 = {x: GroupHom(C.A2.objects[x], K.A2.objects[x], [inc.phi2[x].map.tolist().index(int(v)) for v in U.phi2[x].map]) for x in C.base.objects}
            v = BipresheafMorphism(C, K, phi1, phi2)
            if not validate_bipresheaf_morphism(v).ok:
                return {"test_object": c, "u": t, "reason": "factorization is not a morphism"}
    return None


def _cokernel_universal(ctx, i, j, k, Q, proj) -> dict | None:
    """Every u: B -> C with u∘m = 0 factors uniquely through the projection."""
    a = ctx.flat[(i, j)][k]
    for c in range(len(ctx.objects)):
        C = ctx.objects[c]
        zero = ctx.layouts[c].zero_pos[ctx.layouts[j].part_of]
        for t, u in enumerate(ctx.flat[(j, c)]):
            if not np.array_equal(u[a], zero[a]):
                continue
            U = ctx.homs[(j, c)][t]
            comps = {}
            for side, P, Um in ((1, proj.phi1, U.phi1), (2, proj.phi2, U.phi2)):
                comps[side] = {}
                for x in C.base.objects:
                    images = [None] * P[x].target.order
                    for b in range(P[x].source.order):
                        q, val = int(P[x].map[b]), int(Um[x].map[b])
                        if images[q] is not None and images[q] != val:
                            return {"test_object": c, "u": t, "reason": "u is not constant on a coset"}
                        images[q] = val
                    tgt = (C.A1 if side == 1 else C.A2).objects[x]
                    comps[side][x] = GroupHom(P[x].target, tgt, images)
            v = BipresheafMorphism(Q, C, comps[1], comps[2])
            if not validate_bipresheaf_morphism(v).ok:
                return {"test_object": c, "u": t, "reason": "factorization is not a morphism"}
    return None


# -- the search --------------------------------------------------------------------


@dataclass
class Finding:
    axiom: str
    witness: dict
    detail: dict

    def to_dict(self) -> dict:
        return {"axiom": self.axiom, "witness": self.witness, "detail": self.detail}


@dataclass
class WitnessReport:
    universe: str
    objects: int = 0
    morphisms: int = 0
    checked: dict = field(default_factory=lambda: {a: 0 for a in AXIOMS})
    findings: list = field(default_factory=list)
    implications: dict = field(default_factory=dict)
    exhaustive: bool = True
    truncation: str | None = None
    limitation: str = LIMITATION

    @property
    def ok(self) -> bool:
        return not self.findings

    def to_dict(self) -> dict:
        return {
            "universe": self.universe,
            "objects": self.objects,
            "morphisms": self.morphisms,
            "checked": dict(self.checked),
            "findings": [f.to_dict() for f in self.findings],
            "implications": dict(self.implications),
            "exhaustive": self.exhaustive,
            "truncation": self.truncation,
            "limitation": self.limitation,
        }


def _tables(m: BipresheafMorphism) -> dict:
    return {
        "first": {x: h.as_dict() for x, h in m.phi1.items()},
        "second": {x: h.as_dict() for x, h in m.phi2.items()},
    }


def _side(ctx, i, j, k, m, construct, universal) -> list[tuple[str, dict | None]]:
    """[(axiom, failure detail or None)] for the kernel or the cokernel of ``m``."""
    kind = "kernel" if construct is compute_kernel else "cokernel"
    try:
        obj, arrow = construct(m)
    except ConstructionError as e:
        return [(f"{kind}_exists", {"reason": e.what, **e.witness})]
    rep = _construction_report(obj, arrow)
    if not rep.ok:
        return [(f"{kind}_exists", {"violations": [v.to_dict() for v in rep.violations]})]
    return [(f"{kind}_exists", None), (f"{kind}_universal", universal(ctx, i, j, k, obj, arrow))]


def _probe(ctx: _Context, i: int, j: int, k: int) -> tuple[list[Finding], dict, dict]:
    """All findings for one morphism, the per-axiom check counts, and implication tallies."""
    m = ctx.homs[(i, j)][k]
    witness = {"source": i, "target": j, "index": k, "morphism": _tables(m)}
    found: list[Finding] = []
    checked = {a: 0 for a in AXIOMS}
    tallies = {}

    # the kernel side depends only on the kernel subset of A, the cokernel side
    # only on the image subset of B, so both are cached on that key
    a = ctx.flat[(i, j)][k]
    sides = (
        (("kernel", i, _kernel_set(a, ctx.layouts[i], ctx.layouts[j])), compute_kernel, _kernel_universal),
        (("cokernel", j, frozenset(a.tolist())), compute_cokernel, _cokernel_universal),
    )
    for key, construct, universal in sides:
        if key not in ctx.cache:
            ctx.cache[key] = _side(ctx, i, j, k, m, construct, universal)
        for axiom, detail in ctx.cache[key]:
            checked[axiom] += 1
            if detail is not None:
                found.append(Finding(axiom, witness, detail))

    cls, _ = _classify(ctx, i, j, k)
    tallies = {
        "injective": int(cls.injective),
        "mono": int(cls.mono),
        "injective_and_mono": int(cls.injective and cls.mono),
        "mono_not_injective": int(cls.mono and not cls.injective),
        "surjective": int(cls.surjective),
        "epi": int(cls.epi),
        "surjective_and_epi": int(cls.surjective and cls.epi),
        "epi_not_surjective": int(cls.epi and not cls.surjective),
    }
    if cls.mono:
        checked["mono_is_normal"] += 1
        if not cls.normal:
            found.append(Finding("mono_is_normal", witness, {"injective": cls.injective}))
    if cls.epi:
        checked["epi_is_conormal"] += 1
        if not cls.conormal:
            found.append(Finding("epi_is_conormal", witness, {"surjective": cls.surjective}))
    if cls.mono and cls.epi:
        checked["bimorphism_is_iso"] += 1
        if not cls.iso:
            found.append(Finding("bimorphism_is_iso", witness, {"injective": cls.injective, "surjective": cls.surjective}))
    checked["coimage_image_iso"] += 1
    if not cls.coimage_image_iso:
        found.append(Finding("coimage_image_iso", witness, {}))
    return found, checked, tallies


def _probe_range(u: Universe, ids: list[tuple[int, int, int]]):
    ctx = _context(u)
    return [_probe(ctx, *t) for t in ids]


def find_nonabelian_witness(u: Universe, workers: int = 1) -> WitnessReport:
    """Probe every morphism of the universe, in enumeration order.

    Order of probes per morphism: kernel and cokernel existence and
    universality, normality of monos, conormality of epis, bimorphisms that
    are not isomorphisms, and the coimage-to-image comparison.
    """
    ctx = _context(u)
    report = WitnessReport(u.name, objects=len(ctx.objects))
    ids = list(ctx.ids())
    report.morphisms = len(ids)
    report.exhaustive, report.truncation = ctx.exhaustive, ctx.truncation
    if workers > 1 and len(ids) > 1:
        chunks = [ids[s::workers] for s in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_probe_range, [u] * len(chunks), chunks))
        by_id = {}
        for chunk, res in zip(chunks, parts):
            by_id.update(zip(chunk, res))
        results = [by_id[t] for t in ids]
    else:
        results = [_probe(ctx, *t) for t in ids]
    for found, checked, tallies in results:
        report.findings.extend(found)
        for a, n in checked.items():
            report.checked[a] += n
        for key, n in tallies.items():
            report.implications[key] = report.implications.get(key, 0) + n
    return report


def replay_finding(u: Universe, finding: Finding | dict) -> bool:
    """Recompute the probe for the stored morphism; True if the same finding comes back."""
    f = finding if isinstance(finding, Finding) else Finding(finding["axiom"], finding["witness"], finding["detail"])
    ctx = _context(u)
    i, j, k = f.witness["source"], f.witness["target"], f.witness["index"]
    homs = ctx.homs.get((i, j), [])
    if k >= len(homs) or _tables(homs[k]) != f.witness["morphism"]:
        return False
    found, _, _ = _probe(ctx, i, j, k)
    return any(g.to_dict() == f.to_dict() for g in found)
