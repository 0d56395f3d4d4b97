"""Finite abelian groups and finite unital commutative rings as explicit tables.

Elements are opaque string identifiers; internally every table is indexed by
element position, so ``add[i, j]`` is the index of ``elements[i] + elements[j]``.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping, Sequence
from typing import Any, Callable

import numpy as np

from ._report import DEFAULT_BUDGET, AxiomError, MalformedError, ValidationReport, Violation, guard


def _table(raw, n: int, what: str) -> np.ndarray:
    t = np.asarray(raw, dtype=np.int64)
    if t.shape != (n, n):
        raise MalformedError(f"{what}: table shape {t.shape}, expected {(n, n)}")
    if n and (t.min() < 0 or t.max() >= n):
        raise MalformedError(f"{what}: table entries out of range")
    return t


class FinAbGroup:
    def __init__(self, elements: Sequence[str], add, zero: int, name: str = ""):
        self.elements = tuple(str(e) for e in elements)
        if len(set(self.elements)) != len(self.elements):
            raise MalformedError(f"group {name!r}: duplicate element ids")
        if not self.elements:
            raise MalformedError(f"group {name!r}: no elements")
        n = len(self.elements)
        self.add = _table(add, n, f"group {name!r} add")
        if not 0 <= zero < n:
            raise MalformedError(f"group {name!r}: zero out of range")
        self.zero = int(zero)
        self.name = name
        self._index = {e: i for i, e in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, e: str) -> int:
        try:
            return self._index[e]
        except KeyError:
            raise MalformedError(f"{e!r} is not an element of {self.name or 'the group'}") from None

    def neg(self, a: int) -> int:
        return int(np.flatnonzero(self.add[a] == self.zero)[0])

    def multiple(self, n: int, a: int) -> int:
        out = self.zero
        for _ in range(n):
            out = int(self.add[out, a])
        return out

    def key(self):
        return (self.elements, self.add.tobytes(), self.zero)

    def __eq__(self, other):
        if not isinstance(other, FinAbGroup):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"FinAbGroup({self.name or '?'}, order={self.order})"


class FinCommRing:
    def __init__(self, elements: Sequence[str], add, mul, zero: int, one: int, name: str = ""):
        self.group = FinAbGroup(elements, add, zero, name=name)
        self.elements = self.group.elements
        self.add = self.group.add
        self.mul = _table(mul, len(self.elements), f"ring {name!r} mul")
        if not 0 <= one < len(self.elements):
            raise MalformedError(f"ring {name!r}: one out of range")
        self.zero = self.group.zero
        self.one = int(one)
        self.name = name

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def is_trivial(self) -> bool:
        return self.zero == self.one

    def index(self, e: str) -> int:
        return self.group.index(e)

    def additive_group(self) -> FinAbGroup:
        return self.group

    def key(self):
        return (self.group.key(), self.mul.tobytes(), self.one)

    def __eq__(self, other):
        if not isinstance(other, FinCommRing):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"FinCommRing({self.name or '?'}, order={self.order})"


# -- axiom checks ------------------------------------------------------------


def _first(mask: np.ndarray):
    """Index tuple of the first True entry, or None."""
    hits = np.argwhere(mask)
    return tuple(int(i) for i in hits[0]) if len(hits) else None


def _group_laws(elements, add, zero, report: ValidationReport, op: str = "add") -> None:
    n = len(elements)
    idx = np.arange(n)
    e = elements
    report.checked += n**3 + 3 * n**2 + n
    bad = _first(add[add[:, :, None], idx[None, None, :]] != add[idx[:, None, None], add[None, :, :]])
    if bad:
        a, b, c = bad
        report.add(f"{op}_associativity", a=e[a], b=e[b], c=e[c])
    bad = _first(add != add.T)
    if bad:
        report.add(f"{op}_commutativity", a=e[bad[0]], b=e[bad[1]])
    bad = _first(add[idx, zero] != idx)
    if bad:
        report.add(f"{op}_identity", a=e[bad[0]])
    bad = _first(~(add == zero).any(axis=1))
    if bad:
        report.add(f"{op}_inverse", a=e[bad[0]])


def validate_group(g: FinAbGroup) -> ValidationReport:
    report = ValidationReport(f"group {g.name}")
    _group_laws(g.elements, g.add, g.zero, report)
    return report


def validate_ring(r: FinCommRing) -> ValidationReport:
    report = ValidationReport(f"ring {r.name}")
    _group_laws(r.elements, r.add, r.zero, report)
    n, e, add, mul = r.order, r.elements, r.add, r.mul
    idx = np.arange(n)
    report.checked += n**3 + 2 * n**2 + n
    bad = _first(mul[mul[:, :, None], idx[None, None, :]] != mul[idx[:, None, None], mul[None, :, :]])
    if bad:
        report.add("mul_associativity", a=e[bad[0]], b=e[bad[1]], c=e[bad[2]])
    bad = _first(mul != mul.T)
    if bad:
        report.add("mul_commutativity", a=e[bad[0]], b=e[bad[1]])
    bad = _first(mul[idx, r.one] != idx)
    if bad:
        report.add("mul_identity", a=e[bad[0]])
    # a(b + c) = ab + ac
    lhs = mul[idx[:, None, None], add[None, :, :]]
    rhs = add[mul[:, :, None], mul[:, None, :]]
    bad = _first(lhs != rhs)
    if bad:
        report.add("distributivity", a=e[bad[0]], b=e[bad[1]], c=e[bad[2]])
    return report


# -- constructors --------------------------------------------------------------


def _checked_ring(r: FinCommRing) -> FinCommRing:
    report = validate_ring(r)
    if not report.ok:
        raise AxiomError(report)
    return r


def _checked_group(g: FinAbGroup) -> FinAbGroup:
    report = validate_group(g)
    if not report.ok:
        raise AxiomError(report)
    return g


def modular_ring(n: int, name: str = "") -> FinCommRing:
    if n < 1:
        raise MalformedError(f"modular ring needs n >= 1, got {n}")
    i = np.arange(n)
    return FinCommRing(
        [str(k) for k in range(n)],
        (i[:, None] + i[None, :]) % n,
        (i[:, None] * i[None, :]) % n,
        zero=0,
        one=1 % n,
        name=name or f"Z/{n}",
    )


def trivial_ring(name: str = "") -> FinCommRing:
    return FinCommRing(["e"], [[0]], [[0]], zero=0, one=0, name=name or "trivial")


def _pair_names(a: Sequence[str], b: Sequence[str]) -> list[str]:
    return [f"({x},{y})" for x in a for y in b]


def product_ring(*parts: FinCommRing, name: str = "") -> FinCommRing:
    if not parts:
        raise MalformedError("product of no rings")
    p0 = parts[0]
    out = FinCommRing(p0.elements, p0.add, p0.mul, p0.zero, p0.one)
    for p in parts[1:]:
        m = p.order
        n = out.order * m
        a0, a1 = np.divmod(np.arange(n), m)
        add = out.add[a0[:, None], a0[None, :]] * m + p.add[a1[:, None], a1[None, :]]
        mul = out.mul[a0[:, None], a0[None, :]] * m + p.mul[a1[:, None], a1[None, :]]
        out = FinCommRing(
            _pair_names(out.elements, p.elements),
            add,
            mul,
            zero=out.zero * m + p.zero,
            one=out.one * m + p.one,
        )
    out.name = name or " x ".join(p.name for p in parts)
    out.group.name = out.name
    return out


def table_ring(
    elements: Sequence[str],
    add: Mapping[str, Mapping[str, str]],
    mul: Mapping[str, Mapping[str, str]],
    zero: str,
    one: str,
    name: str = "",
) -> FinCommRing:
    """Ring from name-keyed tables; rejects tables that violate any ring axiom."""
    elements = [str(e) for e in elements]
    pos = {e: i for i, e in enumerate(elements)}
    return _checked_ring(
        FinCommRing(
            elements,
            _named_table(add, elements, pos, "add"),
            _named_table(mul, elements, pos, "mul"),
            zero=_lookup(pos, zero),
            one=_lookup(pos, one),
            name=name,
        )
    )


def _lookup(pos, e):
    try:
        return pos[e]
    except KeyError:
        raise MalformedError(f"unknown element {e!r}") from None


def _named_table(raw, elements, pos, what):
    out = np.zeros((len(elements), len(elements)), dtype=np.int64)
    for a in elements:
        row = raw.get(a)
        if row is None:
            raise MalformedError(f"{what} table has no row for {a!r}")
        for b in elements:
            if b not in row:
                raise MalformedError(f"{what} table missing entry ({a}, {b})")
            out[pos[a], pos[b]] = _lookup(pos, row[b])
    return out


def cyclic_group(n: int, name: str = "") -> FinAbGroup:
    if n < 1:
        raise MalformedError(f"cyclic group needs n >= 1, got {n}")
    i = np.arange(n)
    return FinAbGroup([str(k) for k in range(n)], (i[:, None] + i[None, :]) % n, 0, name=name or f"Z/{n}")


def zero_group(name: str = "0") -> FinAbGroup:
    return FinAbGroup(["0"], [[0]], 0, name=name)


def product_group(*parts: FinAbGroup, name: str = "") -> FinAbGroup:
    if not parts:
        raise MalformedError("product of no groups")
    out = FinAbGroup(parts[0].elements, parts[0].add, parts[0].zero)
    for p in parts[1:]:
        m = p.order
        a0, a1 = np.divmod(np.arange(out.order * m), m)
        add = out.add[a0[:, None], a0[None, :]] * m + p.add[a1[:, None], a1[None, :]]
        out = FinAbGroup(_pair_names(out.elements, p.elements), add, out.zero * m + p.zero)
    out.name = name or " x ".join(p.name for p in parts)
    return out


def table_group(elements: Sequence[str], add: Mapping[str, Mapping[str, str]], zero: str, name: str = "") -> FinAbGroup:
    elements = [str(e) for e in elements]
    pos = {e: i for i, e in enumerate(elements)}
    return _checked_group(FinAbGroup(elements, _named_table(add, elements, pos, "add"), _lookup(pos, zero), name=name))


def build_ring(spec: Mapping[str, Any], resolve: Callable[[str], FinCommRing] | None = None, name: str = "") -> FinCommRing:
    """Construct a ring from a declarative description.

    Accepted forms: ``{"modular": n}``, ``{"trivial": true}``,
    ``{"product": [spec_or_name, ...]}`` and ``{"table": {elements, add, mul, zero, one}}``.
    Names inside a product are looked up with ``resolve``.
    """
    if not isinstance(spec, Mapping) or len(spec) != 1:
        raise MalformedError(f"ring description must have exactly one key, got {spec!r}")
    (kind, arg), = spec.items()
    if kind == "modular":
        if not isinstance(arg, int) or isinstance(arg, bool):
            raise MalformedError("modular ring needs an integer modulus")
        return modular_ring(arg, name=name)
    if kind == "trivial":
        return trivial_ring(name=name)
    if kind == "product":
        parts = []
        for p in arg:
            if isinstance(p, str):
                if resolve is None:
                    raise MalformedError(f"cannot resolve ring name {p!r}")
                parts.append(resolve(p))
            else:
                parts.append(build_ring(p, resolve))
        return product_ring(*parts, name=name)
    if kind == "table":
        return table_ring(arg["elements"], arg["add"], arg["mul"], arg["zero"], arg["one"], name=name)
    raise MalformedError(f"unknown ring kind {kind!r}")


def build_group(spec: Mapping[str, Any], resolve: Callable[[str], Any] | None = None, name: str = "") -> FinAbGroup:
    """Like :func:`build_ring` for groups: ``cyclic``, ``product``, ``table``, ``additive`` (of a named ring)."""
    if not isinstance(spec, Mapping) or len(spec) != 1:
        raise MalformedError(f"group description must have exactly one key, got {spec!r}")
    (kind, arg), = spec.items()
    if kind == "cyclic":
        if not isinstance(arg, int) or isinstance(arg, bool):
            raise MalformedError("cyclic group needs an integer order")
        return cyclic_group(arg, name=name)
    if kind == "product":
        parts = []
        for p in arg:
            parts.append(resolve(p) if isinstance(p, str) else build_group(p, resolve))
        return product_group(*parts, name=name)
    if kind == "additive":
        ring = resolve(arg)
        if not isinstance(ring, FinCommRing):
            raise MalformedError(f"{arg!r} is not a ring")
        g = ring.additive_group()
        return FinAbGroup(g.elements, g.add, g.zero, name=name or g.name)
    if kind == "table":
        return table_group(arg["elements"], arg["add"], arg["zero"], name=name)
    raise MalformedError(f"unknown group kind {kind!r}")


# -- homomorphisms ---------------------------------------------------------------


class _Hom:
    def __init__(self, source, target, mapping):
        self.source = source
        self.target = target
        if isinstance(mapping, Mapping):
            missing = [e for e in source.elements if e not in mapping]
            if missing:
                raise MalformedError(f"map is not total: no image for {missing[0]!r}")
            arr = np.array([target.index(mapping[e]) for e in source.elements], dtype=np.int64)
        else:
            arr = np.asarray(mapping, dtype=np.int64)
            if arr.shape != (source.order,):
                raise MalformedError(f"map has {arr.shape} entries, source has {source.order} elements")
            if arr.size and (arr.min() < 0 or arr.max() >= target.order):
                raise MalformedError("map image out of range")
        self.map = arr

    def __call__(self, a: int) -> int:
        return int(self.map[a])

    def as_dict(self) -> dict[str, str]:
        return {self.source.elements[i]: self.target.elements[j] for i, j in enumerate(self.map)}

    def key(self):
        return (self.source.key(), self.target.key(), self.map.tobytes())

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"{type(self).__name__}({self.source.name} -> {self.target.name}, {self.map.tolist()})"


class RingHom(_Hom):
    def then(self, other: "RingHom") -> "RingHom":
        """``other ∘ self``."""
        return RingHom(self.source, other.target, other.map[self.map])


class GroupHom(_Hom):
    def then(self, other: "GroupHom") -> "GroupHom":
        return GroupHom(self.source, other.target, other.map[self.map])

    def __add__(self, other: "GroupHom") -> "GroupHom":
        return GroupHom(self.source, self.target, self.target.add[self.map, other.map])

    def times(self, n: int) -> "GroupHom":
        out = zero_hom(self.source, self.target)
        for _ in range(n):
            out = out + self
        return out

    def kernel(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.map == self.target.zero)]

    def image(self) -> list[int]:
        return sorted({int(j) for j in self.map})


def identity_ring_hom(r: FinCommRing) -> RingHom:
    return RingHom(r, r, np.arange(r.order))


def identity_hom(g: FinAbGroup) -> GroupHom:
    return GroupHom(g, g, np.arange(g.order))


def zero_hom(source: FinAbGroup, target: FinAbGroup) -> GroupHom:
    return GroupHom(source, target, np.full(source.order, target.zero))


def validate_ring_hom(h: RingHom) -> ValidationReport:
    s, t, m = h.source, h.target, h.map
    report = ValidationReport(f"ring hom {s.name} -> {t.name}")
    report.checked += 2 * s.order**2 + 1
    bad = _first(m[s.add] != t.add[m[:, None], m[None, :]])
    if bad:
        a, b = bad
        report.add("preserves_add", t.elements[m[s.add[a, b]]], t.elements[t.add[m[a], m[b]]], a=s.elements[a], b=s.elements[b])
    bad = _first(m[s.mul] != t.mul[m[:, None], m[None, :]])
    if bad:
        a, b = bad
        report.add("preserves_mul", t.elements[m[s.mul[a, b]]], t.elements[t.mul[m[a], m[b]]], a=s.elements[a], b=s.elements[b])
    if m[s.one] != t.one:
        report.add("preserves_one", t.elements[m[s.one]], t.elements[t.one])
    return report


def validate_group_hom(h: GroupHom) -> ValidationReport:
    s, t, m = h.source, h.target, h.map
    report = ValidationReport(f"group hom {s.name} -> {t.name}")
    report.checked += s.order**2
    bad = _first(m[s.add] != t.add[m[:, None], m[None, :]])
    if bad:
        a, b = bad
        report.add("preserves_add", t.elements[m[s.add[a, b]]], t.elements[t.add[m[a], m[b]]], a=s.elements[a], b=s.elements[b])
    return report


def replay_hom(h: _Hom, v: Violation) -> bool:
    """Re-evaluate a hom violation at its witness."""
    s, t = h.source, h.target
    if v.law == "preserves_one":
        return h(s.one) != t.one
    a, b = s.index(v.witness["a"]), s.index(v.witness["b"])
    if v.law == "preserves_add":
        return h(s.add[a, b]) != t.add[h(a), h(b)]
    if v.law == "preserves_mul":
        return h(s.mul[a, b]) != t.mul[h(a), h(b)]
    raise KeyError(v.law)


def _all_maps(source, target, budget, what):
    guard(what, target.order**source.order, budget)
    return itertools.product(range(target.order), repeat=source.order)


def enumerate_ring_homs(source: FinCommRing, target: FinCommRing, budget: int = DEFAULT_BUDGET) -> list[RingHom]:
    """Every unital ring hom, found by scanning all element maps in lexicographic order."""
    out = []
    for images in _all_maps(source, target, budget, f"maps {source.name} -> {target.name}"):
        h = RingHom(source, target, images)
        if validate_ring_hom(h).ok:
            out.append(h)
    return out


def enumerate_group_homs(source: FinAbGroup, target: FinAbGroup, budget: int = DEFAULT_BUDGET) -> list[GroupHom]:
    out = []
    for images in _all_maps(source, target, budget, f"maps {source.name} -> {target.name}"):
        h = GroupHom(source, target, images)
        if validate_group_hom(h).ok:
            out.append(h)
    return out


# -- sub and quotient groups -------------------------------------------------------


def subgroup(g: FinAbGroup, members: Sequence[int], name: str = "") -> tuple[FinAbGroup, GroupHom]:
    """The subgroup on ``members`` (sorted) with its inclusion; members must be closed."""
    members = sorted(set(int(m) for m in members))
    pos = {m: i for i, m in enumerate(members)}
    try:
        add = [[pos[int(g.add[a, b])] for b in members] for a in members]
    except KeyError:
        raise MalformedError("subset is not closed under addition") from None
    h = FinAbGroup([g.elements[m] for m in members], add, pos[g.zero], name=name)
    return h, GroupHom(h, g, members)


def quotient(g: FinAbGroup, members: Sequence[int], name: str = "") -> tuple[FinAbGroup, GroupHom]:
    """``g / members`` with its projection; cosets are named ``[rep]`` by their first element."""
    sub = sorted(set(int(m) for m in members))
    coset_of = {}
    reps = []
    for a in range(g.order):
        if a in coset_of:
            continue
        k = len(reps)
        reps.append(a)
        for s in sub:
            coset_of[int(g.add[a, s])] = k
    add = [[coset_of[int(g.add[a, b])] for b in reps] for a in reps]
    q = FinAbGroup([f"[{g.elements[a]}]" for a in reps], add, coset_of[g.zero], name=name)
    return q, GroupHom(g, q, [coset_of[a] for a in range(g.order)])
