"""The fixture file format: JSON with named sections and explicit tables.

Sections, all optional: ``categories``, ``groups``, ``rings``, ``functors``,
``bipresheaves``, ``modules``, ``morphisms``, ``universes``. Entries refer to
each other by name, and names are unique across the whole document.

The reader keeps the line and column of every value so that both syntax and
semantic errors can be located. Python's ``json`` module reports positions
only for syntax errors, which is why values are read here by hand.
"""

from __future__ import annotations

import json
import re
from collections.abc import Mapping
from dataclasses import dataclass, field
from json.decoder import scanstring
from typing import Any

import numpy as np

from . import algebra
from ._report import DEFAULT_BUDGET, LingrothError
from .algebra import GroupHom, RingHom
from .bipresheaf import AbBipresheaf, BipresheafMorphism, ModuleBipresheaf, RingBipresheaf
from .equivalence import GrAbBipresheaf, all_generators
from .audit import Universe
from .fincat import FinCategory
from .functors import AbValuedFunctor, ModuleStructure, RingValuedFunctor
from .grothendieck import GrCategory

SECTIONS = ("categories", "groups", "rings", "functors", "bipresheaves", "modules", "morphisms", "universes")


@dataclass(frozen=True)
class SpecError:
    line: int
    col: int
    message: str

    def __str__(self):
        return f"{self.line}:{self.col}: {self.message}"


class SpecErrors(LingrothError):
    def __init__(self, errors: list[SpecError]):
        self.errors = list(errors)
        super().__init__("\n".join(str(e) for e in self.errors))


# -- located JSON ------------------------------------------------------------------

_NUMBER = re.compile(r"-?(?:0|[1-9]\d*)(?:\.\d+)?(?:[eE][-+]?\d+)?")
_WS = re.compile(r"[ \t\n\r]*")


class _Syntax(Exception):
    def __init__(self, pos, message):
        self.pos, self.message = pos, message


class _Reader:
    """Recursive-descent JSON reader recording the offset of every value by path."""

    def __init__(self, text: str):
        self.text = text
        self.where: dict[tuple, int] = {}

    def ws(self, i):
        return _WS.match(self.text, i).end()

    def value(self, i, path):
        i = self.ws(i)
        self.where[path] = i
        t = self.text
        if i >= len(t):
            raise _Syntax(i, "unexpected end of input")
        c = t[i]
        if c == "{":
            return self.obj(i + 1, path)
        if c == "[":
            return self.arr(i + 1, path)
        if c == '"':
            return self.string(i)
        for word, val in (("true", True), ("false", False), ("null", None)):
            if t.startswith(word, i):
                return val, i + len(word)
        m = _NUMBER.match(t, i)
        if m:
            s = m.group()
            return (float(s) if any(ch in s for ch in ".eE") else int(s)), m.end()
        raise _Syntax(i, f"unexpected character {c!r}")

    def string(self, i):
        try:
            return scanstring(self.text, i + 1)
        except json.JSONDecodeError as e:
            raise _Syntax(e.pos, e.msg) from None

    def obj(self, i, path):
        out: dict[str, Any] = {}
        i = self.ws(i)
        if self.text.startswith("}", i):
            return out, i + 1
        while True:
            i = self.ws(i)
            if not self.text.startswith('"', i):
                raise _Syntax(i, "expected a string key")
            key_at = i
            key, i = self.string(i)
            if key in out:
                raise _Syntax(key_at, f"duplicate key {key!r}")
            i = self.ws(i)
            if not self.text.startswith(":", i):
                raise _Syntax(i, "expected ':'")
            out[key], i = self.value(i + 1, path + (key,))
            i = self.ws(i)
            if self.text.startswith(",", i):
                i += 1
                continue
            if self.text.startswith("}", i):
                return out, i + 1
            raise _Syntax(i, "expected ',' or '}'")

    def arr(self, i, path):
        out: list = []
        i = self.ws(i)
        if self.text.startswith("]", i):
            return out, i + 1
        while True:
            v, i = self.value(i, path + (len(out),))
            out.append(v)
            i = self.ws(i)
            if self.text.startswith(",", i):
                i += 1
                continue
            if self.text.startswith("]", i):
                return out, i + 1
            raise _Syntax(i, "expected ',' or ']'")


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


# -- document --------------------------------------------------------------------


@dataclass
class SpecDocument:
    """Built objects plus their canonical raw form, both keyed by section then name."""

    objects: dict[str, dict[str, Any]] = field(default_factory=lambda: {s: {} for s in SECTIONS})
    raw: dict[str, dict[str, Any]] = field(default_factory=dict)

    def lookup(self, name: str) -> tuple[str, Any]:
        for section in SECTIONS:
            if name in self.objects[section]:
                return section, self.objects[section][name]
        raise KeyError(name)

    def __getitem__(self, name: str):
        return self.lookup(name)[1]

    def __contains__(self, name: str) -> bool:
        return any(name in self.objects[s] for s in SECTIONS)

    def names(self, section: str) -> list[str]:
        return list(self.objects[section])

    def items(self):
        """(name, object) pairs across all sections, in section order."""
        for section in SECTIONS:
            yield from self.objects[section].items()

    def counts(self) -> dict[str, int]:
        return {s: len(self.objects[s]) for s in SECTIONS if self.objects[s]}

    def __eq__(self, other):
        if not isinstance(other, SpecDocument):
            return NotImplemented
        return self.raw == other.raw


class _Failed(Exception):
    """An entry could not be built; its own error has already been recorded."""


class _Bad(Exception):
    def __init__(self, path, message):
        self.path, self.message = path, message


class _Builder:
    def __init__(self, data: Mapping, where: Mapping[tuple, int] | None, text: str):
        self.data, self.where, self.text = data, where or {}, text
        self.errors: list[SpecError] = []
        self.doc = SpecDocument()
        self.section_of: dict[str, str] = {}
        self.state: dict[str, str] = {}  # name -> building | done | failed

    # errors --------------------------------------------------------------

    def locate(self, path) -> tuple[int, int]:
        path = tuple(path)
        while path and path not in self.where:
            path = path[:-1]
        if path in self.where:
            return _line_col(self.text, self.where[path])
        return (0, 0)

    def error(self, path, message):
        line, col = self.locate(path)
        self.errors.append(SpecError(line, col, message))

    # driver --------------------------------------------------------------

    def run(self) -> SpecDocument:
        if not isinstance(self.data, Mapping):
            self.error((), "document must be a JSON object")
            return self.doc
        for key, section in self.data.items():
            if key not in SECTIONS:
                self.error((key,), f"unknown section {key!r}")
                continue
            if not isinstance(section, Mapping):
                self.error((key,), f"section {key!r} must be an object")
                continue
            for name in section:
                if name in self.section_of:
                    self.error((key, name), f"duplicate name {name!r} (already defined in {self.section_of[name]})")
                    continue
                self.section_of[name] = key
        for section in SECTIONS:
            for name in list(self.data.get(section, {}) if isinstance(self.data.get(section), Mapping) else ()):
                if self.section_of.get(name) == section:
                    try:
                        self.get(name, (section, name))
                    except _Failed:
                        pass
        # keep document order within each section
        for section in SECTIONS:
            order = [n for n in (self.data.get(section) or {}) if n in self.doc.objects[section]]
            self.doc.objects[section] = {n: self.doc.objects[section][n] for n in order}
            raws = {n: self.doc.raw[section][n] for n in order} if section in self.doc.raw else {}
            if raws:
                self.doc.raw[section] = raws
            else:
                self.doc.raw.pop(section, None)
        return self.doc

    def get(self, name, ref_path, want: tuple[str, ...] | None = None):
        """Build (if needed) and return the entry called ``name``."""
        if not isinstance(name, str):
            self.error(ref_path, f"expected a name, got {name!r}")
            raise _Failed
        section = self.section_of.get(name)
        if section is None:
            self.error(ref_path, f"unresolved reference {name!r}")
            raise _Failed
        if want is not None and section not in want:
            self.error(ref_path, f"{name!r} is in {section}, expected one of {', '.join(want)}")
            raise _Failed
        st = self.state.get(name)
        if st == "done":
            return self.doc.objects[section][name]
        if st == "failed":
            raise _Failed
        if st == "building":
            self.error(ref_path, f"circular reference through {name!r}")
            raise _Failed
        self.state[name] = "building"
        path = (section, name)
        spec = self.data[section][name]
        try:
            obj, raw = getattr(self, "build_" + section)(name, spec, path)
        except _Bad as e:
            self.error(e.path, e.message)
            self.state[name] = "failed"
            raise _Failed from None
        except _Failed:
            self.state[name] = "failed"
            raise
        except (LingrothError, KeyError, TypeError, ValueError, IndexError) as e:
            msg = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
            if isinstance(e, KeyError):
                msg = f"missing or unknown key {msg!r}"
            self.error(path, f"{section[:-1] if section != 'categories' else 'category'} {name!r}: {msg}")
            self.state[name] = "failed"
            raise _Failed from None
        self.state[name] = "done"
        self.doc.objects[section][name] = obj
        self.doc.raw.setdefault(section, {})[name] = raw
        return obj

    # helpers -------------------------------------------------------------

    def need(self, spec, key, path, kind=None):
        if not isinstance(spec, Mapping):
            raise _Bad(path, "expected an object")
        if key not in spec:
            raise _Bad(path, f"missing field {key!r}")
        v = spec[key]
        if kind is not None and not isinstance(v, kind):
            raise _Bad(path + (key,), f"field {key!r} has the wrong type")
        return v

    def elem_map(self, raw, source, target, path, cls=GroupHom):
        if not isinstance(raw, Mapping):
            raise _Bad(path, "expected an element map")
        for k, v in raw.items():
            if k not in source.elements:
                raise _Bad(path + (k,), f"{k!r} is not an element of the source")
            if not isinstance(v, str) or v not in target.elements:
                raise _Bad(path + (k,), f"{v!r} is not an element of the target")
        missing = [e for e in source.elements if e not in raw]
        if missing:
            raise _Bad(path, f"map is not total: no image for {missing[0]!r}")
        return cls(source, target, dict(raw))

    # sections ------------------------------------------------------------

    def build_categories(self, name, spec, path):
        objects = self.need(spec, "objects", path, list)
        morphisms = self.need(spec, "morphisms", path, Mapping)
        identities = self.need(spec, "identities", path, Mapping)
        entries = spec.get("composition", [])
        mor = {}
        for m, ends in morphisms.items():
            if not (isinstance(ends, list) and len(ends) == 2 and all(isinstance(e, str) for e in ends)):
                raise _Bad(path + ("morphisms", m), "a morphism is [domain, codomain]")
            mor[m] = tuple(ends)
        table = {}
        for k, e in enumerate(entries):
            if not (isinstance(e, list) and len(e) == 3 and all(isinstance(v, str) for v in e)):
                raise _Bad(path + ("composition", k), "a composition entry is [g, f, g∘f]")
            if (e[0], e[1]) in table:
                raise _Bad(path + ("composition", k), f"composition of ({e[0]}, {e[1]}) given twice")
            for m in e:
                if m not in mor:
                    raise _Bad(path + ("composition", k), f"unresolved reference {m!r}")
            table[(e[0], e[1])] = e[2]
        defaults = {}
        for m, (d, c) in mor.items():
            if d in identities and c in identities:
                defaults[(m, identities[d])] = m
                defaults[(identities[c], m)] = m
        for key, v in defaults.items():
            table.setdefault(key, v)
        cat = FinCategory(objects, mor, identities, table, name=name)
        explicit = sorted([g, f, h] for (g, f), h in table.items() if defaults.get((g, f)) != h)
        raw = {
            "objects": list(objects),
            "morphisms": {m: list(e) for m, e in mor.items()},
            "identities": dict(identities),
            "composition": explicit,
        }
        return cat, raw

    def _resolver(self, path):
        def resolve(ref):
            return self.get(ref, path, ("rings", "groups"))

        return resolve

    def build_rings(self, name, spec, path):
        return algebra.build_ring(spec, self._resolver(path), name=name), json.loads(json.dumps(spec))

    def build_groups(self, name, spec, path):
        return algebra.build_group(spec, self._resolver(path), name=name), json.loads(json.dumps(spec))

    def build_functors(self, name, spec, path):
        kind = self.need(spec, "kind", path, str)
        if kind not in ("ring", "group"):
            raise _Bad(path + ("kind",), "functor kind must be 'ring' or 'group'")
        base = self.get(self.need(spec, "base", path), path + ("base",), ("categories",))
        variance = self.need(spec, "variance", path, str)
        if variance not in ("contravariant", "covariant"):
            raise _Bad(path + ("variance",), "variance must be 'contravariant' or 'covariant'")
        obj_names = self.need(spec, "objects", path, Mapping)
        maps = spec.get("morphisms", {})
        if not isinstance(maps, Mapping):
            raise _Bad(path + ("morphisms",), "expected an object")
        values = {}
        for x in base.objects:
            if x not in obj_names:
                raise _Bad(path + ("objects",), f"no value at object {x!r}")
        for x, ref in obj_names.items():
            if x not in base.objects:
                raise _Bad(path + ("objects", x), f"{x!r} is not an object of {base.name}")
            values[x] = self.get(ref, path + ("objects", x), ("rings",) if kind == "ring" else ("groups",))
        for f in maps:
            if f not in base.morphisms:
                raise _Bad(path + ("morphisms", f), f"{f!r} is not a morphism of {base.name}")
        cls, hom = (RingValuedFunctor, RingHom) if kind == "ring" else (AbValuedFunctor, GroupHom)
        homs = {}
        for f, (d, c) in base.morphisms.items():
            s, t = (c, d) if variance == "contravariant" else (d, c)
            if f in maps:
                homs[f] = self.elem_map(maps[f], values[s], values[t], path + ("morphisms", f), hom)
            elif base.is_identity(f):
                homs[f] = hom(values[s], values[t], list(range(values[s].order)))
            else:
                raise _Bad(path + ("morphisms",), f"no map given for {f!r}")
        F = cls(base, variance, values, homs, name=name)
        raw_maps = {}
        for f, h in homs.items():
            if base.is_identity(f) and h.source == h.target and (h.map == np.arange(h.source.order)).all():
                continue
            raw_maps[f] = h.as_dict()
        raw = {"kind": kind, "base": spec["base"], "variance": variance, "objects": dict(obj_names), "morphisms": raw_maps}
        return F, raw

    def _connecting(self, spec, path, first, second, cls):
        maps = self.need(spec, "connecting", path, Mapping)
        out = {}
        for x in first.base.objects:
            if x not in maps:
                raise _Bad(path + ("connecting",), f"no connecting map at {x!r}")
            out[x] = self.elem_map(maps[x], first.objects[x], second.objects[x], path + ("connecting", x), cls)
        return out

    def build_bipresheaves(self, name, spec, path):
        kind = self.need(spec, "kind", path, str)
        if kind == "gr":
            return self._build_gr(name, spec, path)
        if kind not in ("ring", "group"):
            raise _Bad(path + ("kind",), "bipresheaf kind must be 'ring', 'group' or 'gr'")
        first = self.get(self.need(spec, "first", path), path + ("first",), ("functors",))
        second = self.get(self.need(spec, "second", path), path + ("second",), ("functors",))
        want = RingValuedFunctor if kind == "ring" else AbValuedFunctor
        for label, F in (("first", first), ("second", second)):
            if not isinstance(F, want):
                raise _Bad(path + (label,), f"{F.name!r} is not a {kind}-valued functor")
        cls = RingHom if kind == "ring" else GroupHom
        conn = self._connecting(spec, path, first, second, cls)
        B = (RingBipresheaf if kind == "ring" else AbBipresheaf)(first, second, conn, name=name)
        raw = {
            "kind": kind,
            "first": spec["first"],
            "second": spec["second"],
            "connecting": {x: h.as_dict() for x, h in conn.items()},
        }
        return B, raw

    def _build_gr(self, name, spec, path):
        over = self.get(self.need(spec, "over", path), path + ("over",), ("bipresheaves",))
        if not isinstance(over, RingBipresheaf):
            raise _Bad(path + ("over",), f"{over.name!r} is not a ring bipresheaf")
        G = GrCategory(over)
        sides = {}
        raw = {"kind": "gr", "over": spec["over"]}
        for label in ("first", "second"):
            part = self.need(spec, label, path, Mapping)
            p = path + (label,)
            groups = {}
            obj_names = self.need(part, "objects", p, Mapping)
            for x in over.base.objects:
                if x not in obj_names:
                    raise _Bad(p + ("objects",), f"no value at object {x!r}")
                groups[x] = self.get(obj_names[x], p + ("objects", x), ("groups",))
            sides[label] = (groups, part.get("maps", []), p, dict(obj_names))
        gens = {"first": {}, "second": {}}
        index = {}
        for t in all_generators(G):
            f, r1, r2 = t
            x, y = G.base.morphisms[f]
            index[(f, G.R1(x).elements[r1], G.R2(y).elements[r2])] = t
        for label, (groups, maps, p, _) in sides.items():
            if not isinstance(maps, list):
                raise _Bad(p + ("maps",), "expected a list")
            for k, entry in enumerate(maps):
                q = p + ("maps", k)
                key = (self.need(entry, "f", q, str), self.need(entry, "r1", q, str), self.need(entry, "r2", q, str))
                if key not in index:
                    raise _Bad(q, f"({key[1]}, {key[2]})@{key[0]} is not a generator of {G.name}")
                t = index[key]
                if t in gens[label]:
                    raise _Bad(q, f"generator ({key[1]}, {key[2]})@{key[0]} given twice")
                x, y = G.base.morphisms[t[0]]
                s, d = (y, x) if label == "first" else (x, y)
                gens[label][t] = self.elem_map(self.need(entry, "map", q), groups[s], groups[d], q + ("map",))
            for t in all_generators(G):
                if t not in gens[label]:
                    x, y = G.base.morphisms[t[0]]
                    s, d = (y, x) if label == "first" else (x, y)
                    gens[label][t] = algebra.zero_hom(groups[s], groups[d])
        conn_maps = self.need(spec, "connecting", path, Mapping)
        eta = {}
        for x in over.base.objects:
            if x not in conn_maps:
                raise _Bad(path + ("connecting",), f"no connecting map at {x!r}")
            eta[x] = self.elem_map(conn_maps[x], sides["first"][0][x], sides["second"][0][x], path + ("connecting", x))
        F = GrAbBipresheaf(G, sides["first"][0], sides["second"][0], gens["first"], gens["second"], eta, name=name)
        for label, (groups, _, _, obj_names) in sides.items():
            entries = []
            for t in all_generators(G):
                h = gens[label][t]
                if (h.map == h.target.zero).all():
                    continue
                f, r1, r2 = t
                x, y = G.base.morphisms[f]
                entries.append({"f": f, "r1": G.R1(x).elements[r1], "r2": G.R2(y).elements[r2], "map": h.as_dict()})
            raw[label] = {"objects": obj_names, "maps": entries}
        raw["connecting"] = {x: h.as_dict() for x, h in eta.items()}
        return F, raw

    def build_modules(self, name, spec, path):
        kind = self.need(spec, "kind", path, str)
        if kind == "presheaf":
            scalars = self.get(self.need(spec, "scalars", path), path + ("scalars",), ("functors",))
            carrier = self.get(self.need(spec, "carrier", path), path + ("carrier",), ("functors",))
            if not isinstance(scalars, RingValuedFunctor):
                raise _Bad(path + ("scalars",), f"{scalars.name!r} is not ring valued")
            if not isinstance(carrier, AbValuedFunctor):
                raise _Bad(path + ("carrier",), f"{carrier.name!r} is not group valued")
            side = spec.get("side", "right")
            action = self.need(spec, "action", path, Mapping)
            tables = {}
            for x in scalars.base.objects:
                if x not in action:
                    raise _Bad(path + ("action",), f"no action table at {x!r}")
                M, R = carrier.objects.get(x), scalars.objects[x]
                rows = action[x]
                if M is None or not isinstance(rows, Mapping):
                    raise _Bad(path + ("action", x), "expected an action table")
                for m in M.elements:
                    row = rows.get(m)
                    if not isinstance(row, Mapping):
                        raise _Bad(path + ("action", x), f"no row for {m!r}")
                    for r in R.elements:
                        v = row.get(r)
                        if v not in M.elements:
                            raise _Bad(path + ("action", x, m), f"action not total or out of range at ({m}, {r})")
                tables[x] = rows
            mod = ModuleStructure(scalars, carrier, tables, side=side, name=name)
            raw = {
                "kind": kind,
                "scalars": spec["scalars"],
                "carrier": spec["carrier"],
                "side": side,
                "action": {x: mod.action_dict(x) for x in scalars.base.objects},
            }
            return mod, raw
        if kind == "bipresheaf":
            over = self.get(self.need(spec, "over", path), path + ("over",), ("bipresheaves",))
            if not isinstance(over, RingBipresheaf):
                raise _Bad(path + ("over",), f"{over.name!r} is not a ring bipresheaf")
            M1 = self.get(self.need(spec, "first", path), path + ("first",), ("modules",))
            M2 = self.get(self.need(spec, "second", path), path + ("second",), ("modules",))
            for label, M in (("first", M1), ("second", M2)):
                if not isinstance(M, ModuleStructure):
                    raise _Bad(path + (label,), f"{M.name!r} is not a presheaf of modules")
            conn = self._connecting(spec, path, M1.carrier, M2.carrier, GroupHom)
            B = ModuleBipresheaf(over, M1, M2, conn, name=name)
            raw = {
                "kind": kind,
                "over": spec["over"],
                "first": spec["first"],
                "second": spec["second"],
                "connecting": {x: h.as_dict() for x, h in conn.items()},
            }
            return B, raw
        raise _Bad(path + ("kind",), "module kind must be 'presheaf' or 'bipresheaf'")

    def build_morphisms(self, name, spec, path):
        src = self.get(self.need(spec, "source", path), path + ("source",), ("bipresheaves", "modules"))
        tgt = self.get(self.need(spec, "target", path), path + ("target",), ("bipresheaves", "modules"))
        for label, B in (("source", src), ("target", tgt)):
            if not isinstance(B, (AbBipresheaf, ModuleBipresheaf)):
                raise _Bad(path + (label,), f"{B.name!r} is not a group or module bipresheaf")
        s1, s2, _ = src.parts()
        t1, t2, _ = tgt.parts()
        comps = {}
        for label, a, b in (("first", s1, t1), ("second", s2, t2)):
            maps = self.need(spec, label, path, Mapping)
            comps[label] = {}
            for x in src.base.objects:
                if x not in maps:
                    raise _Bad(path + (label,), f"no component at {x!r}")
                comps[label][x] = self.elem_map(maps[x], a.objects[x], b.objects[x], path + (label, x))
        m = BipresheafMorphism(src, tgt, comps["first"], comps["second"], name=name)
        raw = {
            "source": spec["source"],
            "target": spec["target"],
            "first": {x: h.as_dict() for x, h in comps["first"].items()},
            "second": {x: h.as_dict() for x, h in comps["second"].items()},
        }
        return m, raw

    def build_universes(self, name, spec, path):
        base = self.get(self.need(spec, "base", path), path + ("base",), ("categories",))
        names = self.need(spec, "groups", path, list)
        groups = [self.get(g, path + ("groups", k), ("groups",)) for k, g in enumerate(names)]
        budget = spec.get("budget", DEFAULT_BUDGET)
        if not isinstance(budget, int) or isinstance(budget, bool) or budget <= 0:
            raise _Bad(path + ("budget",), "budget must be a positive integer")
        raw = {"base": spec["base"], "groups": list(names), "budget": budget}
        objects = None
        if "objects" in spec:
            refs = self.need(spec, "objects", path, list)
            objects = [self.get(b, path + ("objects", k), ("bipresheaves",)) for k, b in enumerate(refs)]
            for k, B in enumerate(objects):
                if not isinstance(B, AbBipresheaf) or B.base != base:
                    raise _Bad(path + ("objects", k), f"{refs[k]!r} is not a group bipresheaf on {base.name}")
            raw["objects"] = list(refs)
        return Universe(base, groups, budget, name=name, objects=objects), raw


def build_document(data: Mapping, _where=None, _text: str = "") -> SpecDocument:
    """Build from already-decoded data (no source locations)."""
    b = _Builder(data, _where, _text)
    doc = b.run()
    if b.errors:
        raise SpecErrors(b.errors)
    return doc


def decode_spec(data: bytes) -> str:
    """UTF-8 decode, turning a bad byte into a located :class:`SpecErrors`."""
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        before = data[: e.start].decode("utf-8", "replace")
        line = before.count("\n") + 1
        col = len(before) - (before.rfind("\n") + 1) + 1
        raise SpecErrors([SpecError(line, col, f"invalid UTF-8 byte 0x{data[e.start]:02x}")]) from None


def parse_spec(text: str) -> SpecDocument:
    """Parse and build a document; raises :class:`SpecErrors` listing every located error.

    A syntax error stops the read at that point. Semantic errors are
    collected entry by entry; an entry depending on a broken one is skipped
    without a second report.
    """
    if not text.strip():
        return SpecDocument()
    r = _Reader(text)
    try:
        data, end = r.value(0, ())
        end = r.ws(end)
        if end != len(text):
            raise _Syntax(end, "trailing content after the document")
    except _Syntax as e:
        line, col = _line_col(text, e.pos)
        raise SpecErrors([SpecError(line, col, e.message)]) from None
    return build_document(data, r.where, text)


def to_data(doc: SpecDocument) -> dict:
    return {s: doc.raw[s] for s in SECTIONS if doc.raw.get(s)}


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def serialize(value: Any) -> str:
    """Canonical text for a document or any report with ``to_dict``."""
    if isinstance(value, SpecDocument):
        return dumps(to_data(value))
    if hasattr(value, "to_dict"):
        return dumps(value.to_dict())
    return dumps(value)
