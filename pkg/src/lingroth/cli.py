"""Command-line entry point: ``lingroth [options] <command> ...``.

Exit status is 0 when every check passes, 1 when checks ran and found
violations or witnesses, and 2 for input or resource errors. Nothing runs
until the whole fixture file has parsed and the named objects have validated.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Any

from . import algebra
from . import fincat
from ._report import DEFAULT_BUDGET, BudgetExceeded, LingrothError, ValidationReport, Violation
from .algebra import FinAbGroup, FinCommRing
from .audit import Universe, find_nonabelian_witness
from .bipresheaf import (
    AbBipresheaf,
    BipresheafMorphism,
    ModuleBipresheaf,
    RingBipresheaf,
    replay_bipresheaf,
    replay_bipresheaf_morphism,
    validate_bipresheaf,
    validate_bipresheaf_morphism,
)
from .equivalence import (
    GrAbBipresheaf,
    StructureFailureReport,
    phi,
    psi,
    replay_gr,
    roundtrip_check,
    validate_gr_bipresheaf,
)
from .fincat import FinCategory, validate_category
from .functors import ModuleStructure, _Functor, replay_functor, replay_module, validate_functor, validate_module_structure
from .grothendieck import GrCategory, check_sum_id, check_well_definedness, summary
from .specfile import SpecDocument, SpecErrors, decode_spec, dumps, parse_spec


class InputError(LingrothError):
    """Bad command-line input: unknown names, wrong kinds, invalid objects."""

    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report


def _parts(B) -> ValidationReport:
    """Validity of everything a bipresheaf is built from, but not of its own laws."""
    report = ValidationReport(f"components of {B.name}")
    if isinstance(B, ModuleBipresheaf):
        report.extend(_parts(B.over), prefix="over.")
        report.extend(_module(B.M1), prefix="M1.")
        report.extend(_module(B.M2), prefix="M2.")
    elif isinstance(B, (RingBipresheaf, AbBipresheaf)):
        first, second, _ = B.parts()
        report.extend(validate_functor(first), prefix="R1." if isinstance(B, RingBipresheaf) else "A1.")
        report.extend(validate_functor(second), prefix="R2." if isinstance(B, RingBipresheaf) else "A2.")
    return report


def _module(M: ModuleStructure) -> ValidationReport:
    report = ValidationReport(f"module {M.name}")
    report.extend(validate_functor(M.scalars), prefix="scalars.")
    report.extend(validate_functor(M.carrier), prefix="carrier.")
    if report.ok:
        report.extend(validate_module_structure(M))
    return report


def validate_object(obj: Any, budget: int = DEFAULT_BUDGET) -> ValidationReport:
    """Run the validator matching the type of ``obj``, components included.

    Component violations carry a prefix naming the component (``R2.``,
    ``M1.``, ``over.``...); the object's own laws are unprefixed.
    """
    if isinstance(obj, FinCategory):
        return validate_category(obj)
    if isinstance(obj, FinCommRing):
        return algebra.validate_ring(obj)
    if isinstance(obj, FinAbGroup):
        return algebra.validate_group(obj)
    if isinstance(obj, _Functor):
        return validate_functor(obj)
    if isinstance(obj, ModuleStructure):
        return _module(obj)
    if isinstance(obj, (RingBipresheaf, AbBipresheaf, ModuleBipresheaf)):
        report = _parts(obj)
        report.subject = f"bipresheaf {obj.name}"
        if report.ok or not isinstance(obj, ModuleBipresheaf):
            report.extend(validate_bipresheaf(obj))
        return report
    if isinstance(obj, BipresheafMorphism):
        report = ValidationReport(f"morphism {obj.name}")
        report.extend(validate_object(obj.source, budget), prefix="source.")
        report.extend(validate_object(obj.target, budget), prefix="target.")
        report.extend(validate_bipresheaf_morphism(obj))
        return report
    if isinstance(obj, GrAbBipresheaf):
        report = ValidationReport(f"gr bipresheaf {obj.name}")
        report.extend(validate_object(obj.G.R, budget), prefix="over.")
        report.extend(validate_gr_bipresheaf(obj, budget))
        return report
    if isinstance(obj, Universe):
        report = ValidationReport(f"universe {obj.name}")
        report.extend(validate_category(obj.base), prefix="base.")
        for g in obj.groups:
            report.extend(algebra.validate_group(g), prefix=f"group.{g.name}.")
        return report
    raise InputError(f"no validator for {type(obj).__name__}")


def replay_object(obj: Any, v: Violation) -> bool:
    """Re-evaluate a violation reported by :func:`validate_object`; True if it still fails."""
    head, _, rest = v.law.partition(".")

    def inner(law):
        return Violation(law, v.witness, v.lhs, v.rhs)

    if isinstance(obj, FinCategory):
        return fincat.replay(obj, v)
    if isinstance(obj, (FinCommRing, FinAbGroup)):
        return not validate_object(obj).ok
    if isinstance(obj, _Functor):
        return replay_functor(obj, v)
    if isinstance(obj, ModuleStructure):
        if head in ("scalars", "carrier"):
            return replay_functor(getattr(obj, head), inner(rest))
        return replay_module(obj, v)
    if isinstance(obj, (RingBipresheaf, AbBipresheaf, ModuleBipresheaf)):
        parts = {"R1": getattr(obj, "R1", None), "R2": getattr(obj, "R2", None), "A1": getattr(obj, "A1", None), "A2": getattr(obj, "A2", None)}
        if isinstance(obj, ModuleBipresheaf):
            parts.update({"over": obj.over, "M1": obj.M1, "M2": obj.M2})
        if head in parts and parts[head] is not None:
            return replay_object(parts[head], inner(rest))
        return replay_bipresheaf(obj, v)
    if isinstance(obj, BipresheafMorphism):
        if head in ("source", "target"):
            return replay_object(getattr(obj, head), inner(rest))
        return replay_bipresheaf_morphism(obj, v)
    if isinstance(obj, GrAbBipresheaf):
        if head == "over":
            return replay_object(obj.G.R, inner(rest))
        if rest.startswith("hom.") or head == "connecting":
            return not validate_gr_bipresheaf(obj).ok
        return replay_gr(obj, v)
    if isinstance(obj, Universe):
        return not validate_object(obj).ok
    raise InputError(f"no replay for {type(obj).__name__}")


# -- commands ----------------------------------------------------------------------


def _get(doc: SpecDocument, name: str, *types):
    if name not in doc:
        raise InputError(f"unknown name {name!r}")
    obj = doc[name]
    if types and not isinstance(obj, types):
        kinds = " or ".join(t.__name__ for t in types)
        raise InputError(f"{name!r} is a {type(obj).__name__}, expected {kinds}")
    return obj


def _require(report: ValidationReport, what: str):
    if not report.ok:
        raise InputError(f"{what} is not valid", report.to_dict())


def _gr(doc, name, budget, strict=True) -> GrCategory:
    B = _get(doc, name, RingBipresheaf)
    _require(validate_object(B, budget) if strict else _parts(B), f"ring bipresheaf {name!r}")
    return GrCategory(B)


def cmd_validate(doc, args):
    report = validate_object(_get(doc, args.name), args.budget)
    return (0 if report.ok else 1), report.to_dict()


def cmd_gr(doc, args):
    return 0, summary(_gr(doc, args.bipresheaf, args.budget), args.budget)


def cmd_sum_id(doc, args):
    G = _gr(doc, args.bipresheaf, args.budget)
    mode = "include_zero_morphism" if args.include_zero else "exclude_zero_morphism"
    rep = check_sum_id(G, mode, args.budget)
    return (0 if rep.ok else 1), rep.to_dict()


def cmd_well_defined(doc, args):
    rep = check_well_definedness(_gr(doc, args.bipresheaf, args.budget, strict=False), args.budget)
    return (0 if rep.ok else 1), rep.to_dict()


def _module_over(doc, args):
    M = _get(doc, args.module, ModuleBipresheaf)
    G = _gr(doc, args.over, args.budget)
    if M.over != G.R:
        raise InputError(f"{args.module!r} is not a module bipresheaf over {args.over!r}")
    _require(validate_object(M, args.budget), f"module bipresheaf {args.module!r}")
    return M, G


def _gr_table(F: GrAbBipresheaf) -> dict:
    G = F.G
    return {
        "first": {x: F.F1[x].name or str(F.F1[x].order) for x in G.objects},
        "second": {x: F.F2[x].name or str(F.F2[x].order) for x in G.objects},
        "generators": [
            {"generator": F.generator_name(t), "first": F.gen1[t].as_dict(), "second": F.gen2[t].as_dict()} for t in F.gen1
        ],
    }


def cmd_psi(doc, args):
    M, G = _module_over(doc, args)
    F = psi(M, G)
    rep = validate_gr_bipresheaf(F, args.budget)
    return (0 if rep.ok else 1), {"psi": _gr_table(F), "validation": rep.to_dict()}


def cmd_phi(doc, args):
    F = _get(doc, args.name, GrAbBipresheaf)
    _require(validate_object(F, args.budget), f"gr bipresheaf {args.name!r}")
    out = phi(F)
    if isinstance(out, StructureFailureReport):
        return 1, out.to_dict()
    tables = {
        "M1": {x: out.M1.action_dict(x) for x in F.G.objects},
        "M2": {x: out.M2.action_dict(x) for x in F.G.objects},
    }
    return 0, {"subject": out.name, "structure_failure": False, "actions": tables}


def cmd_roundtrip(doc, args):
    M, G = _module_over(doc, args)
    rep = roundtrip_check(M, G, args.budget)
    return (0 if rep.ok else 1), rep.to_dict()


def cmd_audit(doc, args):
    u = _get(doc, args.universe, Universe)
    _require(validate_object(u), f"universe {args.universe!r}")
    if args.budget_given:
        u = Universe(u.base, u.groups, args.budget, name=u.name, objects=u.objects)
    rep = find_nonabelian_witness(u, workers=args.workers)
    return (0 if rep.ok else 1), rep.to_dict()


COMMANDS = {
    "validate": cmd_validate,
    "gr": cmd_gr,
    "sum-id": cmd_sum_id,
    "well-defined": cmd_well_defined,
    "psi": cmd_psi,
    "phi": cmd_phi,
    "roundtrip": cmd_roundtrip,
    "audit": cmd_audit,
}


def _global_options(p: argparse.ArgumentParser, suppress: bool) -> None:
    def default(v):
        return argparse.SUPPRESS if suppress else v

    p.add_argument("--spec", type=Path, default=default(None), help="fixture file (default: the packaged corpus)")
    p.add_argument("--format", choices=("text", "json"), default=default("text"))
    p.add_argument("--budget", type=int, default=default(None), help=f"enumeration budget per check (default {DEFAULT_BUDGET})")
    p.add_argument("--workers", type=int, default=default(1), help="worker processes for the audit")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lingroth", description="Check bipresheaves, Gr and the module equivalence on finite fixtures.")
    _global_options(p, suppress=False)
    # the same flags are accepted after the subcommand too
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name):
        return sub.add_parser(name, parents=[common])

    add("validate").add_argument("name")
    add("gr").add_argument("bipresheaf")
    s = add("sum-id")
    s.add_argument("bipresheaf")
    s.add_argument("--include-zero", action="store_true")
    add("well-defined").add_argument("bipresheaf")
    for name in ("psi", "roundtrip"):
        s = add(name)
        s.add_argument("module")
        s.add_argument("--over", required=True)
    add("phi").add_argument("name")
    add("audit").add_argument("--universe", required=True)
    return p


def _text(value: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v, ensure_ascii=False) if not isinstance(v, str) else v}")
        return lines
    if isinstance(value, list):
        lines = []
        for v in value:
            if isinstance(v, (dict, list)):
                sub = _text(v, indent + 1)
                lines.append(f"{pad}- {sub[0].strip()}" if sub else f"{pad}-")
                lines.extend(sub[1:])
            else:
                lines.append(f"{pad}- {v}")
        return lines
    return [f"{pad}{value}"]


def _headline(command: str, status: int, report: dict) -> str:
    word = {0: "pass", 1: "fail", 2: "error"}[status]
    if status == 2:
        return f"{word}: {report.get('error', 'input rejected')}"
    if command == "sum-id":
        return f"{word}, {report['checked']} families checked"
    if command == "audit":
        scope = "" if report["exhaustive"] else " (not exhaustive: budget hit)"
        return f"{word}, {sum(report['checked'].values())} axiom checks, {len(report['findings'])} findings{scope}"
    if "checked" in report:
        return f"{word}, {report['checked']} checks"
    return word


def emit(command: str, status: int, report: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(dumps({"command": command, "status": status, "report": report}))
        return
    out.write(f"{command}: {_headline(command, status, report)}\n")
    for line in _text(report, 1):
        out.write(line + "\n")


def load(path: Path | None) -> SpecDocument:
    if path is None:
        from .fixtures import load_corpus

        return load_corpus()
    return parse_spec(decode_spec(path.read_bytes()))


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    args.budget_given = args.budget is not None
    args.budget = args.budget if args.budget is not None else DEFAULT_BUDGET
    command = args.command
    try:
        if args.budget <= 0 or args.workers <= 0:
            raise InputError("--budget and --workers must be positive")
        doc = load(args.spec)
        status, report = COMMANDS[command](doc, args)
    except SpecErrors as e:
        report = {"error": f"{len(e.errors)} error(s) in the fixture file", "errors": [{"line": s.line, "column": s.col, "message": s.message} for s in e.errors]}
        status = 2
    except InputError as e:
        report = {"error": str(e)}
        if e.report is not None:
            report["validation"] = e.report
        status = 2
    except BudgetExceeded as e:
        report = {"error": str(e), "what": e.what, "needed": e.needed, "budget": e.budget}
        status = 2
    except (LingrothError, OSError) as e:
        report = {"error": f"{type(e).__name__}: {e}"}
        status = 2
    except Exception as e:  # status must never leak an internal exception
        report = {"error": f"internal error: {type(e).__name__}: {e}"}
        status = 2
    emit(command, status, report, args.format, out)
    return status


def main() -> None:
    try:
        status = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # the reader went away (e.g. piped into head); not an error of ours
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        status = 0
    sys.exit(status)


if __name__ == "__main__":
    main()
