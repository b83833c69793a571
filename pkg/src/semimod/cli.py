"""Command-line driver.

Exit codes: 0 success / property verified, 1 verified negative (for
example: not projective, witness fails), 2 inconclusive because a search
budget ran out, 3 input or usage error.  All output is deterministic for
fixed inputs and budgets.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from .core import Flavor, ModuleStructureError, is_distributive_lattice, validate_module
from .families import (
    construct_D0,
    construct_Dn,
    construct_E0,
    construct_En,
    rigidity_check,
)
from .free import free_module
from .homs import (
    DEFAULT_BUDGET,
    BudgetExceededError,
    HomConstraints,
    check_hom,
    enumerate_homs,
    find_left_inverse,
    find_right_inverse,
)
from .matrices import distinct_row_factorization, dualize_hom, matrix_of_hom
from .noetherian import (
    MorphismClass,
    default_witness_family,
    witness_family_from_doc,
    witness_verify,
)
from .projective import projectivity_certificate
from . import serialize
from .serialize import matrix_to_doc


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(3)


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _module_arg(arg: str):
    """A module reference string, or a path to a module document."""
    if os.path.exists(arg):
        return serialize.module_from_doc(_load_json(arg))
    return serialize.resolve_module_ref(arg)


def _emit_module(mod, fmt: str) -> str:
    if fmt == "dot":
        return serialize.dot_hasse(mod)
    if fmt == "text":
        lines = [f"{mod.flavor.value}-module with {mod.size} elements"]
        lines.append("elements: " + ", ".join(mod.names))
        return "\n".join(lines) + "\n"
    return serialize.module_to_json(mod) + "\n"


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search budget")
    p.add_argument("--threads", type=int, default=1,
                   help="thread bound (the current engine is sequential)")


def _check_threads(args) -> None:
    if getattr(args, "threads", 1) < 1:
        raise ModuleStructureError("--threads must be at least 1")


def _cmd_construct(args) -> int:
    kind = args.family
    if kind == "D0":
        mod = construct_D0().module
    elif kind == "E0":
        mod = construct_E0().module
    elif kind in ("Dn", "En"):
        if args.n is None:
            raise ModuleStructureError("construct Dn/En requires --n")
        mod = (construct_Dn if kind == "Dn" else construct_En)(args.n).module
    else:  # free
        if args.rank is None:
            raise ModuleStructureError("construct free requires --rank")
        mod = free_module(Flavor(args.flavor), args.rank)
    sys.stdout.write(_emit_module(mod, args.format))
    return 0


def _cmd_validate(args) -> int:
    mod = serialize.module_from_doc(_load_json(args.file))
    report = validate_module(mod)
    if report.ok:
        print("valid")
        return 0
    print(report.describe(mod))
    return 1


def _cmd_homs(args) -> int:
    src = _module_arg(args.source)
    tgt = _module_arg(args.target)
    pins = {}
    if args.pins:
        doc = _load_json(args.pins)
        for s, t in doc.get("pins", []):
            s_id = src.index_of_name[s] if isinstance(s, str) else int(s)
            t_id = tgt.index_of_name[t] if isinstance(t, str) else int(t)
            if pins.get(s_id, t_id) != t_id:
                raise ModuleStructureError(f"conflicting pins for element {s!r}")
            pins[s_id] = t_id
    cons = HomConstraints(pinned=pins, require_injective=args.injective)
    homs = enumerate_homs(src, tgt, cons, budget=args.budget)
    for h in homs:
        sys.stdout.write(json.dumps({"map": list(h.map)}) + "\n")
    sys.stderr.write(f"{len(homs)} morphisms\n")
    return 0


def _cmd_rigidity(args) -> int:
    flavor = Flavor(args.flavor)
    found = rigidity_check(args.n, args.m, flavor, budget=args.budget)
    if len(found) == 1 and found[0].is_identity():
        print("1 morphism (identity)")
    else:
        print(f"{len(found)} morphisms")
        for h in found:
            print("  " + h.describe())
    expected_identity = args.n == args.m
    as_expected = (
        (expected_identity and len(found) == 1 and found[0].is_identity())
        or (not expected_identity and not found)
    )
    return 0 if as_expected else 1


def _cmd_split_check(args) -> int:
    f = serialize.hom_from_doc(_load_json(args.file))
    chk = check_hom(f)
    if not chk.ok:
        raise ModuleStructureError(
            f"input map is not a homomorphism ({chk.kind} at {chk.witness})"
        )
    result = {
        "injective": f.injective,
        "surjective": f.surjective,
        "left_inverse": None,
        "right_inverse": None,
    }
    splittable = False
    if f.injective:
        w = find_left_inverse(f, budget=args.budget)
        if w is not None:
            result["left_inverse"] = list(w.map)
            splittable = True
    if f.surjective:
        h = find_right_inverse(f, budget=args.budget)
        if h is not None:
            result["right_inverse"] = list(h.map)
            splittable = True
    print(json.dumps(result, sort_keys=True))
    return 0 if splittable else 1


def _cmd_projective(args) -> int:
    mod = _module_arg(args.module)
    cert = projectivity_certificate(mod, budget=args.budget)
    report = {"projective": cert.projective}
    if mod.flavor is Flavor.B:
        dist = is_distributive_lattice(mod)
        report["distributive"] = dist.distributive
        report["criteria_agree"] = dist.distributive == cert.projective
    if cert.section is not None:
        report["section"] = list(cert.section.map)
    print(json.dumps(report, sort_keys=True))
    return 0 if cert.projective else 1


def _cmd_factor_matrix(args) -> int:
    mat = serialize.matrix_from_doc(_load_json(args.file))
    fact = distinct_row_factorization(mat)
    out = {
        "reduced": matrix_to_doc(fact.reduced),
        "duplicator": matrix_to_doc(fact.duplicator),
        "certificate": matrix_to_doc(fact.certificate),
        "row_class": list(fact.row_class),
    }
    print(json.dumps(out, sort_keys=True))
    return 0


def _cmd_dualize(args) -> int:
    f = serialize.hom_from_doc(_load_json(args.file))
    dual = dualize_hom(f)
    out = {
        "matrix": matrix_to_doc(matrix_of_hom(dual)),
        "map": list(dual.map),
    }
    print(json.dumps(out, sort_keys=True))
    return 0


def _cmd_witness(args) -> int:
    if args.spec:
        spec, x0, ys, fs = witness_family_from_doc(_load_json(args.spec))
    else:
        if args.flavor is None or args.max_n is None:
            raise ModuleStructureError("witness needs either --spec or --flavor/--max-n")
        spec, x0, ys, fs = default_witness_family(
            Flavor(args.flavor), args.max_n, MorphismClass(args.morphism_class),
            budget=args.budget,
        )
    report = witness_verify(spec, x0, ys, fs)
    if args.format == "json":
        doc = {
            "holds": report.holds,
            "inconclusive": report.inconclusive,
            "levels": [
                {
                    "index": lv.index,
                    "checks": [[yj, v.value] for yj, v in lv.checks],
                }
                for lv in report.levels
            ],
        }
        print(json.dumps(doc, sort_keys=True))
    else:
        print(report.summary())
        for lv in report.levels:
            for yj, v in lv.checks:
                print(f"  f_{lv.index} through {yj}: {v.value}")
    if report.holds:
        return 0
    return 2 if report.inconclusive else 1


def _cmd_export_dot(args) -> int:
    mod = _module_arg(args.module)
    sys.stdout.write(serialize.dot_hasse(mod))
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="semimod", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", help="build a family member or free module")
    p.add_argument("family", choices=["Dn", "En", "D0", "E0", "free"])
    p.add_argument("--n", type=int, default=None, help="family parameter (Dn/En)")
    p.add_argument("--flavor", choices=["B", "Finf"], default="B")
    p.add_argument("--rank", type=int, default=None, help="free module rank")
    p.add_argument("--format", choices=["json", "dot", "text"], default="json")
    _add_common(p)
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("validate", help="check the axioms of a module file")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("homs", help="enumerate morphisms between two modules")
    p.add_argument("--source", required=True, help="module reference or file")
    p.add_argument("--target", required=True, help="module reference or file")
    p.add_argument("--pins", default=None, help="JSON file with pinned element pairs")
    p.add_argument("--injective", action="store_true")
    _add_common(p)
    p.set_defaults(func=_cmd_homs)

    p = sub.add_parser("rigidity", help="count injective corner-pinned morphisms")
    p.add_argument("--flavor", choices=["B", "Finf"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_rigidity)

    p = sub.add_parser("split-check", help="search one-sided inverses of a morphism file")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(func=_cmd_split_check)

    p = sub.add_parser("projective", help="certify (non-)projectivity of a module")
    p.add_argument("module", help="module reference or file")
    _add_common(p)
    p.set_defaults(func=_cmd_projective)

    p = sub.add_parser("factor-matrix", help="distinct-rows factorization of a matrix file")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(func=_cmd_factor_matrix)

    p = sub.add_parser("dualize", help="dualize a morphism between free modules")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(func=_cmd_dualize)

    p = sub.add_parser("witness", help="run the corner-embedding witness family")
    p.add_argument("--flavor", choices=["B", "Finf"], default=None)
    p.add_argument("--max-n", type=int, default=None, dest="max_n")
    p.add_argument("--spec", default=None, help="JSON witness description file")
    p.add_argument(
        "--class",
        dest="morphism_class",
        choices=[c.value for c in MorphismClass],
        default=MorphismClass.INJECTIONS.value,
    )
    p.add_argument("--format", choices=["json", "text"], default="text")
    _add_common(p)
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser("export-dot", help="Hasse diagram of a module as DOT")
    p.add_argument("module", help="module reference or file")
    _add_common(p)
    p.set_defaults(func=_cmd_export_dot)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _check_threads(args)
        return args.func(args)
    except BudgetExceededError as exc:
        sys.stderr.write(f"inconclusive: {exc}\n")
        return 2
    except (ModuleStructureError, ValueError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3
    except json.JSONDecodeError as exc:
        sys.stderr.write(f"error: invalid JSON input ({exc})\n")
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
