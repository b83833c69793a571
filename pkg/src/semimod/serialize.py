"""JSON documents for modules, morphisms and matrices, plus DOT export.

Module document:
    {"flavor": "B"|"Finf", "elements": [names...], "zero": index,
     "add": row-major index table, "neg": optional index table}

Canonical serialization reorders elements by name so equal modules print
byte-identically.  Morphism documents name their endpoints either inline or
by a constructor reference string such as "D4", "E0", "free:B:3", "B".
"""
from __future__ import annotations

import json
import re
from typing import Any, Optional, Union

from .core import FinModule, Flavor, ModuleStructureError, induced_order
from .families import construct_D0, construct_E0, construct_Dn, construct_En
from .free import free_module
from .homs import Hom
from .matrices import BoolMatrix
from .core import scalar_module

ModuleRef = Union[str, dict]


def _flavor_of(tag: str) -> Flavor:
    try:
        return Flavor(tag)
    except ValueError:
        raise ModuleStructureError(f"unknown flavor {tag!r}") from None


def canonical_permutation(m: FinModule) -> list[int]:
    """old id -> new id, sorting elements by display name."""
    order = sorted(range(m.size), key=lambda e: m.names[e])
    rank = [0] * m.size
    for new, old in enumerate(order):
        rank[old] = new
    return rank


def module_to_doc(m: FinModule, canonical: bool = True) -> dict:
    if not m.is_dense:
        raise ModuleStructureError("computed-table modules are too large to serialize")
    if canonical:
        rank = canonical_permutation(m)
        inv = sorted(range(m.size), key=lambda e: rank[e])
        names = [m.names[e] for e in inv]
        add = [
            rank[m.add_of(inv[a], inv[b])] for a in range(m.size) for b in range(m.size)
        ]
        doc: dict[str, Any] = {
            "flavor": m.flavor.value,
            "elements": names,
            "zero": rank[m.zero],
            "add": add,
        }
        if m.neg_table is not None:
            doc["neg"] = [rank[m.neg_of(inv[a])] for a in range(m.size)]
        return doc
    doc = {
        "flavor": m.flavor.value,
        "elements": list(m.names),
        "zero": m.zero,
        "add": list(m.add_table or ()),
    }
    if m.neg_table is not None:
        doc["neg"] = list(m.neg_table)
    return doc


def module_from_doc(doc: dict) -> FinModule:
    try:
        flavor = _flavor_of(doc["flavor"])
        names = tuple(str(x) for x in doc["elements"])
        zero = int(doc["zero"])
        add = tuple(int(x) for x in doc["add"])
        neg = tuple(int(x) for x in doc["neg"]) if "neg" in doc and doc["neg"] is not None else None
    except (KeyError, TypeError, ValueError) as exc:
        raise ModuleStructureError(f"malformed module document: {exc}") from exc
    return FinModule(flavor, names, zero, add, neg_table=neg)


def module_to_json(m: FinModule, canonical: bool = True) -> str:
    return json.dumps(module_to_doc(m, canonical), sort_keys=True, separators=(",", ":"))


_REF_FAMILY = re.compile(r"^(D|E)(\d+)$")
_REF_FREE = re.compile(r"^free:(B|Finf):(\d+)$")


def resolve_module_ref(ref: ModuleRef) -> FinModule:
    """Inline document, or one of: D<n>, E<n>, D0, E0, free:<flavor>:<rank>, B, Finf."""
    if isinstance(ref, dict):
        return module_from_doc(ref)
    ref = ref.strip()
    if ref == "B":
        return scalar_module(Flavor.B)
    if ref == "Finf":
        return scalar_module(Flavor.FINF)
    if ref == "D0":
        return construct_D0().module
    if ref == "E0":
        return construct_E0().module
    match = _REF_FAMILY.match(ref)
    if match:
        n = int(match.group(2))
        try:
            fam = construct_Dn(n) if match.group(1) == "D" else construct_En(n)
        except ValueError as exc:
            raise ModuleStructureError(f"bad family reference {ref!r}: {exc}") from exc
        return fam.module
    match = _REF_FREE.match(ref)
    if match:
        return free_module(_flavor_of(match.group(1)), int(match.group(2)))
    raise ModuleStructureError(f"unrecognized module reference {ref!r}")


def hom_to_doc(
    f: Hom,
    source_ref: Optional[str] = None,
    target_ref: Optional[str] = None,
) -> dict:
    """Morphism document; endpoints inline unless reference strings are given."""
    return {
        "source": source_ref if source_ref is not None else module_to_doc(f.source, canonical=False),
        "target": target_ref if target_ref is not None else module_to_doc(f.target, canonical=False),
        "map": list(f.map),
    }


def hom_from_doc(doc: dict) -> Hom:
    try:
        source = resolve_module_ref(doc["source"])
        target = resolve_module_ref(doc["target"])
        mp = tuple(int(x) for x in doc["map"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ModuleStructureError(f"malformed morphism document: {exc}") from exc
    return Hom(source, target, mp)


def matrix_to_doc(mat: BoolMatrix) -> dict:
    return {"flavor": mat.flavor.value, "entries": mat.to_rows()}


def matrix_from_doc(doc: Union[dict, list]) -> BoolMatrix:
    """Accepts {"flavor", "entries"} or a bare array of rows (flavor inferred)."""
    if isinstance(doc, list):
        rows = doc
        flavor = None
    else:
        try:
            rows = doc["entries"]
            flavor = _flavor_of(doc["flavor"]) if "flavor" in doc else None
        except (KeyError, TypeError) as exc:
            raise ModuleStructureError(f"malformed matrix document: {exc}") from exc
    if flavor is None:
        has_neg = any(int(x) < 0 for row in rows for x in row)
        flavor = Flavor.FINF if has_neg else Flavor.B
    if not rows:
        return BoolMatrix(flavor, 0, 0, ())
    try:
        return BoolMatrix.from_rows(flavor, rows)
    except ValueError as exc:
        raise ModuleStructureError(str(exc)) from exc


def dot_hasse(m: FinModule) -> str:
    """Hasse diagram of the induced order: one edge per covering relation."""
    order = induced_order(m)
    lines = ["digraph hasse {", "  rankdir=BT;"]
    for e in range(m.size):
        lines.append(f'  "{m.name(e)}";')
    for lower, upper in sorted(order.covering_pairs()):
        lines.append(f'  "{m.name(lower)}" -> "{m.name(upper)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
