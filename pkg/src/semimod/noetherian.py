"""Desk-scale representation-category layer: hom catalogs under a morphism
class, principal projective rank profiles, and the factorization-obstruction
witness checker.

Generation questions about a principal projective reduce to morphism
factorization: the basis vector of f lies in the span of the earlier levels
exactly when f factors through an earlier object, so no coefficient ring is
ever materialized.  Budget exhaustion yields an explicit inconclusive
verdict, never a silent "no factorization".
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from .core import FinModule, Flavor
from .families import corner_embedding, corner_witness, family
from .homs import (
    DEFAULT_BUDGET,
    BudgetExceededError,
    Hom,
    HomConstraints,
    compose,
    enumerate_homs,
    find_left_inverse,
)


class MorphismClass(Enum):
    ALL = "all"
    INJECTIONS = "injections"
    SPLIT_INJECTIONS = "splittable-injections"


@dataclass(frozen=True)
class CatalogEntry:
    hom: Hom
    certificate: Optional[Hom] = None  # verified left inverse, split class only


@dataclass(frozen=True)
class CategorySpec:
    """A flavor, named objects, and the morphism class under consideration."""

    flavor: Flavor
    objects: tuple[tuple[str, FinModule], ...]
    morphism_class: MorphismClass
    budget: int = DEFAULT_BUDGET
    _catalog: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        for name, mod in self.objects:
            if mod.flavor is not self.flavor:
                raise ValueError(f"object {name} has flavor {mod.flavor.value}")
        if len({name for name, _ in self.objects}) != len(self.objects):
            raise ValueError("object names must be unique")

    def module(self, name: str) -> FinModule:
        for nm, mod in self.objects:
            if nm == name:
                return mod
        raise KeyError(f"unknown object {name!r}")


def hom_catalog(spec: CategorySpec, x: str, y: str) -> tuple[CatalogEntry, ...]:
    """All morphisms x -> y in the class, cached per ordered pair.

    Splittable-injection entries carry their verified left inverse.
    """
    key = (x, y)
    if key in spec._catalog:
        return spec._catalog[key]
    X, Y = spec.module(x), spec.module(y)
    cons = HomConstraints(
        require_injective=spec.morphism_class is not MorphismClass.ALL
    )
    homs = enumerate_homs(X, Y, cons, budget=spec.budget)
    entries = []
    for h in homs:
        if spec.morphism_class is MorphismClass.SPLIT_INJECTIONS:
            cert = find_left_inverse(h, budget=spec.budget)
            if cert is None:
                continue
            if not compose(cert, h).is_identity():
                raise AssertionError("catalog certificate failed verification")
            entries.append(CatalogEntry(h, cert))
        else:
            entries.append(CatalogEntry(h))
    result = tuple(entries)
    spec._catalog[key] = result
    return result


def in_class(spec: CategorySpec, f: Hom, *, budget: Optional[int] = None) -> bool:
    if not f.is_hom:
        return False
    if spec.morphism_class is MorphismClass.ALL:
        return True
    if not f.injective:
        return False
    if spec.morphism_class is MorphismClass.INJECTIONS:
        return True
    return find_left_inverse(f, budget=budget or spec.budget) is not None


class Verdict(Enum):
    FACTORS = "factors"
    NO_FACTORIZATION = "no-factorization"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class FactorizationResult:
    verdict: Verdict
    through: Optional[tuple[Hom, Hom]] = None  # (p, q) with q ∘ p = f


def factors_through(spec: CategorySpec, f: Hom, yj: str) -> FactorizationResult:
    """Search for p: X -> Y_j and q: Y_j -> Y_i in the class with q∘p = f.

    For the injection classes the q catalog is enumerated and each
    injective q pins p pointwise.  For the all-homs class the cheaper
    direction runs: each candidate p pins q on its image and the remainder
    of q is searched.  Budget exhaustion anywhere yields an inconclusive
    verdict.
    """
    X, Yj = f.source, spec.module(yj)
    try:
        if spec.morphism_class is not MorphismClass.ALL:
            for entry in hom_catalog_by_module(spec, yj, f.target):
                q = entry.hom
                pmap = _pin_through_injection(q, f)
                if pmap is None:
                    continue
                p = Hom(X, Yj, pmap)
                if not p.is_hom:
                    continue
                if not in_class(spec, p):
                    continue
                if compose(q, p).map != f.map:
                    raise AssertionError("pinned factorization failed recomposition")
                return FactorizationResult(Verdict.FACTORS, (p, q))
            return FactorizationResult(Verdict.NO_FACTORIZATION)
        x0_name = _object_name(spec, X)
        for entry in hom_catalog(spec, x0_name, yj):
            p = entry.hom
            pins: dict[int, int] = {}
            consistent = True
            for x in range(X.size):
                w, v = p.map[x], f.map[x]
                if pins.get(w, v) != v:
                    consistent = False
                    break
                pins[w] = v
            if not consistent:
                continue
            found = enumerate_homs(
                Yj,
                f.target,
                HomConstraints(pinned=pins),
                budget=spec.budget,
                first_only=True,
            )
            if found:
                q = found[0]
                if compose(q, p).map != f.map:
                    raise AssertionError("constrained factorization failed recomposition")
                return FactorizationResult(Verdict.FACTORS, (p, q))
        return FactorizationResult(Verdict.NO_FACTORIZATION)
    except BudgetExceededError:
        return FactorizationResult(Verdict.INCONCLUSIVE)


def _object_name(spec: CategorySpec, module: FinModule) -> str:
    for nm, mod in spec.objects:
        if mod == module:
            return nm
    raise KeyError("module is not an object of the spec")


def hom_catalog_by_module(spec: CategorySpec, x: str, target: FinModule):
    """Catalog x -> (the object equal to this module)."""
    return hom_catalog(spec, x, _object_name(spec, target))


def _pin_through_injection(q: Hom, f: Hom) -> Optional[tuple[int, ...]]:
    """p with q∘p = f when q is injective; None when the image misses f."""
    inverse = {v: w for w, v in enumerate(q.map)}
    out = []
    for v in f.map:
        w = inverse.get(v)
        if w is None:
            return None
        out.append(w)
    return tuple(out)


@dataclass(frozen=True)
class PrincipalProjective:
    """The functor Y -> free coefficient module on Hom(X, Y).

    Coefficients are never materialized: a basis element is just the
    morphism indexing it, and the action of g: Y -> Z sends the basis
    element of f to the basis element of g∘f, which stays in the class.
    """

    spec: CategorySpec
    base: str

    def basis(self, y: str) -> tuple[CatalogEntry, ...]:
        return hom_catalog(self.spec, self.base, y)

    def act(self, g: Hom, f: Hom) -> Hom:
        if not in_class(self.spec, g):
            raise ValueError("acting morphism is not in the class")
        moved = compose(g, f)
        target = _object_name(self.spec, g.target)
        if moved.map not in {e.hom.map for e in self.basis(target)}:
            raise AssertionError("action left the catalog basis")
        return moved

    def rank_profile(self) -> dict[str, int]:
        return {nm: len(self.basis(nm)) for nm, _ in self.spec.objects}


@dataclass(frozen=True)
class WitnessLevel:
    index: int
    morphism: Hom
    checks: tuple[tuple[str, Verdict], ...]


@dataclass(frozen=True)
class WitnessReport:
    """Per-index factorization verdicts for a witness family."""

    levels: tuple[WitnessLevel, ...]
    holds: bool
    inconclusive: bool

    def summary(self) -> str:
        if self.holds:
            return f"witness holds up to N={len(self.levels)}"
        if self.inconclusive:
            return "witness inconclusive (budget exhausted)"
        return "witness fails: some morphism factors through an earlier level"


def witness_verify(
    spec: CategorySpec,
    x0: str,
    y_names: Sequence[str],
    morphisms: Sequence[Hom],
) -> WitnessReport:
    """Check that no f_i factors through any earlier Y_j inside the class."""
    if len(y_names) != len(morphisms):
        raise ValueError("one morphism per family object is required")
    X0 = spec.module(x0)
    levels = []
    any_factor = False
    any_inconclusive = False
    for i, (yn, f) in enumerate(zip(y_names, morphisms), start=1):
        if f.source != X0 or f.target != spec.module(yn):
            raise ValueError(f"morphism {i} does not run X0 -> {yn}")
        if not in_class(spec, f):
            raise ValueError(f"morphism {i} is not in the morphism class")
        checks = []
        for yj in y_names[: i - 1]:
            res = factors_through(spec, f, yj)
            checks.append((yj, res.verdict))
            if res.verdict is Verdict.FACTORS:
                any_factor = True
            elif res.verdict is Verdict.INCONCLUSIVE:
                any_inconclusive = True
        levels.append(WitnessLevel(i, f, tuple(checks)))
    holds = not any_factor and not any_inconclusive
    return WitnessReport(tuple(levels), holds, any_inconclusive and not any_factor)


def principal_projective_profile(spec: CategorySpec, x: str) -> dict[str, int]:
    """Ranks |Hom(x, Y)| of the principal projective at each object."""
    return PrincipalProjective(spec, x).rank_profile()


def default_witness_family(
    flavor: Flavor,
    upto: int,
    morphism_class: MorphismClass = MorphismClass.INJECTIONS,
    *,
    budget: int = DEFAULT_BUDGET,
) -> tuple[CategorySpec, str, list[str], list[Hom]]:
    """X_0 = the corner witness, Y_i the (i+3)-rd family member, f_i the
    corner embeddings."""
    witness = corner_witness(flavor)
    x0 = "D0" if flavor is Flavor.B else "E0"
    objects = [(x0, witness.module)]
    y_names = []
    fs = []
    prefix = "D" if flavor is Flavor.B else "E"
    for i in range(1, upto + 1):
        n = i + 3
        name = f"{prefix}{n}"
        objects.append((name, family(flavor, n).module))
        y_names.append(name)
        fs.append(corner_embedding(n, flavor))
    spec = CategorySpec(flavor, tuple(objects), morphism_class, budget)
    return spec, x0, y_names, fs


def witness_family_from_doc(doc: dict) -> tuple[CategorySpec, str, list[str], list[Hom]]:
    """Witness run description: {"flavor", "max_n", "class"?, "budget"?}."""
    try:
        flavor = Flavor(doc["flavor"])
        upto = int(doc["max_n"])
        mclass = MorphismClass(doc.get("class", MorphismClass.INJECTIONS.value))
        budget = int(doc.get("budget", DEFAULT_BUDGET))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed witness description: {exc}") from exc
    return default_witness_family(flavor, upto, mclass, budget=budget)
