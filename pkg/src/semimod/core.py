"""Finite modules with idempotent addition, in two flavors.

Flavor B is a commutative idempotent monoid with a neutral zero, i.e. a
join-semilattice with bottom.  Flavor Finf carries a negation and an
*absorbing* zero: ``0 + a = 0`` and ``a + (-a) = 0``.  Everything here is
finite and table-driven: a module is an element list, a distinguished zero,
a flat addition table and (for Finf) a negation table.

Modules are immutable after construction; all operations are pure.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

# Carriers above this size are refused outright (runaway constructions).
CARRIER_CAP = 1 << 18

# Above this many table entries a module keeps a computed-op backend
# instead of a flat table (only large free modules ever do).
DENSE_TABLE_LIMIT = 1 << 23

# Below this carrier size the axiom scans run as plain loops; above it the
# scans are vectorized in chunks.
_SMALL_SCAN = 64


class Flavor(str, Enum):
    B = "B"
    FINF = "Finf"


class ModuleStructureError(ValueError):
    """Malformed module data: bad table shape, unknown IDs, duplicate names.

    Distinct from axiom violations, which are reported, not raised.
    """


class FlavorMismatchError(ValueError):
    """Operation applied across modules of different flavors."""


@dataclass(frozen=True)
class FinModule:
    """A finite module given by operation tables.

    ``names`` double as display labels and as the canonical sort key for
    serialization, so they must be unique.  ``add_table`` is row-major of
    size ``n*n``; ``neg_table`` is present exactly for flavor Finf.  Large
    free modules may carry ``backend`` (an object with ``add``/``neg``
    methods) instead of a flat table.
    """

    flavor: Flavor
    names: tuple[str, ...]
    zero: int
    add_table: Optional[tuple[int, ...]]
    neg_table: Optional[tuple[int, ...]] = None
    free_rank: Optional[int] = None
    backend: Optional[object] = None

    def __post_init__(self) -> None:
        if len(self.names) > CARRIER_CAP:
            raise ModuleStructureError(
                f"carrier of {len(self.names)} elements exceeds the cap of {CARRIER_CAP}"
            )
        if self.add_table is None and self.backend is None:
            raise ModuleStructureError("module needs either a flat add table or a backend")

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def is_dense(self) -> bool:
        return self.add_table is not None

    def add_of(self, a: int, b: int) -> int:
        if self.add_table is not None:
            return self.add_table[a * len(self.names) + b]
        return self.backend.add(a, b)  # type: ignore[union-attr]

    def neg_of(self, a: int) -> int:
        if self.neg_table is not None:
            return self.neg_table[a]
        if self.backend is not None and self.flavor is Flavor.FINF:
            return self.backend.neg(a)  # type: ignore[union-attr]
        raise ModuleStructureError("no negation on this module")

    def name(self, e: int) -> str:
        return self.names[e]

    @cached_property
    def index_of_name(self) -> Mapping[str, int]:
        return {nm: i for i, nm in enumerate(self.names)}

    def leq(self, a: int, b: int) -> bool:
        """Induced order: a <= b iff a + b = b."""
        return self.add_of(a, b) == b

    @cached_property
    def order(self) -> "PartialOrder":
        return induced_order(self)

    @cached_property
    def add_np(self) -> np.ndarray:
        if self.add_table is None:
            if self.size * self.size > DENSE_TABLE_LIMIT:
                raise ModuleStructureError(
                    f"{self.size}-element module is too large to materialize a dense table"
                )
            n = self.size
            flat = [self.add_of(a, b) for a in range(n) for b in range(n)]
            return np.asarray(flat, dtype=np.int64).reshape(n, n)
        arr = np.asarray(self.add_table, dtype=np.int64).reshape(self.size, self.size)
        arr.setflags(write=False)
        return arr


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple[int, ...]


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def axioms(self) -> tuple[str, ...]:
        return tuple(v.axiom for v in self.violations)

    def describe(self, m: FinModule) -> str:
        if self.ok:
            return "valid"
        lines = []
        for v in self.violations:
            w = ", ".join(m.name(e) for e in v.witness)
            lines.append(f"violated {v.axiom}: witness ({w})")
        return "\n".join(lines)


def _structural_check(m: FinModule) -> None:
    n = m.size
    if len(set(m.names)) != n:
        raise ModuleStructureError("element names are not unique")
    if not (0 <= m.zero < n):
        raise ModuleStructureError(f"zero id {m.zero} out of range")
    if m.add_table is not None:
        if len(m.add_table) != n * n:
            raise ModuleStructureError(
                f"add table has {len(m.add_table)} entries, expected {n * n}"
            )
        for pos, e in enumerate(m.add_table):
            if not (0 <= e < n):
                raise ModuleStructureError(
                    f"add table entry {e} at position ({pos // n}, {pos % n}) is not an element id"
                )
    if m.flavor is Flavor.B:
        if m.neg_table is not None:
            raise ModuleStructureError("flavor B modules carry no negation table")
    else:
        if m.neg_table is None and m.backend is None:
            raise ModuleStructureError("flavor Finf modules need a negation table")
        if m.neg_table is not None:
            if len(m.neg_table) != n:
                raise ModuleStructureError(
                    f"neg table has {len(m.neg_table)} entries, expected {n}"
                )
            for a, e in enumerate(m.neg_table):
                if not (0 <= e < n):
                    raise ModuleStructureError(f"neg table entry {e} at {a} is not an element id")


def _scan_violations_small(m: FinModule) -> list[Violation]:
    n = m.size
    add = m.add_of
    out: list[Violation] = []

    w = next(((a, b) for a in range(n) for b in range(n) if add(a, b) != add(b, a)), None)
    if w:
        out.append(Violation("add_commutative", w))
    w3 = next(
        (
            (a, b, c)
            for a in range(n)
            for b in range(n)
            for c in range(n)
            if add(add(a, b), c) != add(a, add(b, c))
        ),
        None,
    )
    if w3:
        out.append(Violation("add_associative", w3))
    w1 = next(((a,) for a in range(n) if add(a, a) != a), None)
    if w1:
        out.append(Violation("add_idempotent", w1))

    z = m.zero
    if m.flavor is Flavor.B:
        w1 = next(((a,) for a in range(n) if add(z, a) != a), None)
        if w1:
            out.append(Violation("zero_neutral", (z,) + w1))
    else:
        w1 = next(((a,) for a in range(n) if add(z, a) != z), None)
        if w1:
            out.append(Violation("zero_absorbing", (z,) + w1))
        neg = m.neg_of
        w1 = next(((a,) for a in range(n) if neg(neg(a)) != a), None)
        if w1:
            out.append(Violation("neg_involution", w1))
        w1 = next(((a,) for a in range(n) if add(a, neg(a)) != z), None)
        if w1:
            out.append(Violation("neg_cancels", w1))
        w = next(
            (
                (a, b)
                for a in range(n)
                for b in range(n)
                if neg(add(a, b)) != add(neg(a), neg(b))
            ),
            None,
        )
        if w:
            out.append(Violation("neg_distributes", w))
        if neg(z) != z:
            out.append(Violation("neg_fixes_zero", (z,)))
    return out


def _scan_violations_bulk(m: FinModule) -> list[Violation]:
    n = m.size
    A = m.add_np
    out: list[Violation] = []

    comm = A != A.T
    if comm.any():
        a, b = np.argwhere(comm)[0]
        out.append(Violation("add_commutative", (int(a), int(b))))

    # chunked a-blocks keep the n^3 associativity scan within memory
    rows = max(1, (1 << 22) // (n * n))
    for a0 in range(0, n, rows):
        blk = A[a0 : a0 + rows]
        left = A[blk, :]
        right = A[np.arange(a0, min(a0 + rows, n))[:, None, None], A[None, :, :]]
        bad = left != right
        if bad.any():
            r, b, c = np.argwhere(bad)[0]
            out.append(Violation("add_associative", (a0 + int(r), int(b), int(c))))
            break

    idem = np.diagonal(A) != np.arange(n)
    if idem.any():
        a = int(np.argwhere(idem)[0][0])
        out.append(Violation("add_idempotent", (a,)))

    z = m.zero
    if m.flavor is Flavor.B:
        bad = A[z] != np.arange(n)
        if bad.any():
            out.append(Violation("zero_neutral", (z, int(np.argwhere(bad)[0][0]))))
    else:
        bad = A[z] != z
        if bad.any():
            out.append(Violation("zero_absorbing", (z, int(np.argwhere(bad)[0][0]))))
        N = np.asarray([m.neg_of(a) for a in range(n)], dtype=np.int64)
        bad = N[N] != np.arange(n)
        if bad.any():
            out.append(Violation("neg_involution", (int(np.argwhere(bad)[0][0]),)))
        bad = A[np.arange(n), N] != z
        if bad.any():
            out.append(Violation("neg_cancels", (int(np.argwhere(bad)[0][0]),)))
        bad = N[A] != A[N[:, None], N[None, :]]
        if bad.any():
            a, b = np.argwhere(bad)[0]
            out.append(Violation("neg_distributes", (int(a), int(b))))
        if m.neg_of(z) != z:
            out.append(Violation("neg_fixes_zero", (z,)))
    return out


def validate_module(m: FinModule) -> ValidationReport:
    """Check every flavor-appropriate axiom; report one witness per axiom.

    Raises :class:`ModuleStructureError` for malformed data (non-total or
    unclosed tables, duplicate names): structural defects are errors, not
    violations.
    """
    _structural_check(m)
    if not m.is_dense and m.size * m.size > DENSE_TABLE_LIMIT:
        raise ModuleStructureError(
            f"cannot run the axiom scan on a {m.size}-element computed-table module"
        )
    if m.size <= _SMALL_SCAN:
        violations = _scan_violations_small(m)
    else:
        violations = _scan_violations_bulk(m)
    return ValidationReport(tuple(violations))


@dataclass(frozen=True)
class PartialOrder:
    """The order induced by addition: ``a <= b`` iff ``a + b = b``.

    ``masks[a]`` has bit ``b`` set iff ``a <= b``.
    """

    size: int
    masks: tuple[int, ...]

    def leq(self, a: int, b: int) -> bool:
        return bool((self.masks[a] >> b) & 1)

    @cached_property
    def down_masks(self) -> tuple[int, ...]:
        down = [0] * self.size
        for a, ms in enumerate(self.masks):
            b = ms
            while b:
                low = b & -b
                down[low.bit_length() - 1] |= 1 << a
                b ^= low
        return tuple(down)

    def covering_pairs(self) -> list[tuple[int, int]]:
        """All (lower, upper) pairs with nothing strictly in between."""
        out = []
        for a in range(self.size):
            strict = self.masks[a] & ~(1 << a)
            b = strict
            while b:
                low = b & -b
                u = low.bit_length() - 1
                between = strict & self.down_masks[u] & ~(1 << u)
                if between == 0:
                    out.append((a, u))
                b ^= low
        return out

    def minimum(self) -> Optional[int]:
        full = (1 << self.size) - 1
        for a in range(self.size):
            if self.masks[a] == full:
                return a
        return None

    def maximum(self) -> Optional[int]:
        for a in range(self.size):
            if self.down_masks[a] == (1 << self.size) - 1:
                return a
        return None


def induced_order(m: FinModule) -> PartialOrder:
    """Compute the induced partial order and assert it is one.

    Reflexivity, antisymmetry and transitivity are theorems for valid
    modules; they are asserted anyway to catch table corruption.  The zero
    must be the minimum (flavor B) or the maximum (flavor Finf).
    """
    n = m.size
    masks = [0] * n
    add = m.add_of
    for a in range(n):
        acc = 0
        for b in range(n):
            if add(a, b) == b:
                acc |= 1 << b
        masks[a] = acc
    order = PartialOrder(n, tuple(masks))
    for a in range(n):
        if not order.leq(a, a):
            raise ModuleStructureError(f"induced relation not reflexive at {m.name(a)}")
        ms = masks[a]
        b = ms & ~(1 << a)
        while b:
            low = b & -b
            u = low.bit_length() - 1
            if order.leq(u, a):
                raise ModuleStructureError(
                    f"induced relation not antisymmetric on ({m.name(a)}, {m.name(u)})"
                )
            if masks[u] & ~ms:
                raise ModuleStructureError(
                    f"induced relation not transitive through ({m.name(a)}, {m.name(u)})"
                )
            b ^= low
    if m.flavor is Flavor.B and order.minimum() != m.zero:
        raise ModuleStructureError("zero is not the minimum of the induced order")
    if m.flavor is Flavor.FINF and order.maximum() != m.zero:
        raise ModuleStructureError("zero is not the maximum of the induced order")
    return order


def join_irreducibles(m: FinModule) -> tuple[int, ...]:
    """Nonzero elements that are not the join of their strict lower set."""
    order = induced_order(m)
    add = m.add_of
    out = []
    for x in range(m.size):
        if x == m.zero:
            continue
        acc = m.zero
        b = order.down_masks[x] & ~(1 << x)
        while b:
            low = b & -b
            acc = add(acc, low.bit_length() - 1)
            b ^= low
        if acc != x:
            out.append(x)
    return tuple(out)


def _closure(m: FinModule, start: Iterable[int]) -> set[int]:
    add = m.add_of
    has_neg = m.flavor is Flavor.FINF
    seen = set(start)
    seen.add(m.zero)
    frontier = list(seen)
    while frontier:
        fresh: list[int] = []
        snapshot = list(seen)
        for b in frontier:
            if has_neg:
                e = m.neg_of(b)
                if e not in seen:
                    seen.add(e)
                    fresh.append(e)
            for a in snapshot:
                e = add(a, b)
                if e not in seen:
                    seen.add(e)
                    fresh.append(e)
        frontier = fresh
    return seen


def generated_submodule(m: FinModule, seed: Iterable[int]) -> frozenset[int]:
    """Least subset containing the seed and zero, closed under the operations."""
    seed = list(seed)
    for e in seed:
        if not (0 <= e < m.size):
            raise ModuleStructureError(f"seed element {e} is not an element id")
    return frozenset(_closure(m, seed))


def irreducible_generators(m: FinModule) -> tuple[int, ...]:
    """A canonical minimal generating set.

    Flavor B: the join-irreducibles.  Flavor Finf: one representative per
    irreducible pair {x, -x} (elements not generated by the rest), taking
    the smaller id, so family layouts with positives first yield the
    positive irreducibles.
    """
    if m.flavor is Flavor.B:
        return join_irreducibles(m)
    gens = []
    for x in range(m.size):
        if x == m.zero:
            continue
        nx = m.neg_of(x)
        if nx < x:
            continue
        others = [e for e in range(m.size) if e != x and e != nx]
        if x not in _closure(m, others):
            gens.append(x)
    return tuple(gens)


def submodule_on(m: FinModule, elements: Iterable[int]) -> tuple[FinModule, tuple[int, ...]]:
    """Restrict to a closed subset; returns the module and the id embedding."""
    ids = sorted(set(elements) | {m.zero})
    pos = {e: i for i, e in enumerate(ids)}
    for a in ids:
        for b in ids:
            if m.add_of(a, b) not in pos:
                raise ModuleStructureError(
                    f"subset not closed under addition at ({m.name(a)}, {m.name(b)})"
                )
        if m.flavor is Flavor.FINF and m.neg_of(a) not in pos:
            raise ModuleStructureError(f"subset not closed under negation at {m.name(a)}")
    k = len(ids)
    add = tuple(pos[m.add_of(ids[i], ids[j])] for i in range(k) for j in range(k))
    neg = None
    if m.flavor is Flavor.FINF:
        neg = tuple(pos[m.neg_of(e)] for e in ids)
    sub = FinModule(
        flavor=m.flavor,
        names=tuple(m.names[e] for e in ids),
        zero=pos[m.zero],
        add_table=add,
        neg_table=neg,
    )
    return sub, tuple(ids)


@dataclass(frozen=True)
class Congruence:
    """A partition of the carrier, intended to be operation-compatible."""

    size: int
    classes: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for cls in self.classes:
            for e in cls:
                if not (0 <= e < self.size) or e in seen:
                    raise ModuleStructureError("classes do not partition the carrier")
                seen.add(e)
        if len(seen) != self.size:
            raise ModuleStructureError("classes do not cover the carrier")

    @cached_property
    def class_of(self) -> tuple[int, ...]:
        out = [0] * self.size
        for ci, cls in enumerate(self.classes):
            for e in cls:
                out[e] = ci
        return tuple(out)

    @staticmethod
    def from_class_map(class_of: Sequence[int]) -> "Congruence":
        buckets: dict[int, list[int]] = {}
        for e, c in enumerate(class_of):
            buckets.setdefault(c, []).append(e)
        classes = sorted((tuple(sorted(v)) for v in buckets.values()), key=lambda c: c[0])
        return Congruence(len(class_of), tuple(classes))

    @staticmethod
    def identity(size: int) -> "Congruence":
        return Congruence(size, tuple((e,) for e in range(size)))

    @staticmethod
    def total(size: int) -> "Congruence":
        return Congruence(size, (tuple(range(size)),))


def congruence_compatibility_witness(
    m: FinModule, c: Congruence
) -> Optional[tuple[int, int, int]]:
    """First (a, a', b) with a ~ a' but a+b and a'+b in different classes.

    Negation incompatibilities are reported as (a, a', -1).
    """
    if c.size != m.size:
        raise ModuleStructureError("congruence carrier size mismatch")
    cls = c.class_of
    add = m.add_of
    for group in c.classes:
        rep = group[0]
        for a in group[1:]:
            if m.flavor is Flavor.FINF and cls[m.neg_of(rep)] != cls[m.neg_of(a)]:
                return (rep, a, -1)
            for b in range(m.size):
                if cls[add(rep, b)] != cls[add(a, b)]:
                    return (rep, a, b)
    return None


def generated_congruence(m: FinModule, pairs: Iterable[tuple[int, int]]) -> Congruence:
    """Least congruence identifying the given pairs (closure by union-find)."""
    parent = list(range(m.size))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    queue = [(a, b) for a, b in pairs]
    while queue:
        a, b = queue.pop()
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        parent[max(ra, rb)] = min(ra, rb)
        for other in list(range(m.size)):
            queue.append((m.add_of(a, other), m.add_of(b, other)))
        if m.flavor is Flavor.FINF:
            queue.append((m.neg_of(a), m.neg_of(b)))
    return Congruence.from_class_map([find(e) for e in range(m.size)])


def quotient_by_congruence(m: FinModule, c: Congruence) -> FinModule:
    """Quotient module on the classes; raises on incompatible partitions."""
    q, _ = quotient_with_projection(m, c)
    return q


def quotient_with_projection(
    m: FinModule, c: Congruence
) -> tuple[FinModule, tuple[int, ...]]:
    """Quotient plus the class map from old ids to quotient ids."""
    witness = congruence_compatibility_witness(m, c)
    if witness is not None:
        a, a2, b = witness
        if b == -1:
            raise ModuleStructureError(
                f"partition not compatible with negation on ({m.name(a)}, {m.name(a2)})"
            )
        raise ModuleStructureError(
            f"partition not compatible with addition on ({m.name(a)}, {m.name(a2)}) against {m.name(b)}"
        )
    cls = c.class_of
    reps = [group[0] for group in c.classes]
    k = len(reps)
    names = ["|".join(m.name(e) for e in group) for group in c.classes]
    if len(set(names)) != k:
        names = [f"[{i}]{nm}" for i, nm in enumerate(names)]
    names = tuple(names)
    add = tuple(cls[m.add_of(reps[i], reps[j])] for i in range(k) for j in range(k))
    neg = None
    if m.flavor is Flavor.FINF:
        neg = tuple(cls[m.neg_of(r)] for r in reps)
    q = FinModule(
        flavor=m.flavor,
        names=names,
        zero=cls[m.zero],
        add_table=add,
        neg_table=neg,
    )
    report = validate_module(q)
    if not report.ok:
        raise ModuleStructureError(f"quotient fails axioms: {report.axioms()}")
    return q, cls


@dataclass(frozen=True)
class DistributivityReport:
    distributive: bool
    meetless_pair: Optional[tuple[int, int]] = None
    witness_triple: Optional[tuple[int, int, int]] = None


def meet_table(m: FinModule) -> tuple[int, ...]:
    """Meets in the induced order (join of the common lower set).

    Every finite flavor-B module has all meets; the computation checks the
    candidate anyway and flags a pair whose common lower set has no
    greatest element.
    """
    order = induced_order(m)
    n = m.size
    add = m.add_of
    down = order.down_masks
    flat = [0] * (n * n)
    for a in range(n):
        for b in range(a, n):
            common = down[a] & down[b]
            acc = m.zero
            bits = common
            while bits:
                low = bits & -bits
                acc = add(acc, low.bit_length() - 1)
                bits ^= low
            if not (order.leq(acc, a) and order.leq(acc, b)):
                flat[a * n + b] = flat[b * n + a] = -1
            else:
                flat[a * n + b] = flat[b * n + a] = acc
    return tuple(flat)


def is_distributive_lattice(m: FinModule) -> DistributivityReport:
    """Distributivity of meet over join, with a witness on failure."""
    if m.flavor is not Flavor.B:
        raise FlavorMismatchError("distributivity check applies to flavor B modules")
    n = m.size
    meets = meet_table(m)
    for a in range(n):
        for b in range(n):
            if meets[a * n + b] < 0:
                return DistributivityReport(False, meetless_pair=(a, b))
    add = m.add_of
    for a in range(n):
        row = meets[a * n : (a + 1) * n]
        for b in range(n):
            ab = row[b]
            for c in range(n):
                if row[add(b, c)] != add(ab, row[c]):
                    return DistributivityReport(False, witness_triple=(a, b, c))
    return DistributivityReport(True)


def scalar_module(flavor: Flavor) -> FinModule:
    """The semiring itself as a module: {0,1} for B, {-1,0,1} for Finf."""
    if flavor is Flavor.B:
        return FinModule(Flavor.B, ("0", "1"), 0, (0, 1, 1, 1))
    # order: 0, 1, -1
    add = (
        0, 0, 0,
        0, 1, 0,
        0, 0, 2,
    )
    return FinModule(Flavor.FINF, ("0", "1", "-1"), 0, add, neg_table=(0, 2, 1))
