"""Free modules on finite generator sets.

Flavor B: elements are the subsets of the generators, addition is union,
zero is the empty set (2^k elements).  Flavor Finf: elements are the sign
assignments on nonempty generator subsets plus a zero; addition unions
supports, collapsing the whole sum to zero on any sign conflict or zero
summand; negation flips every sign (3^k elements).

Supports are encoded as bitmask pairs ``(pos, neg)`` (``neg`` empty for
flavor B).  Small free modules get dense tables; larger ones keep a
computed-op backend so the quadratic table is never materialized.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Optional, Sequence

from .core import (
    CARRIER_CAP,
    DENSE_TABLE_LIMIT,
    FinModule,
    Flavor,
    FlavorMismatchError,
    ModuleStructureError,
)

ZERO_CODE = (0, 0)


def _codes(flavor: Flavor, rank: int) -> list[tuple[int, int]]:
    """All support codes in canonical order: zero, then by (size, support, signs)."""
    out = [ZERO_CODE]
    supports = sorted(range(1, 1 << rank), key=lambda s: (s.bit_count(), s))
    for supp in supports:
        bits = [b for b in range(rank) if (supp >> b) & 1]
        if flavor is Flavor.B:
            out.append((supp, 0))
        else:
            for signs in range(1 << len(bits)):
                neg = 0
                for j, b in enumerate(bits):
                    if (signs >> j) & 1:
                        neg |= 1 << b
                out.append((supp & ~neg, neg))
    return out


def _name_of_code(code: tuple[int, int]) -> str:
    pos, neg = code
    if pos == 0 and neg == 0:
        return "0"
    parts = []
    for b in range(max(pos, neg).bit_length()):
        if (pos >> b) & 1:
            parts.append(("+" if parts else "") + f"A{b + 1}")
        elif (neg >> b) & 1:
            parts.append(f"-A{b + 1}")
    return "".join(parts)


@dataclass(frozen=True)
class FreeOps:
    """Computed addition/negation for a free module, indexed by element id."""

    flavor: Flavor
    rank: int

    @cached_property
    def codes(self) -> tuple[tuple[int, int], ...]:
        return tuple(_codes(self.flavor, self.rank))

    @cached_property
    def id_of_code(self) -> dict[tuple[int, int], int]:
        return {code: i for i, code in enumerate(self.codes)}

    def add(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            if self.flavor is Flavor.B:
                return a or b
            return 0
        pa, na = self.codes[a]
        pb, nb = self.codes[b]
        if (pa & nb) or (na & pb):
            return 0
        return self.id_of_code[(pa | pb, na | nb)]

    def neg(self, a: int) -> int:
        pos, neg = self.codes[a]
        return self.id_of_code[(neg, pos)]


@lru_cache(maxsize=None)
def _free_ops(flavor: Flavor, rank: int) -> FreeOps:
    return FreeOps(flavor, rank)


def _dense_tables(ops: FreeOps) -> tuple[tuple[int, ...], Optional[tuple[int, ...]]]:
    rank = ops.rank
    codes = ops.codes
    if ops.flavor is Flavor.B:
        id_by_mask = [0] * (1 << rank)
        for i, (p, _) in enumerate(codes):
            id_by_mask[p] = i
        masks = [p for p, _ in codes]
        add = tuple(id_by_mask[pa | pb] for pa in masks for pb in masks)
        return add, None
    id_by_key = [0] * (1 << (2 * rank)) if rank else [0]
    for i, (p, ng) in enumerate(codes):
        id_by_key[p | (ng << rank)] = i
    flat: list[int] = []
    for pa, na in codes:
        if pa | na == 0:
            flat.extend([0] * len(codes))
            continue
        for pb, nb in codes:
            if (pb | nb == 0) or (pa & nb) or (na & pb):
                flat.append(0)
            else:
                flat.append(id_by_key[(pa | pb) | ((na | nb) << rank)])
    neg = tuple(id_by_key[ng | (p << rank)] for p, ng in codes)
    return tuple(flat), neg


@lru_cache(maxsize=None)
def free_module(flavor: Flavor, rank: int) -> FinModule:
    """The free module on ``rank`` generators; generator i has id ``generator_ids()[i]``."""
    if rank < 0:
        raise ValueError("rank must be nonnegative")
    size = (2 if flavor is Flavor.B else 3) ** rank
    if size > CARRIER_CAP:
        raise ModuleStructureError(
            f"free module of rank {rank} has {size} elements, above the cap of {CARRIER_CAP}"
        )
    ops = _free_ops(flavor, rank)
    names = tuple(_name_of_code(c) for c in ops.codes)
    if size * size <= DENSE_TABLE_LIMIT:
        add, neg = _dense_tables(ops)
        return FinModule(flavor, names, 0, add, neg_table=neg, free_rank=rank)
    return FinModule(flavor, names, 0, None, neg_table=None, free_rank=rank, backend=ops)


def _ops_of(m: FinModule) -> FreeOps:
    if m.free_rank is None:
        raise FlavorMismatchError("module is not a free module built by free_module()")
    if isinstance(m.backend, FreeOps):
        return m.backend
    return _free_ops(m.flavor, m.free_rank)


def generator_ids(m: FinModule) -> tuple[int, ...]:
    """Ids of the free generators A_1 .. A_k."""
    ops = _ops_of(m)
    return tuple(ops.id_of_code[(1 << b, 0)] for b in range(m.free_rank or 0))


def support_of(m: FinModule, e: int) -> tuple[tuple[int, int], ...]:
    """Signed support of element ``e`` as (generator index, sign) pairs."""
    ops = _ops_of(m)
    pos, neg = ops.codes[e]
    out = []
    for b in range(max(pos, neg).bit_length()):
        if (pos >> b) & 1:
            out.append((b, 1))
        elif (neg >> b) & 1:
            out.append((b, -1))
    return tuple(out)


def element_of_support(m: FinModule, items: Sequence[tuple[int, int]]) -> int:
    """Element id for a signed support; conflicting or empty input gives zero."""
    ops = _ops_of(m)
    pos = neg = 0
    for b, sign in items:
        if sign > 0:
            pos |= 1 << b
        else:
            neg |= 1 << b
    if m.flavor is Flavor.B and neg:
        raise FlavorMismatchError("flavor B free module has no negative supports")
    if pos & neg:
        return 0
    if pos == 0 and neg == 0:
        return 0
    return ops.id_of_code[(pos, neg)]


def extend_from_generators(
    free: FinModule, target: FinModule, images: Sequence[int]
) -> tuple[int, ...]:
    """Full map table of the unique hom extending a generator assignment.

    This is the universal property of the free module: zero goes to zero,
    and every element goes to the target-side sum of the (signed) images of
    its support.
    """
    if free.flavor is not target.flavor:
        raise FlavorMismatchError("free source and target must share a flavor")
    rank = free.free_rank
    if rank is None:
        raise FlavorMismatchError("source is not a free module")
    if len(images) != rank:
        raise ValueError(f"expected {rank} generator images, got {len(images)}")
    ops = _ops_of(free)
    add = target.add_of
    neg_imgs = None
    if free.flavor is Flavor.FINF:
        neg_imgs = [target.neg_of(v) for v in images]
    out = [target.zero] * free.size
    for e, (pos, negm) in enumerate(ops.codes):
        if pos == 0 and negm == 0:
            continue
        acc: Optional[int] = None
        bits = pos
        while bits:
            low = bits & -bits
            v = images[low.bit_length() - 1]
            acc = v if acc is None else add(acc, v)
            bits ^= low
        bits = negm
        while bits:
            low = bits & -bits
            v = neg_imgs[low.bit_length() - 1]  # type: ignore[index]
            acc = v if acc is None else add(acc, v)
            bits ^= low
        out[e] = acc if acc is not None else target.zero
    return tuple(out)
