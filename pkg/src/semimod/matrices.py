"""Matrix semantics for homs between free modules, and the duality layer.

A hom f from the free rank-n module to the free rank-m module is an m-by-n
matrix whose column j is the signed support of the image of generator j.
The flavor B product is the usual or/and product.  The flavor Finf product
is computed columnwise through free-module evaluation: a sign conflict or
an all-zero summand column collapses the whole output column to zero
(addition there is absorbing, not coordinatewise).

The distinct-rows factorization splits any matrix map through the module on
its distinct rows; dualization realizes transposition as precomposition.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .core import FinModule, Flavor, FlavorMismatchError
from .free import element_of_support, extend_from_generators, free_module, generator_ids, support_of
from .homs import DEFAULT_BUDGET, Hom, compose, find_left_inverse


@dataclass(frozen=True)
class BoolMatrix:
    """Row-major matrix over {0,1} (flavor B) or {-1,0,1} (flavor Finf)."""

    flavor: Flavor
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match the shape")
        ok = {0, 1} if self.flavor is Flavor.B else {-1, 0, 1}
        for e in self.entries:
            if e not in ok:
                raise ValueError(f"entry {e} invalid for flavor {self.flavor.value}")

    @staticmethod
    def from_rows(flavor: Flavor, rows: Sequence[Sequence[int]]) -> "BoolMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise ValueError("ragged rows")
            flat.extend(int(x) for x in row)
        return BoolMatrix(flavor, r, c, tuple(flat))

    @staticmethod
    def identity(flavor: Flavor, n: int) -> "BoolMatrix":
        return BoolMatrix(
            flavor, n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n))
        )

    def entry(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return self.entries[j :: self.cols] if self.cols else ()

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "BoolMatrix":
        flat = tuple(self.entry(i, j) for j in range(self.cols) for i in range(self.rows))
        return BoolMatrix(self.flavor, self.cols, self.rows, flat)


def mat_mul(a: BoolMatrix, b: BoolMatrix) -> BoolMatrix:
    """Semiring product; corresponds exactly to hom composition."""
    if a.flavor is not b.flavor:
        raise FlavorMismatchError("matrix flavors differ")
    if a.cols != b.rows:
        raise ValueError(f"shape mismatch: {a.rows}x{a.cols} times {b.rows}x{b.cols}")
    m, n = a.rows, b.cols
    out = [0] * (m * n)
    if a.flavor is Flavor.B:
        for i in range(m):
            arow = a.row(i)
            for j in range(n):
                out[i * n + j] = int(any(arow[t] and b.entry(t, j) for t in range(a.cols)))
        return BoolMatrix(Flavor.B, m, n, tuple(out))
    for j in range(n):
        terms = [(t, b.entry(t, j)) for t in range(b.rows) if b.entry(t, j)]
        if not terms:
            continue
        acc = [0] * m
        dead = False
        for t, sign in terms:
            colv = [sign * a.entry(i, t) for i in range(m)]
            if not any(colv):
                dead = True  # zero summand absorbs the whole column
                break
            for i in range(m):
                if colv[i] == 0:
                    continue
                if acc[i] == 0:
                    acc[i] = colv[i]
                elif acc[i] != colv[i]:
                    dead = True  # sign conflict collapses the column
                    break
            if dead:
                break
        if not dead:
            for i in range(m):
                out[i * n + j] = acc[i]
    return BoolMatrix(Flavor.FINF, m, n, tuple(out))


def matrix_of_hom(f: Hom) -> BoolMatrix:
    """Columns are the signed supports of the generator images; free endpoints only."""
    src, tgt = f.source, f.target
    if src.free_rank is None or tgt.free_rank is None:
        raise FlavorMismatchError("matrix semantics require free endpoints")
    n, m = src.free_rank, tgt.free_rank
    flat = [0] * (m * n)
    for j, gen in enumerate(generator_ids(src)):
        for b, sign in support_of(tgt, f.map[gen]):
            flat[b * n + j] = sign
    return BoolMatrix(src.flavor, m, n, tuple(flat))


def hom_of_matrix(
    mat: BoolMatrix,
    source: Optional[FinModule] = None,
    target: Optional[FinModule] = None,
) -> Hom:
    """The hom whose generator images are the matrix columns."""
    src = source if source is not None else free_module(mat.flavor, mat.cols)
    tgt = target if target is not None else free_module(mat.flavor, mat.rows)
    if src.free_rank != mat.cols or tgt.free_rank != mat.rows:
        raise FlavorMismatchError("matrix shape does not match the free endpoints")
    images = []
    for j in range(mat.cols):
        supp = [(i, mat.entry(i, j)) for i in range(mat.rows) if mat.entry(i, j)]
        images.append(element_of_support(tgt, supp))
    return Hom(src, tgt, extend_from_generators(src, tgt, images))


# ---------------------------------------------------------------------------
# distinct-rows factorization


@dataclass(frozen=True)
class DistinctRowFactorization:
    """original = duplicator · reduced, with a verified split certificate.

    ``row_class[i]`` names the distinct row that row i duplicates;
    ``split_certificate`` is a left inverse of the duplicator's hom.
    """

    original: BoolMatrix
    reduced: BoolMatrix
    duplicator: BoolMatrix
    certificate: BoolMatrix
    row_class: tuple[int, ...]
    duplicator_hom: Hom
    split_certificate: Hom


def distinct_row_factorization(mat: BoolMatrix) -> DistinctRowFactorization:
    """Factor a matrix map through the module on its distinct rows.

    The duplicator keeps exactly one 1 per row, selecting the matching
    distinct row (first-occurrence order).  For flavor B the certificate
    picks the lowest representative index per distinct row; for flavor Finf
    it must mark the whole class instead, because a zero summand absorbs
    the sum (the lowest-representative certificate is not a left inverse
    once a class has two rows).
    """
    seen: dict[tuple[int, ...], int] = {}
    row_class = []
    reps: list[int] = []
    for i in range(mat.rows):
        key = mat.row(i)
        if key not in seen:
            seen[key] = len(seen)
            reps.append(i)
        row_class.append(seen[key])
    l = len(seen)
    reduced = BoolMatrix.from_rows(mat.flavor, [list(mat.row(reps[r])) for r in range(l)]) \
        if l else BoolMatrix(mat.flavor, 0, mat.cols, ())
    dup = [0] * (mat.rows * l)
    for i, c in enumerate(row_class):
        dup[i * l + c] = 1
    duplicator = BoolMatrix(mat.flavor, mat.rows, l, tuple(dup))
    cert = [0] * (l * mat.rows)
    if mat.flavor is Flavor.B:
        for r in range(l):
            cert[r * mat.rows + reps[r]] = 1
    else:
        for i, c in enumerate(row_class):
            cert[c * mat.rows + i] = 1
    certificate = BoolMatrix(mat.flavor, l, mat.rows, tuple(cert))

    if mat_mul(duplicator, reduced) != mat:
        raise AssertionError("duplicator · reduced does not recover the input")
    if mat_mul(certificate, duplicator) != BoolMatrix.identity(mat.flavor, l):
        raise AssertionError("certificate is not a left inverse of the duplicator")
    dup_hom = hom_of_matrix(duplicator)
    cert_hom = hom_of_matrix(certificate)
    if not dup_hom.injective:
        raise AssertionError("duplicator hom is not injective")
    if not compose(cert_hom, dup_hom).is_identity():
        raise AssertionError("certificate hom is not a left inverse")
    return DistinctRowFactorization(
        mat, reduced, duplicator, certificate, tuple(row_class), dup_hom, cert_hom
    )


# ---------------------------------------------------------------------------
# duality (flavor B)


@lru_cache(maxsize=None)
def dualize_free(n: int) -> FinModule:
    """The dual of the rank-n free B-module: all homs to B under pointwise or.

    Realized as the free module on the coordinate evaluations (the hom
    sending T to [S ∩ T nonempty] is the sum of the evaluations over T), so
    elements are renamed E1, E2, ... to keep the two sides apart.
    """
    base = free_module(Flavor.B, n)
    names = tuple(nm.replace("A", "E") for nm in base.names)
    return FinModule(Flavor.B, names, base.zero, base.add_table, free_rank=n)


def dualize_hom(f: Hom) -> Hom:
    """Precomposition by f; its matrix is the transpose of the matrix of f."""
    if f.source.flavor is not Flavor.B:
        raise FlavorMismatchError("dualization is defined for flavor B")
    mat = matrix_of_hom(f)
    n, m = mat.cols, mat.rows
    return hom_of_matrix(mat.transpose(), source=dualize_free(m), target=dualize_free(n))


@dataclass(frozen=True)
class DualFactorization:
    """f*: B[S] -> (B^n)* split as a basis surjection followed by a residual."""

    dual_map: Hom
    set_surjection: tuple[int, ...]
    induced: Hom
    residual: Hom
    certificate: Hom


def dual_factorization(
    f: Hom, certificate: Optional[Hom] = None, *, budget: int = DEFAULT_BUDGET
) -> DualFactorization:
    """Factor the dual surjection of a splittable injection f: B^n -> B[S]*.

    S-basis vectors with equal images under f* are merged; the first map is
    induced by that surjection of finite sets and the residual completes
    f*.  Raises when f is not a splittable injection (certificate neither
    supplied nor found).
    """
    if f.source.flavor is not Flavor.B:
        raise FlavorMismatchError("dual factorization is defined for flavor B")
    if f.source.free_rank is None or f.target.free_rank is None:
        raise FlavorMismatchError("dual factorization requires free endpoints")
    if not f.is_hom or not f.injective:
        raise ValueError("dual factorization expects an injective hom")
    if certificate is None:
        certificate = find_left_inverse(f, budget=budget)
        if certificate is None:
            raise ValueError("f is not a splittable injection: no left inverse exists")
    if not compose(certificate, f).is_identity():
        raise ValueError("supplied certificate is not a left inverse of f")

    mat = matrix_of_hom(f)  # s x n
    s, n = mat.rows, mat.cols
    fstar = hom_of_matrix(
        mat.transpose(), source=free_module(Flavor.B, s), target=dualize_free(n)
    )
    seen: dict[tuple[int, ...], int] = {}
    surj = []
    reps: list[int] = []
    for t in range(s):
        key = mat.row(t)
        if key not in seen:
            seen[key] = len(seen)
            reps.append(t)
        surj.append(seen[key])
    l = len(seen)
    ind_flat = [0] * (l * s)
    for t, c in enumerate(surj):
        ind_flat[c * s + t] = 1
    induced = hom_of_matrix(
        BoolMatrix(Flavor.B, l, s, tuple(ind_flat)),
        source=free_module(Flavor.B, s),
        target=free_module(Flavor.B, l),
    )
    res_flat = [0] * (n * l)
    for c, t in enumerate(reps):
        for j, v in enumerate(mat.row(t)):
            res_flat[j * l + c] = v
    residual = hom_of_matrix(
        BoolMatrix(Flavor.B, n, l, tuple(res_flat)),
        source=free_module(Flavor.B, l),
        target=dualize_free(n),
    )
    if compose(residual, induced).map != fstar.map:
        raise AssertionError("residual ∘ induced does not recover the dual map")
    if l > 2 ** n:
        raise AssertionError("distinct dual images exceed the size of (B^n)*")
    return DualFactorization(fstar, tuple(surj), induced, residual, certificate)
