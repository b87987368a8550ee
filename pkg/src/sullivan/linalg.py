"""
Exact sparse linear algebra over Q on enumerated monomial bases.

Matrices are row-sparse (one ``{column: Fraction}`` dict per row).  Row
reduction is fraction-free: rows are scaled to integers, combined with
integer multipliers and divided by their content, so no intermediate
fractions are formed.  The pivot row for each column is the candidate with
the smallest support, ties broken by the lowest row index, which makes every
result independent of anything but the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .algebra import Element, Generator, Monomial, mono_sort_key

Vector = Dict[int, Fraction]


class DimensionError(ValueError):
    pass


class SparseMatrix:
    def __init__(self, nrows: int, ncols: int, rows: Optional[List[Vector]] = None):
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            rows = [{} for _ in range(nrows)]
        if len(rows) != nrows:
            raise DimensionError(f"expected {nrows} rows, got {len(rows)}")
        self.rows = [{c: Fraction(v) for c, v in r.items() if v} for r in rows]
        for r in self.rows:
            for c in r:
                if not 0 <= c < ncols:
                    raise DimensionError(f"column index {c} out of range for {ncols} columns")

    @classmethod
    def from_columns(cls, columns: Sequence[Vector], nrows: int) -> "SparseMatrix":
        rows: List[Vector] = [{} for _ in range(nrows)]
        for j, col in enumerate(columns):
            for i, v in col.items():
                if not 0 <= i < nrows:
                    raise DimensionError(f"row index {i} out of range for {nrows} rows")
                if v:
                    rows[i][j] = Fraction(v)
        return cls(nrows, len(columns), rows)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence], ncols: Optional[int] = None) -> "SparseMatrix":
        if ncols is None:
            ncols = len(data[0]) if data else 0
        return cls(len(data), ncols, [{j: Fraction(v) for j, v in enumerate(row) if v} for row in data])

    def to_dense(self) -> List[List[Fraction]]:
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                out[i][j] = v
        return out

    def columns(self) -> List[Vector]:
        cols: List[Vector] = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def apply(self, x: Vector) -> Vector:
        out = {}
        for i, r in enumerate(self.rows):
            s = sum((v * x[j] for j, v in r.items() if j in x), Fraction(0))
            if s:
                out[i] = s
        return out

    def left_apply(self, y: Vector) -> Vector:
        out: Vector = {}
        for i, yi in y.items():
            for j, v in self.rows[i].items():
                out[j] = out.get(j, 0) + yi * v
        return {j: v for j, v in out.items() if v}

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.ncols, self.nrows, self.columns())

    def __eq__(self, other):
        return (
            isinstance(other, SparseMatrix)
            and (self.nrows, self.ncols) == (other.nrows, other.ncols)
            and self.rows == other.rows
        )

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={sum(map(len, self.rows))})"


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _integer_row(row: Vector) -> Tuple[Dict[int, int], int]:
    scale = 1
    for v in row.values():
        scale = _lcm(scale, Fraction(v).denominator)
    return {c: int(Fraction(v) * scale) for c, v in row.items() if v}, scale


def _content(*dicts: Dict[int, int]) -> int:
    g = 0
    for d in dicts:
        for v in d.values():
            g = gcd(g, v)
            if g == 1:
                return 1
    return g


def _combine(row: Dict[int, int], mr: int, prow: Dict[int, int], mp: int) -> Dict[int, int]:
    """mr*row - mp*prow."""
    new = {k: v * mr for k, v in row.items()} if mr != 1 else dict(row)
    for k, v in prow.items():
        nv = new.get(k, 0) - mp * v
        if nv:
            new[k] = nv
        else:
            new.pop(k, None)
    return new


def _gauss_jordan(rows: List[Dict[int, int]], pivot_limit: int, aux: Optional[List[Dict[int, int]]] = None):
    """Reduce integer rows in place to reduced echelon form on columns < pivot_limit.

    Returns the list of ``(column, row_index)`` pivots in column order.
    """
    nrows = len(rows)
    used = [False] * nrows
    pivots = []
    cols = sorted({c for r in rows for c in r if c < pivot_limit})
    for col in cols:
        best = None
        for r in range(nrows):
            if not used[r] and col in rows[r]:
                if best is None or len(rows[r]) < len(rows[best]):
                    best = r
        if best is None:
            continue
        used[best] = True
        prow = rows[best]
        pv = prow[col]
        for r in range(nrows):
            if r == best:
                continue
            a = rows[r].get(col)
            if not a:
                continue
            g = gcd(pv, a)
            mr, mp = pv // g, a // g
            rows[r] = _combine(rows[r], mr, prow, mp)
            if aux is not None:
                aux[r] = _combine(aux[r], mr, aux[best], mp)
                c = _content(rows[r], aux[r])
            else:
                c = _content(rows[r])
            if c > 1:
                rows[r] = {k: v // c for k, v in rows[r].items()}
                if aux is not None:
                    aux[r] = {k: v // c for k, v in aux[r].items()}
        pivots.append((col, best))
    for col, r in pivots:
        if rows[r][col] < 0:
            rows[r] = {k: -v for k, v in rows[r].items()}
            if aux is not None:
                aux[r] = {k: -v for k, v in aux[r].items()}
    return pivots


@dataclass
class RowEchelon:
    """Reduced row echelon form: ``rows[i]`` has a 1 at ``pivots[i]``."""

    ncols: int
    rows: List[Vector]
    pivots: List[int]

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rref(A: SparseMatrix) -> RowEchelon:
    int_rows = [_integer_row(r)[0] for r in A.rows]
    pivots = _gauss_jordan(int_rows, A.ncols)
    out_rows, out_pivots = [], []
    for col, r in pivots:
        row = int_rows[r]
        pv = row[col]
        out_rows.append({k: Fraction(v, pv) for k, v in row.items()})
        out_pivots.append(col)
    return RowEchelon(A.ncols, out_rows, out_pivots)


def rank(A: SparseMatrix) -> int:
    int_rows = [_integer_row(r)[0] for r in A.rows]
    return len(_gauss_jordan(int_rows, A.ncols))


def _kernel_from_rref(E: RowEchelon, ncols: int) -> List[Vector]:
    pivot_set = set(E.pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v: Vector = {f: Fraction(1)}
        for row, p in zip(E.rows, E.pivots):
            a = row.get(f)
            if a:
                v[p] = -a
        basis.append(v)
    return basis


def kernel_basis(A: SparseMatrix) -> List[Vector]:
    """Basis of {x : A x = 0}, one vector per free column (free coordinate = 1)."""
    return _kernel_from_rref(rref(A), A.ncols)


def image_basis(A: SparseMatrix) -> Tuple[List[int], List[Vector]]:
    """Independent columns spanning the image: (column indices, the columns themselves)."""
    E = rref(A)
    cols = A.columns()
    return list(E.pivots), [cols[j] for j in E.pivots]


@dataclass
class AffineSolution:
    particular: Vector
    kernel: List[Vector]

    feasible = True


@dataclass
class Infeasible:
    """Left vector y with y A = 0 and y b = 1."""

    certificate: Vector

    feasible = False


def solve_affine(A: SparseMatrix, b: Vector) -> Union[AffineSolution, Infeasible]:
    for i in b:
        if not 0 <= i < A.nrows:
            raise DimensionError(f"right-hand side index {i} out of range for {A.nrows} rows")
    n = A.ncols
    int_rows, aux = [], []
    for i, r in enumerate(A.rows):
        full = dict(r)
        if b.get(i):
            full[n] = Fraction(b[i])
        ir, scale = _integer_row(full)
        int_rows.append(ir)
        aux.append({i: scale})
    pivots = _gauss_jordan(int_rows, n, aux)
    pivot_rows = {r for _, r in pivots}
    for r in range(len(int_rows)):
        if r in pivot_rows:
            continue
        rhs = int_rows[r].get(n)
        if rhs:
            return Infeasible({k: Fraction(v, rhs) for k, v in aux[r].items()})
    E = RowEchelon(
        n,
        [{k: Fraction(v, int_rows[r][c]) for k, v in int_rows[r].items() if k < n} for c, r in pivots],
        [c for c, _ in pivots],
    )
    particular: Vector = {}
    for c, r in pivots:
        rhs = int_rows[r].get(n)
        if rhs:
            particular[c] = Fraction(rhs, int_rows[r][c])
    return AffineSolution(particular, _kernel_from_rref(E, n))


def check_solution(A: SparseMatrix, b: Vector, result: Union[AffineSolution, Infeasible]) -> bool:
    """Substitute a solution (or certificate) back into the system."""
    b = {i: Fraction(v) for i, v in b.items() if v}
    if isinstance(result, Infeasible):
        y = result.certificate
        yb = sum((v * b.get(i, 0) for i, v in y.items()), Fraction(0))
        return not A.left_apply(y) and yb != 0
    if A.apply(result.particular) != b:
        return False
    return all(not A.apply(k) for k in result.kernel)


class EchelonSpace:
    """Incrementally grown subspace kept in echelon form, with optional provenance tags.

    ``tags`` records each stored row as a combination of the vectors passed to
    ``add`` (indexed in insertion order).
    """

    def __init__(self):
        self.rows: Dict[int, Vector] = {}
        self.tags: Dict[int, Vector] = {}
        self.count = 0

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, v: Vector, with_tag: bool = False):
        v = {k: Fraction(x) for k, x in v.items() if x}
        tag: Vector = {}
        for p in sorted(self.rows):
            a = v.get(p)
            if not a:
                continue
            for k, x in self.rows[p].items():
                nv = v.get(k, 0) - a * x
                if nv:
                    v[k] = nv
                else:
                    v.pop(k, None)
            if with_tag:
                for k, x in self.tags[p].items():
                    nt = tag.get(k, 0) - a * x
                    if nt:
                        tag[k] = nt
                    else:
                        tag.pop(k, None)
        return (v, tag) if with_tag else v

    def add(self, v: Vector) -> bool:
        idx = self.count
        self.count += 1
        r, tag = self.reduce(v, with_tag=True)
        if not r:
            return False
        tag[idx] = tag.get(idx, 0) + 1
        p = min(r)
        a = r[p]
        self.rows[p] = {k: x / a for k, x in r.items()}
        self.tags[p] = {k: x / a for k, x in tag.items() if x}
        return True

    def contains(self, v: Vector) -> bool:
        return not self.reduce(v)


# -- monomial bases -----------------------------------------------------------


@dataclass(frozen=True)
class MonomialBasis:
    degree: int
    monomials: Tuple[Monomial, ...]
    index: Dict[Monomial, int] = field(compare=False, hash=False, repr=False)

    def __len__(self):
        return len(self.monomials)

    def coordinates(self, chi: Element) -> Vector:
        out = {}
        for m, c in chi.terms.items():
            i = self.index.get(m)
            if i is None:
                raise DimensionError(f"monomial outside basis of degree {self.degree}: {chi}")
            out[i] = c
        return out

    def element(self, vec: Vector) -> Element:
        return Element({self.monomials[i]: c for i, c in vec.items()})


@lru_cache(maxsize=4096)
def _enumerate(gens: Tuple[Generator, ...], k: int) -> Tuple[Monomial, ...]:
    out: List[Monomial] = []

    def rec(i, remaining, prefix):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        if i == len(gens):
            return
        g = gens[i]
        rec(i + 1, remaining, prefix)
        top = 1 if g.odd else remaining // g.degree
        for e in range(1, top + 1):
            left = remaining - e * g.degree
            if left < 0:
                break
            prefix.append((g, e))
            rec(i + 1, left, prefix)
            prefix.pop()

    if k >= 0:
        rec(0, k, [])
    out.sort(key=mono_sort_key)
    return tuple(out)


def _gens_of(source) -> Tuple[Generator, ...]:
    gens = getattr(source, "generators", source)
    return tuple(sorted(gens, key=lambda g: g.key))


def enumerate_basis(source, k: int) -> MonomialBasis:
    """All monomials of total degree ``k`` in the generators of a model (or a generator list)."""
    if k < 0:
        raise ValueError("degree must be non-negative")
    gens = _gens_of(source)
    monos = _enumerate(gens, k)
    return MonomialBasis(k, monos, {m: i for i, m in enumerate(monos)})


@dataclass
class LinearMapMatrix:
    domain: MonomialBasis
    codomain: MonomialBasis
    matrix: SparseMatrix


def matrix_of(fn: Callable[[Element], Element], dom: MonomialBasis, cod: MonomialBasis) -> LinearMapMatrix:
    """Matrix of a linear map given by its values on basis monomials."""
    columns = []
    for m in dom.monomials:
        img = fn(Element.monomial(m))
        if img and img.degree != cod.degree:
            raise DimensionError(
                f"image of basis monomial has degree {img.degree}, expected {cod.degree}"
            )
        columns.append(cod.coordinates(img))
    return LinearMapMatrix(dom, cod, SparseMatrix.from_columns(columns, len(cod)))
