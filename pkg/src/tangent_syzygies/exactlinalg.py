"""Exact linear algebra over the rationals and over prime fields.

Rational scalars are :class:`fractions.Fraction` (always in lowest terms with a
positive denominator); plain ``int`` is accepted anywhere a rational is.  Prime
field residues are ints in ``[0, p)``.

Matrices are sparse: a :class:`SparseMatrix` holds one ``{col: value}`` dict per
row and never stores zeros.  Rational elimination is fraction free: every row
is scaled to a primitive integer vector, rows are combined as
``pivot * row - entry * pivot_row`` and divided by the content of the result,
so only integers are touched until the final normalisation of ``rref``.
"""

from __future__ import annotations

import heapq
import math
import random
from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels

Vector = Mapping[int, object]

# dense mod-p kernel is used below this many matrix cells
DENSE_MODP_CELLS = 4_000_000


class DenominatorDivisibleByP(ArithmeticError):
    """A rational entry has a denominator divisible by the chosen prime."""


class SparseMatrix:
    """A ``nrows x ncols`` matrix stored as a list of sparse row dicts."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Iterable[Mapping[int, object]] | None = None):
        self.nrows = int(nrows)
        self.ncols = int(ncols)
        if rows is None:
            self.rows = [{} for _ in range(self.nrows)]
        else:
            self.rows = [{c: v for c, v in r.items() if v != 0} for r in rows]
            if len(self.rows) != self.nrows:
                raise ValueError("row count does not match nrows")
        for r in self.rows:
            for c in r:
                if not 0 <= c < self.ncols:
                    raise IndexError(f"column {c} out of range for {self.ncols} columns")

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[object]]) -> "SparseMatrix":
        nrows = len(data)
        ncols = len(data[0]) if nrows else 0
        return cls(nrows, ncols, ({j: x for j, x in enumerate(row) if x != 0} for row in data))

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: Mapping[tuple[int, int], object]) -> "SparseMatrix":
        m = cls(nrows, ncols)
        for (i, j), v in entries.items():
            if v != 0:
                m.rows[i][j] = v
        return m

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Vector]) -> "SparseMatrix":
        m = cls(nrows, len(columns))
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v != 0:
                    m.rows[i][j] = v
        return m

    def __getitem__(self, key: tuple[int, int]):
        i, j = key
        return self.rows[i].get(j, 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.nrows, self.ncols, self.rows) == (other.nrows, other.ncols, other.rows)

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def to_dense(self) -> list[list[object]]:
        return [[r.get(j, 0) for j in range(self.ncols)] for r in self.rows]

    def transpose(self) -> "SparseMatrix":
        t = SparseMatrix(self.ncols, self.nrows)
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                t.rows[j][i] = v
        return t

    def columns(self) -> list[dict[int, object]]:
        cols: list[dict[int, object]] = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                cols[j][i] = v
        return cols

    def apply(self, v: Sequence[object] | Vector) -> list[object]:
        """Exact product ``self @ v`` as a dense list."""
        if isinstance(v, Mapping):
            return [sum((x * v[j] for j, x in r.items() if j in v), 0) for r in self.rows]
        return [sum((x * v[j] for j, x in r.items()), 0) for r in self.rows]


# --------------------------------------------------------------------------
# integer row helpers


def _content_normalize(row: dict[int, int]) -> dict[int, int]:
    g = math.gcd(*row.values())
    if g != 1:
        for k in row:
            row[k] //= g
    return row


def int_vector(v: Vector) -> dict[int, int]:
    """Scale a rational sparse vector to a primitive integer vector."""
    items = [(c, x) for c, x in v.items() if x != 0]
    if not items:
        return {}
    if all(type(x) is int for _, x in items):
        return _content_normalize(dict(items))
    den = 1
    for _, x in items:
        d = Fraction(x).denominator
        den = den * d // math.gcd(den, d)
    out = {c: int(Fraction(x) * den) for c, x in items}
    return _content_normalize(out)


def _combine(r: dict[int, int], prow: dict[int, int], col: int) -> dict[int, int]:
    """``pv * r - a * prow`` scaled so that column ``col`` cancels, made primitive."""
    a = r[col]
    pv = prow[col]
    g = math.gcd(pv, a)
    m1, m2 = pv // g, a // g
    if m1 != 1:
        out = {c: m1 * x for c, x in r.items()}
    else:
        out = dict(r)
    for c, x in prow.items():
        y = out.get(c, 0) - m2 * x
        if y:
            out[c] = y
        else:
            out.pop(c, None)
    if out:
        _content_normalize(out)
    return out


def _forward(rows: list[dict[int, int]]) -> list[tuple[int, dict[int, int]]]:
    """Fraction-free forward elimination.

    Columns are processed in increasing order; among the rows with a nonzero
    entry in the current column the pivot is the sparsest row, then the one
    with the smallest absolute entry, then the lowest index.  Returns the pivot
    rows as ``(pivot_col, row)`` sorted by pivot column.
    """
    rows = [r for r in rows if r]
    col_rows: dict[int, set[int]] = defaultdict(set)
    for i, r in enumerate(rows):
        for c in r:
            col_rows[c].add(i)
    heap = list(col_rows)
    heapq.heapify(heap)
    out: list[tuple[int, dict[int, int]]] = []
    while heap:
        c = heapq.heappop(heap)
        cand = col_rows.get(c)
        if not cand:
            continue
        pi = min(cand, key=lambda i: (len(rows[i]), abs(rows[i][c]), i))
        prow = rows[pi]
        for cc in prow:
            col_rows[cc].discard(pi)
        for i in sorted(cand):
            r = rows[i]
            new = _combine(r, prow, c)
            for cc in r:
                if cc not in new:
                    col_rows[cc].discard(i)
            for cc in new:
                s = col_rows[cc]
                if i not in s:
                    if not s:
                        heapq.heappush(heap, cc)
                    s.add(i)
            rows[i] = new
        out.append((c, prow))
    return out


def _back_substitute(piv: list[tuple[int, dict[int, int]]]) -> list[tuple[int, dict[int, int]]]:
    piv = [(c, dict(r)) for c, r in piv]
    for k in range(len(piv) - 1, -1, -1):
        c, prow = piv[k]
        for j in range(k):
            cj, r = piv[j]
            if c in r:
                piv[j] = (cj, _combine(r, prow, c))
    return piv


def _int_rows(m: SparseMatrix | Sequence[Vector]) -> list[dict[int, int]]:
    rows = m.rows if isinstance(m, SparseMatrix) else m
    return [int_vector(r) for r in rows]


# --------------------------------------------------------------------------
# public operations


def rref(m: SparseMatrix) -> tuple[list[int], SparseMatrix]:
    """Reduced row-echelon form over Q.

    Returns ``(pivots, reduced)`` where ``reduced`` has the shape of ``m``,
    nonzero rows first, pivot entries equal to one.
    """
    piv = _back_substitute(_forward(_int_rows(m)))
    reduced = SparseMatrix(m.nrows, m.ncols)
    pivots = []
    for k, (c, r) in enumerate(piv):
        lead = r[c]
        reduced.rows[k] = {j: Fraction(x, lead) for j, x in r.items()}
        pivots.append(c)
    return pivots, reduced


def rank(m: SparseMatrix | Sequence[Vector]) -> int:
    return len(_forward(_int_rows(m)))


def kernel_basis(m: SparseMatrix) -> list[list[Fraction]]:
    """Standard basis of the right kernel: one vector per free column, with a
    one in that column and zeros in the other free columns."""
    return [[v.get(j, Fraction(0)) for j in range(m.ncols)] for v in _kernel_sparse(m)]


def _kernel_sparse(m: SparseMatrix) -> list[dict[int, Fraction]]:
    pivots, red = rref(m)
    pivset = set(pivots)
    basis = []
    for f in range(m.ncols):
        if f in pivset:
            continue
        v = {f: Fraction(1)}
        for k, c in enumerate(pivots):
            x = red.rows[k].get(f)
            if x:
                v[c] = -x
        basis.append(v)
    return basis


def kernel_int(m: SparseMatrix | Sequence[Vector], ncols: int | None = None) -> list[dict[int, int]]:
    """Right kernel as primitive integer vectors (same span as :func:`kernel_basis`)."""
    if not isinstance(m, SparseMatrix):
        m = SparseMatrix(len(m), ncols, m)
    piv = _back_substitute(_forward(_int_rows(m)))
    pivcols = {c for c, _ in piv}
    basis = []
    for f in range(m.ncols):
        if f in pivcols:
            continue
        # v[f] = L, v[c] = -L * r[f] / r[c]
        lead = 1
        for c, r in piv:
            if f in r:
                lead = lead * r[c] // math.gcd(lead, r[c])
        v = {f: lead}
        for c, r in piv:
            x = r.get(f)
            if x:
                v[c] = -(lead // r[c]) * x
        basis.append(_content_normalize(v))
    return basis


def relations(vectors: Sequence[Vector]) -> list[dict[int, int]]:
    """Integer basis of linear relations ``sum_j c_j v_j = 0`` among sparse vectors."""
    rows: dict[int, dict[int, object]] = defaultdict(dict)
    for j, v in enumerate(vectors):
        for i, x in v.items():
            if x != 0:
                rows[i][j] = x
    return kernel_int(list(rows.values()), ncols=len(vectors))


def solve(m: SparseMatrix, rhs: Sequence[object] | Vector) -> list[Fraction] | None:
    """A particular solution of ``m x = rhs`` over Q, or ``None`` if inconsistent."""
    if not isinstance(rhs, Mapping):
        rhs = {i: x for i, x in enumerate(rhs) if x != 0}
    aug = SparseMatrix(m.nrows, m.ncols + 1, m.rows)
    for i, x in rhs.items():
        if x != 0:
            aug.rows[i][m.ncols] = x
    pivots, red = rref(aug)
    if pivots and pivots[-1] == m.ncols:
        return None
    x = [Fraction(0)] * m.ncols
    for k, c in enumerate(pivots):
        x[c] = red.rows[k].get(m.ncols, Fraction(0))
    return x


def intersect_subspaces(a: Sequence[Sequence[object]], b: Sequence[Sequence[object]]) -> list[list[Fraction]]:
    """Basis of ``span(a) ∩ span(b)`` via the kernel of the stacked matrix ``[A | -B]``."""
    if not a or not b:
        return []
    n = len(a[0])
    cols = [{i: x for i, x in enumerate(v) if x != 0} for v in a]
    cols += [{i: -x for i, x in enumerate(v) if x != 0} for v in b]
    m = SparseMatrix.from_columns(n, cols)
    out = []
    for k in kernel_basis(m):
        w = [Fraction(0)] * n
        for j, v in enumerate(a):
            if k[j]:
                for i, x in enumerate(v):
                    if x:
                        w[i] += k[j] * x
        out.append(w)
    # a dependent a-list yields redundant kernel vectors; keep an independent subset
    ech = EchelonBasis()
    return [w for w in out if ech.add(dict(enumerate(w)))]


# --------------------------------------------------------------------------
# prime fields


def random_prime(rng: random.Random, lo: int = 2**30, hi: int = 2**31) -> int:
    """A prime in ``[lo, hi)`` chosen reproducibly from ``rng``."""
    from sympy import prevprime

    while True:
        p = prevprime(rng.randrange(lo + 2, hi))
        if p >= lo:
            return int(p)


def to_residue(x: object, p: int) -> int:
    f = Fraction(x)
    if f.denominator % p == 0:
        raise DenominatorDivisibleByP(f"denominator of {f} divisible by {p}")
    return f.numerator * pow(f.denominator, -1, p) % p


def _forward_modp(rows: list[dict[int, int]], p: int) -> int:
    pivrows: dict[int, dict[int, int]] = {}
    rank_ = 0
    for r in rows:
        r = dict(r)
        while r:
            c = min(r)
            prow = pivrows.get(c)
            if prow is None:
                inv = pow(r[c], -1, p)
                pivrows[c] = {k: v * inv % p for k, v in r.items()}
                rank_ += 1
                break
            f = r[c]
            for k, v in prow.items():
                y = (r.get(k, 0) - f * v) % p
                if y:
                    r[k] = y
                else:
                    r.pop(k, None)
    return rank_


def rank_modp(m: SparseMatrix | Sequence[Vector], p: int, ncols: int | None = None) -> int:
    """Rank of ``m`` reduced modulo the prime ``p``.

    Never exceeds the rational rank.  Raises :class:`DenominatorDivisibleByP`
    if some entry cannot be reduced mod ``p``.
    """
    if not isinstance(m, SparseMatrix):
        rows = list(m)
        if ncols is None:
            ncols = 1 + max((c for r in rows for c in r), default=-1)
        m = SparseMatrix(len(rows), ncols, rows)
    res = []
    for r in m.rows:
        rr = {}
        for c, x in r.items():
            y = x % p if type(x) is int else to_residue(x, p)
            if y:
                rr[c] = y
        if rr:
            res.append(rr)
    if not res:
        return 0
    # only columns in the support matter
    support = {c for r in res for c in r}
    ncols = len(support)
    if ncols < m.ncols:
        cid = {c: i for i, c in enumerate(sorted(support))}
        res = [{cid[c]: y for c, y in r.items()} for r in res]
    cells = len(res) * ncols
    if cells <= DENSE_MODP_CELLS and ncols > 8 and len(res) > 8:
        a = np.zeros((len(res), ncols), dtype=np.int64)
        for i, r in enumerate(res):
            for c, y in r.items():
                a[i, c] = y
        return _kernels.rank_modp_dense(a, p)
    return _forward_modp(res, p)


# --------------------------------------------------------------------------
# incremental spans


class EchelonBasis:
    """Incrementally grown echelon basis of a subspace of Q^n.

    Rows are kept as primitive integer vectors whose smallest column is the
    pivot; no two rows share a pivot.
    """

    def __init__(self, vectors: Iterable[Vector] = ()):
        self._rows: dict[int, dict[int, int]] = {}
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, v: Vector) -> dict[int, int]:
        """Integer multiple of ``v`` minus an element of the span, free of pivot columns."""
        r = int_vector(v)
        heap = [c for c in r if c in self._rows]
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            if c not in r:
                continue
            prow = self._rows[c]
            new = _combine(r, prow, c)
            for cc in new:
                if cc not in r and cc in self._rows:
                    heapq.heappush(heap, cc)
            r = new
        return r

    def add(self, v: Vector) -> bool:
        """Add ``v``; return whether it was independent of the current span."""
        r = self.reduce(v)
        if not r:
            return False
        self._rows[min(r)] = r
        return True

    def __contains__(self, v: Vector) -> bool:
        return not self.reduce(v)

    def pivots(self) -> list[int]:
        return sorted(self._rows)

    def vectors(self) -> list[dict[int, int]]:
        return [self._rows[c] for c in sorted(self._rows)]
