"""Koszul cohomology of graded pieces of an ideal.

Forms are sparse dicts keyed by sorted variable tuples (symmetric algebra)
or increasing tuples (exterior algebra).  The Koszul differential on
``Λ^p V ⊗ I_j`` is evaluated in the ambient ``Λ^{p-1} V ⊗ S^{j+1} V``; since
``I_j · V ⊆ I_{j+1}`` this has the same kernel as the differential into
``Λ^{p-1} V ⊗ I_{j+1}``.  Columns are split by torus weight when the forms are
weight vectors, otherwise by connected components of the sparsity pattern.
"""

from __future__ import annotations

import bisect
import itertools
import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..exactlinalg import EchelonBasis, kernel_int, random_prime, rank, rank_modp

EXACT = "exact"


class MissingDegree(KeyError):
    pass


@dataclass(frozen=True)
class KoszulSpot:
    p: int
    j: int
    kind: str = "sym"

    def __post_init__(self):
        if self.p < 0 or self.j < 1:
            raise ValueError("need p >= 0 and j >= 1")
        if self.kind not in ("sym", "ext"):
            raise ValueError(f"unknown kind {self.kind!r}")


def _add_weights(a, b):
    if a is None:
        return b
    if isinstance(a, int):
        return a + b
    return tuple(x + y for x, y in zip(a, b))


def _weight(idx: Iterable[int], weights) -> object:
    w = None
    for i in idx:
        w = _add_weights(w, weights[i] if isinstance(weights[i], int) else tuple(weights[i]))
    return w


def form_weight(form: dict, weights) -> object:
    """Common weight of all monomials of ``form``, or raise ``ValueError``."""
    ws = {_weight(m, weights) for m in form}
    if len(ws) != 1:
        raise ValueError("form is not a weight vector")
    return ws.pop()


class GradedIdealSlice:
    """The pieces ``I_d`` of a homogeneous ideal needed for one Koszul spot.

    ``degrees[d]`` is a list of linearly independent forms.  Degrees below
    ``initial_degree`` are zero.  ``sampled`` may hold probabilistic
    components (objects with ``dim`` and ``contains``) used for reporting and
    for the ``I_d · V ⊆ I_{d+1}`` check.
    """

    def __init__(
        self,
        ambient_dim: int,
        degrees: dict[int, Sequence[dict]],
        kind: str = "sym",
        provenance: str = EXACT,
        weights: Sequence | None = None,
        initial_degree: int | None = None,
        sampled: dict | None = None,
        check: bool = True,
    ):
        self.n = ambient_dim
        self.kind = kind
        self.provenance = provenance
        self.degrees = {d: [dict(f) for f in fs if f] for d, fs in degrees.items()}
        self.sampled = dict(sampled or {})
        if initial_degree is None:
            present = [d for d, fs in self.degrees.items() if fs]
            initial_degree = min(present) if present else min(self.degrees, default=1)
        self.initial_degree = initial_degree
        self.weights = weights
        self._form_weights: dict[int, list] | None = None
        if weights is not None:
            try:
                self._form_weights = {d: [form_weight(f, weights) for f in fs] for d, fs in self.degrees.items()}
            except ValueError:
                self._form_weights = None
        if check:
            self.check()

    def has(self, d: int) -> bool:
        return d < self.initial_degree or d in self.degrees

    def basis(self, d: int) -> list[dict]:
        if d < self.initial_degree:
            return []
        if d not in self.degrees:
            raise MissingDegree(d)
        return self.degrees[d]

    def dim(self, d: int) -> int:
        if d in self.degrees or d < self.initial_degree:
            return len(self.basis(d))
        if d in self.sampled:
            return self.sampled[d].dim
        raise MissingDegree(d)

    def check(self) -> None:
        for d, fs in self.degrees.items():
            keys = {m for f in fs for m in f}
            col = {m: i for i, m in enumerate(sorted(keys))}
            if len(EchelonBasis({col[m]: c for m, c in f.items()} for f in fs)) != len(fs):
                raise ValueError(f"basis of degree {d} is linearly dependent")
        for d, fs in self.degrees.items():
            if self.kind != "sym":
                continue
            if d + 1 in self.degrees:
                target = self.degrees[d + 1]
                keys = {m for f in target for m in f}
                for f in fs:
                    for i in range(self.n):
                        keys.update(_shift(f, i))
                col = {m: i for i, m in enumerate(sorted(keys))}
                ech = EchelonBasis({col[m]: c for m, c in f.items()} for f in target)
                for f in fs:
                    for i in range(self.n):
                        if {col[m]: c for m, c in _shift(f, i).items()} not in ech:
                            raise ValueError(f"I_{d} * V is not contained in I_{d + 1}")
            elif d + 1 in self.sampled:
                comp = self.sampled[d + 1]
                for f in fs:
                    if not comp.contains(f):
                        raise ValueError(f"I_{d} does not vanish on the sample points of degree {d + 1}")


def _shift(f: dict, i: int) -> dict:
    out = {}
    for m, c in f.items():
        mm = list(m)
        bisect.insort(mm, i)
        out[tuple(mm)] = c
    return out


def _wedge_in(i: int, t: tuple) -> tuple[int, tuple | None]:
    pos = bisect.bisect_left(t, i)
    if pos < len(t) and t[pos] == i:
        return 0, None
    return (-1 if pos & 1 else 1), t[:pos] + (i,) + t[pos:]


# --------------------------------------------------------------------------
# differential columns


def _sym_columns(n: int, p: int, forms: Sequence[dict]):
    """Columns of ``δ_{p,j}`` on ``Λ^p V ⊗ span(forms)``: yields ``(S, g, column)``."""
    for S in itertools.combinations(range(n), p):
        for gi, g in enumerate(forms):
            col: dict = defaultdict(int)
            for jx, s in enumerate(S):
                sign = -1 if (p - 1 - jx) & 1 else 1
                rest = S[:jx] + S[jx + 1:]
                for m, c in g.items():
                    mm = list(m)
                    bisect.insort(mm, s)
                    col[(rest, tuple(mm))] += sign * c
            yield S, gi, {k: v for k, v in col.items() if v}


def _ext_columns(n: int, p: int, forms: Sequence[dict]):
    """Columns of ``δ^{p,j}`` on ``S^p V ⊗ span(forms)`` (forms in ``Λ^j V``)."""
    for beta in itertools.combinations_with_replacement(range(n), p):
        for gi, g in enumerate(forms):
            col: dict = defaultdict(int)
            seen = set()
            for jx, i in enumerate(beta):
                if i in seen:
                    continue
                seen.add(i)
                mult = beta.count(i)
                rest = beta[:jx] + beta[jx + 1:]
                for t, c in g.items():
                    sg, tt = _wedge_in(i, t)
                    if sg:
                        col[(rest, tt)] += sg * mult * c
            yield beta, gi, {k: v for k, v in col.items() if v}


def _blocks(n, p, forms, kind, weights, form_weights):
    """Group the differential's columns into independent blocks."""
    gen = _sym_columns(n, p, forms) if kind == "sym" else _ext_columns(n, p, forms)
    if form_weights is not None:
        blocks: dict = defaultdict(list)
        for S, gi, col in gen:
            w = _add_weights(_weight(S, weights), form_weights[gi]) if S else form_weights[gi]
            blocks[w].append((S, gi, col))
        return list(blocks.values())
    # connected components of the bipartite row/column graph
    cols = list(gen)
    parent = list(range(len(cols)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    owner: dict = {}
    for ci, (_, _, col) in enumerate(cols):
        for key in col:
            o = owner.setdefault(key, ci)
            if o != ci:
                ra, rb = find(o), find(ci)
                if ra != rb:
                    parent[ra] = rb
    groups: dict = defaultdict(list)
    for ci in range(len(cols)):
        groups[find(ci)].append(cols[ci])
    return list(groups.values())


def _relabel(block):
    rowid: dict = {}
    out = []
    for _, _, col in block:
        out.append({rowid.setdefault(k, len(rowid)): v for k, v in col.items()})
    return out, len(rowid)


class RankOracle:
    """Exact ranks, with a mod-p full-rank certificate as a shortcut.

    ``rank_p <= rank_Q`` always, so ``rank_p == ncols`` proves full column rank
    over Q.  In ``modp`` mode only mod-p ranks are returned.
    """

    def __init__(self, rng: random.Random | int = 0, modp: int | None = None):
        if not isinstance(rng, random.Random):
            rng = random.Random(rng)
        self.prime = modp if modp is not None else random_prime(rng)
        self.modp_only = modp is not None

    def column_rank(self, cols: list[dict], nrows: int) -> int:
        if not cols:
            return 0
        r = rank_modp(cols, self.prime, ncols=max(nrows, 1))
        if self.modp_only or r == len(cols):
            return r
        return rank(cols)


def differential_rank(I: GradedIdealSlice, p: int, j: int, oracle: RankOracle) -> tuple[int, int]:
    """``(dim Λ^p V ⊗ I_j, rank of the Koszul differential on it)``."""
    forms = I.basis(j)
    if p < 0 or not forms:
        return 0, 0
    if p == 0:
        return len(forms), 0
    fw = I._form_weights.get(j) if I._form_weights is not None else None
    ncols = 0
    r = 0
    for block in _blocks(I.n, p, forms, I.kind, I.weights, fw):
        cols, nrows = _relabel(block)
        ncols += len(cols)
        r += oracle.column_rank(cols, nrows)
    return ncols, r


def koszul_cohomology_dim(
    I: GradedIdealSlice, spot: KoszulSpot, rng: random.Random | int = 0, modp: int | None = None
) -> int:
    """``dim K_{p,j}`` (``kind="sym"``) or ``dim K^{p,j}`` (``kind="ext"``)."""
    if spot.kind != I.kind:
        raise ValueError("spot kind differs from the ideal's algebra")
    oracle = RankOracle(rng, modp)
    p, j = spot.p, spot.j
    if not I.has(j):
        raise MissingDegree(j)
    if not I.has(j - 1):
        raise MissingDegree(j - 1)
    ncols, r = differential_rank(I, p, j, oracle)
    ker = ncols - r
    _, im = differential_rank(I, p + 1, j - 1, oracle)
    return ker - im


def koszul_kernel(I: GradedIdealSlice, p: int, j: int) -> list[dict[tuple, dict]]:
    """Basis of ``ker(Λ^p V ⊗ I_j → Λ^{p-1} V ⊗ S^{j+1} V)`` (or the exterior
    analogue) as dicts ``{S: form}`` with primitive integer coefficients."""
    forms = I.basis(j)
    if not forms or p < 0:
        return []
    fw = I._form_weights.get(j) if I._form_weights is not None else None
    out = []
    if p == 0:
        return [{(): dict(f)} for f in forms]
    for block in _blocks(I.n, p, forms, I.kind, I.weights, fw):
        cols, nrows = _relabel(block)
        rows: dict = defaultdict(dict)
        for ci, col in enumerate(cols):
            for r, v in col.items():
                rows[r][ci] = v
        for vec in kernel_int(list(rows.values()), ncols=len(cols)):
            elt: dict = defaultdict(lambda: defaultdict(int))
            for ci, c in vec.items():
                S, gi, _ = block[ci]
                for m, x in forms[gi].items():
                    elt[S][m] += c * x
            out.append({S: {m: x for m, x in g.items() if x} for S, g in elt.items()})
    return out
