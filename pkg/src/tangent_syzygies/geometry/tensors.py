"""Tensors of linear forms ``T: V_1⊗...⊗V_l → V`` and the maps ``b_{q+1}(T)``."""

from __future__ import annotations

import bisect
import itertools
import json
import math
import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from ..exactlinalg import SparseMatrix, rank
from ..multilinear import ext_basis, sort_sign, sym_basis, exps_to_sorted
from .jets import JetVariety, random_rational


class LinearTensor:
    """Coefficient array of a multilinear map, stored sparsely.

    ``coeffs[(j_1, ..., j_l)]`` is the image of ``e_{j_1}⊗...⊗e_{j_l}`` as a
    sparse vector ``{target index: rational}``.
    """

    def __init__(self, sources: Sequence[int], target: int, coeffs: Mapping[tuple, Mapping[int, object]]):
        self.sources = tuple(int(s) for s in sources)
        self.target = int(target)
        self.coeffs: dict[tuple, dict[int, object]] = {}
        for idx, vec in coeffs.items():
            idx = tuple(idx)
            if len(idx) != len(self.sources) or any(not 0 <= j < n for j, n in zip(idx, self.sources)):
                raise ValueError(f"bad index {idx}")
            v = {int(i): x for i, x in vec.items() if x != 0}
            if any(not 0 <= i < self.target for i in v):
                raise ValueError(f"target index out of range in {idx}")
            if v:
                self.coeffs[idx] = v

    @property
    def order(self) -> int:
        return len(self.sources)

    def __call__(self, idx: Sequence[int]) -> dict[int, object]:
        return self.coeffs.get(tuple(idx), {})

    def apply_simple(self, vectors: Sequence[Sequence]) -> list:
        """``T(v_1⊗...⊗v_l)`` for dense vectors."""
        out = [0] * self.target
        for idx, vec in self.coeffs.items():
            c = math.prod(v[j] for v, j in zip(vectors, idx))
            if c:
                for i, x in vec.items():
                    out[i] += c * x
        return out

    def dual_image(self, z: Sequence) -> dict[tuple, object]:
        """``T*(z)`` as a sparse ``l``-way array ``idx ↦ z(T(e_idx))``."""
        out = {}
        for idx, vec in self.coeffs.items():
            s = sum((x * z[i] for i, x in vec.items()), 0)
            if s:
                out[idx] = s
        return out

    # json
    def to_json(self) -> dict:
        return {
            "sources": list(self.sources),
            "target": self.target,
            "coeffs": [
                {"index": list(idx), "vector": [str(Fraction(vec.get(i, 0))) for i in range(self.target)]}
                for idx, vec in sorted(self.coeffs.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "LinearTensor":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            sources = data["sources"]
            target = data["target"]
            coeffs = {}
            for entry in data["coeffs"]:
                vec = entry["vector"]
                if isinstance(vec, dict):
                    items = ((int(i), Fraction(x)) for i, x in vec.items())
                else:
                    if len(vec) != target:
                        raise ValueError("vector length differs from target dimension")
                    items = ((i, Fraction(x)) for i, x in enumerate(vec))
                coeffs[tuple(entry["index"])] = dict(items)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed tensor descriptor: {exc}") from exc
        return cls(sources, target, coeffs)


def multiplication_tensor(degrees: Sequence[int], nvars: int = 2) -> LinearTensor:
    """Multiplication ``S^{d_1} ⊗ ... ⊗ S^{d_l} → S^{Σd}`` of forms in ``nvars``
    variables, in colex monomial coordinates (matching the built-in charts)."""
    bases = [sym_basis(nvars, d) for d in degrees]
    tgt = sym_basis(nvars, sum(degrees))
    index = {e: i for i, e in enumerate(tgt)}
    coeffs = {}
    for idx in itertools.product(*(range(len(b)) for b in bases)):
        e = tuple(sum(col) for col in zip(*(b[j] for b, j in zip(bases, idx))))
        coeffs[idx] = {index[e]: 1}
    return LinearTensor([len(b) for b in bases], len(tgt), coeffs)


def identity_tensor(dims: Sequence[int]) -> LinearTensor:
    """``V_1⊗...⊗V_l → V_1⊗...⊗V_l`` with lexicographic target coordinates."""
    coeffs = {}
    for k, idx in enumerate(itertools.product(*(range(n) for n in dims))):
        coeffs[idx] = {k: 1}
    return LinearTensor(dims, math.prod(dims), coeffs)


def generic_matrix_tensor(m: int, n: int) -> LinearTensor:
    return identity_tensor([m, n])


def intro_tensor() -> LinearTensor:
    """``T^4 H^0(O(1)) → H^0(O(4))`` on the projective line."""
    return multiplication_tensor([1, 1, 1, 1])


def change_basis(T: LinearTensor, mats: Sequence[Sequence[Sequence]]) -> LinearTensor:
    """Precompose ``T`` with ``g_i ∈ GL(V_i)``, i.e. ``T'(e_idx) = T(g_1 e_{j1} ⊗ ...)``."""
    coeffs: dict = defaultdict(lambda: defaultdict(int))
    cols = [[{i: g[i][j] for i in range(len(g)) if g[i][j]} for j in range(len(g))] for g in mats]
    for idx in itertools.product(*(range(n) for n in T.sources)):
        for combo in itertools.product(*(cols[f][j].items() for f, j in enumerate(idx))):
            c = math.prod(x for _, x in combo)
            src = tuple(i for i, _ in combo)
            for t, y in T(src).items():
                coeffs[idx][t] += c * y
    return LinearTensor(T.sources, T.target, coeffs)


# --------------------------------------------------------------------------
# b_{q+1}(T)


def _mul_linear(poly: dict[tuple, object], lin: Mapping[int, object]) -> dict[tuple, object]:
    out: dict = defaultdict(int)
    for mono, c in poly.items():
        for i, x in lin.items():
            m = list(mono)
            bisect.insort(m, i)
            out[tuple(m)] += c * x
    return out


def b_map_columns(T: LinearTensor, q: int) -> tuple[list[tuple], list[dict[tuple, object]]]:
    """Images of the basis ``e_{I_1}⊗...⊗e_{I_l}`` of ``⊗ Λ^{q+1} V_i`` as
    polynomials ``{sorted variable tuple: coeff}`` of degree ``q+1``.

    Uses ``Σ_{σ_2..σ_l} Π sgn σ_i Π_r T(e_{I_1[r]} ⊗ e_{I_2[σ_2 r]} ⊗ ...)``.
    """
    m = q + 1
    bases = [ext_basis(n, m) for n in T.sources]
    perms = [(p, sort_sign(p)[0]) for p in itertools.permutations(range(m))]
    labels = list(itertools.product(*bases))
    cols = []
    for lab in labels:
        poly: dict = defaultdict(int)
        for combo in itertools.product(perms, repeat=T.order - 1):
            sign = math.prod(s for _, s in combo)
            term = {(): sign}
            for r in range(m):
                idx = (lab[0][r],) + tuple(lab[f + 1][p[r]] for f, (p, _) in enumerate(combo))
                lin = T(idx)
                if not lin:
                    term = {}
                    break
                term = _mul_linear(term, lin)
            for mono, c in term.items():
                poly[mono] += c
        cols.append({k: v for k, v in poly.items() if v})
    return labels, cols


def monomial_index(n: int, d: int) -> dict[tuple, int]:
    """Sorted-variable tuple ``→`` colex index in ``S^d`` of ``n`` variables."""
    return {exps_to_sorted(e): i for i, e in enumerate(sym_basis(n, d))}


def b_map(T: LinearTensor, q: int) -> SparseMatrix:
    """Matrix of ``b_{q+1}(T): Λ^{q+1}V_1⊗...⊗Λ^{q+1}V_l → S^{q+1}V`` in monomial
    coordinates (rows colex monomials, columns lex-ordered wedge labels)."""
    labels, cols = b_map_columns(T, q)
    index = monomial_index(T.target, q + 1)
    return SparseMatrix.from_columns(len(index), [{index[k]: v for k, v in c.items()} for c in cols])


def b_map_image_rank(T: LinearTensor, q: int) -> int:
    return rank(b_map(T, q).transpose())


# --------------------------------------------------------------------------
# X-multiplicativity


@dataclass
class Verdict:
    ok: bool
    witness: object = None
    trials: int = 0


@dataclass
class MultiplicativityReport:
    one_generic: Verdict
    x_simple: Verdict

    @property
    def x_multiplicative(self) -> bool:
        return self.one_generic.ok and self.x_simple.ok


def _flattening_rank(arr: Mapping[tuple, object], dims: Sequence[int], i: int) -> int:
    rows: dict = defaultdict(dict)
    for idx, x in arr.items():
        rest = idx[:i] + idx[i + 1:]
        rows[idx[i]][rest] = x
    # relabel columns to ints
    colid: dict = {}
    rr = []
    for r in rows.values():
        rr.append({colid.setdefault(c, len(colid)): x for c, x in r.items()})
    return rank(SparseMatrix(len(rr), max(len(colid), 1), rr))


def check_x_multiplicative(
    T: LinearTensor, x: JetVariety, samples: int = 50, rng: random.Random | int = 0
) -> MultiplicativityReport:
    """Probabilistic 1-genericity and exact X-simplicity at sampled points.

    1-genericity: all coordinate simple tensors are tried, then ``samples``
    random simple tensors; a zero image is a definitive counterexample.
    X-simplicity: at ``samples`` random points ``z`` of the cone over ``X`` every
    flattening of ``T*(z)`` must have rank at most one.
    """
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    if x.dim_V != T.target:
        raise ValueError("tensor target and variety ambient dimension differ")
    one = Verdict(True)
    for idx in itertools.product(*(range(n) for n in T.sources)):
        one.trials += 1
        if not T(idx):
            one = Verdict(False, {"simple_tensor": [[int(i == j) for i in range(n)] for j, n in zip(idx, T.sources)]}, one.trials)
            break
    if one.ok:
        for _ in range(samples):
            vecs = [[rng.randint(-50, 50) for _ in range(n)] for n in T.sources]
            if any(not any(v) for v in vecs):
                continue
            one.trials += 1
            if not any(T.apply_simple(vecs)):
                one = Verdict(False, {"simple_tensor": vecs}, one.trials)
                break
    simple = Verdict(True)
    for _ in range(samples):
        t = x.random_point(rng)
        z = x.jet(t, (0,) * x.n)
        arr = T.dual_image(z)
        simple.trials += 1
        for i in range(T.order):
            r = _flattening_rank(arr, T.sources, i) if arr else 0
            if r > 1:
                simple = Verdict(False, {"point": [str(c) for c in t], "flattening": i, "rank": r}, simple.trials)
                break
        if not simple.ok:
            break
    return MultiplicativityReport(one, simple)
