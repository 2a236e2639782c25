"""Lowest-degree equations of ``σ_q τ^k X``.

Two methods:

``jets``
    Exact.  ``I(τ^k X)_2`` is the space of quadrics ``Q`` with
    ``Q(∂^β φ(t), ∂^γ φ(t)) = 0`` for the pairs ``(β, γ)`` of a chosen range, at
    random chart points; the higher secant components are prolongations.

``sampling``
    Probabilistic.  Kernel of the evaluation matrix of all monomials of
    degree ``q+1`` at random points of ``σ_q τ^k X``.

Both split by torus weight when the variety carries weights: the ideals are
spanned by weight vectors, so each weight space is solved on its own.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from ..exactlinalg import EchelonBasis, kernel_int, random_prime, rank_modp
from ..multilinear import GradedElement, GradedPiece, Sym, exps_to_sorted, prolong, sym_basis
from .jets import JetVariety, multi_indices, primitive, sample_secant_osculating_point

MAX_ESCALATIONS = 10


class DegenerateOracle(RuntimeError):
    """The linear system did not stabilize within the escalation budget."""


def _weight_of(mono: Sequence[int], weights) -> object:
    if weights is None:
        return None
    w = None
    for i in mono:
        wi = weights[i]
        if isinstance(wi, int):
            w = wi if w is None else w + wi
        else:
            w = tuple(wi) if w is None else tuple(a + b for a, b in zip(w, wi))
    return w


def monomial_blocks(n: int, d: int, weights) -> dict[object, list[tuple[int, ...]]]:
    """Degree-``d`` monomials (as sorted variable tuples, colex order) grouped by weight."""
    blocks: dict = defaultdict(list)
    for e in sym_basis(n, d):
        m = exps_to_sorted(e)
        blocks[_weight_of(m, weights)].append(m)
    return dict(blocks)


def jet_pairs(n: int, k: int, range_: str = "R3") -> list[tuple[tuple, tuple]]:
    """Pairs ``(β, γ)`` of the constraint range (unordered where symmetric)."""
    if range_ == "R3":
        al = multi_indices(n, k)
        return [(al[i], al[j]) for i in range(len(al)) for j in range(i, len(al))]
    if range_ == "R1":
        zero = (0,) * n
        return [(zero, g) for g in multi_indices(n, 2 * k + 1)]
    if range_ == "R2":
        al = multi_indices(n, 2 * k + 1)
        return [(b, g) for i, b in enumerate(al) for g in al[i:] if sum(b) + sum(g) <= 2 * k + 1]
    raise ValueError(f"unknown range {range_!r}")


def _bilinear_row(a: Sequence[int], b: Sequence[int], monos: Sequence[tuple[int, int]]) -> dict[int, int]:
    """Twice the polarisation ``Q(a, b)`` as a row over the quadric monomials."""
    row = {}
    for j, (i1, i2) in enumerate(monos):
        if i1 == i2:
            v = 2 * a[i1] * b[i1]
        else:
            v = a[i1] * b[i2] + a[i2] * b[i1]
        if v:
            row[j] = v
    return row


@dataclass
class EscalationLog:
    points: list[int] = field(default_factory=list)
    dims: list[int] = field(default_factory=list)


def quadrics_by_jets(
    x: JetVariety,
    k: int,
    rng: random.Random | int = 0,
    range_: str = "R3",
    log: EscalationLog | None = None,
) -> list[dict[tuple, int]]:
    """Basis of ``I(τ^k X)_2`` as primitive integer polynomials
    ``{sorted variable tuple: coeff}``."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    n = x.dim_V
    blocks = monomial_blocks(n, 2, x.weights)
    pairs = jet_pairs(x.n, k, range_)
    alphas = sorted({a for p in pairs for a in p})
    ech = {w: EchelonBasis() for w in blocks}
    biggest = max(len(b) for b in blocks.values())
    npts = max(2, -(-biggest // len(pairs)) + 1)
    used = 0
    history = []
    for _ in range(MAX_ESCALATIONS):
        while used < npts:
            t = x.random_point(rng)
            jets = {a: primitive(x.jet(t, a)) for a in alphas}
            for w, monos in blocks.items():
                for be, ga in pairs:
                    row = _bilinear_row(jets[be], jets[ga], monos)
                    if row:
                        ech[w].add(row)
            used += 1
        dim = sum(len(blocks[w]) - len(ech[w]) for w in blocks)
        if history and dim > history[-1]:
            raise AssertionError("solution space grew after adding points")
        history.append(dim)
        if log is not None:
            log.points.append(used)
            log.dims.append(dim)
        if len(history) >= 3 and history[-1] == history[-2] == history[-3]:
            break
        npts *= 2
    else:
        raise DegenerateOracle(f"no stabilization after {used} points: {history}")
    out = []
    for w, monos in blocks.items():
        rows = ech[w].vectors()
        if len(rows) == len(monos):
            continue
        for v in kernel_int(rows, ncols=len(monos)):
            out.append({monos[j]: c for j, c in v.items()})
    return out


def poly_to_element(poly: dict[tuple, object], n: int, d: int) -> GradedElement:
    from ..multilinear import Space, sorted_to_exps

    piece = GradedPiece([Sym(Space("V", n), d)])
    return GradedElement(piece, {(sorted_to_exps(m, n),): c for m, c in poly.items()}, check=False)


def element_to_poly(f: GradedElement) -> dict[tuple, object]:
    return {exps_to_sorted(lab[0]): c for lab, c in f.coeffs.items()}


def ideal_bottom_component(
    x: JetVariety,
    q: int,
    k: int,
    method: str = "jets",
    rng: random.Random | int = 0,
    log: EscalationLog | None = None,
) -> list[dict[tuple, int]]:
    """Basis of ``I(σ_q τ^k X)_{q+1}`` as integer polynomials keyed by sorted
    variable tuples."""
    if q < 1 or k < 0:
        raise ValueError("need q >= 1 and k >= 0")
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    if method == "jets":
        quads = quadrics_by_jets(x, k, rng, log=log)
        if q == 1:
            return quads
        if not quads:
            return []
        B = [poly_to_element(p, x.dim_V, 2) for p in quads]
        out = prolong(B, q - 1, weights=x.weights)
        return [element_to_poly(f) for f in out]
    if method == "sampling":
        return sampled_component(x, q + 1, q, k, rng, log=log).basis()
    raise ValueError(f"unknown method {method!r}")


# --------------------------------------------------------------------------
# sampling


def eval_monomial(m: Sequence[int], pt: Sequence[int]) -> int:
    return math.prod(pt[i] for i in m)


def eval_poly(poly: dict[tuple, object], pt: Sequence) -> object:
    return sum((c * math.prod(pt[i] for i in m) for m, c in poly.items()), 0)


class SampledComponent:
    """``I(σ_q τ^k X)_d`` estimated from evaluations at random points.

    Each weight block is escalated until its evaluation rank is strictly less
    than the number of points used (so extra points stopped adding
    conditions).  Ranks are exact unless ``modp`` is set, in which case they
    are computed modulo a random 31-bit prime (a lower bound).
    """

    def __init__(self, x: JetVariety, degree: int, q: int, k: int, rng: random.Random, modp: bool = False, log=None):
        self.x = x
        self.degree = degree
        self.q = q
        self.k = k
        self.modp = modp
        self.blocks = monomial_blocks(x.dim_V, degree, x.weights)
        self.points: list[list[int]] = []
        self.prime = random_prime(rng) if modp else None
        self._ranks: dict = {}
        need = max(len(b) for b in self.blocks.values()) + 2
        for _ in range(MAX_ESCALATIONS):
            while len(self.points) < need:
                self.points.append(sample_secant_osculating_point(x, q, k, rng))
            self._ranks = {w: self._block_rank(w) for w in self.blocks}
            if log is not None:
                log.points.append(len(self.points))
                log.dims.append(self.dim)
            if all(r < len(self.points) for r in self._ranks.values()):
                break
            need *= 2
        else:
            raise DegenerateOracle("sampling did not saturate")

    def _eval_rows(self, w) -> list[dict[int, int]]:
        monos = self.blocks[w]
        rows = []
        for pt in self.points:
            row = {}
            for j, m in enumerate(monos):
                v = eval_monomial(m, pt)
                if v:
                    row[j] = v
            if row:
                rows.append(row)
        return rows

    def _block_rank(self, w) -> int:
        rows = self._eval_rows(w)
        if self.modp:
            return rank_modp(rows, self.prime, ncols=len(self.blocks[w]))
        return len(EchelonBasis(rows))

    @property
    def dim(self) -> int:
        return sum(len(self.blocks[w]) - self._ranks[w] for w in self.blocks)

    def block_dims(self) -> dict:
        return {w: len(self.blocks[w]) - self._ranks[w] for w in self.blocks}

    def basis(self) -> list[dict[tuple, int]]:
        out = []
        for w, monos in self.blocks.items():
            if self._ranks[w] == len(monos):
                continue
            for v in kernel_int(self._eval_rows(w), ncols=len(monos)):
                out.append({monos[j]: c for j, c in v.items()})
        return out

    def contains(self, poly: dict[tuple, object]) -> bool:
        """Whether ``poly`` vanishes at every sample point."""
        return all(eval_poly(poly, pt) == 0 for pt in self.points)


def sampled_component(x: JetVariety, degree: int, q: int, k: int, rng: random.Random | int = 0, modp: bool = False, log=None) -> SampledComponent:
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    return SampledComponent(x, degree, q, k, rng, modp=modp, log=log)


# --------------------------------------------------------------------------
# display


def format_poly(poly: dict[tuple, object], var: str = "x") -> str:
    """Render a form with variables in lex order of sorted index tuples."""
    if not poly:
        return "0"
    terms = sorted(poly.items())
    parts = []
    for j, (m, c) in enumerate(terms):
        counts = defaultdict(int)
        for i in m:
            counts[i] += 1
        mono = "*".join(f"{var}{i}" + (f"^{e}" if e > 1 else "") for i, e in sorted(counts.items()))
        a = abs(c)
        coef = "" if a == 1 and mono else f"{a}*" if mono else f"{a}"
        sign = "-" if c < 0 else "+"
        if j == 0:
            parts.append(("-" if c < 0 else "") + coef + mono)
        else:
            parts.append(f" {sign} {coef}{mono}")
    return "".join(parts)


def normalize_poly(poly: dict[tuple, object]) -> dict[tuple, int]:
    """Primitive integer multiple with positive leading (lex-first) coefficient."""
    from ..exactlinalg import int_vector

    keys = sorted(poly)
    iv = int_vector({i: poly[k] for i, k in enumerate(keys)})
    out = {keys[i]: c for i, c in iv.items()}
    if out and out[min(out)] < 0:
        out = {k: -c for k, c in out.items()}
    return out


def canonical_basis(polys: Sequence[dict[tuple, object]]) -> list[dict[tuple, int]]:
    """Reduced echelon basis of a span of forms (variables in lex order),
    each vector made primitive with positive leading coefficient."""
    from ..exactlinalg import SparseMatrix, rref

    keys = sorted({m for p in polys for m in p})
    col = {m: i for i, m in enumerate(keys)}
    rows = [{col[m]: c for m, c in p.items() if c} for p in polys]
    if not rows:
        return []
    _, red = rref(SparseMatrix(len(rows), len(keys), rows))
    return [normalize_poly({keys[j]: x for j, x in r.items()}) for r in red.rows if r]
