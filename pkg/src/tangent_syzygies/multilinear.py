"""Graded pieces of symmetric and exterior algebras.

A basis label of a symmetric factor ``S^a U`` is an exponent tuple of length
``dim U`` summing to ``a``; a label of an exterior factor ``Λ^a U`` is a
strictly increasing index tuple of length ``a``.  A label of a tensor product
of factors is the tuple of factor labels.

Normalisations:

* ``∂^α u^β = β!/(β-α)! u^{β-α}`` (plain partial derivatives).
* ``∂_α`` on the exterior algebra is the left contraction, with
  ``∂_{α0,α1,...}`` applying ``∂_{α0}`` first.
* ``Δ`` is stored already divided by the binomial ``C(a+b, a)``, so
  ``product(Δ f) = f``.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .exactlinalg import EchelonBasis, kernel_int

SYM = "sym"
EXT = "ext"


class SplitExceedsPower(ValueError):
    pass


class KindMismatch(ValueError):
    pass


class GradingMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Space:
    name: str
    dim: int

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("dimension must be nonnegative")


@lru_cache(maxsize=None)
def tensor_space(*spaces: Space) -> Space:
    """The space ``V1⊗...⊗Vl`` with basis labels ordered lexicographically."""
    return Space("⊗".join(s.name for s in spaces), math.prod(s.dim for s in spaces))


def tensor_index(dims: Sequence[int], idx: Sequence[int]) -> int:
    out = 0
    for d, i in zip(dims, idx):
        out = out * d + i
    return out


def tensor_multi_index(dims: Sequence[int], k: int) -> tuple[int, ...]:
    out = []
    for d in reversed(dims):
        k, r = divmod(k, d)
        out.append(r)
    return tuple(reversed(out))


# --------------------------------------------------------------------------
# monomial bases


@lru_cache(maxsize=None)
def sym_basis(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Exponent tuples of degree ``d`` in ``n`` variables, colex order."""
    if n == 0:
        return ((),) if d == 0 else ()
    out = []
    for c in itertools.combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in c:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=lambda e: e[::-1])
    return tuple(out)


@lru_cache(maxsize=None)
def ext_basis(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Increasing index tuples of size ``d`` from ``range(n)``, lex order."""
    return tuple(itertools.combinations(range(n), d))


def exps_to_sorted(e: Sequence[int]) -> tuple[int, ...]:
    return tuple(i for i, k in enumerate(e) for _ in range(k))


def sorted_to_exps(s: Iterable[int], n: int) -> tuple[int, ...]:
    e = [0] * n
    for i in s:
        e[i] += 1
    return tuple(e)


def factorial_multi(e: Sequence[int]) -> int:
    return math.prod(math.factorial(k) for k in e)


def wedge_sign(a: Sequence[int], b: Sequence[int]) -> tuple[int, tuple[int, ...] | None]:
    """``u_a ∧ u_b = sign * u_merged`` for increasing tuples; sign 0 if they meet."""
    sb = set(b)
    if sb.intersection(a):
        return 0, None
    inv = 0
    j = 0
    for x in a:
        # count elements of b smaller than x
        while j < len(b) and b[j] < x:
            j += 1
        inv += j
    return (-1 if inv & 1 else 1), tuple(sorted((*a, *b)))


def sort_sign(seq: Sequence[int]) -> tuple[int, tuple[int, ...] | None]:
    """Sign of the permutation sorting ``seq``; 0 if there are repeats."""
    if len(set(seq)) != len(seq):
        return 0, None
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return (-1 if inv & 1 else 1), tuple(sorted(seq))


def ext_contract(i: int, s: tuple[int, ...]) -> tuple[int, tuple[int, ...] | None]:
    """``∂_i u_s`` as ``(sign, label)``; sign 0 when ``i`` is absent."""
    try:
        pos = s.index(i)
    except ValueError:
        return 0, None
    return (-1 if pos & 1 else 1), s[:pos] + s[pos + 1:]


def ext_derive_label(alpha: Sequence[int], s: tuple[int, ...]) -> tuple[int, tuple[int, ...] | None]:
    sign = 1
    for i in alpha:
        sg, s = ext_contract(i, s)
        if not sg:
            return 0, None
        sign *= sg
    return sign, s


def sym_derive_label(alpha: Sequence[int], beta: Sequence[int]) -> tuple[int, tuple[int, ...] | None]:
    c = 1
    out = []
    for a, b in zip(alpha, beta):
        if a > b:
            return 0, None
        c *= math.factorial(b) // math.factorial(b - a)
        out.append(b - a)
    return c, tuple(out)


# --------------------------------------------------------------------------
# graded pieces and elements


@dataclass(frozen=True)
class Factor:
    space: Space
    power: int
    kind: str

    def __post_init__(self):
        if self.kind not in (SYM, EXT):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.power < 0:
            raise ValueError("power must be nonnegative")

    @property
    def dim(self) -> int:
        n, a = self.space.dim, self.power
        return math.comb(n + a - 1, a) if self.kind == SYM else math.comb(n, a)

    def basis(self):
        if self.kind == SYM:
            return sym_basis(self.space.dim, self.power)
        return ext_basis(self.space.dim, self.power)

    def valid(self, lab) -> bool:
        if self.kind == SYM:
            return len(lab) == self.space.dim and sum(lab) == self.power and min(lab, default=0) >= 0
        return (
            len(lab) == self.power
            and all(0 <= x < self.space.dim for x in lab)
            and all(lab[i] < lab[i + 1] for i in range(len(lab) - 1))
        )

    def __str__(self):
        return f"{'S' if self.kind == SYM else 'Λ'}^{self.power}{self.space.name}"


def Sym(space: Space, power: int) -> Factor:
    return Factor(space, power, SYM)


def Ext(space: Space, power: int) -> Factor:
    return Factor(space, power, EXT)


@lru_cache(maxsize=32)
def _piece_index(factors) -> dict:
    # shared between equal pieces; elements often carry their own piece object
    return {b: i for i, b in enumerate(itertools.product(*(f.basis() for f in factors)))}


class GradedPiece:
    """Tensor product of symmetric and exterior powers, with a monomial basis."""

    def __init__(self, factors: Iterable[Factor]):
        self.factors = tuple(factors)
        self._basis = None
        self._index = None

    def __eq__(self, other):
        return isinstance(other, GradedPiece) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return "GradedPiece(" + " ⊗ ".join(map(str, self.factors)) + ")"

    @property
    def dim(self) -> int:
        return math.prod(f.dim for f in self.factors)

    def basis(self) -> list[tuple]:
        if self._basis is None:
            self._basis = list(itertools.product(*(f.basis() for f in self.factors)))
        return self._basis

    def index(self, label) -> int:
        if self._index is None:
            self._index = _piece_index(self.factors)
        return self._index[label]

    def valid(self, label) -> bool:
        return len(label) == len(self.factors) and all(f.valid(l) for f, l in zip(self.factors, label))

    def replace(self, i: int, new: Sequence[Factor]) -> "GradedPiece":
        return GradedPiece(self.factors[:i] + tuple(new) + self.factors[i + 1:])


def _clean(coeffs: Mapping) -> dict:
    return {k: v for k, v in coeffs.items() if v != 0}


class GradedElement:
    """Sparse element of a :class:`GradedPiece`."""

    __slots__ = ("piece", "coeffs")

    def __init__(self, piece: GradedPiece, coeffs: Mapping | None = None, check: bool = True):
        self.piece = piece
        self.coeffs = _clean(coeffs or {})
        if check:
            for lab in self.coeffs:
                if not piece.valid(lab):
                    raise ValueError(f"invalid label {lab} for {piece}")

    @classmethod
    def basis_vector(cls, piece: GradedPiece, label, coeff=1) -> "GradedElement":
        return cls(piece, {tuple(label): coeff})

    @classmethod
    def from_vector(cls, piece: GradedPiece, vec: Sequence | Mapping) -> "GradedElement":
        basis = piece.basis()
        items = vec.items() if isinstance(vec, Mapping) else enumerate(vec)
        return cls(piece, {basis[i]: x for i, x in items if x != 0}, check=False)

    def to_vector(self) -> dict[int, object]:
        return {self.piece.index(lab): c for lab, c in self.coeffs.items()}

    def dense(self) -> list:
        v = [0] * self.piece.dim
        for i, c in self.to_vector().items():
            v[i] = c
        return v

    def is_zero(self) -> bool:
        return not self.coeffs

    def _same(self, other):
        if self.piece != other.piece:
            raise GradingMismatch(f"{self.piece} vs {other.piece}")

    def __add__(self, other):
        self._same(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return GradedElement(self.piece, out, check=False)

    def __neg__(self):
        return GradedElement(self.piece, {k: -v for k, v in self.coeffs.items()}, check=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        return GradedElement(self.piece, {k: v * c for k, v in self.coeffs.items()}, check=False)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self.piece == other.piece and self.coeffs == other.coeffs

    def __repr__(self):
        return f"GradedElement({self.piece}, {len(self.coeffs)} terms)"


def zero(piece: GradedPiece) -> GradedElement:
    return GradedElement(piece, {}, check=False)


def tensor(*elements: GradedElement) -> GradedElement:
    """Outer tensor product, concatenating factor lists."""
    piece = GradedPiece(itertools.chain.from_iterable(e.piece.factors for e in elements))
    out = {}
    for terms in itertools.product(*(e.coeffs.items() for e in elements)):
        lab = tuple(itertools.chain.from_iterable(t[0] for t in terms))
        c = math.prod(t[1] for t in terms)
        out[lab] = out.get(lab, 0) + c
    return GradedElement(piece, out, check=False)


def _map_factor(f: GradedElement, i: int, new_factors: Sequence[Factor], fn) -> GradedElement:
    """Apply a linear map to factor ``i``; ``fn(label)`` yields ``(new_labels, coeff)`` pairs."""
    piece = f.piece.replace(i, new_factors)
    out: dict = defaultdict(int)
    cache = {}
    for lab, c in f.coeffs.items():
        li = lab[i]
        img = cache.get(li)
        if img is None:
            img = cache[li] = list(fn(li))
        head, tail = lab[:i], lab[i + 1:]
        for new, x in img:
            out[head + tuple(new) + tail] += c * x
    return GradedElement(piece, out, check=False)


# --------------------------------------------------------------------------
# coproduct, derivatives, products


def _sym_coproduct_label(beta, a):
    n = len(beta)
    total = sum(beta)
    binom = math.comb(total, a)
    ranges = [range(min(b, a) + 1) for b in beta]
    for alpha in itertools.product(*ranges):
        if sum(alpha) != a:
            continue
        c, rest = sym_derive_label(alpha, beta)
        yield (alpha, rest), Fraction(c, factorial_multi(alpha) * binom)


def _ext_coproduct_label(s, a):
    binom = math.comb(len(s), a)
    for alpha in itertools.combinations(s, a):
        sg, rest = ext_derive_label(alpha, s)
        yield (alpha, rest), Fraction(sg, binom)


def coproduct(f: GradedElement, factor: int, split: tuple[int, int]) -> GradedElement:
    """``Δ`` on one factor, divided by ``C(a+b, a)``."""
    fac = f.piece.factors[factor]
    a, b = split
    if a < 0 or b < 0 or a + b != fac.power:
        raise SplitExceedsPower(f"split {split} does not match power {fac.power}")
    new = (Factor(fac.space, a, fac.kind), Factor(fac.space, b, fac.kind))
    if fac.kind == SYM:
        return _map_factor(f, factor, new, lambda lab: _sym_coproduct_label(lab, a))
    return _map_factor(f, factor, new, lambda lab: _ext_coproduct_label(lab, a))


def derive(d: Sequence[int], f: GradedElement, factor: int = 0) -> GradedElement:
    """``∂^d`` (symmetric factor, ``d`` an exponent tuple) or ``∂_d`` (exterior
    factor, ``d`` an increasing index tuple) acting on one factor of ``f``."""
    fac = f.piece.factors[factor]
    d = tuple(d)
    if fac.kind == SYM:
        if len(d) != fac.space.dim:
            raise ValueError("derivative label has wrong length")
        newpow = fac.power - sum(d)

        def fn(lab):
            c, rest = sym_derive_label(d, lab)
            if c:
                yield (rest,), c
    else:
        newpow = fac.power - len(d)

        def fn(lab):
            sg, rest = ext_derive_label(d, lab)
            if sg:
                yield (rest,), sg

    if newpow < 0:
        return zero(f.piece.replace(factor, (Factor(fac.space, 0, fac.kind),)))
    return _map_factor(f, factor, (Factor(fac.space, newpow, fac.kind),), fn)


def product(f: GradedElement, factor: int) -> GradedElement:
    """Multiply (symmetric) or wedge (exterior) factors ``factor`` and ``factor+1``."""
    f1, f2 = f.piece.factors[factor], f.piece.factors[factor + 1]
    if f1.space != f2.space or f1.kind != f2.kind:
        raise KindMismatch("product needs two factors of the same space and kind")
    piece = f.piece.replace(factor, (Factor(f1.space, f1.power + f2.power, f1.kind),))
    piece = GradedPiece(piece.factors[: factor + 1] + piece.factors[factor + 2:])
    out: dict = defaultdict(int)
    for lab, c in f.coeffs.items():
        x, y = lab[factor], lab[factor + 1]
        if f1.kind == SYM:
            new, s = tuple(i + j for i, j in zip(x, y)), 1
        else:
            s, new = wedge_sign(x, y)
            if not s:
                continue
        out[lab[:factor] + (new,) + lab[factor + 2:]] += s * c
    return GradedElement(piece, out, check=False)


def multiply(f: GradedElement, g: GradedElement) -> GradedElement:
    """Product of two single-factor elements of the same space and kind."""
    return product(tensor(f, g), 0)


def koszul_delta(f: GradedElement, src: int, dst: int) -> GradedElement:
    """Koszul differential moving one degree from factor ``src`` to ``dst``.

    ``(EXT, SYM)`` gives ``δ_{a,b}``, ``(SYM, EXT)`` gives ``δ^{a,b}``; the
    degree-one part is multiplied (resp. wedged) in from the left.
    """
    fs, fd = f.piece.factors[src], f.piece.factors[dst]
    if fs.space != fd.space or fs.kind == fd.kind:
        raise KindMismatch("koszul_delta needs an (ext, sym) or (sym, ext) pair over one space")
    a = fs.power
    n = fs.space.dim
    new_src = Factor(fs.space, a - 1, fs.kind) if a > 0 else None
    new_dst = Factor(fd.space, fd.power + 1, fd.kind)
    factors = list(f.piece.factors)
    if a == 0:
        factors[src] = Factor(fs.space, 0, fs.kind)
        factors[dst] = new_dst
        return zero(GradedPiece(factors))
    factors[src] = new_src
    factors[dst] = new_dst
    piece = GradedPiece(factors)
    out: dict = defaultdict(int)
    for lab, c in f.coeffs.items():
        ls, ld = lab[src], lab[dst]
        if fs.kind == EXT:
            # Δ(u_S) ∋ u_{S \ s_j} ⊗ (-1)^{a-1-j} u_{s_j}, then multiply into S^b
            for j, s in enumerate(ls):
                sign = -1 if (a - 1 - j) & 1 else 1
                rest = ls[:j] + ls[j + 1:]
                e = list(ld)
                e[s] += 1
                new = list(lab)
                new[src] = rest
                new[dst] = tuple(e)
                out[tuple(new)] += Fraction(sign, a) * c
        else:
            for i in range(n):
                bi = ls[i]
                if not bi:
                    continue
                sg, w = wedge_sign((i,), ld)
                if not sg:
                    continue
                e = list(ls)
                e[i] -= 1
                new = list(lab)
                new[src] = tuple(e)
                new[dst] = w
                out[tuple(new)] += Fraction(sg * bi, a) * c
    return GradedElement(piece, out, check=False)


# --------------------------------------------------------------------------
# det, edet, perm


def _as_factor_list(lab, kind, n):
    return exps_to_sorted(lab) if kind == SYM else tuple(lab)


def _pair_map(f: GradedElement, i: int, kind_u: str, kind_w: str, out_kind: str, signed: bool) -> GradedElement:
    fu, fw = f.piece.factors[i], f.piece.factors[i + 1]
    if fu.kind != kind_u or fw.kind != kind_w:
        raise KindMismatch(f"expected {kind_u}⊗{kind_w}, got {fu.kind}⊗{fw.kind}")
    if fu.power != fw.power:
        raise GradingMismatch("both factors need the same power")
    U, W = fu.space, fw.space
    nW = W.dim
    UW = tensor_space(U, W)
    m = fu.power
    perms = [(p, sort_sign(p)[0]) for p in itertools.permutations(range(m))]
    newf = Factor(UW, m, out_kind)
    factors = f.piece.factors[:i] + (newf,) + f.piece.factors[i + 2:]
    piece = GradedPiece(factors)
    out: dict = defaultdict(int)
    cache = {}
    for lab, c in f.coeffs.items():
        key = (lab[i], lab[i + 1])
        img = cache.get(key)
        if img is None:
            s = _as_factor_list(lab[i], kind_u, U.dim)
            t = _as_factor_list(lab[i + 1], kind_w, nW)
            img = defaultdict(int)
            for p, sg in perms:
                xs = [s[p[r]] * nW + t[r] for r in range(m)]
                coef = sg if signed else 1
                if out_kind == SYM:
                    img[sorted_to_exps(xs, UW.dim)] += coef
                else:
                    sg2, srt = sort_sign(xs)
                    if sg2:
                        img[srt] += coef * sg2
            cache[key] = img = [(k, v) for k, v in img.items() if v]
        head, tail = lab[:i], lab[i + 2:]
        for new, x in img:
            out[head + (new,) + tail] += c * x
    return GradedElement(piece, out, check=False)


def det_map(f: GradedElement, i: int = 0) -> GradedElement:
    """``Λ^m U ⊗ Λ^m W → S^m(U⊗W)`` on factors ``i, i+1``."""
    return _pair_map(f, i, EXT, EXT, SYM, True)


def edet_map(f: GradedElement, i: int = 0) -> GradedElement:
    """``S^m U ⊗ Λ^m W → Λ^m(U⊗W)``, the exterior minor."""
    return _pair_map(f, i, SYM, EXT, EXT, False)


def edet_map_left(f: GradedElement, i: int = 0) -> GradedElement:
    """``Λ^m U ⊗ S^m W → Λ^m(U⊗W)``, the exterior minor with the roles swapped."""
    fu, fw = f.piece.factors[i], f.piece.factors[i + 1]
    if fu.kind != EXT or fw.kind != SYM:
        raise KindMismatch("expected ext⊗sym")
    U, W = fu.space, fw.space
    UW = tensor_space(U, W)
    m = fu.power
    piece = GradedPiece(f.piece.factors[:i] + (Ext(UW, m),) + f.piece.factors[i + 2:])
    out: dict = defaultdict(int)
    for lab, c in f.coeffs.items():
        s, t = lab[i], exps_to_sorted(lab[i + 1])
        for p in itertools.permutations(range(m)):
            xs = [s[r] * W.dim + t[p[r]] for r in range(m)]
            sg, srt = sort_sign(xs)
            if sg:
                out[lab[:i] + (srt,) + lab[i + 2:]] += sg * c
    return GradedElement(piece, out, check=False)


def perm_map(f: GradedElement, i: int = 0) -> GradedElement:
    """``S^m U ⊗ S^m W → S^m(U⊗W)``, the permanent."""
    return _pair_map(f, i, SYM, SYM, SYM, False)


def relabel(f: GradedElement, i: int, space: Space) -> GradedElement:
    """View factor ``i`` as living on ``space`` (same dimension, new name)."""
    fac = f.piece.factors[i]
    if fac.space.dim != space.dim:
        raise ValueError("dimension mismatch")
    piece = f.piece.replace(i, (Factor(space, fac.power, fac.kind),))
    return GradedElement(piece, f.coeffs, check=False)


def swap(f: GradedElement, i: int) -> GradedElement:
    """Swap factors ``i`` and ``i+1`` (no sign: the tensor product is ungraded)."""
    fac = list(f.piece.factors)
    fac[i], fac[i + 1] = fac[i + 1], fac[i]
    out = {}
    for lab, c in f.coeffs.items():
        l = list(lab)
        l[i], l[i + 1] = l[i + 1], l[i]
        out[tuple(l)] = c
    return GradedElement(GradedPiece(fac), out, check=False)


# --------------------------------------------------------------------------
# prolongation


def _label_weight(lab, kind, weights):
    if kind == SYM:
        idx = exps_to_sorted(lab)
    else:
        idx = lab
    w = None
    for i in idx:
        wi = weights[i]
        if isinstance(wi, int):
            w = wi if w is None else w + wi
        else:
            w = tuple(wi) if w is None else tuple(x + y for x, y in zip(w, wi))
    return w


def prolong(
    B: Sequence[GradedElement],
    d: int,
    kind: str | None = None,
    space: Space | None = None,
    weights: Sequence | None = None,
) -> list[GradedElement]:
    """Basis of the ``d``-th prolongation ``Δ^{-1}(S^d ⊗ B)`` (or ``Λ^d ⊗ B``).

    ``B`` is a list of single-factor elements of one degree.  When the
    variables carry torus ``weights`` and ``B`` is spanned by weight vectors the
    computation splits into weight blocks.  The result consists of primitive
    integer vectors.
    """
    if B:
        fac = B[0].piece.factors[0]
        space, kind, deg = fac.space, fac.kind, fac.power
    else:
        if space is None or kind is None:
            raise ValueError("an empty B needs space and kind")
        return []
    n = space.dim
    target = Factor(space, deg + d, kind)
    tpiece = GradedPiece([target])
    if d == 0:
        ech = EchelonBasis(b.to_vector() for b in B)
        return [GradedElement.from_vector(tpiece, v) for v in ech.vectors()]
    # reduced echelon form of B keyed by labels
    bpiece = GradedPiece([fac])
    basis_b = [lab[0] for lab in bpiece.basis()]
    from .exactlinalg import SparseMatrix, rref

    m = SparseMatrix(len(B), bpiece.dim, [b.to_vector() for b in B])
    pivots, red = rref(m)
    pivrow = {basis_b[c]: {basis_b[j]: x for j, x in red.rows[k].items() if j != c} for k, c in enumerate(pivots)}

    def reduce(lab):
        # class of e_lab in S^{deg}/B, as {nonpivot label: coeff}
        r = pivrow.get(lab)
        if r is None:
            return {lab: 1}
        return {k: -x for k, x in r.items()}

    if kind == SYM:
        alphas = sym_basis(n, d)
    else:
        alphas = ext_basis(n, d)

    cols = target.basis()
    blocks: dict = defaultdict(list)
    if weights is not None:
        for lab in cols:
            blocks[_label_weight(lab, kind, weights)].append(lab)
    else:
        blocks[None] = list(cols)

    out = []
    red_cache = {}
    for _, bcols in sorted(blocks.items(), key=lambda kv: str(kv[0])):
        rows: dict = defaultdict(dict)
        for j, lab in enumerate(bcols):
            if kind == SYM:
                it = (a for a in alphas if all(x <= y for x, y in zip(a, lab)))
            else:
                it = itertools.combinations(lab, d)
            for a in it:
                if kind == SYM:
                    c, rest = sym_derive_label(a, lab)
                else:
                    c, rest = ext_derive_label(a, lab)
                if not c:
                    continue
                rr = red_cache.get(rest)
                if rr is None:
                    rr = red_cache[rest] = reduce(rest)
                for k, x in rr.items():
                    key = (a, k)
                    rows[key][j] = rows[key].get(j, 0) + c * x
        for v in kernel_int(list(rows.values()), ncols=len(bcols)):
            out.append(GradedElement(tpiece, {(bcols[j],): x for j, x in v.items()}, check=False))
    return out


def span_dim(elements: Sequence[GradedElement]) -> int:
    return len(EchelonBasis(e.to_vector() for e in elements))


def in_span(x: GradedElement, elements: Sequence[GradedElement]) -> bool:
    return x.to_vector() in EchelonBasis(e.to_vector() for e in elements)
