"""Bottom syzygies of two-factor Segre products and the ⊠ products.

Labels follow :mod:`tangent_syzygies.multilinear`; ``U⊗W`` has basis
``u_i⊗w_j ↦ i·dim W + j``.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from functools import lru_cache
from typing import Sequence

from ..exactlinalg import EchelonBasis, SparseMatrix, intersect_subspaces, solve
from ..multilinear import (
    EXT,
    SYM,
    Ext,
    Factor,
    GradedElement,
    GradedPiece,
    GradingMismatch,
    KindMismatch,
    Space,
    Sym,
    coproduct,
    exps_to_sorted,
    koszul_delta,
    sort_sign,
    sorted_to_exps,
    tensor_multi_index,
    tensor_space,
    wedge_sign,
    zero,
)
from .koszul import GradedIdealSlice, koszul_kernel


class NotACycle(ValueError):
    pass


class NoPreimage(AssertionError):
    pass


@lru_cache(maxsize=None)
def _perms(m: int) -> tuple:
    return tuple((p, sort_sign(p)[0]) for p in itertools.permutations(range(m)))


def _minor(s: Sequence[int], t: Sequence[int], nW: int, signed: bool, out: str) -> dict[tuple, int]:
    """``Σ_σ (sgn σ) x_{s[σ r], t[r]}`` multiplied (``out="sym"``) or wedged."""
    img: dict = defaultdict(int)
    for p, sg in _perms(len(s)):
        xs = [s[p[r]] * nW + t[r] for r in range(len(s))]
        c = sg if signed else 1
        if out == SYM:
            img[tuple(sorted(xs))] += c
        else:
            sg2, srt = sort_sign(xs)
            if sg2:
                img[srt] += c * sg2
    return {k: v for k, v in img.items() if v}


def _mul_forms(a: dict, b: dict, out: str) -> dict:
    res: dict = defaultdict(int)
    for ka, va in a.items():
        for kb, vb in b.items():
            if out == SYM:
                res[tuple(sorted(ka + kb))] += va * vb
            else:
                sg, w = wedge_sign(ka, kb)
                if sg:
                    res[w] += sg * va * vb
    return res


@lru_cache(maxsize=None)
def det_image(nU: int, nW: int, q: int, kind: str = SYM) -> tuple[dict, ...]:
    """Spanning forms of the image of ``det: Λ^{q+1}U⊗Λ^{q+1}W → S^{q+1}(U⊗W)``
    (``kind="sym"``) or ``edet: S^{q+1}U⊗Λ^{q+1}W → Λ^{q+1}(U⊗W)``
    (``kind="ext"``), as a linearly independent tuple."""
    m = q + 1
    out = []
    if kind == SYM:
        for s in itertools.combinations(range(nU), m):
            for t in itertools.combinations(range(nW), m):
                out.append(_minor(s, t, nW, True, SYM))
    else:
        ech = EchelonBasis()
        for s in itertools.combinations_with_replacement(range(nU), m):
            for t in itertools.combinations(range(nW), m):
                f = _minor(s, t, nW, False, EXT)
                out.append(f)
        # images of distinct labels can coincide only up to independence; keep a basis
        keys = sorted({k for f in out for k in f})
        col = {k: i for i, k in enumerate(keys)}
        out = [f for f in out if f and ech.add({col[k]: v for k, v in f.items()})]
    return tuple(out)


def uw_weights(nU: int, nW: int) -> list[tuple[int, ...]]:
    """Torus weights of ``U⊗W`` coordinates in ``Z^{dim U + dim W}``."""
    out = []
    for i in range(nU):
        for j in range(nW):
            w = [0] * (nU + nW)
            w[i] += 1
            w[nU + j] += 1
            out.append(tuple(w))
    return out


def det_image_slice(nU: int, nW: int, q: int, kind: str = SYM) -> GradedIdealSlice:
    forms = det_image(nU, nW, q, kind)
    return GradedIdealSlice(
        nU * nW, {q + 1: list(forms)}, kind=kind, weights=uw_weights(nU, nW), initial_degree=q + 1, check=False
    )


def _cycle_piece(UW: Space, p: int, q: int, kind: str) -> GradedPiece:
    if kind == SYM:
        return GradedPiece([Ext(UW, p), Sym(UW, q + 1)])
    return GradedPiece([Sym(UW, p), Ext(UW, q + 1)])


def _to_element(piece: GradedPiece, kind: str, data: dict) -> GradedElement:
    n = piece.factors[0].space.dim
    coeffs = {}
    for S, form in data.items():
        for m, c in form.items():
            if kind == SYM:
                coeffs[(S, sorted_to_exps(m, n))] = c
            else:
                coeffs[(sorted_to_exps(S, n), m)] = c
    return GradedElement(piece, coeffs, check=False)


def bottom_cycles(U: Space, W: Space, p: int, q: int, kind: str = SYM) -> list[GradedElement]:
    """Basis of ``K_{p,q+1}(U,W)`` (``kind="sym"``) or ``K^{p,q+1}(U,W)``.

    Computed as the kernel of the Koszul differential restricted to
    ``Λ^p(U⊗W) ⊗ D`` (resp. ``S^p ⊗ D``), ``D`` the det (edet) image; this is
    the intersection of the full kernel with that subspace.
    """
    if kind not in (SYM, EXT):
        raise ValueError(f"unknown kind {kind!r}")
    UW = tensor_space(U, W)
    I = det_image_slice(U.dim, W.dim, q, kind)
    piece = _cycle_piece(UW, p, q, kind)
    return [_to_element(piece, kind, d) for d in koszul_kernel(I, p, q + 1)]


def bottom_cycles_by_intersection(U: Space, W: Space, p: int, q: int, kind: str = SYM) -> list[GradedElement]:
    """Reference computation: ``ker δ ∩ (Λ^p(U⊗W) ⊗ D)`` via dense subspace
    intersection in the full ambient piece.  Only for small cases."""
    UW = tensor_space(U, W)
    n = UW.dim
    piece = _cycle_piece(UW, p, q, kind)
    if kind == SYM:
        all_forms = [{m: 1} for m in itertools.combinations_with_replacement(range(n), q + 1)]
    else:
        all_forms = [{m: 1} for m in itertools.combinations(range(n), q + 1)]
    full = GradedIdealSlice(n, {q + 1: all_forms}, kind=kind, weights=uw_weights(U.dim, W.dim), check=False)
    ker = [_to_element(piece, kind, d) for d in koszul_kernel(full, p, q + 1)]
    heads = itertools.combinations(range(n), p) if kind == SYM else itertools.combinations_with_replacement(range(n), p)
    sub = [_to_element(piece, kind, {S: f}) for S in heads for f in det_image(U.dim, W.dim, q, kind)]
    if not ker or not sub:
        return []
    basis = intersect_subspaces([e.dense() for e in ker], [e.dense() for e in sub])
    return [GradedElement.from_vector(piece, v) for v in basis]


def in_bottom_cycles(x: GradedElement, U: Space, W: Space, q: int, kind: str = SYM) -> bool:
    """Exact test of ``x ∈ K_{p,q+1}(U,W)``: a cycle whose degree-``(q+1)``
    legs lie in the det (edet) image."""
    if not koszul_delta(x, 0, 1).is_zero():
        return False
    return legs_in_image(x, U.dim, W.dim, q, kind)


@lru_cache(maxsize=None)
def _image_echelon(nU: int, nW: int, q: int, kind: str) -> tuple[dict, EchelonBasis]:
    forms = det_image(nU, nW, q, kind)
    col: dict = {}
    rows = [{col.setdefault(k, len(col)): v for k, v in f.items()} for f in forms]
    return col, EchelonBasis(rows)


def legs_in_image(x: GradedElement, nU: int, nW: int, q: int, kind: str = SYM) -> bool:
    col, ech = _image_echelon(nU, nW, q, kind)
    legs: dict = defaultdict(dict)
    for (h, t), c in x.coeffs.items():
        key = exps_to_sorted(t) if kind == SYM else t
        if key not in col:
            return False
        legs[h][col[key]] = c
    return all(v in ech for v in legs.values())


# --------------------------------------------------------------------------
# ⊠ products


def _sorted_label(lab, kind):
    return exps_to_sorted(lab) if kind == SYM else tuple(lab)


def box0_product(f: GradedElement, G: GradedElement, kind: str = SYM) -> GradedElement:
    """``f ⊠⁰ G`` (``kind="sym"``) or ``f ⊠₀ G`` (``kind="ext"``).

    sym: ``f ∈ S^aU⊗Λ^{b+q+1}U``, ``G ∈ S^{b+1}W⊗Λ^{a+q}W`` gives an element of
    ``Λ^{a+b+1}(U⊗W)⊗S^q(U⊗W)``: split ``Λ^{b+q+1} → Λ^{b+1}⊗Λ^q`` and
    ``Λ^{a+q} → Λ^a⊗Λ^q``, pair ``S^aU`` with ``Λ^aW`` and ``Λ^{b+1}U`` with
    ``S^{b+1}W`` by exterior minors and wedge them, pair the ``Λ^q`` legs by det.

    ext: ``f ∈ Λ^aU⊗S^{b+q+1}U`` gives an element of
    ``S^{a+b+1}(U⊗W)⊗Λ^q(U⊗W)`` with det, permanent and exterior minor.
    """
    if kind not in (SYM, EXT):
        raise ValueError(f"unknown kind {kind!r}")
    fu0, fu1 = f.piece.factors
    gw0, gw1 = G.piece.factors
    head_kind = SYM if kind == SYM else EXT
    if fu0.kind != head_kind or fu1.kind == head_kind or gw0.kind != SYM or gw1.kind != EXT:
        raise KindMismatch("factor kinds do not match the product signature")
    if fu0.space != fu1.space or gw0.space != gw1.space:
        raise GradingMismatch("each argument must live over a single space")
    a = fu0.power
    b = gw0.power - 1
    q = fu1.power - b - 1
    if b < 0 or q < 0 or gw1.power != a + q:
        raise GradingMismatch(f"cannot match gradings {f.piece} and {G.piece}")
    U, W = fu0.space, gw0.space
    UW = tensor_space(U, W)
    nW = W.dim
    if kind == SYM:
        piece = GradedPiece([Ext(UW, a + b + 1), Sym(UW, q)])
    else:
        piece = GradedPiece([Sym(UW, a + b + 1), Ext(UW, q)])
    if f.is_zero() or G.is_zero():
        return zero(piece)
    fd_el = coproduct(f, 1, (b + 1, q))
    fd = [(tuple(_sorted_label(l, k.kind) for l, k in zip(lab, fd_el.piece.factors)), c)
          for lab, c in fd_el.coeffs.items()]
    gd_el = coproduct(G, 1, (a, q))
    gd = [(tuple(_sorted_label(l, k.kind) for l, k in zip(lab, gd_el.piece.factors)), c)
          for lab, c in gd_el.coeffs.items()]
    cache: dict = {}

    def pair(s, t, signed, out):
        key = (s, t, signed, out)
        v = cache.get(key)
        if v is None:
            v = cache[key] = _minor(s, t, nW, signed, out)
        return v

    res: dict = defaultdict(int)
    for (f0, f1, f2), cf in fd:
        for (g0, g1, g2), cg in gd:
            if kind == SYM:
                # f0: S^a U, f1: Λ^{b+1} U, f2: Λ^q U; g0: S^{b+1} W, g1: Λ^a W, g2: Λ^q W
                X = pair(f0, g1, False, EXT)
                Y = _minor_left(f1, g0, nW)
                Z = pair(f2, g2, True, SYM)
                head = _mul_forms(X, Y, EXT)
            else:
                # f0: Λ^a U, f1: S^{b+1} U, f2: S^q U; g0: S^{b+1} W, g1: Λ^a W, g2: Λ^q W
                X = pair(f0, g1, True, SYM)
                Y = pair(f1, g0, False, SYM)
                Z = pair(f2, g2, False, EXT)
                head = _mul_forms(X, Y, SYM)
            if not head or not Z:
                continue
            c = cf * cg
            for h, vh in head.items():
                for z, vz in Z.items():
                    res[(h, z)] += c * vh * vz
    n = UW.dim
    coeffs = {}
    for (h, z), v in res.items():
        if v:
            if kind == SYM:
                coeffs[(h, sorted_to_exps(z, n))] = v
            else:
                coeffs[(sorted_to_exps(h, n), z)] = v
    return GradedElement(piece, coeffs, check=False)


@lru_cache(maxsize=None)
def _minor_left(s: tuple, t: tuple, nW: int) -> dict:
    """``Λ^m U ⊗ S^m W → Λ^m(U⊗W)`` on basis labels (``s`` increasing, ``t`` sorted)."""
    img: dict = defaultdict(int)
    for p, _ in _perms(len(s)):
        xs = [s[r] * nW + t[p[r]] for r in range(len(s))]
        sg, srt = sort_sign(xs)
        if sg:
            img[srt] += sg
    return {k: v for k, v in img.items() if v}


@lru_cache(maxsize=None)
def _upper_delta_matrix(W: Space, a: int, c: int) -> tuple[GradedPiece, GradedPiece, SparseMatrix]:
    """Matrix of ``δ^{a,c}: S^aW⊗Λ^cW → S^{a-1}W⊗Λ^{c+1}W``."""
    src = GradedPiece([Sym(W, a), Ext(W, c)])
    dst = GradedPiece([Sym(W, a - 1), Ext(W, c + 1)])
    cols = []
    for lab in src.basis():
        img = koszul_delta(GradedElement(src, {lab: 1}, check=False), 0, 1)
        cols.append({dst.index(l): v for l, v in img.coeffs.items()})
    return src, dst, SparseMatrix.from_columns(dst.dim, cols)


def upper_preimage(g: GradedElement) -> GradedElement:
    """Some ``G`` with ``δ^{b+1,c-1} G = g`` for ``g ∈ S^bW⊗Λ^cW``."""
    W = g.piece.factors[0].space
    b, c = g.piece.factors[0].power, g.piece.factors[1].power
    src, dst, M = _upper_delta_matrix(W, b + 1, c - 1)
    rhs = {dst.index(l): v for l, v in g.coeffs.items()}
    x = solve(M, rhs)
    if x is None:
        raise NoPreimage("g has no preimage under the Koszul differential")
    return GradedElement.from_vector(src, x)


def box_product(
    f: GradedElement,
    g: GradedElement,
    kind: str = SYM,
    preimage: GradedElement | None = None,
    check: bool = True,
) -> GradedElement:
    """``f ⊠ g``, the bottom syzygy ``δ(f ⊠⁰ G)`` with ``δ G = g``.

    sym: ``f ∈ Z^{a,b+q+1}(U)``, ``g ∈ Z^{b,a+q+1}(W)``, result in
    ``K_{a+b,q+1}(U,W)``.  ext: ``f ∈ Z_{a,b+q+1}(U)`` instead, result in
    ``K^{a+b,q+1}(U,W)``.
    """
    fu0, fu1 = f.piece.factors
    a = fu0.power
    b = g.piece.factors[0].power
    q = fu1.power - b - 1
    if q < 0 or g.piece.factors[1].power != a + q + 1:
        raise GradingMismatch(f"cannot match gradings {f.piece} and {g.piece}")
    if not koszul_delta(f, 0, 1).is_zero():
        raise NotACycle("f is not a Koszul cycle")
    if not koszul_delta(g, 0, 1).is_zero():
        raise NotACycle("g is not a Koszul cycle")
    if preimage is None:
        G = upper_preimage(g)
    else:
        G = preimage
        if koszul_delta(G, 0, 1) != g:
            raise ValueError("preimage does not map to g")
    out = koszul_delta(box0_product(f, G, kind), 0, 1)
    if check:
        U, W = fu0.space, g.piece.factors[0].space
        if not in_bottom_cycles(out, U, W, q, kind):
            raise AssertionError("box product left the bottom syzygy space")
    return out


def upper_cycle_basis(W: Space, a: int, c: int) -> list[GradedElement]:
    """Basis of ``Z^{a,c}(W) = ker δ^{a,c}``."""
    return _delta_kernel(GradedPiece([Sym(W, a), Ext(W, c)]))


def lower_cycle_basis(U: Space, a: int, b: int) -> list[GradedElement]:
    """Basis of ``Z_{a,b}(U) = ker δ_{a,b}``."""
    return _delta_kernel(GradedPiece([Ext(U, a), Sym(U, b)]))


def _label_weight(lab, factors) -> tuple[int, ...]:
    w = [0] * factors[0].space.dim
    for l, f in zip(lab, factors):
        for i in (exps_to_sorted(l) if f.kind == SYM else l):
            w[i] += 1
    return tuple(w)


def _delta_kernel(src: GradedPiece) -> list[GradedElement]:
    """Kernel of the Koszul differential on ``src``, as weight vectors."""
    from ..exactlinalg import kernel_int

    blocks: dict = defaultdict(list)
    for lab in src.basis():
        blocks[_label_weight(lab, src.factors)].append(lab)
    out = []
    for w in sorted(blocks):
        labs = blocks[w]
        if src.factors[0].power == 0:
            out.extend(GradedElement(src, {lab: 1}, check=False) for lab in labs)
            continue
        rows: dict = defaultdict(dict)
        for j, lab in enumerate(labs):
            img = koszul_delta(GradedElement(src, {lab: 1}, check=False), 0, 1)
            for l, v in img.coeffs.items():
                rows[l][j] = v
        for v in kernel_int(list(rows.values()), ncols=len(labs)):
            out.append(GradedElement(src, {labs[j]: x for j, x in v.items()}, check=False))
    return out


def element_weight(x: GradedElement, nU: int, nW: int) -> tuple[int, ...] | None:
    """Common torus weight in ``Z^{dim U + dim W}`` of the labels of ``x`` over
    ``U⊗W``, or ``None`` if ``x`` is not a weight vector."""
    ws = set()
    for lab in x.coeffs:
        w = [0] * (nU + nW)
        for l, f in zip(lab, x.piece.factors):
            for k in (exps_to_sorted(l) if f.kind == SYM else l):
                i, j = divmod(k, nW)
                w[i] += 1
                w[nU + j] += 1
        ws.add(tuple(w))
    return ws.pop() if len(ws) == 1 else None


def box_span(U: Space, W: Space, p: int, q: int, kind: str = SYM) -> list[GradedElement]:
    """Images under ``⊠`` of basis products ``Z(U) ⊗ Z^{b,a+q+1}(W)``, ``a+b=p``."""
    out = []
    for a in range(p + 1):
        b = p - a
        if kind == SYM:
            fs = upper_cycle_basis(U, a, b + q + 1)
        else:
            fs = lower_cycle_basis(U, a, b + q + 1)
        gs = upper_cycle_basis(W, b, a + q + 1)
        for f in fs:
            for g in gs:
                out.append(box_product(f, g, kind, check=False))
    return out


def box_span_certificate(U: Space, W: Space, p: int, q: int, kind: str = SYM, rng=0) -> tuple[int, int, bool]:
    """``(dim K, rank of the ⊠ images, images ⊆ K)`` for ``K_{p,q+1}(U,W)``
    (or ``K^{p,q+1}``).

    Containment is exact.  The rank is taken modulo a random prime per weight
    block; since ``rank_p <= rank_Q <= dim K``, equality with ``dim K`` is an
    exact proof that the images span ``K``.
    """
    import random as _random

    from ..exactlinalg import random_prime, rank_modp

    if not isinstance(rng, _random.Random):
        rng = _random.Random(rng)
    dimK = len(bottom_cycles(U, W, p, q, kind))
    imgs = [x for x in box_span(U, W, p, q, kind) if not x.is_zero()]
    inside = all(in_bottom_cycles(x, U, W, q, kind) for x in imgs)
    blocks: dict = defaultdict(list)
    for x in imgs:
        blocks[element_weight(x, U.dim, W.dim)].append(dict(x.coeffs))
    prime = random_prime(rng)
    r = 0
    for vs in blocks.values():
        cols: dict = {}
        rows = [{cols.setdefault(k, len(cols)): c for k, c in v.items()} for v in vs]
        r += rank_modp(rows, prime, ncols=len(cols))
    return dimK, r, inside


# --------------------------------------------------------------------------
# tensors of linear forms and multi-factor Segre


def pushforward_syzygy(T, cycle: GradedElement) -> GradedElement:
    """Apply ``Λ^pT ⊗ S^{q+1}T`` (or ``S^pT ⊗ Λ^{q+1}T``) coordinatewise."""
    f0, f1 = cycle.piece.factors
    if f0.space.dim != math.prod(T.sources) or f1.space != f0.space:
        raise ValueError("cycle does not live over the source of T")
    V = Space("V", T.target)
    piece = GradedPiece([Factor(V, f0.power, f0.kind), Factor(V, f1.power, f1.kind)])
    images = {}

    def img(k):
        v = images.get(k)
        if v is None:
            v = images[k] = T(tensor_multi_index(T.sources, k))
        return v

    def apply(lab, kind):
        idx = exps_to_sorted(lab) if kind == SYM else lab
        form = {(): 1}
        for k in idx:
            form = _mul_forms(form, {(i,): x for i, x in img(k).items()}, kind)
            if not form:
                break
        return form

    cache0, cache1 = {}, {}
    res: dict = defaultdict(int)
    for (l0, l1), c in cycle.coeffs.items():
        h = cache0.get(l0)
        if h is None:
            h = cache0[l0] = apply(l0, f0.kind)
        t = cache1.get(l1)
        if t is None:
            t = cache1[l1] = apply(l1, f1.kind)
        for kh, vh in h.items():
            for kt, vt in t.items():
                res[(kh, kt)] += c * vh * vt
    coeffs = {}
    for (kh, kt), v in res.items():
        if v:
            l0 = sorted_to_exps(kh, V.dim) if f0.kind == SYM else kh
            l1 = sorted_to_exps(kt, V.dim) if f1.kind == SYM else kt
            coeffs[(l0, l1)] = v
    return GradedElement(piece, coeffs, check=False)


def standard_hook_cycle(V: Space, a: int, c: int) -> GradedElement:
    """``u_0^a ⊗ u_0∧...∧u_{c-1}``, a highest weight vector of ``Z^{a,c}(V)``."""
    e = [0] * V.dim
    e[0] = a
    return GradedElement(GradedPiece([Sym(V, a), Ext(V, c)]), {(tuple(e), tuple(range(c))): 1})


def segre_bottom_syzygy(
    spaces: Sequence[Space], p: int, q: int, pstar: Sequence[int], fs: Sequence[GradedElement] | None = None
) -> GradedElement:
    """Iterated ``⊠`` of ``f_i ∈ Z^{p_i, p-p_i+q+1}(V_i)``.

    With an even number of factors the result lies in
    ``Λ^p(⊗V_i)⊗S^{q+1}(⊗V_i)``; stages alternate between the sym and ext
    products.  Defaults to the highest weight vectors ``u_0^{p_i}⊗u_{0..p-p_i+q}``.
    """
    if len(pstar) != len(spaces) or sum(pstar) != p or any(x < 0 for x in pstar):
        raise ValueError("pstar must be an ordered partition of p with one entry per factor")
    if fs is None:
        fs = [standard_hook_cycle(V, pi, p - pi + q + 1) for V, pi in zip(spaces, pstar)]
    F = fs[0]
    for stage in range(1, len(spaces)):
        F = box_product(F, fs[stage], SYM if stage % 2 == 1 else EXT, check=False)
    return F
