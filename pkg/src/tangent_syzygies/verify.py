"""Verification suites shared by the command line and the acceptance tests.

Each suite returns a list of :class:`Check` records; a suite passes when every
check does.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from . import schur
from .exactlinalg import EchelonBasis
from .geometry import (
    b_map_columns,
    b_map_image_rank,
    dim_estimate,
    intro_tensor,
    multiplication_tensor,
    pencil_product,
    rnc,
    sample_secant_osculating_point,
    segre,
)
from .geometry.equations import (
    eval_poly,
    ideal_bottom_component,
    quadrics_by_jets,
    sampled_component,
)
from .multilinear import (
    EXT,
    SYM,
    Ext,
    Factor,
    GradedElement,
    GradedPiece,
    Space,
    Sym,
    coproduct,
    derive,
    det_map,
    edet_map,
    koszul_delta,
    product,
    prolong,
    sym_basis,
    ext_basis,
    factorial_multi,
    tensor,
)
from .syzygy import (
    GradedIdealSlice,
    KoszulSpot,
    bottom_cycles,
    box_span_certificate,
    det_image,
    koszul_cohomology_dim,
    uw_weights,
)

DEFAULT_SEED = 20240917
PROPERTY_INSTANCES = 100


@dataclass
class Check:
    name: str
    expected: object
    got: object
    ok: bool
    note: str = ""

    def to_json(self) -> dict:
        return asdict(self)


def _check(name, expected, got, note="") -> Check:
    return Check(name, expected, got, expected == got, note)


# --------------------------------------------------------------------------
# tensors on rational normal curves


EKS_CASES = [
    (1, 1, 4, (1, 1, 1, 1)),
    (1, 1, 8, (2, 2, 2, 2)),
    (2, 0, 4, (2, 2)),
    (2, 0, 6, (3, 3)),
    (3, 0, 6, (3, 3)),
]


def suite_eks_genus0(seed: int = DEFAULT_SEED) -> list[Check]:
    """Surjectivity of ``b_{q+1}(T)`` onto ``I(σ_q τ^k ν_d)_{q+1}``."""
    out = []
    for q, k, d, fact in EKS_CASES:
        rng = random.Random(seed)
        ideal = len(ideal_bottom_component(rnc(d), q, k, rng=rng))
        r = b_map_image_rank(multiplication_tensor(fact), q)
        name = f"q={q} k={k} d={d} L={'+'.join(map(str, fact))}"
        out.append(_check(name, ideal, r, f"d >= (2k+2)q: {d >= (2 * k + 2) * q}"))
    return out


def membership_cases(max_d: int = 8) -> list[tuple[int, int, tuple[int, ...]]]:
    """``(q, k, factorization)`` with ``2k+2`` positive parts summing to ``d <= max_d``."""
    cases = []
    for d in range(2, max_d + 1):
        for k in (0, 1):
            parts = 2 * k + 2
            for c in itertools.combinations_with_replacement(range(1, d + 1), parts):
                if sum(c) == d:
                    for q in (1, 2):
                        cases.append((q, k, c))
    return cases


def suite_membership(seed: int = DEFAULT_SEED, points: int = 50, max_d: int = 8) -> list[Check]:
    """Every column of ``b_{q+1}(T)`` vanishes on ``σ_q τ^k ν_d``."""
    out = []
    tensors = [("intro", intro_tensor(), 1, 1, 4)]
    for q, k, fact in membership_cases(max_d):
        tensors.append((f"mult{'+'.join(map(str, fact))}", multiplication_tensor(fact), q, k, sum(fact)))
    tensors.append(("intro", intro_tensor(), 2, 1, 4))
    for name, T, q, k, d in tensors:
        rng = random.Random(seed)
        x = rnc(d)
        _, cols = b_map_columns(T, q)
        cols = [c for c in cols if c]
        bad = 0
        for _ in range(points):
            pt = sample_secant_osculating_point(x, q, k, rng)
            bad += sum(1 for c in cols if eval_poly(c, pt) != 0)
        out.append(_check(f"{name} q={q} k={k} ({len(cols)} columns)", 0, bad, f"{points} points"))
    return out


def suite_fulton_hansen(seed: int = DEFAULT_SEED) -> list[Check]:
    """``dim τX = 2 dim X`` and ``dim σ_2 X = 2 dim X + 1``."""
    out = []
    x = pencil_product([2, 2])
    out.append(_check("O(2,2) on P1xP1: dim tau", 4, dim_estimate(x, 1, 1, rng=seed)))
    out.append(_check("O(2,2) on P1xP1: dim sigma_2", 5, dim_estimate(x, 2, 0, rng=seed)))
    for d in range(4, 9):
        x = rnc(d)
        out.append(_check(f"nu_{d}: dim tau", 2, dim_estimate(x, 1, 1, rng=seed)))
        out.append(_check(f"nu_{d}: dim sigma_2", 3, dim_estimate(x, 2, 0, rng=seed)))
    return out


# --------------------------------------------------------------------------
# Koszul cohomology


def minor_ideal(m: int, n: int, q: int = 1) -> GradedIdealSlice:
    """Exact slice of the ideal of ``(q+1)``-minors of the generic ``m × n`` matrix."""
    return GradedIdealSlice(
        m * n, {q + 1: list(det_image(m, n, q))}, weights=uw_weights(m, n), initial_degree=q + 1
    )


def suite_lascoux(seed: int = DEFAULT_SEED, p_max: int = 3) -> list[Check]:
    out = []
    for m, n in [(2, 3), (2, 4)]:
        I = minor_ideal(m, n)
        for p in range(p_max + 1):
            got = koszul_cohomology_dim(I, KoszulSpot(p, 2), rng=seed)
            out.append(_check(f"{m}x{n} K_{p},2", schur.lascoux_bottom_dims(p, 1, m, n), got))
    return out


def segre_tangent_slice(dims, q: int = 1, k: int = 1, seed: int = DEFAULT_SEED, sample: bool = True) -> GradedIdealSlice:
    """``I(σ_q τ^k)`` of a Segre product: degree ``q+1`` exact (jets), degree
    ``q+2`` sampled with a seed-pinned generator when ``sample`` is set."""
    x = segre(dims)
    rng = random.Random(seed)
    low = ideal_bottom_component(x, q, k, rng=rng)
    sampled = {q + 2: sampled_component(x, q + 2, q, k, rng=rng, modp=True)} if sample else None
    return GradedIdealSlice(
        x.dim_V,
        {q + 1: low},
        weights=x.weights,
        initial_degree=q + 1,
        sampled=sampled,
        provenance="sampled" if sample else "exact",
    )


SEGRE_ROWS = [((2, 2, 2, 2), 1), ((3, 3, 3, 2), 2)]


def suite_segre_decomposition(seed: int = DEFAULT_SEED) -> list[Check]:
    out = []
    for dims, p_max in SEGRE_ROWS:
        I = segre_tangent_slice(dims, 1, 1, seed)
        label = "x".join(map(str, dims))
        out.append(
            Check(f"{label}: dim I_3 (sampled, seed={seed})", None, I.dim(3), True, "probabilistic, seed-pinned")
        )
        for p in range(p_max + 1):
            got = koszul_cohomology_dim(I, KoszulSpot(p, 2), rng=seed)
            out.append(_check(f"{label}: K_{p},2", schur.bottom_syzygy_dims_segre(p, 1, dims), got))
    dims = (3, 3, 3, 2)
    thr = schur.segre_vanishing_threshold(1, dims)
    out.append(_check(f"3x3x3x2: p=2 above threshold {thr}", True, 2 > thr))
    return out


def green_lazarsfeld_cases(max_dim: int = 4, p_max: int = 2, q_max: int = 2):
    for nU in range(1, max_dim + 1):
        for nW in range(1, max_dim + 1):
            for p in range(p_max + 1):
                for q in range(1, q_max + 1):
                    yield nU, nW, p, q


def suite_green_lazarsfeld(seed: int = DEFAULT_SEED, max_dim: int = 4, spans: bool = True) -> list[Check]:
    out = []
    for nU, nW, p, q in green_lazarsfeld_cases(max_dim):
        U, W = Space("U", nU), Space("W", nW)
        for kind in (SYM, EXT):
            cyc = bottom_cycles(U, W, p, q, kind)
            if kind == SYM:
                expect = schur.green_lazarsfeld_sym_dim(p, q, nU, nW)
            else:
                expect = schur.green_lazarsfeld_ext_dim(p, q, nU, nW)
                out.append(
                    _check(f"({nU},{nW}) p={p} q={q} LascouxDual", schur.lascoux_dual_dim(p, q, nU, nW), len(cyc))
                )
            out.append(_check(f"({nU},{nW}) p={p} q={q} {kind} dim", expect, len(cyc)))
            if spans and cyc:
                dimK, r, inside = box_span_certificate(U, W, p, q, kind, rng=seed)
                out.append(_check(f"({nU},{nW}) p={p} q={q} {kind} span", (dimK, True), (r, inside)))
    return out


# --------------------------------------------------------------------------
# property suites


def _random_element(piece: GradedPiece, rng: random.Random, density: float = 0.6, bound: int = 5) -> GradedElement:
    coeffs = {}
    for lab in piece.basis():
        if rng.random() < density:
            coeffs[lab] = rng.randint(-bound, bound)
    return GradedElement(piece, coeffs, check=False)


def _unit(n: int, i: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(n))


def prop_jacobi(rng: random.Random) -> bool:
    nU, nW = rng.randint(1, 4), rng.randint(1, 4)
    q = rng.randint(0, min(nW, 3) - 1)
    kind = rng.choice([EXT, SYM])
    if kind == EXT and nU < q + 1:
        kind = SYM
    U, W = Space("U", nU), Space("W", nW)
    n = nU * nW
    f = _random_element(GradedPiece([Factor(U, q + 1, kind)]), rng)
    g = _random_element(GradedPiece([Ext(W, q + 1)]), rng)
    pair = det_map if kind == EXT else edet_map
    D = pair(tensor(f, g))
    i, j = rng.randrange(nU), rng.randrange(nW)
    k = i * nW + j
    lhs = derive(_unit(n, k), D) if kind == EXT else derive((k,), D)
    di = derive((i,), f) if kind == EXT else derive(_unit(nU, i), f)
    rhs = pair(tensor(di, derive((j,), g)))
    return lhs == rhs


def prop_euler(rng: random.Random) -> bool:
    n = rng.randint(1, 4)
    kind = rng.choice([SYM, EXT])
    a = rng.randint(0, 3)
    b = rng.randint(0, 3)
    if kind == EXT and a + b > n:
        b = max(0, n - a)
        a = min(a, n)
    V = Space("V", n)
    f = _random_element(GradedPiece([Factor(V, a + b, kind)]), rng)
    total = None
    alphas = sym_basis(n, a) if kind == SYM else ext_basis(n, a)
    for al in alphas:
        d = derive(al, f)
        head = GradedElement(GradedPiece([Factor(V, a, kind)]), {(al,): Fraction(1, factorial_multi(al)) if kind == SYM else 1})
        term = product(tensor(head, d), 0)
        total = term if total is None else total + term
    return total == f * math.comb(a + b, a)


def prop_leibniz(rng: random.Random) -> bool:
    n = rng.randint(1, 5)
    V = Space("V", n)
    kind = rng.choice([SYM, EXT])
    a = rng.randint(0, min(3, n))
    b = rng.randint(0, min(3, n - a)) if kind == EXT else rng.randint(0, 3)
    f = _random_element(GradedPiece([Factor(V, a, kind)]), rng)
    g = _random_element(GradedPiece([Factor(V, b, kind)]), rng)
    i = rng.randrange(n)
    d = _unit(n, i) if kind == SYM else (i,)
    lhs = derive(d, product(tensor(f, g), 0))
    sign = -1 if (kind == EXT and a % 2) else 1
    t1 = product(tensor(derive(d, f), g), 0) if a else None
    t2 = product(tensor(f, derive(d, g)), 0) * sign if b else None
    parts = [t for t in (t1, t2) if t is not None]
    if not parts:
        return lhs.is_zero()
    rhs = parts[0]
    for t in parts[1:]:
        rhs = rhs + t
    return lhs == rhs


def prop_delta_squared(rng: random.Random) -> bool:
    n = rng.randint(1, 5)
    V = Space("V", n)
    if rng.random() < 0.5:
        a = rng.randint(2, min(4, max(2, n)))
        if a > n:
            return True
        piece = GradedPiece([Ext(V, a), Sym(V, rng.randint(0, 3))])
    else:
        b = rng.randint(0, max(0, n - 2))
        piece = GradedPiece([Sym(V, rng.randint(2, 4)), Ext(V, b)])
    f = _random_element(piece, rng)
    return koszul_delta(koszul_delta(f, 0, 1), 0, 1).is_zero()


# WedgeProlong: the pieces are computed once per case; each instance draws a
# random element on one side and tests membership on the other.

WEDGE_PROLONG_CASES = [
    # (dims, q, d, kind)
    ((3, 3), 1, 1, SYM),
    ((3, 4), 1, 1, SYM),
    ((4, 4), 1, 1, SYM),
    ((4, 4), 1, 2, SYM),
    ((4, 4), 2, 1, SYM),
    ((2, 3), 1, 1, EXT),
    ((3, 3), 1, 1, EXT),
    ((2, 4), 1, 2, EXT),
    ((3, 4), 2, 1, EXT),
    ((3, 3, 3), 1, 1, SYM),
    ((2, 2, 2), 1, 1, SYM),
    ((2, 2, 2, 2), 1, 1, SYM),
]


def _iterated_det_image(dims, m: int) -> list[dict]:
    from .geometry import identity_tensor

    _, cols = b_map_columns(identity_tensor(dims), m - 1)
    return [c for c in cols if c]


def _forms_to_elements(forms, n, deg, kind) -> list[GradedElement]:
    from .multilinear import sorted_to_exps

    piece = GradedPiece([Factor(Space("V", n), deg, kind)])
    out = []
    for f in forms:
        if kind == SYM:
            out.append(GradedElement(piece, {(sorted_to_exps(k, n),): v for k, v in f.items()}, check=False))
        else:
            out.append(GradedElement(piece, {(k,): v for k, v in f.items()}, check=False))
    return out


@lru_cache(maxsize=None)
def wedge_prolong_case(dims: tuple, q: int, d: int, kind: str):
    """``(prolongation of the degree-(q+1) image, degree-(q+d+1) image)``."""
    n = math.prod(dims)
    if len(dims) == 2:
        low = det_image(dims[0], dims[1], q, kind)
        high = det_image(dims[0], dims[1], q + d, kind)
        weights = uw_weights(*dims)
    else:
        low = _iterated_det_image(dims, q + 1)
        high = _iterated_det_image(dims, q + d + 1)
        from .geometry import segre as _segre

        weights = _segre(dims).weights
    B = _forms_to_elements(low, n, q + 1, kind)
    P = prolong(B, d, weights=weights)
    H = _forms_to_elements(high, n, q + d + 1, kind)
    return P, H


def prop_wedge_prolong(rng: random.Random) -> bool:
    dims, q, d, kind = rng.choice(WEDGE_PROLONG_CASES)
    P, H = wedge_prolong_case(dims, q, d, kind)
    ep = EchelonBasis(e.to_vector() for e in P)
    eh = EchelonBasis(e.to_vector() for e in H)
    if len(ep) != len(eh):
        return False
    src, dst = (P, eh) if rng.random() < 0.5 else (H, ep)
    if not src:
        return True
    v: dict = {}
    for e in src:
        c = rng.randint(-9, 9)
        for i, x in e.to_vector().items():
            v[i] = v.get(i, 0) + c * x
    v = {i: x for i, x in v.items() if x}
    return v in dst


def prop_range_equivalence(rng: random.Random) -> bool:
    d = rng.randint(2, 8)
    k = rng.randint(0, 2)
    x = rnc(d)
    seed = rng.randrange(2**32)
    a = quadrics_by_jets(x, k, rng=seed, range_="R3")
    b = quadrics_by_jets(x, k, rng=seed + 1, range_="R1")
    ea = EchelonBasis(_poly_vec(p) for p in a)
    eb = EchelonBasis(_poly_vec(p) for p in b)
    return len(ea) == len(eb) and all(_poly_vec(p) in ea for p in b)


def _poly_vec(p: dict) -> dict:
    # monomials of fixed degree in few variables: encode sorted tuples injectively
    return {sum(i * 64**j for j, i in enumerate(m)): c for m, c in p.items()}


PROPERTIES: dict[str, Callable[[random.Random], bool]] = {
    "jacobi": prop_jacobi,
    "euler": prop_euler,
    "leibniz": prop_leibniz,
    "delta-squared": prop_delta_squared,
    "wedge-prolong": prop_wedge_prolong,
    "range-equivalence": prop_range_equivalence,
}


def run_property(name: str, instances: int = PROPERTY_INSTANCES, seed: int = DEFAULT_SEED) -> Check:
    fn = PROPERTIES[name]
    rng = random.Random(f"{seed}:{name}")
    failures = [i for i in range(instances) if not fn(rng)]
    return Check(f"{name} ({instances} instances)", 0, len(failures), not failures)


def suite_properties(seed: int = DEFAULT_SEED, instances: int = PROPERTY_INSTANCES) -> list[Check]:
    return [run_property(name, instances, seed) for name in PROPERTIES]


SUITES: dict[str, Callable[..., list[Check]]] = {
    "eks-genus0": suite_eks_genus0,
    "membership": suite_membership,
    "fulton-hansen": suite_fulton_hansen,
    "lascoux": suite_lascoux,
    "segre-decomposition": suite_segre_decomposition,
    "green-lazarsfeld": suite_green_lazarsfeld,
    "properties": suite_properties,
}
