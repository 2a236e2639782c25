import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tangent_syzygies import verify
from tangent_syzygies.exactlinalg import SparseMatrix, rank
from tangent_syzygies.geometry import (
    ideal_bottom_component,
    identity_tensor,
    intro_tensor,
    multiplication_tensor,
    rnc,
    sampled_component,
)
from tangent_syzygies.geometry.equations import poly_to_element
from tangent_syzygies.multilinear import (
    EXT,
    SYM,
    Ext,
    GradedElement,
    GradedPiece,
    KindMismatch,
    GradingMismatch,
    Space,
    Sym,
    derive,
    det_map,
    koszul_delta,
    sort_sign,
    span_dim,
    tensor,
)
from tangent_syzygies.schur import (
    bottom_syzygy_dims_segre,
    green_lazarsfeld_ext_dim,
    green_lazarsfeld_sym_dim,
    lascoux_bottom_dims,
    lascoux_dual_dim,
    schur_dim,
)
from tangent_syzygies.syzygy import (
    GradedIdealSlice,
    KoszulSpot,
    MissingDegree,
    NoPreimage,
    NotACycle,
    bottom_cycles,
    bottom_cycles_by_intersection,
    box0_product,
    box_product,
    box_span,
    box_span_certificate,
    in_bottom_cycles,
    koszul_cohomology_dim,
    koszul_kernel,
    lower_cycle_basis,
    pushforward_syzygy,
    segre_bottom_syzygy,
    standard_hook_cycle,
    upper_cycle_basis,
    upper_preimage,
)


def elements_rank(elements):
    return span_dim(elements)


def brute_koszul(n, forms_j, forms_jm1, p, j):
    """K_{p,j} through multilinear.koszul_delta on explicit elements."""
    V = Space("V", n)

    def lift(forms, pp, d):
        out = []
        for S in GradedPiece([Ext(V, pp)]).basis():
            for f in forms:
                g = poly_to_element(f, n, d)
                out.append(tensor(GradedElement(GradedPiece([Ext(V, pp)]), {S: 1}), g))
        return out

    mid = lift(forms_j, p, j)
    images = [koszul_delta(x, 0, 1) for x in mid]
    ker = len(mid) - elements_rank(images) if mid else 0
    below = lift(forms_jm1, p + 1, j - 1) if forms_jm1 else []
    im = elements_rank([koszul_delta(x, 0, 1) for x in below]) if below else 0
    return ker - im


def random_forms(n, d, count, rng):
    monos = list(itertools.combinations_with_replacement(range(n), d))
    out = []
    for _ in range(count):
        f = {m: rng.randint(-3, 3) for m in rng.sample(monos, min(len(monos), 3))}
        f = {m: c for m, c in f.items() if c}
        if f:
            out.append(f)
    # independent subset
    keep = []
    for f in out:
        if elements_rank([poly_to_element(g, n, d) for g in keep + [f]]) == len(keep) + 1:
            keep.append(f)
    return keep


def products(forms, n):
    out = []
    for f in forms:
        for i in range(n):
            g = {}
            for m, c in f.items():
                k = tuple(sorted(m + (i,)))
                g[k] = g.get(k, 0) + c
            out.append(g)
    keep = []
    d = len(next(iter(forms[0]))) + 1
    for f in out:
        if elements_rank([poly_to_element(g, n, d) for g in keep + [f]]) == len(keep) + 1:
            keep.append(f)
    return keep


# slices and spots


def test_spot_validation():
    with pytest.raises(ValueError):
        KoszulSpot(-1, 2)
    with pytest.raises(ValueError):
        KoszulSpot(0, 0)
    with pytest.raises(ValueError):
        KoszulSpot(0, 2, kind="weird")


def test_slice_rejects_dependent_basis():
    with pytest.raises(ValueError):
        GradedIdealSlice(2, {2: [{(0, 0): 1}, {(0, 0): 2}]})


def test_slice_rejects_non_ideal():
    with pytest.raises(ValueError):
        GradedIdealSlice(2, {2: [{(0, 0): 1}], 3: [{(0, 0, 0): 1}]})
    GradedIdealSlice(2, {2: [{(0, 0): 1}], 3: [{(0, 0, 0): 1}, {(0, 0, 1): 1}]})


def test_missing_degree():
    I = GradedIdealSlice(3, {2: [{(0, 1): 1}]})
    assert I.basis(1) == []
    with pytest.raises(MissingDegree):
        I.basis(3)
    with pytest.raises(MissingDegree):
        koszul_cohomology_dim(I, KoszulSpot(0, 3))


def test_minors_2x3():
    I = verify.minor_ideal(2, 3)
    assert [koszul_cohomology_dim(I, KoszulSpot(p, 2)) for p in range(4)] == [3, 2, 0, 0]


def test_minors_2x4_matches_lascoux():
    I = verify.minor_ideal(2, 4)
    assert [koszul_cohomology_dim(I, KoszulSpot(p, 2)) for p in range(4)] == [
        lascoux_bottom_dims(p, 1, 2, 4) for p in range(4)
    ]


def test_zero_ideal():
    I = GradedIdealSlice(4, {2: []}, initial_degree=2)
    assert all(koszul_cohomology_dim(I, KoszulSpot(p, 2)) == 0 for p in range(3))


def test_intro_curve_slice():
    x = rnc(4)
    low = ideal_bottom_component(x, 1, 1)
    I = GradedIdealSlice(5, {2: low}, weights=x.weights, sampled={3: sampled_component(x, 3, 1, 1, rng=5)}, provenance="sampled")
    assert koszul_cohomology_dim(I, KoszulSpot(0, 2)) == 1


def test_modp_never_exceeds_exact():
    I = verify.minor_ideal(2, 4)
    for p in range(3):
        assert koszul_cohomology_dim(I, KoszulSpot(p, 2), modp=2147483629) >= koszul_cohomology_dim(I, KoszulSpot(p, 2))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.integers(3, 4), st.integers(0, 2))
def test_bottom_spot_matches_brute_force(seed, n, p):
    rng = random.Random(seed)
    forms = random_forms(n, 2, rng.randint(1, 4), rng)
    I = GradedIdealSlice(n, {2: forms})
    assert koszul_cohomology_dim(I, KoszulSpot(p, 2), rng=seed) == brute_koszul(n, forms, [], p, 2)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 1))
def test_interior_spot_matches_brute_force(seed, p):
    rng = random.Random(seed)
    n = 3
    low = random_forms(n, 2, rng.randint(1, 2), rng)
    high = products(low, n)
    I = GradedIdealSlice(n, {2: low, 3: high})
    assert koszul_cohomology_dim(I, KoszulSpot(p, 3), rng=seed) == brute_koszul(n, high, low, p, 3)


def test_kernel_vectors_are_cycles():
    I = verify.minor_ideal(2, 3)
    ker = koszul_kernel(I, 1, 2)
    assert len(ker) == 2
    V = Space("V", 6)
    for vec in ker:
        x = None
        for S, form in vec.items():
            t = tensor(GradedElement(GradedPiece([Ext(V, 1)]), {(S,): 1}), poly_to_element(form, 6, 2))
            x = t if x is None else x + t
        assert koszul_delta(x, 0, 1).is_zero()


# bottom cycles


def test_bottom_cycles_examples():
    A2, A3 = Space("U", 2), Space("W", 3)
    assert len(bottom_cycles(A2, Space("W", 2), 0, 1)) == 1
    assert len(bottom_cycles(A2, A3, 1, 1)) == 2 == lascoux_bottom_dims(1, 1, 2, 3)
    ext = len(bottom_cycles(A2, A3, 1, 1, EXT))
    assert ext == green_lazarsfeld_ext_dim(1, 1, 2, 3) == lascoux_dual_dim(1, 1, 2, 3) == 34


def test_ext_example_reference_value():
    # the same space by dense intersection
    assert len(bottom_cycles_by_intersection(Space("U", 2), Space("W", 3), 1, 1, EXT)) == 34


@pytest.mark.parametrize("kind", [SYM, EXT])
@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 2), (3, 3)])
@pytest.mark.parametrize("p,q", [(0, 1), (1, 1), (2, 1), (1, 2)])
def test_bottom_cycles_match_reference_and_formula(kind, dims, p, q):
    U, W = Space("U", dims[0]), Space("W", dims[1])
    got = bottom_cycles(U, W, p, q, kind)
    formula = green_lazarsfeld_sym_dim if kind == SYM else green_lazarsfeld_ext_dim
    assert len(got) == formula(p, q, *dims)
    if len(got) <= 60 and dims != (3, 3):
        assert len(bottom_cycles_by_intersection(U, W, p, q, kind)) == len(got)
    for x in got[:10]:
        assert in_bottom_cycles(x, U, W, q, kind)


def test_sym_formula_uses_hooks():
    # first decomposition written with schur_dim directly
    for nU, nW, p, q in [(2, 3, 1, 1), (3, 3, 2, 1), (4, 4, 2, 2)]:
        direct = sum(
            schur_dim((a + 1,) + (1,) * (p - a + q), nU) * schur_dim((p - a + 1,) + (1,) * (a + q), nW) for a in range(p + 1)
        )
        assert green_lazarsfeld_sym_dim(p, q, nU, nW) == direct


# products


def test_box0_small_example():
    U, W = Space("U", 2), Space("W", 2)
    f = GradedElement(GradedPiece([Sym(U, 0), Ext(U, 2)]), {((0, 0), (0, 1)): 1})
    G = GradedElement(GradedPiece([Sym(W, 1), Ext(W, 1)]), {((1, 0), (1,)): 1})
    out = box0_product(f, G)
    assert out.piece.factors[0].power == 1 and out.piece.factors[1].power == 1
    assert not out.is_zero()
    assert len(out.coeffs) == 2


def test_box0_zero_and_errors():
    U, W = Space("U", 2), Space("W", 2)
    f = GradedElement(GradedPiece([Sym(U, 0), Ext(U, 2)]), {})
    G = GradedElement(GradedPiece([Sym(W, 1), Ext(W, 1)]), {((1, 0), (1,)): 1})
    assert box0_product(f, G).is_zero()
    bad = GradedElement(GradedPiece([Sym(W, 1), Ext(W, 2)]), {((1, 0), (0, 1)): 1})
    with pytest.raises(GradingMismatch):
        box0_product(GradedElement(GradedPiece([Sym(U, 0), Ext(U, 2)]), {((0, 0), (0, 1)): 1}), bad)
    with pytest.raises(KindMismatch):
        box0_product(f, G, kind=EXT)


def test_product_cofactor_witness():
    # (a, b, q) = (1, 1, 1), dim U = 3, dim W = 4, G = w0^2 ⊗ w_{1,2}
    U, W = Space("U", 3), Space("W", 4)
    f = GradedElement(GradedPiece([Sym(U, 1), Ext(U, 3)]), {((1, 0, 0), (0, 1, 2)): 2, ((0, 0, 1), (0, 1, 2)): -1})
    G = GradedElement(GradedPiece([Sym(W, 2), Ext(W, 2)]), {((2, 0, 0, 0), (1, 2)): 1})
    x = koszul_delta(box0_product(f, G), 0, 1)
    w02 = GradedElement(GradedPiece([Ext(W, 2)]), {((0, 2),): 1})
    scalars = set()
    for i in range(3):
        fa = GradedElement(GradedPiece([Ext(U, 3)]), {((0, 1, 2),): f.coeffs.get((tuple(int(k == i) for k in range(3)), (0, 1, 2)), 0)})
        for j in range(3):
            sign, head = sort_sign((i * 4 + 1, j * 4))
            cof = {lab[1]: c * sign for lab, c in x.coeffs.items() if lab[0] == head}
            ref = det_map(tensor(derive((j,), fa), w02)).coeffs
            ref = {lab[0]: c for lab, c in ref.items()}
            assert set(cof) == set(ref)
            for m in ref:
                scalars.add(Fraction(cof[m]) / ref[m])
    assert len(scalars) == 1 and scalars.pop() != 0


@pytest.mark.parametrize("kind", [SYM, EXT])
def test_box_product_smallest(kind):
    U, W = Space("U", 2), Space("W", 2)
    if kind == SYM:
        f = GradedElement(GradedPiece([Sym(U, 0), Ext(U, 2)]), {((0, 0), (0, 1)): 1})
    else:
        f = GradedElement(GradedPiece([Ext(U, 0), Sym(U, 2)]), {((), (1, 1)): 1})
    g = GradedElement(GradedPiece([Sym(W, 0), Ext(W, 2)]), {((0, 0), (0, 1)): 1})
    out = box_product(f, g, kind)
    assert not out.is_zero()
    assert in_bottom_cycles(out, U, W, 1, kind)
    if kind == SYM:
        # spans the one-dimensional K_{0,2}: the 2x2 determinant
        (det,) = bottom_cycles(U, W, 0, 1)
        assert span_dim([out, det]) == 1


def test_box_product_preimage_independence():
    U, W = Space("U", 3), Space("W", 3)
    for f in upper_cycle_basis(U, 1, 2)[:3]:
        for g in upper_cycle_basis(W, 1, 2)[:3]:
            G1 = upper_preimage(g)
            # shift the preimage by a cycle of delta^{2,1}
            z = upper_cycle_basis(W, 2, 1)[0]
            G2 = G1 + z
            assert koszul_delta(G2, 0, 1) == g
            assert box_product(f, g, preimage=G1) == box_product(f, g, preimage=G2)


def test_box_product_rejects_non_cycles():
    U, W = Space("U", 3), Space("W", 3)
    f = GradedElement(GradedPiece([Sym(U, 1), Ext(U, 2)]), {((1, 0, 0), (1, 2)): 1})
    g = upper_cycle_basis(W, 1, 2)[0]
    assert not koszul_delta(f, 0, 1).is_zero()
    with pytest.raises(NotACycle):
        box_product(f, g)


def test_upper_preimage_missing():
    W = Space("W", 3)
    g = GradedElement(GradedPiece([Sym(W, 1), Ext(W, 1)]), {((1, 0, 0), (1,)): 1})
    with pytest.raises(NoPreimage):
        upper_preimage(g)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32))
def test_random_box_products_are_bottom_cycles(seed):
    rng = random.Random(seed)
    kind = rng.choice([SYM, EXT])
    nU, nW = rng.randint(2, 4), rng.randint(2, 4)
    q = rng.randint(1, 2)
    a, b = rng.choice([(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2)])
    U, W = Space("U", nU), Space("W", nW)
    fs = upper_cycle_basis(U, a, b + q + 1) if kind == SYM else lower_cycle_basis(U, a, b + q + 1)
    gs = upper_cycle_basis(W, b, a + q + 1)
    if not fs or not gs:
        return
    f = sum((rng.randint(-3, 3) * x for x in rng.sample(fs, min(3, len(fs)))), fs[0] * 0)
    g = sum((rng.randint(-3, 3) * x for x in rng.sample(gs, min(3, len(gs)))), gs[0] * 0)
    out = box_product(f, g, kind)
    assert koszul_delta(out, 0, 1).is_zero()
    assert in_bottom_cycles(out, U, W, q, kind)


def test_span_example():
    U, W = Space("U", 2), Space("W", 3)
    imgs = box_span(U, W, 1, 1)
    assert span_dim(imgs) == 2
    assert box_span_certificate(U, W, 1, 1) == (2, 2, True)
    assert box_span_certificate(U, W, 1, 1, EXT) == (34, 34, True)


# pushforward


def test_pushforward_identity():
    U, W = Space("U", 2), Space("W", 3)
    for x in bottom_cycles(U, W, 1, 1):
        y = pushforward_syzygy(identity_tensor([2, 3]), x)
        assert y.coeffs == x.coeffs


def test_pushforward_intro_quadric():
    V = [Space(f"V{i}", 2) for i in range(4)]
    F = segre_bottom_syzygy(V, 0, 1, (0, 0, 0, 0))
    y = pushforward_syzygy(intro_tensor(), F)
    assert y.piece.factors[0].power == 0
    quad = {lab[1]: c for lab, c in y.coeffs.items()}
    target = poly_to_element({(0, 4): 1, (1, 3): -4, (2, 2): 3}, 5, 2).coeffs
    target = {lab[0]: c for lab, c in target.items()}
    assert set(quad) == set(target)
    ratios = {Fraction(quad[m]) / target[m] for m in target}
    assert len(ratios) == 1 and ratios.pop() != 0


def test_pushforward_nonvanishing_nu8():
    V = [Space(f"V{i}", 3) for i in range(4)]
    F = segre_bottom_syzygy(V, 1, 1, (1, 0, 0, 0))
    assert not F.is_zero()
    T = multiplication_tensor([2, 2, 2, 2])
    y = pushforward_syzygy(T, F)
    assert not y.is_zero()
    assert koszul_delta(y, 0, 1).is_zero()
    x = rnc(8)
    ideal = ideal_bottom_component(x, 1, 1)
    rows = [poly_to_element(f, 9, 2).to_vector() for f in ideal]
    n = len(rows)
    for S in {lab[0] for lab in y.coeffs}:
        leg = GradedElement(GradedPiece([Sym(Space("V", 9), 2)]), {(lab[1],): c for lab, c in y.coeffs.items() if lab[0] == S})
        assert rank(SparseMatrix(n + 1, 45, rows + [leg.to_vector()])) == rank(SparseMatrix(n, 45, rows))


def test_segre_syzygy_is_a_cycle():
    V = [Space(f"V{i}", 2) for i in range(4)]
    F = segre_bottom_syzygy(V, 0, 1, (0, 0, 0, 0))
    assert not F.is_zero()
    assert koszul_delta(F, 0, 1).is_zero()
    with pytest.raises(ValueError):
        segre_bottom_syzygy(V, 1, 1, (0, 0, 0, 0))


def test_standard_hook_cycle():
    V = Space("V", 3)
    h = standard_hook_cycle(V, 2, 2)
    assert koszul_delta(h, 0, 1).is_zero()


def test_segre_four_factor_row():
    I = verify.segre_tangent_slice((2, 2, 2, 2), sample=False)
    assert koszul_cohomology_dim(I, KoszulSpot(0, 2)) == bottom_syzygy_dims_segre(0, 1, (2, 2, 2, 2)) == 1
    assert koszul_cohomology_dim(I, KoszulSpot(1, 2)) == 0
