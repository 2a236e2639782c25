"""Parametrized varieties given by exact jet oracles."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from ..exactlinalg import SparseMatrix, int_vector, rank
from ..multilinear import Space, sym_basis

MAX_RATIONAL = 10**4


class ChartError(ValueError):
    pass


def random_rational(rng: random.Random, bound: int = MAX_RATIONAL) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def multi_indices(n: int, k: int) -> list[tuple[int, ...]]:
    """All ``α ∈ N^n`` with ``|α| <= k``, by degree and colex within a degree."""
    out = []
    for d in range(k + 1):
        out.extend(sym_basis(n, d))
    return out


def primitive(v: Sequence) -> list[int]:
    """Primitive integer multiple of a rational vector (same projective point)."""
    iv = int_vector({i: x for i, x in enumerate(v) if x != 0})
    return [iv.get(i, 0) for i in range(len(v))]


class JetVariety:
    """A variety ``X ⊂ P V`` with a local lifting ``φ: C^n → V*``.

    ``oracle(t, alpha)`` returns ``∂^α φ(t)`` as a list of rationals.  ``weights``
    optionally assigns a torus weight (int or int tuple) to every coordinate
    such that the ideal of every ``σ_q τ^k X`` is spanned by weight vectors.
    """

    def __init__(
        self,
        dim_V: int,
        n: int,
        oracle: Callable[[tuple, tuple], list],
        weights: Sequence | None = None,
        name: str = "X",
        descriptor: dict | None = None,
    ):
        self.space = Space("V", dim_V)
        self.n = n
        self._oracle = oracle
        self.weights = list(weights) if weights is not None else None
        self.name = name
        self.descriptor = descriptor
        self._cache: dict = {}

    @property
    def dim_V(self) -> int:
        return self.space.dim

    def jet(self, t: Sequence, alpha: Sequence[int]) -> list:
        key = (tuple(Fraction(x) for x in t), tuple(alpha))
        v = self._cache.get(key)
        if v is None:
            if len(key[0]) != self.n or len(key[1]) != self.n:
                raise ChartError(f"expected {self.n} chart coordinates")
            v = self._cache.setdefault(key, list(self._oracle(*key)))
        return v

    def random_point(self, rng: random.Random) -> tuple[Fraction, ...]:
        return tuple(random_rational(rng) for _ in range(self.n))

    def __repr__(self):
        return f"JetVariety({self.name}, n={self.n}, dim V={self.dim_V})"


# --------------------------------------------------------------------------
# monomial charts


@dataclass
class _MonomialChart:
    """Coordinates are products of monomials of degree ``d_f`` in ``n_f``
    homogeneous variables per factor; the chart sets variable 0 of each factor
    to one."""

    factors: list[tuple[int, int]]
    exps: list[tuple[int, ...]] = field(default_factory=list)  # affine exponents per coordinate
    weights: list[tuple[int, ...]] = field(default_factory=list)

    def __post_init__(self):
        per = [sym_basis(n, d) for n, d in self.factors]
        for combo in itertools.product(*per):
            aff = []
            w = []
            for e in combo:
                aff.extend(e[1:])
                w.extend(e)
            self.exps.append(tuple(aff))
            self.weights.append(tuple(w))

    @property
    def n(self) -> int:
        return sum(nf - 1 for nf, _ in self.factors)

    def __call__(self, t, alpha):
        out = []
        for e in self.exps:
            c = 1
            val = Fraction(1)
            for ti, ei, ai in zip(t, e, alpha):
                if ai > ei:
                    c = 0
                    break
                c *= math.factorial(ei) // math.factorial(ei - ai)
                if ei - ai:
                    val *= ti ** (ei - ai)
            out.append(c * val if c else Fraction(0))
        return out


def _from_chart(chart: _MonomialChart, name: str, descriptor: dict) -> JetVariety:
    weights = chart.weights
    return JetVariety(len(chart.exps), chart.n, chart, weights=weights, name=name, descriptor=descriptor)


def rnc(d: int) -> JetVariety:
    """Rational normal curve ``ν_d(P^1)`` with ``φ(t) = (1, t, ..., t^d)``."""
    chart = _MonomialChart([(2, d)])
    x = _from_chart(chart, f"rnc{d}", {"kind": "rnc", "params": {"d": d}})
    x.weights = [w[1] for w in chart.weights]
    return x


def segre(dims: Sequence[int]) -> JetVariety:
    """Segre ``P V_1 × ... × P V_l`` in ``P(V_1⊗...⊗V_l)``, lexicographic coordinates."""
    dims = [int(n) for n in dims]
    chart = _MonomialChart([(n, 1) for n in dims])
    return _from_chart(chart, "segre" + "x".join(map(str, dims)), {"kind": "segre", "params": {"dims": dims}})


def segre_veronese(dims: Sequence[int], degrees: Sequence[int]) -> JetVariety:
    dims = [int(n) for n in dims]
    degrees = [int(d) for d in degrees]
    if len(dims) != len(degrees):
        raise ValueError("dims and degrees must have equal length")
    chart = _MonomialChart(list(zip(dims, degrees)))
    return _from_chart(
        chart,
        "sv" + "x".join(f"{n}^{d}" for n, d in zip(dims, degrees)),
        {"kind": "segre_veronese", "params": {"dims": dims, "degrees": degrees}},
    )


def pencil_product(degrees: Sequence[int]) -> JetVariety:
    """``P^1 × ... × P^1`` embedded by ``O(a_1, ..., a_m)``."""
    degrees = [int(d) for d in degrees]
    chart = _MonomialChart([(2, d) for d in degrees])
    return _from_chart(
        chart, "pencils" + "x".join(map(str, degrees)), {"kind": "pencil_product", "params": {"degrees": degrees}}
    )


def from_descriptor(desc: dict) -> JetVariety:
    kind = desc.get("kind")
    params = desc.get("params", {})
    try:
        if kind == "rnc":
            return rnc(int(params["d"]))
        if kind == "segre":
            return segre(params["dims"])
        if kind == "segre_veronese":
            return segre_veronese(params["dims"], params["degrees"])
        if kind == "pencil_product":
            return pencil_product(params["degrees"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"bad parameters for {kind!r}: {exc}") from exc
    raise ValueError(f"unknown variety kind {kind!r}")


# --------------------------------------------------------------------------
# frames, sampling, dimension


@dataclass
class OsculatingFrame:
    variety: JetVariety
    point: tuple
    order: int
    alphas: list[tuple[int, ...]]
    frame: list[list]


def osculating_frame(x: JetVariety, t: Sequence, k: int) -> OsculatingFrame:
    alphas = multi_indices(x.n, k)
    return OsculatingFrame(x, tuple(t), k, alphas, [x.jet(t, a) for a in alphas])


def sample_secant_osculating_point(x: JetVariety, q: int, k: int, rng: random.Random | int) -> list[int]:
    """A random point on the cone over ``σ_q τ^k X`` as a primitive integer vector."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    v = [Fraction(0)] * x.dim_V
    for _ in range(q):
        fr = osculating_frame(x, x.random_point(rng), k)
        for vec in fr.frame:
            c = random_rational(rng)
            for i, y in enumerate(vec):
                if y:
                    v[i] += c * y
    return primitive(v)


def terracini_columns(x: JetVariety, ts: Sequence, coeffs: Sequence[dict], k: int) -> list[list]:
    """Spanning vectors of the tangent space to the cone over ``σ_q τ^k X`` at
    ``Σ_r Σ_α c_{rα} ∂^α φ(t_r)``."""
    cols = []
    n = x.n
    for t, c in zip(ts, coeffs):
        for a in multi_indices(n, k):
            cols.append(x.jet(t, a))
        for i in range(n):
            v = [Fraction(0)] * x.dim_V
            for a, ca in c.items():
                b = list(a)
                b[i] += 1
                for j, y in enumerate(x.jet(t, tuple(b))):
                    if y:
                        v[j] += ca * y
            cols.append(v)
    return cols


def dim_estimate(x: JetVariety, q: int, k: int, trials: int = 3, rng: random.Random | int = 0) -> int:
    """Projective dimension of ``σ_q τ^k X`` from the rank of the Jacobian of
    ``(t_r, c_{rα}) ↦ Σ c_{rα} ∂^α φ(t_r)`` at random rational parameters.

    A lower bound at every trial, exact with high probability; the maximum
    over ``trials`` is returned.
    """
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    best = -1
    alphas = multi_indices(x.n, k)
    for _ in range(trials):
        ts = [x.random_point(rng) for _ in range(q)]
        cs = [{a: random_rational(rng) for a in alphas} for _ in range(q)]
        cols = terracini_columns(x, ts, cs, k)
        rows = [{i: v[i] for i in range(len(v)) if v[i]} for v in cols]
        r = rank(SparseMatrix(len(rows), x.dim_V, rows))
        best = max(best, min(r, x.dim_V) - 1)
    return best
