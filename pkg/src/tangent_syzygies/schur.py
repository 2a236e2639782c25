"""Partitions and Schur module dimensions."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __init__(self, parts: Sequence[int] = ()):
        parts = tuple(int(x) for x in parts if x != 0)
        if any(x < 0 for x in parts):
            raise ValueError("parts must be positive")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError("parts must be weakly decreasing")
        object.__setattr__(self, "parts", parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i: int) -> int:
        return self.parts[i] if i < len(self.parts) else 0

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition([sum(1 for p in self.parts if p > j) for j in range(self.parts[0])])

    def is_hook(self) -> bool:
        return len(self.parts) <= 1 or self.parts[1] <= 1

    def cells(self) -> Iterator[tuple[int, int]]:
        for i, p in enumerate(self.parts):
            for j in range(p):
                yield i, j

    def hook_length(self, i: int, j: int) -> int:
        conj = self.conjugate()
        return self.parts[i] - j + conj[j] - i - 1

    @classmethod
    def hook(cls, first: int, legs: int) -> "Partition":
        """The hook ``(first, 1, ..., 1)`` with ``legs`` ones below the first row."""
        if first <= 0:
            return cls(())
        return cls((first,) + (1,) * legs)

    def __repr__(self):
        return f"Partition{self.parts}"


def partitions(t: int, max_part: int | None = None) -> Iterator[Partition]:
    """All partitions of ``t`` in reverse lexicographic order."""
    if max_part is None:
        max_part = t

    def rec(n, m):
        if n == 0:
            yield ()
            return
        for k in range(min(n, m), 0, -1):
            for rest in rec(n - k, k):
                yield (k,) + rest

    for p in rec(t, max_part):
        yield Partition(p)


def ordered_partitions(p: int, length: int) -> list[tuple[int, ...]]:
    """Ordered partitions of ``p`` into ``length`` nonnegative entries, colex order."""
    if length == 0:
        return [()] if p == 0 else []
    out = [
        c for c in itertools.product(range(p + 1), repeat=length) if sum(c) == p
    ]
    out.sort(key=lambda c: c[::-1])
    return out


def schur_dim(lam: Partition | Sequence[int], n: int) -> int:
    """``dim S^λ(C^n)`` by the hook-content formula."""
    if not isinstance(lam, Partition):
        lam = Partition(lam)
    if len(lam) > n:
        return 0
    num = Fraction(1)
    for i, j in lam.cells():
        num *= Fraction(n + j - i, lam.hook_length(i, j))
    assert num.denominator == 1
    return int(num)


def count_ssyt(lam: Partition | Sequence[int], n: int) -> int:
    """Number of semistandard tableaux of shape ``λ`` with entries in ``range(n)``.

    Brute-force oracle for :func:`schur_dim`.
    """
    if not isinstance(lam, Partition):
        lam = Partition(lam)
    shape = lam.parts

    def rows(prev: tuple[int, ...] | None, r: int) -> int:
        if r == len(shape):
            return 1
        total = 0
        for row in itertools.combinations_with_replacement(range(n), shape[r]):
            if prev is not None and any(row[j] <= prev[j] for j in range(len(row))):
                continue
            total += rows(row, r + 1)
        return total

    return rows(None, 0)


def cauchy_littlewood_dims(t: int, nU: int, nW: int) -> tuple[int, int]:
    ext_total = sum(schur_dim(l, nU) * schur_dim(l.conjugate(), nW) for l in partitions(t))
    sym_total = sum(schur_dim(l, nU) * schur_dim(l, nW) for l in partitions(t))
    return ext_total, sym_total


def hook_dim(first: int, legs: int, n: int) -> int:
    """``dim S^{(first, 1^legs)}(C^n)``; zero for ``first <= 0``.

    The empty partition (first = legs = 0) gives 1.
    """
    if first <= 0:
        return 1 if legs == 0 and first == 0 else 0
    return schur_dim(Partition.hook(first, legs), n)


def bottom_syzygy_dims_segre(p: int, q: int, dims: Sequence[int]) -> int:
    """``Σ_{p*} Π_i dim S^{(p_i+1, 1^{p-p_i+q})} V_i`` over ordered partitions of ``p``."""
    if not dims:
        raise ValueError("need at least one factor")
    total = 0
    for ps in ordered_partitions(p, len(dims)):
        total += math.prod(hook_dim(pi + 1, p - pi + q, n) for pi, n in zip(ps, dims))
    return total


def segre_vanishing_threshold(q: int, dims: Sequence[int]) -> Fraction:
    """All bottom syzygies vanish for ``p`` strictly above this value (even factor count)."""
    l = len(dims)
    return Fraction(sum(n - q - 1 for n in dims), l - 1)


def lascoux_bottom_dims(p: int, q: int, nU: int, nW: int) -> int:
    return sum(
        hook_dim(a + 1, b + q, nU) * hook_dim(b + 1, a + q, nW) for a in range(p + 1) for b in [p - a]
    )


def z_upper_dim(a: int, c: int, n: int) -> int:
    """``dim Z^{a,c}(C^n) = dim ker(δ^{a,c}: S^a⊗Λ^c → S^{a-1}⊗Λ^{c+1})``."""
    if c == 0:
        return 1 if a == 0 else 0
    return hook_dim(a + 1, c - 1, n)


def z_lower_dim(a: int, b: int, n: int) -> int:
    """``dim Z_{a,b}(C^n) = dim ker(δ_{a,b}: Λ^a⊗S^b → Λ^{a-1}⊗S^{b+1})``."""
    if b == 0:
        return 1 if a == 0 else 0
    return hook_dim(b, a, n)


def green_lazarsfeld_sym_dim(p: int, q: int, nU: int, nW: int) -> int:
    return sum(z_upper_dim(a, p - a + q + 1, nU) * z_upper_dim(p - a, a + q + 1, nW) for a in range(p + 1))


def green_lazarsfeld_ext_dim(p: int, q: int, nU: int, nW: int) -> int:
    return sum(z_lower_dim(a, p - a + q + 1, nU) * z_upper_dim(p - a, a + q + 1, nW) for a in range(p + 1))


def lascoux_dual_dim(c: int, q: int, nU: int, nW: int) -> int:
    return sum(hook_dim(b + q + 1, c - b, nU) * hook_dim(b + 1, c - b + q, nW) for b in range(c + 1))
