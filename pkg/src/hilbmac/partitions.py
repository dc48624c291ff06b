"""Partitions, Young-diagram cell statistics, and two classical q-series checks.

Partitions are plain tuples of weakly decreasing positive ints; the empty
tuple is the partition of 0.  Enumeration order is reverse-lexicographic
(largest first part first), frozen so that every series summation in the
library is deterministic.  Cells are iterated row-major, 1-indexed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple

Partition = Tuple[int, ...]


class CellStat(NamedTuple):
    """Arm/leg/coarm/coleg of one cell (i, j) of a Young diagram.

    a = lam_i - j, l = lam^t_j - i, a' = j - 1, l' = i - 1; hook = a + l + 1.
    """
    i: int
    j: int
    arm: int
    leg: int
    coarm: int
    coleg: int

    @property
    def hook(self) -> int:
        return self.arm + self.leg + 1


def is_partition(parts) -> bool:
    parts = tuple(parts)
    return all(isinstance(p, int) and p >= 1 for p in parts) and \
        all(parts[i] >= parts[i + 1] for i in range(len(parts) - 1))


def weight(lam: Partition) -> int:
    return sum(lam)


def length(lam: Partition) -> int:
    return len(lam)


def iter_partitions(n: int, shard: Optional[Tuple[int, int]] = None) -> Iterator[Partition]:
    """Yield partitions of n in reverse-lexicographic order.

    With shard=(k, K), yields every K-th partition starting at index k, so K
    workers produce a deterministic disjoint cover of the full sequence.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")

    def gen(m: int, maxpart: int) -> Iterator[Partition]:
        if m == 0:
            yield ()
            return
        for first in range(min(m, maxpart), 0, -1):
            for rest in gen(m - first, first):
                yield (first,) + rest

    it = gen(n, n if n else 1)
    if shard is None:
        yield from it
        return
    k, K = shard
    if not (K >= 1 and 0 <= k < K):
        raise ValueError("shard must be (k, K) with 0 <= k < K")
    for idx, lam in enumerate(it):
        if idx % K == k:
            yield lam


def enumerate_partitions(n: int, shard: Optional[Tuple[int, int]] = None) -> List[Partition]:
    return list(iter_partitions(n, shard))


def partitions_upto(n: int) -> List[Partition]:
    """All partitions of weight 0..n, ordered by weight then reverse-lex."""
    out: List[Partition] = []
    for m in range(n + 1):
        out.extend(iter_partitions(m))
    return out


def conjugate(lam: Partition) -> Partition:
    if not lam:
        return ()
    out = [0] * lam[0]
    for p in lam:
        for j in range(p):
            out[j] += 1
    return tuple(out)


def cell_statistics(lam: Partition) -> Dict[Tuple[int, int], CellStat]:
    """Row-major map (i, j) -> CellStat for every cell of the diagram."""
    conj = conjugate(lam)
    out: Dict[Tuple[int, int], CellStat] = {}
    for i, p in enumerate(lam, start=1):
        for j in range(1, p + 1):
            out[(i, j)] = CellStat(i, j, p - j, conj[j - 1] - i, j - 1, i - 1)
    return out


def cells(lam: Partition) -> List[CellStat]:
    """Row-major list of cell statistics (same data as cell_statistics)."""
    conj = conjugate(lam)
    out: List[CellStat] = []
    for i, p in enumerate(lam, start=1):
        for j in range(1, p + 1):
            out.append(CellStat(i, j, p - j, conj[j - 1] - i, j - 1, i - 1))
    return out


def hooks(lam: Partition) -> List[int]:
    return [c.hook for c in cells(lam)]


def dominates(lam: Partition, mu: Partition) -> bool:
    """lam >= mu in dominance order (same weight assumed)."""
    if sum(lam) != sum(mu):
        return False
    pl = pm = 0
    for i in range(max(len(lam), len(mu))):
        pl += lam[i] if i < len(lam) else 0
        pm += mu[i] if i < len(mu) else 0
        if pl < pm:
            return False
    return True


def multiplicities(lam: Partition) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for p in lam:
        out[p] = out.get(p, 0) + 1
    return out


def z_factor(lam: Partition) -> int:
    """z_lam = prod_i i^{m_i} m_i! over part multiplicities m_i."""
    import math
    z = 1
    for part, m in multiplicities(lam).items():
        z *= part ** m * math.factorial(m)
    return z


def partition_counts(n: int) -> List[int]:
    """p(0..n) via Euler's pentagonal recurrence."""
    p = [0] * (n + 1)
    p[0] = 1
    for m in range(1, n + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > m and g2 > m:
                break
            sign = -1 if k % 2 == 0 else 1
            if g1 <= m:
                total += sign * p[m - g1]
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p


def _binomial_fraction(alpha: Fraction, k: int) -> Fraction:
    """Generalized binomial coefficient C(alpha, k) for rational alpha."""
    out = Fraction(1)
    for i in range(k):
        out *= (alpha - i)
        out /= (i + 1)
    return out


def nekrasov_okounkov_check(m, N: int) -> bool:
    """Hook-length series vs Euler-product side, compared to order N.

    Left: sum over partitions of q^{|lam|} prod (h^2 - m^2)/h^2.
    Right: prod_{n>=1} (1 - q^n)^{m^2 - 1}, each factor expanded by the
    generalized binomial series.  m is a rational parameter.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    m = Fraction(m)
    m2 = m * m
    lhs = [Fraction(0)] * (N + 1)
    for n in range(N + 1):
        for lam in iter_partitions(n):
            term = Fraction(1)
            for h in hooks(lam):
                term *= Fraction(h * h) - m2
                term /= h * h
            lhs[n] += term
    rhs = [Fraction(0)] * (N + 1)
    rhs[0] = Fraction(1)
    alpha = m2 - 1
    for n in range(1, N + 1):
        # multiply by (1 - q^n)^{alpha}
        factor = [_binomial_fraction(alpha, k) * (-1) ** k for k in range(N // n + 1)]
        new = [Fraction(0)] * (N + 1)
        for i, c in enumerate(rhs):
            if c == 0:
                continue
            for k, f in enumerate(factor):
                if i + k * n <= N:
                    new[i + k * n] += c * f
        rhs = new
    return lhs == rhs


def goettsche_count_check(N: int) -> bool:
    """Partition counts match the coefficients of prod (1-q^n)^{-1} up to q^N."""
    series = [Fraction(0)] * (N + 1)
    series[0] = Fraction(1)
    for n in range(1, N + 1):
        new = [Fraction(0)] * (N + 1)
        for i, c in enumerate(series):
            if c == 0:
                continue
            k = 0
            while i + k * n <= N:
                new[i + k * n] += c
                k += 1
        series = new
    counts = partition_counts(N)
    return all(series[n] == counts[n] and counts[n] == len(enumerate_partitions(n))
               for n in range(N + 1))
