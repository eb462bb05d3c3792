"""Partition combinatorics indexing PBW monomials of graded modules."""

from functools import lru_cache

from .errors import DomainError


class Partition(tuple):
    """Weakly decreasing tuple of positive parts."""

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise DomainError(f"parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise DomainError(f"parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def weight(self):
        return sum(self)


def partitions_of(n, min_part=1):
    """All partitions of n with parts >= min_part, largest-part-first.

    The order is descending lexicographic ((4,) before (3,1) before (2,2)),
    fixed once so Gram matrices and golden files stay reproducible.
    """
    if n < 0:
        raise DomainError("n must be nonnegative")
    if min_part < 1:
        raise DomainError("min_part must be positive")
    out = []

    def descend(remaining, cap, prefix):
        if remaining == 0:
            out.append(Partition(prefix))
            return
        top = min(cap, remaining)
        for p in range(top, min_part - 1, -1):
            descend(remaining - p, p, prefix + (p,))

    descend(n, n, ())
    return out


@lru_cache(maxsize=None)
def partition_count(n):
    """p(n) by Euler's pentagonal-number recurrence (counting oracle)."""
    if n < 0:
        return 0
    if n == 0:
        return 1
    total = 0
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 > n and g2 > n:
            break
        sign = -1 if k % 2 == 0 else 1
        if g1 <= n:
            total += sign * partition_count(n - g1)
        if g2 <= n:
            total += sign * partition_count(n - g2)
        k += 1
    return total
