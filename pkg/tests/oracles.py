"""Brute-force counters used as independent oracles by the tests."""

from __future__ import annotations


def count_monomials(degrees: list[int], heights: list[int | None], d: int) -> int:
    """Number of exponent vectors with sum e_i*deg_i = d and e_i < height_i.

    Depth-first enumeration, pruned once the remaining degree goes negative.
    """
    def walk(i: int, remaining: int) -> int:
        if remaining == 0:
            return 1
        if i == len(degrees):
            return 0
        g, h = degrees[i], heights[i]
        top = remaining // g if h is None else min(h - 1, remaining // g)
        return sum(walk(i + 1, remaining - e * g) for e in range(top + 1))

    return walk(0, d)


def free_algebra_dims(counts: dict[int, int], kind: str, top: int) -> list[int]:
    """Dimensions of a free algebra with ``counts`` generators of one monogenic kind."""
    degrees, heights = [], []
    for d, c in sorted(counts.items()):
        degrees += [d] * c
        heights += [None if kind == "polynomial" else 2] * c
    return [count_monomials(degrees, heights, k) for k in range(top + 1)]


def ordered_sums(parts: list[int], total: int) -> int:
    """Number of sequences drawn from ``parts`` (with repetition) summing to ``total``."""
    if total == 0:
        return 1
    return sum(ordered_sums(parts, total - a) for a in parts if a <= total)


def rank_gf2_bruteforce(rows: list[list[int]]) -> int:
    """Rank over F_2 as log2 of the size of the row span."""
    span = {tuple(0 for _ in rows[0])} if rows else {()}
    for r in rows:
        span |= {tuple((a + b) % 2 for a, b in zip(v, r)) for v in span}
    return len(span).bit_length() - 1
