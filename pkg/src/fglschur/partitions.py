"""Partitions, strict partitions and classical Schur polynomials.

Partitions are plain tuples of positive integers in weakly decreasing order;
strict partitions decrease strictly. Trailing zeros are dropped on input.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Iterator, Sequence


class PartitionError(ValueError):
    pass


def normalize(parts: Sequence[int]) -> tuple[int, ...]:
    out = tuple(int(p) for p in parts)
    while out and out[-1] == 0:
        out = out[:-1]
    return out


def partition(parts: Sequence[int]) -> tuple[int, ...]:
    """Validate and normalize a partition."""
    out = normalize(parts)
    if any(p < 0 for p in out) or any(a < c for a, c in zip(out, out[1:])):
        raise PartitionError(f"not a partition: {tuple(parts)}")
    if any(p == 0 for p in out):
        raise PartitionError(f"zero part inside a partition: {tuple(parts)}")
    return out


def strict_partition(parts: Sequence[int]) -> tuple[int, ...]:
    """Validate and normalize a strict partition."""
    out = partition(parts)
    if any(a == c for a, c in zip(out, out[1:])):
        raise PartitionError(f"not a strict partition: {tuple(parts)}")
    return out


def parse_partition(text: str, strict: bool = False) -> tuple[int, ...]:
    """Parse ``"3,1"`` (``""``, ``"0"`` and ``"()"`` are the empty partition)."""
    text = text.strip().strip("()[]")
    if not text:
        return ()
    try:
        parts = [int(t) for t in text.replace(" ", "").split(",") if t != ""]
    except ValueError as exc:
        raise PartitionError(f"cannot parse partition {text!r}") from exc
    return strict_partition(parts) if strict else partition(parts)


def size(lam: Sequence[int]) -> int:
    return sum(lam)


def contains(mu: Sequence[int], lam: Sequence[int]) -> bool:
    """``mu`` contains ``lam`` as diagrams."""
    if len(lam) > len(mu):
        return False
    return all(m >= l for m, l in zip(mu, lam))


def conjugate(lam: Sequence[int]) -> tuple[int, ...]:
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > j) for j in range(lam[0]))


def staircase(k: int) -> tuple[int, ...]:
    """``(k, k-1, ..., 1)``."""
    return tuple(range(k, 0, -1))


@lru_cache(maxsize=None)
def _partitions_of(n: int, max_part: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in _partitions_of(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions(max_size: int, max_length: int | None = None) -> list[tuple[int, ...]]:
    """All partitions with ``|lam| <= max_size``, ordered by size then reverse lex."""
    out = []
    for n in range(max_size + 1):
        for lam in _partitions_of(n, n):
            if max_length is None or len(lam) <= max_length:
                out.append(lam)
    return out


def strict_partitions(max_size: int, max_length: int | None = None) -> list[tuple[int, ...]]:
    """All strict partitions with ``|lam| <= max_size``, ordered by size then reverse lex."""
    return [
        lam
        for lam in partitions(max_size, max_length)
        if all(a > c for a, c in zip(lam, lam[1:]))
    ]


def strict_of_size(n: int) -> list[tuple[int, ...]]:
    return [lam for lam in _partitions_of(n, n) if all(a > c for a, c in zip(lam, lam[1:]))]


def hook(a: int, k: int) -> tuple[int, ...]:
    """The hook ``(a, 1^(k-a))``."""
    return (a,) + (1,) * (k - a)


def parity_of(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq`` (distinct entries) into decreasing order."""
    inv = 0
    for i, j in combinations(range(len(seq)), 2):
        if seq[i] < seq[j]:
            inv += 1
    return -1 if inv & 1 else 1


# classical Schur polynomials ----------------------------------------------


def _ssyt(shape: tuple[int, ...], n: int) -> Iterator[list[list[int]]]:
    cells = [(r, c) for r, length in enumerate(shape) for c in range(length)]
    grid = [[0] * length for length in shape]

    def fill(k):
        if k == len(cells):
            yield grid
            return
        r, c = cells[k]
        lo = 1
        if c > 0:
            lo = grid[r][c - 1]
        if r > 0:
            lo = max(lo, grid[r - 1][c] + 1)
        # rows below need room for strictly larger entries
        hi = n - sum(1 for rr in range(r + 1, len(shape)) if shape[rr] > c)
        for v in range(lo, hi + 1):
            grid[r][c] = v
            yield from fill(k + 1)
        grid[r][c] = 0

    yield from fill(0)


@lru_cache(maxsize=None)
def schur_polynomial(lam: tuple[int, ...], n: int) -> dict[tuple[int, ...], int]:
    """Classical ``s_lam(x_1..x_n)`` as ``{exponent tuple: integer coefficient}``."""
    lam = partition(lam)
    if len(lam) > n:
        return {}
    out: dict[tuple[int, ...], int] = {}
    for grid in _ssyt(lam, n):
        e = [0] * n
        for row in grid:
            for v in row:
                e[v - 1] += 1
        key = tuple(e)
        out[key] = out.get(key, 0) + 1
    return out


__all__ = [
    "PartitionError",
    "conjugate",
    "contains",
    "hook",
    "normalize",
    "parity_of",
    "parse_partition",
    "partition",
    "partitions",
    "schur_polynomial",
    "size",
    "staircase",
    "strict_of_size",
    "strict_partition",
    "strict_partitions",
]
