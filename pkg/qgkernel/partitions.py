# Set partitions and pairings of {1..m}: enumeration per partition family, lattice join,
# the delta kernel, and exact Gram / Weingarten matrices.
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from .config import get_settings
from .errors import ArgumentError, check_cap
from .rational import RationalMatrix, pseudo_inverse, zeros


class PartitionKind(str, enum.Enum):
    ALL = "all"
    PAIRINGS = "pairings"
    NONCROSSING = "noncrossing"
    NONCROSSING_PAIRINGS = "noncrossing_pairings"
    COLORED_PAIRINGS = "colored_pairings"
    NONCROSSING_COLORED_PAIRINGS = "noncrossing_colored_pairings"

    @property
    def colored(self) -> bool:
        return self in (PartitionKind.COLORED_PAIRINGS, PartitionKind.NONCROSSING_COLORED_PAIRINGS)

    @property
    def pairings_only(self) -> bool:
        return self not in (PartitionKind.ALL, PartitionKind.NONCROSSING)

    @property
    def noncrossing(self) -> bool:
        return self in (
            PartitionKind.NONCROSSING,
            PartitionKind.NONCROSSING_PAIRINGS,
            PartitionKind.NONCROSSING_COLORED_PAIRINGS,
        )


@dataclass(frozen=True)
class PartitionFamily:
    """
    A partition category at a fixed degree.

    color_pattern holds one star flag per point (True = starred) and is
    required exactly for the colored kinds.
    """

    kind: PartitionKind
    color_pattern: Optional[tuple[bool, ...]] = None

    def __post_init__(self) -> None:
        if self.kind.colored and self.color_pattern is None:
            raise ArgumentError("colored family requires a color pattern", {"kind": self.kind.value})
        if not self.kind.colored and self.color_pattern is not None:
            raise ArgumentError("color pattern given for an uncolored family", {"kind": self.kind.value})
        if self.color_pattern is not None:
            object.__setattr__(self, "color_pattern", tuple(bool(c) for c in self.color_pattern))


@dataclass(frozen=True, order=True)
class Partition:
    """
    Partition of {1..ground_size}.

    Blocks are sorted ascending internally and ordered by minimum element, so
    structural equality is partition equality.
    """

    ground_size: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        blocks = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0] if b else 0))
        if any(len(b) == 0 for b in blocks):
            raise ArgumentError("empty block in partition")
        flat = [x for b in blocks for x in b]
        if sorted(flat) != list(range(1, self.ground_size + 1)):
            raise ArgumentError("blocks do not cover {1..m} disjointly", {"m": self.ground_size, "blocks": blocks})
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def of(cls, *blocks: Sequence[int]) -> "Partition":
        size = sum(len(b) for b in blocks)
        return cls(size, tuple(tuple(b) for b in blocks))

    @classmethod
    def discrete(cls, m: int) -> "Partition":
        return cls(m, tuple((i,) for i in range(1, m + 1)))

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self) -> dict[int, int]:
        return {x: idx for idx, b in enumerate(self.blocks) for x in b}

    def is_pairing(self) -> bool:
        return all(len(b) == 2 for b in self.blocks)

    def is_noncrossing(self) -> bool:
        owner = self.block_of()
        # a < b < c < d with a,c in one block and b,d in another
        for bi, block in enumerate(self.blocks):
            for x, y in zip(block, block[1:]):
                inside = {owner[z] for z in range(x + 1, y)} - {bi}
                for other in inside:
                    if any(z < x or z > y for z in self.blocks[other]):
                        return False
        return True

    def __str__(self) -> str:
        return "{" + ", ".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


def _check_degree(m: int) -> None:
    if m < 0:
        raise ArgumentError("ground size must be nonnegative", {"m": m})
    check_cap("partition ground size", m, get_settings().max_ground_size)


def _set_partitions(m: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    # Restricted growth strings: point i joins an existing block or opens a new one
    def grow(i: int, blocks: list[list[int]]) -> Iterator[tuple[tuple[int, ...], ...]]:
        if i > m:
            yield tuple(tuple(b) for b in blocks)
            return
        for b in blocks:
            b.append(i)
            yield from grow(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from grow(i + 1, blocks)
        blocks.pop()

    yield from grow(1, [])


def _pairings(points: tuple[int, ...], colors: Optional[tuple[bool, ...]],
              noncrossing: bool = False) -> Iterator[list[tuple[int, int]]]:
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for idx, partner in enumerate(rest):
        if colors is not None and colors[first - 1] == colors[partner - 1]:
            continue
        if not noncrossing:
            remaining = rest[:idx] + rest[idx + 1:]
            for tail in _pairings(remaining, colors):
                yield [(first, partner)] + tail
            continue
        # The arc (first, partner) must enclose an even number of points paired among themselves
        if idx % 2:
            continue
        for inner in _pairings(rest[:idx], colors, True):
            for outer in _pairings(rest[idx + 1:], colors, True):
                yield [(first, partner)] + inner + outer


@lru_cache(maxsize=256)
def _enumerate_cached(m: int, family: PartitionFamily) -> tuple[Partition, ...]:
    kind = family.kind
    if kind.pairings_only:
        if m % 2:
            return ()
        points = tuple(range(1, m + 1))
        parts = [Partition(m, tuple(p)) for p in _pairings(points, family.color_pattern, kind.noncrossing)]
    else:
        raw = (Partition(m, blocks) for blocks in _set_partitions(m))
        parts = [p for p in raw if not kind.noncrossing or p.is_noncrossing()]
    return tuple(sorted(parts, key=lambda p: p.blocks))


def enumerate_partitions(m: int, family: PartitionFamily) -> list[Partition]:
    """
    All partitions of {1..m} in the family, in canonical (lexicographic block-list) order.

    Pairing kinds return an empty list for odd m; m = 0 yields the single empty partition.
    """
    _check_degree(m)
    if family.color_pattern is not None and len(family.color_pattern) != m:
        raise ArgumentError("color pattern length does not match ground size",
                            {"m": m, "pattern_length": len(family.color_pattern)})
    return list(_enumerate_cached(m, family))


def join(p: Partition, q: Partition) -> Partition:
    """Finest partition coarser than both: connected components of the union of block graphs."""
    if p.ground_size != q.ground_size:
        raise ArgumentError("join of partitions with different ground sizes",
                            {"left": p.ground_size, "right": q.ground_size})
    parent = list(range(p.ground_size + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for block in p.blocks + q.blocks:
        root = find(block[0])
        for x in block[1:]:
            parent[find(x)] = root
    groups: dict[int, list[int]] = {}
    for x in range(1, p.ground_size + 1):
        groups.setdefault(find(x), []).append(x)
    return Partition(p.ground_size, tuple(tuple(g) for g in groups.values()))


def delta(p: Partition, idx: Sequence[int]) -> int:
    """1 iff idx is constant on every block of p."""
    if len(idx) != p.ground_size:
        raise ArgumentError("index tuple length does not match ground size",
                            {"m": p.ground_size, "length": len(idx)})
    for block in p.blocks:
        first = idx[block[0] - 1]
        if any(idx[x - 1] != first for x in block[1:]):
            return 0
    return 1


def _check_common_size(parts: Sequence[Partition]) -> None:
    sizes = {p.ground_size for p in parts}
    if len(sizes) > 1:
        raise ArgumentError("partitions have different ground sizes", {"sizes": sorted(sizes)})


def gram_matrix(parts: Sequence[Partition], n: int) -> RationalMatrix:
    """G(p, q) = n^|p v q|, exact integers."""
    if n < 1:
        raise ArgumentError("dimension must be positive", {"n": n})
    _check_common_size(parts)
    size = len(parts)
    g = zeros(size, size)
    for i, p in enumerate(parts):
        for j in range(i, size):
            value = Fraction(n) ** len(join(p, parts[j]))
            g[i, j] = value
            g[j, i] = value
    return RationalMatrix(g)


def weingarten_matrix(parts: Sequence[Partition], n: int) -> RationalMatrix:
    """Exact pseudo-inverse of the Gram matrix (the inverse when the Gram matrix is invertible)."""
    return pseudo_inverse(gram_matrix(parts, n))


@lru_cache(maxsize=512)
def category_data(m: int, family: PartitionFamily, n: int) -> tuple[tuple[Partition, ...], RationalMatrix]:
    """Partitions of a category at degree m together with their Weingarten matrix at dimension n."""
    parts = tuple(enumerate_partitions(m, family))
    return parts, weingarten_matrix(parts, n)
