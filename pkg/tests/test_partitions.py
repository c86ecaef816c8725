# Partition enumeration, lattice join, delta kernel, and exact Gram/Weingarten matrices.
from __future__ import annotations

from fractions import Fraction

import pytest

from qgkernel.config import override_settings
from qgkernel.errors import ArgumentError, ResourceCapError
from qgkernel.partitions import (
    Partition,
    PartitionFamily,
    PartitionKind,
    delta,
    enumerate_partitions,
    gram_matrix,
    join,
    weingarten_matrix,
)
from qgkernel.rational import RationalMatrix, inverse, leading_minors, penrose_holds, pseudo_inverse, rank


# Helper: family without colors
def fam(kind: PartitionKind) -> PartitionFamily:
    return PartitionFamily(kind)


# Helper: rational matrix from integer/Fraction rows
def mat(*rows) -> RationalMatrix:
    return RationalMatrix.from_rows(rows)


# Bell, Catalan and double-factorial counts at degree 4 and 6
@pytest.mark.parametrize(
    "kind,m,count",
    [
        (PartitionKind.ALL, 4, 15),
        (PartitionKind.NONCROSSING, 4, 14),
        (PartitionKind.PAIRINGS, 4, 3),
        (PartitionKind.NONCROSSING_PAIRINGS, 4, 2),
        (PartitionKind.PAIRINGS, 6, 15),
        (PartitionKind.NONCROSSING_PAIRINGS, 6, 5),
        (PartitionKind.ALL, 5, 52),
        (PartitionKind.NONCROSSING, 5, 42),
    ],
)
def test_enumeration_counts(kind, m, count):
    assert len(enumerate_partitions(m, fam(kind))) == count


# Pairing kinds have nothing at odd degree; degree 0 has the empty partition
def test_odd_and_empty_degrees():
    assert enumerate_partitions(3, fam(PartitionKind.PAIRINGS)) == []
    empty = enumerate_partitions(0, fam(PartitionKind.NONCROSSING_PAIRINGS))
    assert len(empty) == 1 and empty[0].blocks == ()


# Colored pairings only join a plain point with a starred one
def test_colored_pairings_respect_colors():
    alternating = PartitionFamily(PartitionKind.COLORED_PAIRINGS, (False, True, False, True))
    assert len(enumerate_partitions(4, alternating)) == 2
    nested = PartitionFamily(PartitionKind.NONCROSSING_COLORED_PAIRINGS, (False, False, True, True))
    parts = enumerate_partitions(4, nested)
    assert [p.blocks for p in parts] == [((1, 4), (2, 3))]
    monochrome = PartitionFamily(PartitionKind.COLORED_PAIRINGS, (False,) * 4)
    assert enumerate_partitions(4, monochrome) == []


# Colored kinds need a pattern of the right length; uncolored kinds refuse one
def test_family_pattern_validation():
    with pytest.raises(ArgumentError):
        PartitionFamily(PartitionKind.COLORED_PAIRINGS)
    with pytest.raises(ArgumentError):
        PartitionFamily(PartitionKind.PAIRINGS, (True, False))
    with pytest.raises(ArgumentError):
        enumerate_partitions(4, PartitionFamily(PartitionKind.COLORED_PAIRINGS, (True, False)))


# Enumeration is capped by QGK_MAX_GROUND_SIZE
def test_ground_size_cap():
    with override_settings(max_ground_size=6):
        with pytest.raises(ResourceCapError):
            enumerate_partitions(8, fam(PartitionKind.NONCROSSING_PAIRINGS))


# Blocks are normalized, so equal partitions compare equal regardless of input order
def test_partition_normal_form_and_crossing():
    assert Partition.of((3, 1), (2, 4)) == Partition.of((2, 4), (1, 3))
    assert not Partition.of((1, 3), (2, 4)).is_noncrossing()
    assert Partition.of((1, 4), (2, 3)).is_noncrossing()
    with pytest.raises(ArgumentError):
        Partition(3, ((1, 2), (2, 3)))


# Join merges overlapping blocks
def test_join():
    p = Partition.of((1, 2), (3, 4))
    q = Partition.of((1, 4), (2, 3))
    assert join(p, q) == Partition.of((1, 2, 3, 4))
    assert join(p, p) == p
    assert join(Partition.discrete(3), Partition.of((1, 3), (2,))) == Partition.of((1, 3), (2,))


# delta is 1 iff the index tuple is constant on blocks
def test_delta():
    p = Partition.of((1, 2), (3, 4))
    assert delta(p, (1, 1, 2, 2)) == 1
    assert delta(p, (1, 2, 2, 2)) == 0
    with pytest.raises(ArgumentError):
        delta(p, (1, 1))


# NC_2(4) Gram matrix is [[n^2, n], [n, n^2]] and its inverse is exact
def test_gram_and_weingarten_nc2():
    parts = enumerate_partitions(4, fam(PartitionKind.NONCROSSING_PAIRINGS))
    assert gram_matrix(parts, 2) == mat((4, 2), (2, 4))
    wg = weingarten_matrix(parts, 2)
    assert wg == mat((Fraction(1, 3), Fraction(-1, 6)), (Fraction(-1, 6), Fraction(1, 3)))


# At n = 1 the Gram matrix is singular and the pseudo-inverse takes over
def test_singular_gram_uses_pseudo_inverse():
    parts = enumerate_partitions(4, fam(PartitionKind.NONCROSSING_PAIRINGS))
    g = gram_matrix(parts, 1)
    wg = weingarten_matrix(parts, 1)
    quarter = Fraction(1, 4)
    assert wg == mat((quarter, quarter), (quarter, quarter))
    assert penrose_holds(g, wg)


# Exact inverse, rank and pseudo-inverse
def test_rational_linear_algebra():
    a = mat((2, 1), (1, 1))
    assert RationalMatrix(inverse(a.entries)) == mat((1, -1), (-1, 2))
    assert rank(mat((1, 2), (2, 4))) == 1
    assert pseudo_inverse(a) == mat((1, -1), (-1, 2))
    with pytest.raises(ArgumentError):
        inverse(mat((1, 2), (2, 4)).entries)


# Gram matrices of a category are positive semidefinite on small cases
def test_gram_leading_minors():
    parts = enumerate_partitions(4, fam(PartitionKind.NONCROSSING_PAIRINGS))
    assert list(leading_minors(gram_matrix(parts, 2))) == [4, 12]


# Noncrossing pairings of 2k points are counted by the Catalan numbers
@pytest.mark.parametrize("k,count", [(1, 1), (2, 2), (3, 5), (4, 14), (5, 42), (6, 132)])
def test_catalan_counts(k, count):
    parts = enumerate_partitions(2 * k, fam(PartitionKind.NONCROSSING_PAIRINGS))
    assert len(parts) == count
    assert all(p.is_pairing() and p.is_noncrossing() for p in parts)


# Direct generation agrees with filtering every pairing through the crossing test
@pytest.mark.parametrize("m", [2, 4, 6, 8, 10])
def test_noncrossing_pairings_match_filter(m):
    every = enumerate_partitions(m, fam(PartitionKind.PAIRINGS))
    assert [p for p in every if p.is_noncrossing()] == enumerate_partitions(m, fam(PartitionKind.NONCROSSING_PAIRINGS))
    colors = tuple(i % 4 in (1, 2) for i in range(m))
    colored = enumerate_partitions(m, PartitionFamily(PartitionKind.COLORED_PAIRINGS, colors))
    nc_colored = enumerate_partitions(m, PartitionFamily(PartitionKind.NONCROSSING_COLORED_PAIRINGS, colors))
    assert [p for p in colored if p.is_noncrossing()] == nc_colored
