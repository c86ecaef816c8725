# Exact Haar state on words: Weingarten sums over the group's partition category,
# direct averaging over S_m, and power counting on the circle.
from __future__ import annotations

import enum
import itertools
import logging
import math
from fractions import Fraction
from typing import Optional

from .cache import ValueCache
from .config import get_settings
from .errors import UnsupportedError, check_cap
from .groups import Family, GroupSpec
from .partitions import category_data, delta, gram_matrix
from .rational import RationalMatrix
from .words import Word

logger = logging.getLogger("qgkernel.haar")


class HaarMethod(str, enum.Enum):
    WEINGARTEN = "weingarten"
    DIRECT_AVERAGE = "direct_average"
    CIRCLE = "circle"


def default_method(group: GroupSpec) -> HaarMethod:
    if group.family == Family.TORUS:
        return HaarMethod.CIRCLE
    if group.family == Family.S_CLASSICAL and math.factorial(group.n) <= get_settings().direct_average_cap:
        return HaarMethod.DIRECT_AVERAGE
    if group.is_free_product:
        raise UnsupportedError("free products are evaluated as free-product states, not by Weingarten",
                               {"group": group.name})
    return HaarMethod.WEINGARTEN


def _check_method(group: GroupSpec, method: HaarMethod) -> None:
    if group.is_free_product:
        raise UnsupportedError("no Haar oracle method for free products", {"group": group.name})
    if method == HaarMethod.CIRCLE and group.family != Family.TORUS:
        raise UnsupportedError("circle rule only applies to the torus", {"group": group.name})
    if method != HaarMethod.CIRCLE and group.family == Family.TORUS:
        raise UnsupportedError("the torus is evaluated by the circle rule", {"group": group.name})
    if method == HaarMethod.DIRECT_AVERAGE:
        if group.family != Family.S_CLASSICAL:
            raise UnsupportedError("direct averaging needs a classical permutation group", {"group": group.name})
        check_cap("|S_m| for direct averaging", math.factorial(group.n), get_settings().direct_average_cap)


def weingarten_value(group: GroupSpec, w: Word) -> Fraction:
    """sum over p, q in C(m) of delta_p(i) delta_q(j) Wg(p, q)."""
    family = group.partition_family(w.pattern)
    if family is None:
        raise UnsupportedError("group has no partition category", {"group": group.name})
    parts, wg = category_data(w.degree, family, group.n)
    if not parts:
        return Fraction(0)
    rows = [l.row for l in w.letters]
    cols = [l.col for l in w.letters]
    left = [a for a, p in enumerate(parts) if delta(p, rows)]
    if not left:
        return Fraction(0)
    right = [b for b, q in enumerate(parts) if delta(q, cols)]
    return sum((wg[a, b] for a in left for b in right), Fraction(0))


def direct_average_value(group: GroupSpec, w: Word) -> Fraction:
    """
    Average of prod_t delta(i_t, sigma(j_t)) over sigma in S_m.

    The constraints sigma(j) = i are either inconsistent (value 0) or fix k
    distinct points, leaving (m - k)! permutations out of m!.
    """
    forward: dict[int, int] = {}
    backward: dict[int, int] = {}
    for l in w.letters:
        if forward.setdefault(l.col, l.row) != l.row or backward.setdefault(l.row, l.col) != l.col:
            return Fraction(0)
    m = group.n
    return Fraction(math.factorial(m - len(forward)), math.factorial(m))


def circle_value(w: Word) -> Fraction:
    """h(z^a z*^b) = 1 iff a = b (letters commute on the circle)."""
    plain = sum(1 for l in w.letters if not l.starred)
    return Fraction(int(2 * plain == w.degree))


class HaarOracle:
    """
    Haar state of one group with a get-or-compute memo.

    Keys are the group name plus the printed letter sequence (star flags included);
    no cyclic quotient is taken.
    """

    def __init__(self, group: GroupSpec, method: Optional[HaarMethod] = None) -> None:
        self.group = group
        self.method = method or default_method(group)
        _check_method(group, self.method)
        self.cache = ValueCache(f"haar:{self.method.value}")

    def _compute(self, w: Word) -> Fraction:
        if self.method == HaarMethod.CIRCLE:
            return circle_value(w)
        if self.method == HaarMethod.DIRECT_AVERAGE:
            return direct_average_value(self.group, w)
        return weingarten_value(self.group, w)

    def value(self, w: Word, use_cache: bool = True) -> Fraction:
        if w.group.name != self.group.name:
            raise UnsupportedError("word belongs to another group", {"oracle": self.group.name, "word": w.group.name})
        if not use_cache:
            return self._compute(w)
        key = f"{self.group.name}|{w}"
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        return self.cache.put(key, self._compute(w))

    __call__ = value


# One shared oracle per (group, method)
_oracles: dict[tuple[str, HaarMethod], HaarOracle] = {}


def haar_oracle(group: GroupSpec, method: Optional[HaarMethod] = None) -> HaarOracle:
    chosen = method or default_method(group)
    key = (group.name, chosen)
    oracle = _oracles.get(key)
    if oracle is None:
        oracle = _oracles.setdefault(key, HaarOracle(group, chosen))
    return oracle


def haar_value(group: GroupSpec, w: Word, method: Optional[HaarMethod] = None) -> Fraction:
    """Exact Haar value of a word on a non-free-product group."""
    return haar_oracle(group, method).value(w)


def _trace_wg_gram(parts: tuple, wg: RationalMatrix, n: int) -> Fraction:
    if not parts:
        return Fraction(0)
    g = gram_matrix(parts, n)
    product = wg @ g
    return sum((product[i, i] for i in range(product.rows)), Fraction(0))


def char_moment(group: GroupSpec, k: int) -> Fraction:
    """
    h(chi^k) for the fundamental character chi = sum_i u_ii.

    Summing the Weingarten formula over diagonal index tuples telescopes to
    trace(Wg . G); S_m uses the average of fix(sigma)^k, the circle z^k.
    """
    if k < 0:
        raise UnsupportedError("moment order must be nonnegative", {"k": k})
    if k == 0:
        return Fraction(1)
    if group.family == Family.TORUS:
        return Fraction(0)
    method = default_method(group)
    if method == HaarMethod.DIRECT_AVERAGE:
        m = group.n
        total = sum(sum(1 for j, s in enumerate(sigma) if s == j) ** k for sigma in itertools.permutations(range(m)))
        return Fraction(total, math.factorial(m))
    family = group.partition_family(tuple(False for _ in range(k)))
    parts, wg = category_data(k, family, group.n)
    value = _trace_wg_gram(parts, wg, group.n)
    logger.debug("char_moment group=%s k=%s value=%s", group.name, k, value)
    return value


def all_partitions_value(group: GroupSpec, w: Word) -> Fraction:
    """Weingarten over ALL partitions for S_m, the cross-check of direct averaging."""
    if group.family != Family.S_CLASSICAL:
        raise UnsupportedError("ALL-partition Weingarten is the S_m category", {"group": group.name})
    return weingarten_value(group, w)
