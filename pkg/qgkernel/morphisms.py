# Quotient morphisms between quantum groups, given by generator images u_ij -> WordSum over the target,
# together with defining-relation sets and the structural checks every shipped morphism must pass.
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .config import get_settings
from .errors import ArgumentError, RelationError, UnsupportedError, check_cap
from .groups import Family, GroupSpec, make_free_product, make_group
from .rational import RationalMatrix, rref
from .words import Letter, Scalar, Word, WordSum, adjoint_sum, coproduct_expand

logger = logging.getLogger("qgkernel.morphisms")

Generator = tuple[int, int]


@dataclass(frozen=True)
class Morphism:
    """
    Unital *-homomorphism C(source) -> C(target) fixed by the images of the generators u_ij.

    Starred letters map to the adjoint of the image; the map extends multiplicatively and linearly.
    """

    name: str
    source: GroupSpec
    target: GroupSpec
    images: Mapping[Generator, WordSum]

    def __post_init__(self) -> None:
        if self.source.is_free_product:
            raise UnsupportedError("morphisms out of free products are not supported", {"source": self.source.name})
        n = self.source.n
        expected = {(i, j) for i in range(1, n + 1) for j in range(1, n + 1)}
        if set(self.images) != expected:
            raise ArgumentError("images must cover every generator exactly once",
                                {"morphism": self.name, "given": len(self.images), "expected": len(expected)})
        cap = get_settings().max_image_terms
        for key, image in self.images.items():
            if image.group.name != self.target.name:
                raise ArgumentError("generator image lives over the wrong group",
                                    {"generator": key, "group": image.group.name, "target": self.target.name})
            check_cap(f"terms in image of u{key}", len(image), cap)

    @cached_property
    def _starred(self) -> dict[Generator, WordSum]:
        return {key: adjoint_sum(image) for key, image in self.images.items()}

    @property
    def exact(self) -> bool:
        return all(image.exact for image in self.images.values())

    def image(self, letter: Letter) -> WordSum:
        key = (letter.row, letter.col)
        return self._starred[key] if letter.starred else self.images[key]

    def expansion_size(self, w: Word) -> int:
        size = 1
        for letter in w.letters:
            size *= max(1, len(self.image(letter)))
        return size

    def apply(self, w: Word) -> WordSum:
        if w.group.name != self.source.name:
            raise ArgumentError("word is not over the morphism source", {"morphism": self.name, "word": w.group.name})
        check_cap("pullback expansion", self.expansion_size(w), get_settings().pullback_cap)
        out = WordSum.constant(self.target, Fraction(1))
        for letter in w.letters:
            out = out * self.image(letter)
            if out.is_zero():
                break
        return out

    def apply_sum(self, s: WordSum) -> WordSum:
        acc = WordSum.zero(self.target)
        for w, c in s.coefficients.items():
            acc = acc + self.apply(w).scale(c)
        return acc

    def __str__(self) -> str:
        return f"{self.name}: {self.source.name} -> {self.target.name}"


def _letter_sum(group: GroupSpec, factor: int, row: int, col: int, coefficient: Scalar = Fraction(1)) -> WordSum:
    return WordSum.of_word(Word(group, (Letter(factor, row, col),)), coefficient)


def _pairs(n: int):
    return itertools.product(range(1, n + 1), repeat=2)


def morphism_abelianize(n: int) -> Morphism:
    """O_n+ -> O_n, u_ij -> u_ij."""
    source, target = make_group(Family.O_PLUS, n), make_group(Family.O_CLASSICAL, n)
    images = {(i, j): _letter_sum(target, 0, i, j) for i, j in _pairs(n)}
    return Morphism("abelianize", source, target, images)


def morphism_to_perm(m: int) -> Morphism:
    """O_m+ -> S_m, u_ij -> p_ij (the coordinate sigma -> delta(i, sigma(j)))."""
    source, target = make_group(Family.O_PLUS, m), make_group(Family.S_CLASSICAL, m)
    images = {(i, j): _letter_sum(target, 0, i, j) for i, j in _pairs(m)}
    return Morphism("to_perm", source, target, images)


def morphism_block_split(n: int) -> Morphism:
    """O_2n+ -> O_n+ * O_n+, u -> diag(v, w) with v tagged 1 and w tagged 2."""
    source = make_group(Family.O_PLUS, 2 * n)
    half = make_group(Family.O_PLUS, n)
    target = make_free_product(half, half)
    images = {}
    for i, j in _pairs(2 * n):
        if i <= n and j <= n:
            images[(i, j)] = _letter_sum(target, 1, i, j)
        elif i > n and j > n:
            images[(i, j)] = _letter_sum(target, 2, i - n, j - n)
        else:
            images[(i, j)] = WordSum.zero(target)
    return Morphism("block_split", source, target, images)


def morphism_unitary_split(n: int) -> Morphism:
    """U_n+ -> T * O_n+, u_ij -> z a_ij (so u_ij* -> a_ij z*)."""
    source = make_group(Family.U_PLUS, n)
    target = make_free_product(make_group(Family.TORUS), make_group(Family.O_PLUS, n))
    images = {
        (i, j): WordSum.of_word(Word(target, (Letter(1, 1, 1), Letter(2, i, j))))
        for i, j in _pairs(n)
    }
    return Morphism("unitary_split", source, target, images)


# Rotations

MatrixLike = Union[np.ndarray, RationalMatrix, Sequence[Sequence[object]]]


def as_rotation(r: MatrixLike) -> np.ndarray:
    """Fraction object array when every entry is rational, float64 otherwise."""
    if isinstance(r, RationalMatrix):
        return r.entries.copy()
    arr = np.asarray(r, dtype=object)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ArgumentError("rotation must be a square matrix", {"shape": arr.shape})
    if all(isinstance(x, (int, Fraction)) and not isinstance(x, bool) for x in arr.flat):
        return np.vectorize(Fraction, otypes=[object])(arr)
    return arr.astype(np.float64)


def check_orthogonal(r: np.ndarray, tol: float = 1e-12) -> None:
    n = r.shape[0]
    product = r.T.dot(r)
    if r.dtype == object:
        ok = all(product[i, j] == (1 if i == j else 0) for i in range(n) for j in range(n))
        residual: float = 0.0 if ok else float(np.max(np.abs((product - np.eye(n, dtype=int)).astype(float))))
    else:
        residual = float(np.max(np.abs(product - np.eye(n))))
        ok = residual <= tol
    if not ok:
        raise RelationError("rotation is not orthogonal", {"residual": residual, "tolerance": tol})


def givens_rotation(n: int, i: int, j: int, angle: float) -> np.ndarray:
    """Rotation by `angle` in the (i, j) coordinate plane (1-based)."""
    r = np.eye(n)
    c, s = math.cos(angle), math.sin(angle)
    a, b = i - 1, j - 1
    r[a, a], r[a, b], r[b, a], r[b, b] = c, -s, s, c
    return r


def pythagorean_rotation(n: int, i: int, j: int, a: int = 3, b: int = 4) -> np.ndarray:
    """Exact rational rotation with cosine a/h and sine b/h in the (i, j) plane; a^2 + b^2 must be a square."""
    h2 = a * a + b * b
    h = math.isqrt(h2)
    if h * h != h2:
        raise ArgumentError("a^2 + b^2 is not a perfect square", {"a": a, "b": b})
    r = np.empty((n, n), dtype=object)
    for x, y in itertools.product(range(n), repeat=2):
        r[x, y] = Fraction(int(x == y))
    c, s = Fraction(a, h), Fraction(b, h)
    p, q = i - 1, j - 1
    r[p, p], r[p, q], r[q, p], r[q, q] = c, -s, s, c
    return r


def fixed_vector(r: MatrixLike) -> np.ndarray:
    """The unit vector fixed by the image of morphism_fix_vector(n, r): xi = r^T e_n."""
    arr = as_rotation(r)
    return arr[-1, :].copy()


def morphism_fix_vector(n: int, rotation: Optional[MatrixLike] = None) -> Morphism:
    """
    O_n+ -> O_{n-1}+, u -> R^T (v (+) 1) R entrywise.

    With R = I this is fix-last: u_ij -> v_ij (i, j < n), u_nn -> 1, the rest of the
    last row and column -> 0. Rational R gives exact images; float R gives float
    coefficients (entries below 1e-15 are dropped).
    """
    if n < 2:
        raise ArgumentError("fixing a vector needs n >= 2", {"n": n})
    source, target = make_group(Family.O_PLUS, n), make_group(Family.O_PLUS, n - 1)
    if rotation is None:
        r = as_rotation([[int(i == j) for j in range(n)] for i in range(n)])
    else:
        r = as_rotation(rotation)
        if r.shape != (n, n):
            raise ArgumentError("rotation size does not match n", {"n": n, "shape": r.shape})
    check_orthogonal(r)
    exact = r.dtype == object
    unit = Word.unit(target)
    images = {}
    for i, j in _pairs(n):
        a, b = i - 1, j - 1
        terms: list[tuple[Word, Scalar]] = []
        for k, l in itertools.product(range(n - 1), repeat=2):
            c = r[k, a] * r[l, b]
            if c != 0 and (exact or abs(c) > 1e-15):
                terms.append((Word(target, (Letter(0, k + 1, l + 1),), normalized=True), c if exact else float(c)))
        c = r[n - 1, a] * r[n - 1, b]
        if c != 0 and (exact or abs(c) > 1e-15):
            terms.append((unit, c if exact else float(c)))
        images[(i, j)] = WordSum.from_terms(target, terms)
    name = "fixlast" if rotation is None else "fix_vector"
    return Morphism(name, source, target, images)


def morphism_fixlast(n: int) -> Morphism:
    return morphism_fix_vector(n, None)


# Structural checks


def _tensor_add(acc: dict, key: tuple[Word, Word], c: Scalar) -> None:
    acc[key] = acc.get(key, 0) + c


def coproduct_residual(pi: Morphism) -> Scalar:
    """
    max over generators of |(pi (x) pi) Delta(u_ij) - Delta(pi(u_ij))| coefficientwise.

    Starred generators are included for non-self-adjoint sources.
    """
    n = pi.source.n
    stars = (False,) if pi.source.self_adjoint_entries else (False, True)
    worst: Scalar = Fraction(0)
    for (i, j), starred in itertools.product(_pairs(n), stars):
        lhs: dict = {}
        for k in range(1, n + 1):
            left = pi.image(Letter(0, i, k, starred))
            right = pi.image(Letter(0, k, j, starred))
            for lw, lc in left.coefficients.items():
                for rw, rc in right.coefficients.items():
                    _tensor_add(lhs, (lw, rw), lc * rc)
        rhs: dict = {}
        for w, c in pi.image(Letter(0, i, j, starred)).coefficients.items():
            for lw, rw in coproduct_expand(w):
                _tensor_add(rhs, (lw, rw), c)
        for key in set(lhs) | set(rhs):
            gap = abs(lhs.get(key, 0) - rhs.get(key, 0))
            if gap > worst:
                worst = gap
    return worst


def intertwines_coproduct(pi: Morphism, tol: float = 1e-12) -> bool:
    """(pi (x) pi) Delta_source = Delta_target pi on generators; exact for rational images."""
    residual = coproduct_residual(pi)
    logger.debug("morphism.coproduct_check name=%s residual=%s", pi.name, residual)
    return residual == 0 if pi.exact else residual <= tol


def _delta(i: int, j: int) -> Fraction:
    return Fraction(int(i == j))


def _quadratic(group: GroupSpec, pairs: Sequence[tuple[Letter, Letter]], constant: Fraction) -> WordSum:
    terms = [(Word(group, (a, b)), Fraction(1)) for a, b in pairs]
    if constant:
        terms.append((Word.unit(group), -constant))
    return WordSum.from_terms(group, terms)


def _factor_relations(group: GroupSpec, owner: GroupSpec, tag: int) -> list[WordSum]:
    n = owner.n
    rng = range(1, n + 1)
    L = lambda i, j, s=False: Letter(tag, i, j, s)  # noqa: E731
    out: list[WordSum] = []
    fam = owner.family
    if fam == Family.TORUS:
        out.append(_quadratic(group, [(L(1, 1), L(1, 1, True))], Fraction(1)))
        out.append(_quadratic(group, [(L(1, 1, True), L(1, 1))], Fraction(1)))
    elif fam in (Family.O_PLUS, Family.O_CLASSICAL):
        for i, j in _pairs(n):
            out.append(_quadratic(group, [(L(i, k), L(j, k)) for k in rng], _delta(i, j)))
            out.append(_quadratic(group, [(L(k, i), L(k, j)) for k in rng], _delta(i, j)))
    elif fam in (Family.U_PLUS, Family.U_CLASSICAL):
        for i, j in _pairs(n):
            d = _delta(i, j)
            out.append(_quadratic(group, [(L(i, k), L(j, k, True)) for k in rng], d))
            out.append(_quadratic(group, [(L(k, i, True), L(k, j)) for k in rng], d))
            out.append(_quadratic(group, [(L(k, i), L(k, j, True)) for k in rng], d))
            out.append(_quadratic(group, [(L(i, k, True), L(j, k)) for k in rng], d))
    elif fam in (Family.S_PLUS, Family.S_CLASSICAL):
        for i, j, k in itertools.product(rng, repeat=3):
            # rows and columns are families of orthogonal projections
            row = _quadratic(group, [(L(i, j), L(i, k))], Fraction(0))
            col = _quadratic(group, [(L(j, i), L(k, i))], Fraction(0))
            if j == k:
                row = row - _letter_sum(group, tag, i, j)
                col = col - _letter_sum(group, tag, j, i)
            out.extend((row, col))
        for i in rng:
            out.append(WordSum.from_terms(group, [(Word(group, (L(i, k),)), Fraction(1)) for k in rng]
                                          + [(Word.unit(group), Fraction(-1))]))
            out.append(WordSum.from_terms(group, [(Word(group, (L(k, i),)), Fraction(1)) for k in rng]
                                          + [(Word.unit(group), Fraction(-1))]))
    else:
        raise UnsupportedError("no relation set for family", {"family": fam.value})
    if owner.commutative and fam != Family.TORUS:
        stars = (False,) if owner.self_adjoint_entries else (False, True)
        letters = [L(i, j, s) for (i, j), s in itertools.product(_pairs(n), stars)]
        for a, b in itertools.combinations(letters, 2):
            out.append(WordSum.from_terms(group, [(Word(group, (a, b)), Fraction(1)), (Word(group, (b, a)), Fraction(-1))]))
    return [r for r in out if not r.is_zero()]


def relation_sums(group: GroupSpec) -> list[WordSum]:
    """
    Defining relations as WordSums that vanish in C(group).

    Self-adjointness of O/S entries is carried by the word normalization, not listed.
    """
    if group.is_free_product:
        out: list[WordSum] = []
        for tag, owner in enumerate(group.factors, start=1):
            out.extend(_factor_relations(group, owner, tag))
        return out
    return _factor_relations(group, group, 0)


def _alphabet(group: GroupSpec) -> list[Letter]:
    owners = list(enumerate(group.factors, start=1)) if group.is_free_product else [(0, group)]
    out = []
    for tag, owner in owners:
        stars = (False,) if owner.self_adjoint_entries else (False, True)
        for (i, j), s in itertools.product(_pairs(owner.n), stars):
            out.append(Letter(tag, i, j, s))
    return out


def _sandwiched(group: GroupSpec, relations: list[WordSum], depth: int) -> list[WordSum]:
    if depth == 0:
        return relations
    alphabet = _alphabet(group)
    words = [Word(group, letters, normalized=True)
             for d in range(depth + 1) for letters in itertools.product(alphabet, repeat=d)]
    out = []
    for left, right in itertools.product(words, repeat=2):
        lw, rw = WordSum.of_word(left), WordSum.of_word(right)
        out.extend(lw * r * rw for r in relations)
    return out


def _in_span(basis: list[WordSum], candidates: list[WordSum]) -> list[bool]:
    monomials = sorted({w for s in basis + candidates for w in s.coefficients})
    index = {w: k for k, w in enumerate(monomials)}

    def row(s: WordSum) -> list[Fraction]:
        v = [Fraction(0)] * len(monomials)
        for w, c in s.coefficients.items():
            v[index[w]] = Fraction(c)
        return v

    reduced, pivots = rref(RationalMatrix.from_rows([row(s) for s in basis]).entries) if basis else (None, [])
    verdicts = []
    for s in candidates:
        v = np.array(row(s), dtype=object)
        for r_idx, p in enumerate(pivots):
            if v[p] != 0:
                v = v - v[p] * reduced[r_idx]
        verdicts.append(all(x == 0 for x in v))
    return verdicts


def morphism_relation_check(pi: Morphism, sandwich: int = 0) -> bool:
    """
    Exact substitution check: every source relation maps into the linear span of
    target relations (optionally multiplied on both sides by words of length <= sandwich).

    Needs rational images.
    """
    if not pi.exact:
        raise UnsupportedError("exact relation check needs rational images", {"morphism": pi.name})
    pushed = [pi.apply_sum(r) for r in relation_sums(pi.source)]
    pending = [p for p in pushed if not p.is_zero()]
    if not pending:
        return True
    targets = relation_sums(pi.target)
    known = set(targets)
    pending = [p for p in pending if p not in known and p.scale(-1) not in known]
    if not pending:
        return True
    verdicts = _in_span(_sandwiched(pi.target, targets, sandwich), pending)
    ok = all(verdicts)
    logger.debug("morphism.relation_check name=%s residual_terms=%d ok=%s", pi.name, len(pending), ok)
    return ok
