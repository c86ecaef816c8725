# Monomials in the generators u_ij / u_ij* of the free *-algebra over a GroupSpec, finite linear
# combinations of them, the word grammar, and the Hopf structure maps (coproduct, antipode, counit, adjoint).
# Defining relations are never used for rewriting: consumers evaluate linear functionals on monomials.
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .config import get_settings
from .errors import ArgumentError, WordSyntaxError, check_cap
from .groups import GroupSpec

Scalar = Union[Fraction, float, complex]


@dataclass(frozen=True, order=True)
class Letter:
    """One generator u_{row,col} (starred = adjoint). factor is the 1-based free-product tag, 0 otherwise."""

    factor: int
    row: int
    col: int
    starred: bool = False

    @property
    def generator(self) -> tuple[int, int, int]:
        return (self.factor, self.row, self.col)

    def __str__(self) -> str:
        prefix = f"{self.factor}:" if self.factor else ""
        return f"{prefix}{self.row},{self.col}{'*' if self.starred else ''}"


def _letter_group(group: GroupSpec, letter: Letter) -> GroupSpec:
    if group.is_free_product:
        if letter.factor == 0:
            raise ArgumentError("free-product letters need a factor tag", {"group": group.name, "letter": str(letter)})
        return group.factor(letter.factor)
    if letter.factor != 0:
        raise ArgumentError("factor tag on a non-free-product group", {"group": group.name, "letter": str(letter)})
    return group


def normalize_letter(group: GroupSpec, letter: Letter) -> Letter:
    """Validate indices against the letter's (factor) group and drop stars on self-adjoint entries."""
    owner = _letter_group(group, letter)
    if not (1 <= letter.row <= owner.n and 1 <= letter.col <= owner.n):
        raise ArgumentError("generator index out of range",
                            {"group": owner.name, "row": letter.row, "col": letter.col})
    if letter.starred and owner.self_adjoint_entries:
        return Letter(letter.factor, letter.row, letter.col, False)
    return letter


class Word:
    """
    Monomial u_{i1 j1}^{e1} ... u_{id jd}^{ed} over a group; the empty word is the unit.

    Equality and hashing use (group name, letters).
    """

    __slots__ = ("group", "letters", "_key")

    def __init__(self, group: GroupSpec, letters: Iterable[Letter] = (), *, normalized: bool = False) -> None:
        letters = tuple(letters)
        if not normalized:
            letters = tuple(normalize_letter(group, l) for l in letters)
        self.group = group
        self.letters = letters
        self._key = (group.name, letters)

    @classmethod
    def unit(cls, group: GroupSpec) -> "Word":
        return cls(group, (), normalized=True)

    @classmethod
    def of(cls, group: GroupSpec, *spec: tuple) -> "Word":
        """Word.of(g, (1, 1), (1, 2, True)) or, on free products, (factor, i, j[, starred])."""
        letters = []
        for item in spec:
            if group.is_free_product:
                letters.append(Letter(item[0], item[1], item[2], bool(item[3]) if len(item) > 3 else False))
            else:
                letters.append(Letter(0, item[0], item[1], bool(item[2]) if len(item) > 2 else False))
        return cls(group, letters)

    @property
    def degree(self) -> int:
        return len(self.letters)

    @property
    def pattern(self) -> tuple[bool, ...]:
        return tuple(l.starred for l in self.letters)

    @property
    def key(self) -> tuple:
        return self._key

    def __len__(self) -> int:
        return len(self.letters)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Word) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __lt__(self, other: "Word") -> bool:
        return (len(self.letters), self.letters) < (len(other.letters), other.letters)

    def __mul__(self, other: "Word") -> "Word":
        if other.group.name != self.group.name:
            raise ArgumentError("product of words over different groups",
                                {"left": self.group.name, "right": other.group.name})
        return Word(self.group, self.letters + other.letters, normalized=True)

    def __str__(self) -> str:
        return ";".join(str(l) for l in self.letters) if self.letters else "1"

    def __repr__(self) -> str:
        return f"Word({self.group.name}, '{self}')"


def _is_zero(c: Scalar) -> bool:
    return c == 0


def _conj(c: Scalar) -> Scalar:
    return c.conjugate() if isinstance(c, complex) else c


@dataclass(frozen=True)
class WordSum:
    """
    Finite linear combination of words over one group.

    Coefficients are exact (Fraction) or float/complex; zero terms are never stored
    and `terms` is in canonical word order.
    """

    group: GroupSpec
    coefficients: Mapping[Word, Scalar] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {w: c for w, c in self.coefficients.items() if not _is_zero(c)}
        object.__setattr__(self, "coefficients", clean)

    @classmethod
    def of_word(cls, word: Word, coefficient: Scalar = Fraction(1)) -> "WordSum":
        return cls(word.group, {word: coefficient})

    @classmethod
    def constant(cls, group: GroupSpec, c: Scalar) -> "WordSum":
        return cls(group, {Word.unit(group): c})

    @classmethod
    def zero(cls, group: GroupSpec) -> "WordSum":
        return cls(group, {})

    @classmethod
    def from_terms(cls, group: GroupSpec, terms: Iterable[tuple[Word, Scalar]]) -> "WordSum":
        acc: dict[Word, Scalar] = {}
        for w, c in terms:
            acc[w] = acc.get(w, 0) + c
        return cls(group, acc)

    @property
    def terms(self) -> tuple[tuple[Word, Scalar], ...]:
        return tuple(sorted(self.coefficients.items(), key=lambda t: t[0]))

    @property
    def exact(self) -> bool:
        return all(isinstance(c, (Fraction, int)) for c in self.coefficients.values())

    @property
    def degree(self) -> int:
        return max((w.degree for w in self.coefficients), default=0)

    def __len__(self) -> int:
        return len(self.coefficients)

    def __iter__(self) -> Iterator[tuple[Word, Scalar]]:
        return iter(self.terms)

    def __add__(self, other: "WordSum") -> "WordSum":
        return WordSum.from_terms(self.group, itertools.chain(self.coefficients.items(), other.coefficients.items()))

    def __sub__(self, other: "WordSum") -> "WordSum":
        return self + other.scale(-1)

    def __mul__(self, other: "WordSum") -> "WordSum":
        return WordSum.from_terms(
            self.group,
            ((a * b, ca * cb) for a, ca in self.coefficients.items() for b, cb in other.coefficients.items()),
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, WordSum) and self.group.name == other.group.name and self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash((self.group.name, self.terms))

    def scale(self, c: Scalar) -> "WordSum":
        return WordSum(self.group, {w: c * v for w, v in self.coefficients.items()})

    def is_zero(self) -> bool:
        return not self.coefficients

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        if len(self.coefficients) == 1:
            (w, c), = self.coefficients.items()
            if c == 1:
                return str(w)
        return " + ".join(f"({c})*[{w}]" for w, c in self.terms)


# Word grammar: letter (';' letter)*, letter := [factor ':'] int ',' int '*'?
_LETTER = re.compile(r"^(?:(\d+):)?(\d+),(\d+)(\*?)$")


def parse_word(text: str, group: GroupSpec) -> Word:
    """Parse e.g. '1,1;1,2*' (1-based). Free-product groups need factor tags: '1:1,1;2:1,1'."""
    compact = "".join(text.split())
    if compact in ("", "1"):
        return Word.unit(group)
    letters = []
    for chunk in compact.split(";"):
        m = _LETTER.match(chunk)
        if not m:
            raise WordSyntaxError("malformed letter", {"letter": chunk, "text": text})
        factor = int(m.group(1)) if m.group(1) else 0
        letters.append(Letter(factor, int(m.group(2)), int(m.group(3)), m.group(4) == "*"))
    return Word(group, letters)


def parse_word_sum(text: str, group: GroupSpec) -> WordSum:
    """'+'-separated words, each optionally prefixed by a rational coefficient and '*', e.g. '1,1 + -1/2*1,2'."""
    terms = []
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            raise WordSyntaxError("empty term", {"text": text})
        coeff = Fraction(1)
        head, sep, tail = chunk.partition("*")
        if sep and "," not in head:
            try:
                coeff = Fraction(head.strip())
            except ValueError as exc:
                raise WordSyntaxError("bad coefficient", {"term": chunk}) from exc
            chunk = tail
        terms.append((parse_word(chunk, group), coeff))
    return WordSum.from_terms(group, terms)


def adjoint(w: Word) -> Word:
    """Reverse letter order and toggle stars."""
    return Word(w.group, (Letter(l.factor, l.row, l.col, not l.starred) for l in reversed(w.letters)))


def adjoint_sum(s: WordSum) -> WordSum:
    return WordSum.from_terms(s.group, ((adjoint(w), _conj(c)) for w, c in s.coefficients.items()))


def antipode(w: Word) -> Word:
    """kappa(u_ij) = u_ji*, extended as an antihomomorphism."""
    return Word(w.group, (Letter(l.factor, l.col, l.row, not l.starred) for l in reversed(w.letters)))


def counit(w: Word) -> Fraction:
    """epsilon(u_ij) = delta_ij, multiplicative; 1 on the empty word."""
    return Fraction(int(all(l.row == l.col for l in w.letters)))


def coproduct_size(w: Word) -> int:
    size = 1
    for l in w.letters:
        size *= w.group.dimension_of(l.factor)
    return size


def coproduct_expand(w: Word) -> list[tuple[Word, Word]]:
    """
    Delta(u_ij) = sum_k u_ik (x) u_kj, extended multiplicatively.

    One (left, right) pair per middle tuple (k_1..k_d), in lexicographic tuple order;
    star flags are copied to both sides.
    """
    settings = get_settings()
    check_cap("word degree", w.degree, settings.max_word_degree)
    check_cap("coproduct expansion", coproduct_size(w), settings.coproduct_cap)
    ranges = [range(1, w.group.dimension_of(l.factor) + 1) for l in w.letters]
    out = []
    for ks in itertools.product(*ranges):
        left = tuple(Letter(l.factor, l.row, k, l.starred) for l, k in zip(w.letters, ks))
        right = tuple(Letter(l.factor, k, l.col, l.starred) for l, k in zip(w.letters, ks))
        out.append((Word(w.group, left, normalized=True), Word(w.group, right, normalized=True)))
    return out


def concat(words: Sequence[Word]) -> Word:
    if not words:
        raise ArgumentError("concat needs at least one word")
    out = words[0]
    for w in words[1:]:
        out = out * w
    return out


def split_points(w: Word) -> Iterator[tuple[Word, Word]]:
    """All (a, b) with a*b = w."""
    for i in range(w.degree + 1):
        yield Word(w.group, w.letters[:i], normalized=True), Word(w.group, w.letters[i:], normalized=True)
