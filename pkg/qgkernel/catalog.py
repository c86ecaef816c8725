# Group-level wiring: Haar states for every supported group (free products included),
# the quotient pairs behind the convergence experiments, factorization-net presets,
# word corpora, and the unitary-split Haar factorization check.
from __future__ import annotations

import functools
import itertools
import logging
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from .amenability import UcpMap, classical_sampling_ucp, convolve_ucp, pullback_ucp
from .errors import ArgumentError, UnsupportedError
from .groups import Family, GroupSpec, make_free_product, make_group
from .haar import haar_value
from .morphisms import (
    morphism_abelianize,
    morphism_block_split,
    morphism_fix_vector,
    morphism_fixlast,
    morphism_to_perm,
    morphism_unitary_split,
    pythagorean_rotation,
)
from .schemas import ExactValue, NetSpec, UsplitReport
from .states import StateOracle, convolve, free_product_state, pullback, rotated_pullback
from .words import Letter, Word, WordSum, parse_word_sum

logger = logging.getLogger("qgkernel.catalog")

PAIRS = ("classical+fixlast", "fixlast2", "perm+blocksplit", "haar")


def haar_state(group: GroupSpec) -> StateOracle:
    """Haar state of any supported group; free products get the free product of factor Haar states."""
    if group.is_free_product:
        return free_product_state(*(haar_state(f) for f in group.factors))
    return StateOracle(f"h({group.name})", group, functools.partial(haar_value, group))


def _require_o_plus(group: GroupSpec, pair: str) -> int:
    if group.family != Family.O_PLUS or group.n < 2:
        raise UnsupportedError("experiment pairs run on O_n+ with n >= 2", {"group": group.name, "pair": pair})
    return group.n


def second_rotation(n: int) -> np.ndarray:
    """Product of exact (3/5, 4/5) rotations in the planes (i, n), i < n; its fixed vector has no zero entry."""
    r = pythagorean_rotation(n, 1, n)
    for i in range(2, n):
        r = r.dot(pythagorean_rotation(n, i, n))
    return r


def experiment_pair(name: str, group: GroupSpec) -> tuple[StateOracle, StateOracle]:
    """
    The two quantum-subgroup states whose alternating convolution powers should approach Haar.

    classical+fixlast: h_{O_n} o abelianize and h_{O_{n-1}+} o fixlast
    fixlast2:          two fix-vector pullbacks, xi = e_n and a generic rational xi
    perm+blocksplit:   h_{S_n} o to_perm and (h * h) o block_split (n even)
    haar:              (h, h)
    """
    if name == "haar":
        h = haar_state(group)
        return h, h
    n = _require_o_plus(group, name)
    if name == "classical+fixlast":
        tau1 = pullback(haar_state(make_group(Family.O_CLASSICAL, n)), morphism_abelianize(n))
        tau2 = pullback(haar_state(make_group(Family.O_PLUS, n - 1)), morphism_fixlast(n))
        return tau1, tau2
    if name == "fixlast2":
        fixlast = morphism_fixlast(n)
        inner = haar_state(make_group(Family.O_PLUS, n - 1))
        r = second_rotation(n)
        tau1 = pullback(inner, fixlast)
        tau2 = rotated_pullback(inner, fixlast, morphism_fix_vector(n, r), r)
        return tau1, tau2
    if name == "perm+blocksplit":
        if n % 2:
            raise UnsupportedError("perm+blocksplit needs an even dimension", {"n": n})
        half = make_group(Family.O_PLUS, n // 2)
        tau1 = pullback(haar_state(make_group(Family.S_CLASSICAL, n)), morphism_to_perm(n))
        tau2 = pullback(haar_state(make_free_product(half, half)), morphism_block_split(n // 2))
        return tau1, tau2
    raise ArgumentError("unknown experiment pair", {"pair": name, "known": ", ".join(PAIRS)})


# Factorization nets


def build_net(spec: NetSpec) -> tuple[GroupSpec, list[UcpMap], StateOracle]:
    """
    Net elements (one per size) and the trace they should approximate.

    s-full:       exhaustive S_n average against h_{S_n} (sizes ignored)
    o-sampling:   classical O_n samples pulled back to O_n+, against h_{O_n} o abelianize
    o-convolved:  O_n samples convolved with fix-last pullbacks of O_{n-1} samples,
                  against (h_{O_n} o abelianize) * (h_{O_{n-1}} o abelianize o fixlast)
    """
    n = spec.n
    if spec.preset == "s-full":
        group = make_group(Family.S_CLASSICAL, n)
        return group, [classical_sampling_ucp(group, exhaustive=True)], haar_state(group)
    group = make_group(Family.O_PLUS, n)
    classical = make_group(Family.O_CLASSICAL, n)
    abelianize = morphism_abelianize(n)
    tau1 = pullback(haar_state(classical), abelianize)
    if spec.preset == "o-sampling":
        net = [pullback_ucp(classical_sampling_ucp(classical, size, spec.seed), abelianize) for size in spec.sizes]
        return group, net, tau1
    smaller = make_group(Family.O_CLASSICAL, n - 1)
    fixlast = morphism_fixlast(n)
    abelianize_smaller = morphism_abelianize(n - 1)
    tau2 = pullback(pullback(haar_state(smaller), abelianize_smaller), fixlast)
    net = []
    for size in spec.sizes:
        first = pullback_ucp(classical_sampling_ucp(classical, size, spec.seed), abelianize)
        second = pullback_ucp(
            pullback_ucp(classical_sampling_ucp(smaller, size, spec.seed + 1), abelianize_smaller), fixlast
        )
        net.append(convolve_ucp(first, second))
    return group, net, convolve(tau1, tau2)


# Word corpora


def load_words(path: str | Path, group: GroupSpec) -> list[WordSum]:
    """One word (or WordSum) per line; blank lines and '#' comments are skipped."""
    out = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(parse_word_sum(line, group))
    if not out:
        raise ArgumentError("words file has no words", {"path": str(path)})
    return out


def _alphabet(group: GroupSpec) -> list[Letter]:
    stars = (False,) if group.self_adjoint_entries else (False, True)
    return [Letter(0, i, j, s) for i in range(1, group.n + 1) for j in range(1, group.n + 1) for s in stars]


def random_words(group: GroupSpec, count: int, max_degree: int, seed: int = 0,
                 min_degree: int = 1) -> list[Word]:
    """Deterministic words: uniform degree in [min_degree, max_degree], then uniform letters."""
    if group.is_free_product:
        raise UnsupportedError("random words over free products are not supported", {"group": group.name})
    alphabet = _alphabet(group)
    rng = np.random.Generator(np.random.Philox(seed))
    out = []
    for _ in range(count):
        d = int(rng.integers(min_degree, max_degree + 1))
        picks = rng.integers(0, len(alphabet), size=d)
        out.append(Word(group, (alphabet[int(p)] for p in picks)))
    return out


def default_corpus(group: GroupSpec, count: int = 20, max_degree: int = 4, seed: int = 0) -> list[WordSum]:
    return [WordSum.of_word(w) for w in random_words(group, count, max_degree, seed)]


def all_words(group: GroupSpec, max_degree: int) -> list[Word]:
    alphabet = _alphabet(group)
    out = [Word.unit(group)]
    for d in range(1, max_degree + 1):
        out.extend(Word(group, letters, normalized=True) for letters in itertools.product(alphabet, repeat=d))
    return out


# Unitary split


def usplit_check(n: int, max_degree: int = 4, sample: int = 500, seed: int = 0,
                 full_limit: int = 5000, tol: float = 1e-12) -> UsplitReport:
    """
    Compare h_{U_n+}(w) with (h_T * h_{O_n+})(pi(w)) for pi = unitary_split(n).

    Every word up to max_degree is checked when there are at most full_limit of them,
    otherwise a deterministic sample of `sample` words.
    """
    source = make_group(Family.U_PLUS, n)
    pi = morphism_unitary_split(n)
    pulled = pullback(haar_state(pi.target), pi)
    total = sum(len(_alphabet(source)) ** d for d in range(max_degree + 1))
    if total <= full_limit:
        words = all_words(source, max_degree)
    else:
        words = random_words(source, sample, max_degree, seed, min_degree=0) if max_degree else [Word.unit(source)]
    worst: Fraction | float = Fraction(0)
    worst_word: Optional[Word] = None
    for w in words:
        gap = abs(haar_value(source, w) - pulled(w))
        if gap > worst:
            worst, worst_word = gap, w
    logger.info("usplit.done n=%d words=%d max_discrepancy=%s", n, len(words), worst)
    return UsplitReport(
        n=n,
        max_degree=max_degree,
        words_checked=len(words),
        max_discrepancy=ExactValue.of(worst),
        worst_word=str(worst_word) if worst_word is not None else None,
        passed=worst <= tol,
    )
