# Linear functionals on the word algebra and their dynamics: convolution, transfer matrices and powers,
# pullbacks along morphisms, free-product states, invariance and convergence-to-Haar experiments.
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .config import get_settings
from .errors import ArgumentError, UnsupportedError, check_cap
from .groups import GroupSpec, make_free_product
from .morphisms import Morphism
from .schemas import ConvergenceReport
from .words import Letter, Scalar, Word, WordSum, coproduct_expand, counit, split_points

logger = logging.getLogger("qgkernel.states")

EPS = float(np.finfo(np.float64).eps)


def _is_exact(value: Scalar) -> bool:
    return isinstance(value, (Fraction, int))


class StateOracle:
    """
    A unital linear functional on the word algebra of `group`, evaluated word by word.

    Values are memoized per word. `exact` declares that every value is a Fraction.
    `transfer_builder`, when set, supplies transfer matrices without evaluating entries
    one at a time (used for rotated pullbacks).
    """

    def __init__(
        self,
        label: str,
        group: GroupSpec,
        evaluator: Callable[[Word], Scalar],
        exact: bool = True,
        transfer_builder: Optional[Callable[[int, tuple[bool, ...]], "TransferMatrix"]] = None,
    ) -> None:
        self.label = label
        self.group = group
        self.exact = exact
        self._evaluator = evaluator
        self._memo: dict[Word, Scalar] = {}
        self.transfer_builder = transfer_builder

    def __call__(self, w: Word) -> Scalar:
        if w.group.name != self.group.name:
            raise ArgumentError("word is not over the state's group", {"state": self.label, "word": w.group.name})
        if not w.letters:
            return Fraction(1)
        hit = self._memo.get(w)
        if hit is None:
            hit = self._evaluator(w)
            self._memo[w] = hit
        return hit

    def evaluate_sum(self, s: WordSum) -> Scalar:
        total: Scalar = Fraction(0)
        for w, c in s.coefficients.items():
            total = total + c * self(w)
        return total

    def __repr__(self) -> str:
        return f"StateOracle({self.label} on {self.group.name})"


def counit_state(group: GroupSpec) -> StateOracle:
    return StateOracle(f"counit({group.name})", group, counit)


def character_state(group: GroupSpec, g: np.ndarray) -> StateOracle:
    """Point evaluation u_ij -> g_ij at a classical group element (u_ij* -> conj g_ij)."""
    if group.is_free_product:
        raise UnsupportedError("characters of free products are not supported", {"group": group.name})
    arr = np.asarray(g, dtype=object)
    if arr.shape != (group.n, group.n):
        raise ArgumentError("point size does not match the group", {"group": group.name, "shape": arr.shape})
    exact = all(_is_exact(x) for x in arr.flat)

    def evaluate(w: Word) -> Scalar:
        value: Scalar = Fraction(1)
        for l in w.letters:
            x = arr[l.row - 1, l.col - 1]
            value = value * (x.conjugate() if l.starred and isinstance(x, complex) else x)
        return value

    return StateOracle(f"char({group.name})", group, evaluate, exact=exact)


def mixture(states: Sequence[StateOracle], weights: Sequence[Scalar]) -> StateOracle:
    """Convex combination sum_i w_i phi_i; weights must sum to 1."""
    if not states or len(states) != len(weights):
        raise ArgumentError("mixture needs one weight per state", {"states": len(states), "weights": len(weights)})
    group = states[0].group
    if any(s.group.name != group.name for s in states):
        raise ArgumentError("mixture of states over different groups")
    if abs(sum(weights) - 1) > 1e-12:
        raise ArgumentError("mixture weights must sum to 1", {"sum": sum(weights)})
    exact = all(s.exact for s in states) and all(_is_exact(w) for w in weights)

    def evaluate(w: Word) -> Scalar:
        return sum((c * s(w) for s, c in zip(states, weights)), Fraction(0))

    return StateOracle("mix(" + ",".join(s.label for s in states) + ")", group, evaluate, exact=exact)


def _same_group(phi: StateOracle, psi: StateOracle) -> None:
    if phi.group.name != psi.group.name:
        raise ArgumentError("states live on different groups", {"left": phi.group.name, "right": psi.group.name})


def convolve(phi: StateOracle, psi: StateOracle) -> StateOracle:
    """phi * psi = (phi (x) psi) Delta, evaluated through coproduct_expand."""
    _same_group(phi, psi)

    def evaluate(w: Word) -> Scalar:
        total: Scalar = Fraction(0)
        for left, right in coproduct_expand(w):
            a = phi(left)
            if a:
                total = total + a * psi(right)
        return total

    return StateOracle(f"({phi.label} * {psi.label})", phi.group, evaluate, exact=phi.exact and psi.exact)


def pullback(psi: StateOracle, pi: Morphism) -> StateOracle:
    """psi o pi on the morphism source."""
    if psi.group.name != pi.target.name:
        raise ArgumentError("state and morphism target differ", {"state": psi.group.name, "target": pi.target.name})

    def evaluate(w: Word) -> Scalar:
        return psi.evaluate_sum(pi.apply(w))

    return StateOracle(f"{psi.label}.{pi.name}", pi.source, evaluate, exact=psi.exact and pi.exact)


# Free products


Syllable = tuple[int, WordSum]


def _syllables(w: Word) -> tuple[Syllable, ...]:
    out: list[Syllable] = []
    for tag, run in itertools.groupby(w.letters, key=lambda l: l.factor):
        owner = w.group.factor(tag)
        word = Word(owner, (Letter(0, l.row, l.col, l.starred) for l in run))
        out.append((tag, WordSum.of_word(word)))
    return tuple(out)


def _merge(syllables: Iterable[Syllable]) -> tuple[Syllable, ...]:
    out: list[Syllable] = []
    for tag, s in syllables:
        if out and out[-1][0] == tag:
            out[-1] = (tag, out[-1][1] * s)
        else:
            out.append((tag, s))
    return tuple(out)


def free_product_state(*states: StateOracle) -> StateOracle:
    """
    Free product of factor states on the free product of their groups.

    Evaluation centers each syllable a = (a - phi(a)1) + phi(a)1 and expands; a product
    of alternating centered syllables vanishes, every other term has fewer syllables
    after merging equal-tag neighbours. Memoized on syllable sequences.
    """
    if len(states) < 2:
        raise ArgumentError("a free product needs at least two states")
    if any(s.group.is_free_product for s in states):
        raise UnsupportedError("factor states must live on non-free-product groups")
    group = make_free_product(*(s.group for s in states))
    cap = get_settings().syllable_cap
    memo: dict[tuple[Syllable, ...], Scalar] = {}

    def factor_value(tag: int, s: WordSum) -> Scalar:
        return states[tag - 1].evaluate_sum(s)

    def evaluate_syllables(syllables: tuple[Syllable, ...]) -> Scalar:
        syllables = tuple((t, s) for t, s in _merge(syllables))
        if any(s.is_zero() for _, s in syllables):
            return Fraction(0)
        if not syllables:
            return Fraction(1)
        if len(syllables) == 1:
            return factor_value(*syllables[0])
        check_cap("free-product syllables", len(syllables), cap)
        hit = memo.get(syllables)
        if hit is not None:
            return hit
        means = [factor_value(t, s) for t, s in syllables]
        centered = [
            (t, s - WordSum.constant(s.group, mu)) for (t, s), mu in zip(syllables, means)
        ]
        r = len(syllables)
        total: Scalar = Fraction(0)
        # subsets of positions kept centered; the full set is an alternating centered product
        for size in range(r):
            for keep in itertools.combinations(range(r), size):
                weight: Scalar = Fraction(1)
                for t in range(r):
                    if t not in keep:
                        weight = weight * means[t]
                        if not weight:
                            break
                if not weight:
                    continue
                total = total + weight * evaluate_syllables(tuple(centered[t] for t in keep))
        memo[syllables] = total
        return total

    def evaluate(w: Word) -> Scalar:
        return evaluate_syllables(_syllables(w))

    exact = all(s.exact for s in states)
    return StateOracle("free(" + ",".join(s.label for s in states) + ")", group, evaluate, exact=exact)


# Transfer matrices


def _to_float(a: np.ndarray) -> np.ndarray:
    if a.dtype != object:
        return a
    if any(isinstance(x, complex) for x in a.flat):
        return a.astype(np.complex128)
    return a.astype(np.float64)


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    """
    Matrix of a state on degree-d coefficients: entry (i, j) = phi(u_{i1 j1}^{e1} ... u_{id jd}^{ed}),
    index tuples in mixed-radix (lexicographic) order. Exact entries are a Fraction object array.
    """

    group: GroupSpec
    degree: int
    pattern: tuple[bool, ...]
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    @property
    def exact(self) -> bool:
        return self.entries.dtype == object

    def _compatible(self, other: "TransferMatrix") -> None:
        if (self.group.name, self.degree, self.pattern) != (other.group.name, other.degree, other.pattern):
            raise ArgumentError("transfer matrices of different shapes",
                                {"left": (self.group.name, self.degree), "right": (other.group.name, other.degree)})

    def as_float(self) -> "TransferMatrix":
        return replace(self, entries=_to_float(self.entries))

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        self._compatible(other)
        if self.exact and other.exact and self.dim <= get_settings().float_switch_dim:
            return replace(self, entries=self.entries.dot(other.entries))
        return replace(self, entries=_to_float(self.entries) @ _to_float(other.entries))

    def power(self, k: int) -> "TransferMatrix":
        """self^k by repeated squaring, k >= 1."""
        if k < 1:
            raise ArgumentError("power must be positive", {"k": k})
        result: Optional[TransferMatrix] = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result @ base
            k >>= 1
            if k:
                base = base @ base
        assert result is not None
        return result

    def distance(self, other: "TransferMatrix") -> Scalar:
        """Max absolute entry of the difference; a Fraction when both sides are exact."""
        self._compatible(other)
        if self.exact and other.exact:
            diff = self.entries - other.entries
            return max((abs(x) for x in diff.flat), default=Fraction(0))
        return float(np.max(np.abs(_to_float(self.entries) - _to_float(other.entries))))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TransferMatrix):
            return NotImplemented
        return (
            (self.group.name, self.degree, self.pattern) == (other.group.name, other.degree, other.pattern)
            and self.entries.shape == other.entries.shape
            and bool(np.all(self.entries == other.entries))
        )

    __hash__ = None  # type: ignore[assignment]


def _pattern(group: GroupSpec, d: int, pattern: Optional[Sequence[bool]]) -> tuple[bool, ...]:
    if group.is_free_product:
        raise UnsupportedError("transfer matrices need a non-free-product group", {"group": group.name})
    if pattern is None:
        return tuple(False for _ in range(d))
    pattern = tuple(bool(p) for p in pattern)
    if len(pattern) != d:
        raise ArgumentError("pattern length does not match degree", {"degree": d, "pattern": len(pattern)})
    if group.self_adjoint_entries:
        # stars are dropped on self-adjoint generators
        return tuple(False for _ in range(d))
    return pattern


def index_tuples(n: int, d: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(1, n + 1), repeat=d))


def transfer_matrix(phi: StateOracle, d: int, pattern: Optional[Sequence[bool]] = None,
                    direct: bool = False) -> TransferMatrix:
    """Evaluate phi on every degree-d coefficient word; n^(2d) entries within the transfer cap."""
    group = phi.group
    pat = _pattern(group, d, pattern)
    n = group.n
    check_cap("transfer-matrix entries", n ** (2 * d), get_settings().transfer_cap)
    if phi.transfer_builder is not None and not direct:
        return phi.transfer_builder(d, pat)
    tuples = index_tuples(n, d)
    values: list[Scalar] = []
    for rows in tuples:
        for cols in tuples:
            letters = (Letter(0, i, j, s) for i, j, s in zip(rows, cols, pat))
            values.append(phi(Word(group, letters, normalized=True)))
    size = len(tuples)
    if all(_is_exact(v) for v in values):
        entries = np.empty((size, size), dtype=object)
        for idx, v in enumerate(values):
            entries[divmod(idx, size)] = Fraction(v)
    else:
        dtype = np.complex128 if any(isinstance(v, complex) for v in values) else np.float64
        entries = np.array(values, dtype=dtype).reshape(size, size)
    logger.debug("transfer.built state=%s degree=%d dim=%d exact=%s", phi.label, d, size, entries.dtype == object)
    return TransferMatrix(group, d, pat, entries)


def identity_transfer(group: GroupSpec, d: int, pattern: Optional[Sequence[bool]] = None) -> TransferMatrix:
    pat = _pattern(group, d, pattern)
    size = group.n ** d
    entries = np.empty((size, size), dtype=object)
    entries.fill(Fraction(0))
    for i in range(size):
        entries[i, i] = Fraction(1)
    return TransferMatrix(group, d, pat, entries)


def convolution_power(phi: StateOracle, k: int, d: int, pattern: Optional[Sequence[bool]] = None) -> TransferMatrix:
    """transfer(phi)^k, the transfer matrix of the k-fold convolution."""
    return transfer_matrix(phi, d, pattern).power(k)


def tensor_power(r: np.ndarray, d: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=r.dtype)
    for _ in range(d):
        out = np.kron(out, r)
    return out


def conjugate_transfer(t: TransferMatrix, r: np.ndarray) -> TransferMatrix:
    """
    Transfer matrix of the state precomposed with u -> R^T u R: (R^{(x)d})^T T R^{(x)d}.

    Exact when both T and R are rational and the dimension is below the float switch.
    """
    r = np.asarray(r)
    if r.shape != (t.group.n, t.group.n):
        raise ArgumentError("rotation size does not match the group", {"group": t.group.name, "shape": r.shape})
    exact = t.exact and r.dtype == object and t.dim <= get_settings().float_switch_dim
    if exact:
        big = tensor_power(r, t.degree)
        return replace(t, entries=big.T.dot(t.entries).dot(big))
    big = tensor_power(_to_float(r), t.degree)
    return replace(t, entries=big.T @ _to_float(t.entries) @ big)


def rotated_pullback(psi: StateOracle, pi_fixlast: Morphism, pi_rotated: Morphism, r: np.ndarray) -> StateOracle:
    """
    psi o pi_rotated, where pi_rotated = fix_vector(n, R) and pi_fixlast = fix_vector(n, I).

    Word values come from the rotated images; transfer matrices are conjugated from the
    fix-last pullback, which needs far fewer expansions.
    """
    base = pullback(psi, pi_fixlast)
    rotated = pullback(psi, pi_rotated)

    def build(d: int, pattern: tuple[bool, ...]) -> TransferMatrix:
        return conjugate_transfer(transfer_matrix(base, d, pattern), r)

    rotated.transfer_builder = build
    return rotated


# Experiments


def check_invariance(h: StateOracle, phi: StateOracle, d: int, pattern: Optional[Sequence[bool]] = None) -> Scalar:
    """max(|T_h T_phi - T_h|, |T_phi T_h - T_h|) entrywise; exactly 0 for the true Haar state."""
    _same_group(h, phi)
    th = transfer_matrix(h, d, pattern)
    tp = transfer_matrix(phi, d, pattern)
    left = (th @ tp).distance(th)
    right = (tp @ th).distance(th)
    return max(left, right)


def check_traciality(phi: StateOracle, words: Iterable[Word]) -> Scalar:
    """max |phi(ab) - phi(ba)| over every split w = ab of the given words."""
    worst: Scalar = Fraction(0)
    for w in words:
        for a, b in split_points(w):
            gap = abs(phi(w) - phi(b * a))
            if gap > worst:
                worst = gap
    return worst


def _subleading_modulus(m: np.ndarray, h: np.ndarray) -> float:
    # H is an absorbing idempotent (MH = HM = H), so (M - H)^k = M^k - H
    eigenvalues = np.linalg.eigvals(m - h)
    return float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0


def _monotone_after_transient(residuals: Sequence[float], slack: float = 1e-12) -> bool:
    if not residuals:
        return True
    start = int(np.argmax(residuals))
    tail = residuals[start:]
    return all(b <= a + slack for a, b in zip(tail, tail[1:]))


def converge_to_haar(
    tau1: StateOracle,
    tau2: StateOracle,
    h: StateOracle,
    d: int,
    pattern: Optional[Sequence[bool]] = None,
    tol: float = 1e-6,
    max_iter: int = 500,
    spectral: bool = True,
) -> ConvergenceReport:
    """
    Iterate T = T_tau1 T_tau2 and record |T^k - T_h|max for k = 1, 2, ... until tol or max_iter.

    Powering runs in binary64 once the transfer dimension exceeds the float switch; the
    report then carries the accumulated-error bound 10 k eps dim.
    """
    _same_group(tau1, tau2)
    _same_group(tau1, h)
    if max_iter < 1:
        raise ArgumentError("max_iter must be positive", {"max_iter": max_iter})
    t1 = transfer_matrix(tau1, d, pattern)
    t2 = transfer_matrix(tau2, d, pattern)
    th = transfer_matrix(h, d, pattern)
    step = t1 @ t2
    float_mode = not (step.exact and th.exact)
    if float_mode:
        step, th = step.as_float(), th.as_float()
    logger.info("converge.start pair=(%s, %s) degree=%d dim=%d float=%s",
                tau1.label, tau2.label, d, step.dim, float_mode)
    residuals: list[float] = []
    exact_residual: Optional[Fraction] = None
    power = step
    converged = False
    for k in range(1, max_iter + 1):
        if k > 1:
            power = power @ step
        gap = power.distance(th)
        if isinstance(gap, Fraction):
            exact_residual = gap
        residuals.append(float(gap))
        if float(gap) <= tol:
            converged = True
            break
    iterations = len(residuals)
    modulus = None
    if spectral:
        modulus = _subleading_modulus(_to_float(step.entries), _to_float(th.entries))
    bound = 10 * iterations * EPS * step.dim if float_mode else None
    logger.info("converge.done iterations=%d residual=%.3e converged=%s", iterations, residuals[-1], converged)
    return ConvergenceReport(
        degree=d,
        pattern=list(step.pattern),
        iterations=iterations,
        residuals=residuals,
        converged=converged,
        tolerance=tol,
        subleading_modulus=modulus,
        float_mode=float_mode,
        error_bound=bound,
        exact_final_residual=exact_residual,
        monotone_after_transient=_monotone_after_transient(residuals),
        labels=[tau1.label, tau2.label, h.label],
    )
