# Unital completely positive maps into matrix algebras, factorization-net constructions
# (pullback, convolution, compression, direct sum) and approximate-multiplicativity defects.
from __future__ import annotations

import abc
import enum
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence, Union

import numpy as np

from .config import get_settings
from .errors import ArgumentError, RelationError, UnsupportedError, check_cap
from .groups import Family, GroupSpec, make_group
from .morphisms import Morphism, relation_sums
from .schemas import DefectReport, ExactValue, FactorizationReport, NetElementReport
from .states import StateOracle
from .words import Letter, Word, WordSum, adjoint_sum, coproduct_expand

logger = logging.getLogger("qgkernel.amenability")

GeneratorKey = tuple[int, int, int]
Number = Union[float, complex]

# Points per streamed chunk when evaluating character nets
_CHUNK = 65536
# Samples drawn from one spawned generator stream
_STREAM_BLOCK = 1024


class UcpKind(str, enum.Enum):
    REP = "rep"
    CLASSICAL_SAMPLE = "classical_sample"
    COMPRESSED = "compressed"
    CONVOLVED = "convolved"
    PULLBACK = "pullback"
    DIRECT_SUM = "direct_sum"


def _scalar(x: complex, tol: float = 1e-12) -> Number:
    x = complex(x)
    return x.real if abs(x.imag) <= tol * max(1.0, abs(x.real)) else x


def _check_dense(k: int) -> None:
    check_cap("dense UCP output size", k, get_settings().max_ucp_dim)


class UcpMap(abc.ABC):
    """
    A unital completely positive map theta: C(group) -> M_k, evaluated on WordSums.

    Dense maps produce k x k complex matrices; character nets (see CharacterNet) are
    diagonal and only materialize matrices on request.
    """

    kind: UcpKind

    def __init__(self, group: GroupSpec, k: int, label: str) -> None:
        self.group = group
        self.k = k
        self.label = label

    def _check_sum(self, s: WordSum) -> None:
        if s.group.name != self.group.name:
            raise ArgumentError("WordSum is not over the map's group", {"map": self.label, "group": s.group.name})

    @abc.abstractmethod
    def matrix(self, s: WordSum) -> np.ndarray:
        """theta(s) as a dense k x k matrix."""

    def word_matrix(self, w: Word) -> np.ndarray:
        return self.matrix(WordSum.of_word(w))

    def traces(self, sums: Sequence[WordSum]) -> list[Number]:
        """Normalized traces tr_k(theta(s))."""
        return [_scalar(np.trace(self.matrix(s)) / self.k) for s in sums]

    def trace(self, s: WordSum) -> Number:
        return self.traces([s])[0]

    def trace_products(self, xs: Sequence[WordSum], diagonal_only: bool = False) -> np.ndarray:
        """P[i, j] = tr_k(theta(x_j)* theta(x_i)); off-diagonal entries are zero when diagonal_only."""
        mats = [self.matrix(x) for x in xs]
        m = len(xs)
        out = np.zeros((m, m), dtype=np.complex128)
        for i, j in itertools.product(range(m), repeat=2):
            if diagonal_only and i != j:
                continue
            out[i, j] = np.sum(np.conj(mats[j]) * mats[i]) / self.k
        return out

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.label}, k={self.k})"


class _MemoMap(UcpMap):
    """Dense map with a per-word memo; subclasses implement _word(w)."""

    def __init__(self, group: GroupSpec, k: int, label: str) -> None:
        _check_dense(k)
        super().__init__(group, k, label)
        self._memo: dict[Word, np.ndarray] = {}

    @abc.abstractmethod
    def _word(self, w: Word) -> np.ndarray:
        ...

    def word_matrix(self, w: Word) -> np.ndarray:
        hit = self._memo.get(w)
        if hit is None:
            hit = np.eye(self.k, dtype=np.complex128) if not w.letters else self._word(w)
            self._memo[w] = hit
        return hit

    def matrix(self, s: WordSum) -> np.ndarray:
        self._check_sum(s)
        out = np.zeros((self.k, self.k), dtype=np.complex128)
        for w, c in s.coefficients.items():
            out = out + complex(c) * self.word_matrix(w)
        return out


# Representations


def _normalize_images(group: GroupSpec, images: Mapping[tuple, np.ndarray]) -> dict[GeneratorKey, np.ndarray]:
    out: dict[GeneratorKey, np.ndarray] = {}
    for key, value in images.items():
        gen = (0, *key) if len(key) == 2 else tuple(key)
        out[gen] = np.atleast_2d(np.asarray(value, dtype=np.complex128))
    owners = list(enumerate(group.factors, start=1)) if group.is_free_product else [(0, group)]
    expected = {(tag, i, j) for tag, owner in owners for i in range(1, owner.n + 1) for j in range(1, owner.n + 1)}
    if set(out) != expected:
        raise ArgumentError("images must cover every generator", {"group": group.name, "given": len(out),
                                                                  "expected": len(expected)})
    shapes = {v.shape for v in out.values()}
    if len(shapes) != 1 or next(iter(shapes))[0] != next(iter(shapes))[1]:
        raise ArgumentError("images must be square matrices of one size", {"shapes": sorted(shapes)})
    return out


def _letter_image(images: Mapping[GeneratorKey, np.ndarray], letter: Letter) -> np.ndarray:
    x = images[letter.generator]
    return x.conj().T if letter.starred else x


def _evaluate_images(images: Mapping[GeneratorKey, np.ndarray], k: int, s: WordSum) -> np.ndarray:
    out = np.zeros((k, k), dtype=np.complex128)
    for w, c in s.coefficients.items():
        m = np.eye(k, dtype=np.complex128)
        for letter in w.letters:
            m = m @ _letter_image(images, letter)
        out = out + complex(c) * m
    return out


def validate_relations(group: GroupSpec, images: Mapping[tuple, np.ndarray]) -> float:
    """Max operator-norm residual of the defining relations (and self-adjointness where required)."""
    gens = _normalize_images(group, images)
    k = next(iter(gens.values())).shape[0]
    residual = 0.0
    for r in relation_sums(group):
        residual = max(residual, float(np.linalg.norm(_evaluate_images(gens, k, r), 2)))
    owners = list(enumerate(group.factors, start=1)) if group.is_free_product else [(0, group)]
    for tag, owner in owners:
        if owner.self_adjoint_entries:
            for (t, _, _), x in gens.items():
                if t == tag:
                    residual = max(residual, float(np.linalg.norm(x - x.conj().T, 2)))
    return residual


class RepUcp(_MemoMap):
    """*-representation given by generator images; a word maps to the ordered product of letter images."""

    kind = UcpKind.REP

    def __init__(self, group: GroupSpec, images: Mapping[tuple, np.ndarray], tol: float = 1e-10,
                 label: Optional[str] = None) -> None:
        gens = _normalize_images(group, images)
        k = next(iter(gens.values())).shape[0]
        super().__init__(group, k, label or f"rep({group.name},k={k})")
        self.images = gens
        self.residual = validate_relations(group, gens)
        if self.residual > tol:
            raise RelationError("generator images violate the defining relations",
                                {"group": group.name, "residual": self.residual, "tolerance": tol})

    def _word(self, w: Word) -> np.ndarray:
        m = np.eye(self.k, dtype=np.complex128)
        for letter in w.letters:
            m = m @ _letter_image(self.images, letter)
        return m


def rep_ucp(group: GroupSpec, images: Mapping[tuple, np.ndarray], tol: float = 1e-10) -> RepUcp:
    return RepUcp(group, images, tol)


def character_ucp(group: GroupSpec, g: np.ndarray, tol: float = 1e-10) -> RepUcp:
    """One-dimensional representation u_ij -> g_ij at a classical point g."""
    g = np.asarray(g, dtype=np.complex128)
    if group.is_free_product or g.shape != (group.n, group.n):
        raise ArgumentError("point does not match the group", {"group": group.name, "shape": g.shape})
    images = {(i + 1, j + 1): g[i, j] for i, j in itertools.product(range(group.n), repeat=2)}
    return RepUcp(group, images, tol, label=f"char({group.name})")


def flip_rep(v: np.ndarray, tol: float = 1e-10) -> RepUcp:
    """O_2+ rep u_11 = u_22 = 0, u_12 = u_21 = V for a self-adjoint unitary V."""
    v = np.atleast_2d(np.asarray(v, dtype=np.complex128))
    zero = np.zeros_like(v)
    images = {(1, 1): zero, (2, 2): zero, (1, 2): v, (2, 1): v}
    return RepUcp(make_group(Family.O_PLUS, 2), images, tol, label=f"flip(k={v.shape[0]})")


def pullback_images(pi: Morphism, images: Mapping[tuple, np.ndarray]) -> dict[GeneratorKey, np.ndarray]:
    """Generator images of theta o pi for a target representation theta."""
    gens = _normalize_images(pi.target, images)
    k = next(iter(gens.values())).shape[0]
    return {(0, i, j): _evaluate_images(gens, k, image) for (i, j), image in pi.images.items()}


# Character nets


class CharacterNet(UcpMap):
    """
    Diagonal map whose k diagonal slots are characters of C(group), stored as classical points.

    Points are the Cartesian product of `blocks` (row-major), each block an array (m, n, n);
    the point of slot (a, b) is blocks[0][a] @ blocks[1][b], which is how characters convolve.
    Slot values are evaluated in streamed chunks, so k may exceed the dense cap.
    """

    def __init__(self, group: GroupSpec, blocks: Sequence[np.ndarray], kind: UcpKind, label: str) -> None:
        if group.is_free_product:
            raise UnsupportedError("character nets need a non-free-product group", {"group": group.name})
        blocks = tuple(np.asarray(b) for b in blocks)
        if any(b.ndim != 3 or b.shape[1:] != (group.n, group.n) for b in blocks):
            raise ArgumentError("point blocks must have shape (m, n, n)", {"group": group.name})
        k = math.prod(len(b) for b in blocks)
        check_cap("character net size", k, get_settings().max_ucp_dim ** 2)
        if len(blocks) > 2:
            head = blocks[0]
            for b in blocks[1:-1]:
                head = np.matmul(head[:, None], b[None, :]).reshape(-1, group.n, group.n)
            blocks = (head, blocks[-1])
        super().__init__(group, k, label)
        self.kind = kind
        self.blocks = blocks

    def chunks(self) -> Iterator[np.ndarray]:
        if len(self.blocks) == 1:
            pts = self.blocks[0]
            for start in range(0, len(pts), _CHUNK):
                yield pts[start:start + _CHUNK]
            return
        first, second = self.blocks
        step = max(1, _CHUNK // len(second))
        for start in range(0, len(first), step):
            part = first[start:start + step]
            yield np.matmul(part[:, None], second[None, :]).reshape(-1, self.group.n, self.group.n)

    @staticmethod
    def _values(points: np.ndarray, s: WordSum) -> np.ndarray:
        out = np.zeros(len(points), dtype=np.result_type(points.dtype, np.float64))
        for w, c in s.coefficients.items():
            vals = np.ones(len(points), dtype=out.dtype)
            for letter in w.letters:
                x = points[:, letter.row - 1, letter.col - 1]
                vals = vals * (np.conj(x) if letter.starred else x)
            coeff = complex(c) if isinstance(c, complex) else float(c)
            if isinstance(coeff, complex):
                out = out.astype(np.complex128)
            out = out + coeff * vals
        return out

    def vector(self, s: WordSum) -> np.ndarray:
        self._check_sum(s)
        return np.concatenate([self._values(p, s) for p in self.chunks()])

    def matrix(self, s: WordSum) -> np.ndarray:
        _check_dense(self.k)
        return np.diag(self.vector(s).astype(np.complex128))

    def traces(self, sums: Sequence[WordSum]) -> list[Number]:
        for s in sums:
            self._check_sum(s)
        totals = np.zeros(len(sums), dtype=np.complex128)
        for pts in self.chunks():
            for idx, s in enumerate(sums):
                totals[idx] += np.sum(self._values(pts, s))
        return [_scalar(t / self.k) for t in totals]

    def trace_products(self, xs: Sequence[WordSum], diagonal_only: bool = False) -> np.ndarray:
        m = len(xs)
        out = np.zeros((m, m), dtype=np.complex128)
        for pts in self.chunks():
            vals = [self._values(pts, x) for x in xs]
            for i, j in itertools.product(range(m), repeat=2):
                if diagonal_only and i != j:
                    continue
                out[i, j] += np.sum(np.conj(vals[j]) * vals[i])
        return out / self.k


def _philox_streams(seed: int, count: int) -> list[np.random.Generator]:
    blocks = max(1, math.ceil(count / _STREAM_BLOCK))
    return [np.random.Generator(np.random.Philox(s)) for s in np.random.SeedSequence(seed).spawn(blocks)]


def _haar_orthogonal(rng: np.random.Generator, size: int, n: int) -> np.ndarray:
    z = rng.standard_normal((size, n, n))
    q, r = np.linalg.qr(z)
    signs = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    signs[signs == 0] = 1.0
    return q * signs[:, None, :]


def _haar_unitary(rng: np.random.Generator, size: int, n: int) -> np.ndarray:
    z = (rng.standard_normal((size, n, n)) + 1j * rng.standard_normal((size, n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    phases = d / np.where(np.abs(d) == 0, 1.0, np.abs(d))
    return q * phases[:, None, :]


def _permutation_points(perms: np.ndarray, m: int) -> np.ndarray:
    # p_ij(sigma) = 1 iff sigma(j) = i
    pts = np.zeros((len(perms), m, m))
    cols = np.arange(m)
    for a, sigma in enumerate(perms):
        pts[a, sigma, cols] = 1.0
    return pts


def sample_points(group: GroupSpec, sample_count: int, seed: int = 0, exhaustive: bool = False) -> np.ndarray:
    """
    Classical group elements, reproducible under `seed`.

    One spawned Philox stream per block of samples, so the draw does not depend on
    how blocks are scheduled. The torus uses the sample_count-th roots of unity.
    """
    fam, n = group.family, group.n
    if fam == Family.S_CLASSICAL and exhaustive:
        check_cap("|S_m| for exhaustive sampling", math.factorial(n), get_settings().direct_average_cap)
        return _permutation_points(np.array(list(itertools.permutations(range(n))), dtype=int), n)
    if exhaustive:
        raise UnsupportedError("exhaustive sampling needs a finite group", {"group": group.name})
    if sample_count < 1:
        raise ArgumentError("sample_count must be positive", {"sample_count": sample_count})
    if fam == Family.TORUS:
        roots = np.exp(2j * np.pi * np.arange(sample_count) / sample_count)
        return roots.reshape(sample_count, 1, 1)
    if fam not in (Family.O_CLASSICAL, Family.U_CLASSICAL, Family.S_CLASSICAL):
        raise UnsupportedError("classical sampling needs o, u, s or t", {"group": group.name})
    parts = []
    remaining = sample_count
    for rng in _philox_streams(seed, sample_count):
        size = min(_STREAM_BLOCK, remaining)
        remaining -= size
        if fam == Family.O_CLASSICAL:
            parts.append(_haar_orthogonal(rng, size, n))
        elif fam == Family.U_CLASSICAL:
            parts.append(_haar_unitary(rng, size, n))
        else:
            parts.append(_permutation_points(np.argsort(rng.random((size, n)), axis=1), n))
    return np.concatenate(parts)


def classical_sampling_ucp(group: GroupSpec, sample_count: int = 0, seed: int = 0,
                           exhaustive: bool = False) -> CharacterNet:
    """theta(w) = diag(w(g_1), ..., w(g_k)) over sampled classical elements g_a."""
    pts = sample_points(group, sample_count, seed, exhaustive)
    logger.info("ucp.sample group=%s k=%d seed=%d exhaustive=%s", group.name, len(pts), seed, exhaustive)
    tag = "all" if exhaustive else f"{len(pts)}@{seed}"
    return CharacterNet(group, [pts], UcpKind.CLASSICAL_SAMPLE, f"sample({group.name},{tag})")


def _pull_points(points: np.ndarray, pi: Morphism) -> np.ndarray:
    n = pi.source.n
    out = np.zeros((len(points), n, n), dtype=np.result_type(points.dtype, np.float64))
    for (i, j), image in pi.images.items():
        vals = CharacterNet._values(points, image)
        if np.iscomplexobj(vals) and not np.iscomplexobj(out):
            out = out.astype(np.complex128)
        out[:, i - 1, j - 1] = vals
    return out


# Composites


class CompressedUcp(_MemoMap):
    """V* theta(.) V for an isometry V (k_in x k_out, V* V = I)."""

    kind = UcpKind.COMPRESSED

    def __init__(self, inner: UcpMap, v: np.ndarray, tol: float = 1e-10) -> None:
        v = np.asarray(v, dtype=np.complex128)
        if v.ndim == 1:
            v = v.reshape(-1, 1)
        if v.shape[0] != inner.k:
            raise ArgumentError("isometry rows must match the inner size", {"inner": inner.k, "shape": v.shape})
        gap = float(np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1]))))
        if gap > tol:
            raise ArgumentError("compression is not an isometry", {"residual": gap})
        super().__init__(inner.group, v.shape[1], f"compress({inner.label},k={v.shape[1]})")
        self.inner = inner
        self.v = v

    def _word(self, w: Word) -> np.ndarray:
        return self.v.conj().T @ self.inner.word_matrix(w) @ self.v


def compress_ucp(inner: UcpMap, v: np.ndarray) -> CompressedUcp:
    return CompressedUcp(inner, v)


class ConvolvedUcp(_MemoMap):
    """(theta1 (x) theta2) Delta into M_{k1 k2}."""

    kind = UcpKind.CONVOLVED

    def __init__(self, first: UcpMap, second: UcpMap) -> None:
        super().__init__(first.group, first.k * second.k, f"({first.label} * {second.label})")
        self.first = first
        self.second = second

    def _word(self, w: Word) -> np.ndarray:
        out = np.zeros((self.k, self.k), dtype=np.complex128)
        for left, right in coproduct_expand(w):
            out = out + np.kron(self.first.word_matrix(left), self.second.word_matrix(right))
        return out


def convolve_ucp(first: UcpMap, second: UcpMap) -> UcpMap:
    """
    Convolution of UCP maps. Two character nets convolve pointwise (g, h) -> g h,
    anything else expands the coproduct into a dense Kronecker sum.
    """
    if first.group.name != second.group.name:
        raise ArgumentError("maps live on different groups", {"left": first.group.name, "right": second.group.name})
    if isinstance(first, CharacterNet) and isinstance(second, CharacterNet):
        return CharacterNet(first.group, first.blocks + second.blocks, UcpKind.CONVOLVED,
                            f"({first.label} * {second.label})")
    return ConvolvedUcp(first, second)


class PullbackUcp(_MemoMap):
    """theta o pi, k unchanged."""

    kind = UcpKind.PULLBACK

    def __init__(self, inner: UcpMap, pi: Morphism) -> None:
        super().__init__(pi.source, inner.k, f"{inner.label}.{pi.name}")
        self.inner = inner
        self.pi = pi

    def _word(self, w: Word) -> np.ndarray:
        return self.inner.matrix(self.pi.apply(w))


def pullback_ucp(inner: UcpMap, pi: Morphism) -> UcpMap:
    """
    theta o pi. Character nets pull back pointwise: every block point g becomes the
    character g o pi, which is valid blockwise because pi intertwines the coproducts.
    """
    if inner.group.name != pi.target.name:
        raise ArgumentError("map and morphism target differ", {"map": inner.group.name, "target": pi.target.name})
    if isinstance(inner, CharacterNet):
        blocks = [_pull_points(b, pi) for b in inner.blocks]
        return CharacterNet(pi.source, blocks, UcpKind.PULLBACK, f"{inner.label}.{pi.name}")
    return PullbackUcp(inner, pi)


class DirectSumUcp(_MemoMap):
    """Block-diagonal sum; its normalized trace is the block-size-weighted mean of the parts."""

    kind = UcpKind.DIRECT_SUM

    def __init__(self, maps: Sequence[UcpMap]) -> None:
        if not maps:
            raise ArgumentError("direct sum of no maps")
        group = maps[0].group
        if any(m.group.name != group.name for m in maps):
            raise ArgumentError("direct sum of maps on different groups")
        super().__init__(group, sum(m.k for m in maps), "(+)".join(m.label for m in maps))
        self.maps = list(maps)

    def _word(self, w: Word) -> np.ndarray:
        out = np.zeros((self.k, self.k), dtype=np.complex128)
        offset = 0
        for m in self.maps:
            out[offset:offset + m.k, offset:offset + m.k] = m.word_matrix(w)
            offset += m.k
        return out


def direct_sum_ucp(maps: Sequence[UcpMap]) -> DirectSumUcp:
    return DirectSumUcp(maps)


# Traces and defects


def trace_state(theta: UcpMap) -> StateOracle:
    """tr_k o theta as a (float) state."""

    def evaluate(w: Word) -> Number:
        return theta.trace(WordSum.of_word(w))

    return StateOracle(f"tr.{theta.label}", theta.group, evaluate, exact=False)


def _real(x: complex, what: str) -> float:
    x = complex(x)
    if abs(x.imag) > 1e-12 * max(1.0, abs(x.real)):
        raise ArgumentError(f"{what} has an imaginary part", {"value": repr(x)})
    return x.real


def defect_form(theta: UcpMap, a: WordSum, b: WordSum) -> Number:
    """<a, b> = tr(theta(b* a)) - tr(theta(b)* theta(a))."""
    first = theta.trace(adjoint_sum(b) * a)
    second = theta.trace_products([a, b])[0, 1]
    return _scalar(complex(first) - complex(second))


def defects(theta: UcpMap, bs: Sequence[WordSum]) -> list[float]:
    """tr(theta(b* b)) - tr(theta(b)* theta(b)) for each b, real."""
    if not bs:
        return []
    firsts = theta.traces([adjoint_sum(b) * b for b in bs])
    seconds = np.diagonal(theta.trace_products(bs, diagonal_only=True))
    return [_real(complex(f) - complex(s), "defect") for f, s in zip(firsts, seconds)]


def defect(theta: UcpMap, b: WordSum) -> float:
    return defects(theta, [b])[0]


@dataclass(frozen=True)
class DefectGram:
    matrix: np.ndarray
    min_eigenvalue: float
    cauchy_schwarz_ok: bool


def defect_gram(theta: UcpMap, xs: Sequence[WordSum], slack: float = 1e-9) -> DefectGram:
    """Gram matrix G[i, j] = <x_i, x_j> of the defect form, its least eigenvalue and a pairwise Cauchy-Schwarz check."""
    m = len(xs)
    if m == 0:
        return DefectGram(np.zeros((0, 0)), 0.0, True)
    pairs = [adjoint_sum(xs[j]) * xs[i] for i, j in itertools.product(range(m), repeat=2)]
    firsts = np.array([complex(t) for t in theta.traces(pairs)]).reshape(m, m)
    gram = firsts - theta.trace_products(xs)
    hermitian = (gram + gram.conj().T) / 2
    min_eig = float(np.min(np.linalg.eigvalsh(hermitian)))
    diag = np.clip(np.real(np.diagonal(gram)), 0.0, None)
    cs_ok = all(
        abs(gram[i, j]) <= math.sqrt(diag[i] * diag[j]) + slack
        for i, j in itertools.product(range(m), repeat=2)
    )
    if min_eig < -slack:
        logger.warning("defect.gram.not_psd map=%s min_eigenvalue=%.3e", theta.label, min_eig)
    return DefectGram(gram, min_eig, cs_ok)


def _defect_report(theta: UcpMap, words: Sequence[WordSum], gram_size: int) -> tuple[DefectReport, list[Number]]:
    values = defects(theta, words)
    gram = defect_gram(theta, list(words[:gram_size]))
    traces = theta.traces(list(words))
    report = DefectReport(
        words=[str(w) for w in words],
        defects=values,
        gram_min_eigenvalue=gram.min_eigenvalue,
        cauchy_schwarz_ok=gram.cauchy_schwarz_ok,
        trace_values={str(w): ExactValue.of(t) for w, t in zip(words, traces)},
        k=theta.k,
    )
    return report, traces


def defect_report(theta: UcpMap, words: Sequence[WordSum], gram_size: int = 5) -> DefectReport:
    return _defect_report(theta, words, gram_size)[0]


def _non_increasing(values: Sequence[float], slack: float = 1e-12) -> bool:
    return all(b <= a + slack for a, b in zip(values, values[1:]))


def factorization_report(
    net: Sequence[UcpMap],
    target: StateOracle,
    words: Sequence[WordSum],
    trace_error_threshold: float = 0.1,
    defect_threshold: float = 1e-10,
    gram_size: int = 5,
) -> FactorizationReport:
    """
    Per net element: max |tr theta(w) - tau(w)| and max defect over `words`.

    The net witnesses amenability at this scale when both sequences are non-increasing
    and their final values are below the thresholds.
    """
    if not net:
        raise ArgumentError("empty net")
    elements, details = [], []
    for theta in net:
        report, traces = _defect_report(theta, words, gram_size)
        err = max((abs(complex(t) - complex(target.evaluate_sum(w))) for t, w in zip(traces, words)), default=0.0)
        worst = max(report.defects, default=0.0)
        elements.append(NetElementReport(label=theta.label, k=theta.k, trace_error=float(err), max_defect=worst))
        details.append(report)
        logger.info("factorization.element map=%s k=%d trace_error=%.3e max_defect=%.3e",
                    theta.label, theta.k, err, worst)
    trace_errors = [e.trace_error for e in elements]
    max_defects = [e.max_defect for e in elements]
    te_dec, d_dec = _non_increasing(trace_errors), _non_increasing(max_defects)
    witnesses = (
        te_dec and d_dec
        and trace_errors[-1] <= trace_error_threshold
        and max_defects[-1] <= defect_threshold
    )
    return FactorizationReport(
        elements=elements,
        trace_errors=trace_errors,
        max_defects=max_defects,
        trace_error_decreasing=te_dec,
        defect_decreasing=d_dec,
        witnesses=witnesses,
        trace_error_threshold=trace_error_threshold,
        defect_threshold=defect_threshold,
        details=details,
    )
