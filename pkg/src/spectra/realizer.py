"""Symbolic realization of Lagrange values inside a complete subshift.

Given an alphabet B, the blocks of 2m+1 consecutive B-words that can carry
the maximum of f are located and removed, leaving an alphabet B* whose
complete shift stays a certified distance below that maximum.  A finite
word x over B* is then turned into

* theta(x): a single copy of a maximizing block, padded on both sides by
  a periodic B* block d and embedded in the B* sequence x, and
* theta*(x): the concatenation of blocks tau(j) = x_{-j}..x_{-1} d gamma d
  x_1..x_j, truncated after J blocks (its tail is tau(J) repeated).

The Lagrange value of theta*(x) equals the value of f at the central
position of theta(x); both sides are computed and compared.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

from .errors import EnumerationOverflowError, InconclusiveError, MalformedInputError, RealizationError
from .potentials import (
    ENCLOSURE_PAD,
    BiSequence,
    Potential,
    markov_value,
    markov_value_exact,
    sup_over_concatenations,
)
from .symbolic import PeriodicPoint, Word, WordAlphabet

Blocks = tuple[int, ...]  # indices into B

REALIZATION_TOL = 1e-9


def _concat(words: Sequence[Word], blocks: Sequence[int]) -> Word:
    return tuple(itertools.chain.from_iterable(words[i] for i in blocks))


@dataclass(frozen=True)
class MaximizerSet:
    """Maximizing (2m+1)-blocks of B, the remaining alphabet B* and the certified gap.

    `eta_gap` separates the best position inside the inserted block
    ``gamma`` from every position outside it, over all concatenations of
    B* blocks and copies of ``d gamma d``.
    """

    B: WordAlphabet
    m: int
    gammas: tuple[Blocks, ...]
    central: Blocks
    eta_gap: float
    max_lower: float
    max_upper: float
    B_star: tuple[Blocks, ...]
    d_block: Blocks
    rest_upper: float = float("nan")

    def word(self, blocks: Blocks) -> Word:
        return _concat(self.B.words, blocks)

    @property
    def d_word(self) -> Word:
        return self.word(self.d_block)

    @property
    def gamma_word(self) -> Word:
        return self.word(self.central)

    @property
    def alphabet(self) -> tuple[Word, ...]:
        """B* words followed by the padded insertion ``d gamma d``."""
        return tuple(self.word(x) for x in self.B_star) + (self.d_word + self.gamma_word + self.d_word,)


def find_maximizers(
    B: WordAlphabet,
    m: int,
    pot: Potential,
    periodic_words: int = 3,
    window_cap: int = 200_000,
    tol: float = 1e-9,
    max_nodes: int = 200_000,
) -> MaximizerSet:
    """Locate the (2m+1)-windows of B-words that may carry max f and certify the insertion gap.

    A window's bounds cover f at every offset inside its central word.
    Exact values on periodic concatenations of up to `periodic_words` words
    give a lower bound for max f; windows whose upper bound reaches it form
    the maximizing set G.  B* keeps the (2m+1)-blocks that are not in G and
    cannot complete a window of G at a junction.  The gap is the certified
    lower bound of f at the best position of ``d gamma d`` minus the
    certified supremum of f outside gamma, over the complete shift on B*
    together with ``d gamma d``.
    """
    if m < 1:
        raise MalformedInputError("m must be positive")
    words = tuple(B.words)
    nb = len(words)
    if nb == 1:
        raise InconclusiveError("the complete shift is a single periodic orbit; nothing remains after removal")
    width = 2 * m + 1
    if nb ** width > window_cap:
        raise EnumerationOverflowError(f"{nb}^{width} windows exceed the cap {window_cap}; use a smaller m")
    best = max(
        markov_value(PeriodicPoint(_concat(words, c)), pot)
        for n in range(1, periodic_words + 1)
        for c in itertools.product(range(nb), repeat=n)
    )
    floor = best - ENCLOSURE_PAD
    tails = pot.tail_hulls(words)
    bounds: dict[Blocks, tuple[float, float]] = {}
    for window in itertools.product(range(nb), repeat=width):
        past = _concat(words, window[:m])
        future = _concat(words, window[m + 1:])
        center = words[window[m]]
        lo = hi = -float("inf")
        for off in range(len(center)):
            a, b = pot.enclose(past + center[:off], center[off:] + future, tails)
            lo, hi = max(lo, a), max(hi, b)
        bounds[window] = (lo, hi)
    gammas = tuple(w for w in bounds if bounds[w][1] >= floor)
    central = min(gammas, key=lambda w: (-bounds[w][0], w))

    gset = set(gammas)
    heads = {g[:s] for g in gammas for s in range(1, width)}
    tails_of = {g[s:] for g in gammas for s in range(1, width)}
    # No block is a maximizing window, and no junction of two blocks can
    # create one: blocks never end in a proper head or start with a proper
    # tail of a maximizing window.
    b_star = tuple(
        x
        for x in itertools.product(range(nb), repeat=width)
        if x not in gset
        and not any(x[-s:] in heads for s in range(1, width))
        and not any(x[:s] in tails_of for s in range(1, width))
    )
    if not b_star:
        raise InconclusiveError(f"removing the maximizing windows leaves no block at m={m}")
    d_block = min(b_star, key=lambda x: (markov_value(PeriodicPoint(_concat(words, x)), pot), x))

    d = _concat(words, d_block)
    gamma = _concat(words, central)
    inserted = d + gamma + d
    family = tuple(_concat(words, x) for x in b_star) + (inserted,)
    fam_tails = pot.tail_hulls(family)
    g_lower = max(
        pot.enclose(inserted[:j], inserted[j:], fam_tails)[0] for j in range(len(d), len(d) + len(gamma))
    )
    outside = [(i, k) for i, w in enumerate(family[:-1]) for k in range(len(w))]
    outside += [(len(family) - 1, k) for k in range(len(inserted)) if not len(d) <= k < len(d) + len(gamma)]
    rest = sup_over_concatenations(family, pot, outside, tol=tol, max_nodes=max_nodes)
    gap = g_lower - rest.upper
    if not gap > 0:
        raise InconclusiveError(f"maximizer gap not certified at m={m} (gap {gap:.3g}); increase m")
    return MaximizerSet(
        B, m, gammas, central, gap, g_lower, max(bounds[w][1] for w in gammas), b_star, d_block, rest.upper
    )


@dataclass(frozen=True)
class RealizationSpec:
    """theta(x), theta*(x) and the two sides of the Lagrange identity.

    `error_bound` is a certified bound on |lagrange - value|: the widest
    enclosure of f over the gamma positions given only the context theta
    and theta* share.  It shrinks as `depth` grows.
    """

    x_word: tuple[int, ...]
    d_word: Word
    tau_blocks: tuple[Word, ...]
    theta: BiSequence
    theta_star: BiSequence
    n: int
    value: float
    lagrange: float
    error: float
    error_bound: float
    depth: int

    def to_json(self) -> dict:
        return {
            "x_word": list(self.x_word),
            "d_word": list(self.d_word),
            "n": self.n,
            "value": self.value,
            "lagrange": self.lagrange,
            "error": self.error,
            "error_bound": self.error_bound,
            "depth": self.depth,
        }


def realize(x_word: Sequence[int], ms: MaximizerSet, pot: Potential, depth: int = 6, tol: float = REALIZATION_TOL) -> RealizationSpec:
    """Build theta(x) and theta*(x) for a word x of B* indices and check the Lagrange identity.

    `n` is the realizing position counted from the first symbol of the
    inserted block gamma.  Every position outside gamma is checked to stay
    below the realized value by the certified gap, and the identity is
    enforced to within `tol`.
    """
    x_word = tuple(int(i) for i in x_word)
    if not x_word:
        raise MalformedInputError("x_word must be nonempty")
    if depth < 1:
        raise MalformedInputError("depth must be positive")
    if any(not 0 <= i < len(ms.B_star) for i in x_word):
        raise MalformedInputError("x_word indices must point into B*")
    xs = [ms.word(ms.B_star[i]) for i in x_word]
    d = ms.d_word
    gamma = ms.gamma_word
    g_start, g_len = len(d), len(gamma)

    # theta(x): ... x_1 x_0 | d gamma d | x_0 x_1 ...
    theta = BiSequence(_concat(xs, range(len(xs) - 1, -1, -1)), d + gamma + d, _concat(xs, range(len(xs))))
    inner = [pot.value(theta, j) for j in range(g_start, g_start + g_len)]
    top = max(range(g_len), key=lambda j: (inner[j], -j))
    value = inner[top]
    limit = float(value) - ms.eta_gap + ENCLOSURE_PAD
    for j in range(len(theta.core)):
        if g_start <= j < g_start + g_len:
            continue
        if float(pot.value(theta, j)) > limit:
            raise RealizationError(f"position {j} of theta violates the gap", window=theta.window(j - 8, j + 8))
    for tail in (theta.left, theta.right):
        if max(pot.phase_values(tail)) > limit:
            raise RealizationError("a tail of theta violates the gap", window=tail)

    def side(j: int, sign: int) -> Word:
        # x_{-j} .. x_{-1} for sign -1, x_1 .. x_j for sign +1 (x_{+-i} = xs[(i-1) mod len])
        idx = [(i - 1) % len(xs) for i in range(1, j + 1)]
        return _concat(xs, list(reversed(idx)) if sign < 0 else idx)

    taus = tuple(side(j, -1) + d + gamma + d + side(j, 1) for j in range(1, depth + 1))
    core = tuple(itertools.chain.from_iterable(taus[j - 1] for j in range(depth - 1, 0, -1))) + tuple(
        itertools.chain.from_iterable(taus[: depth - 1])
    )
    period = taus[-1]
    theta_star = BiSequence(period, core if core else period, period)

    phases = pot.phase_values(period)
    offset = len(side(depth, -1))
    p_start = offset + g_start
    for j, v in enumerate(phases):
        if p_start <= j < p_start + g_len:
            continue
        if v > limit:
            raise RealizationError(f"phase {j} of tau({depth}) violates the gap", window=period)
    best_phase = max(range(p_start, p_start + g_len), key=lambda j: (phases[j], -j))
    lagrange = pot.value(BiSequence.periodic(period, best_phase), 0)
    error = abs(float(lagrange - value))

    # theta and the tau(depth) orbit agree on side(depth) d gamma d side(depth);
    # beyond that both continue in the complete shift on B* and d gamma d.
    tails = pot.tail_hulls(ms.alphabet)
    shared = period
    error_bound = max(
        hi - lo for lo, hi in (pot.enclose(shared[:j], shared[j:], tails) for j in range(p_start, p_start + g_len))
    )
    if error > tol:
        raise RealizationError(
            f"Lagrange value {float(lagrange):.15g} differs from f(sigma^n theta) = {float(value):.15g}",
            window=period,
        )
    return RealizationSpec(
        x_word, d, taus, theta, theta_star, top, float(value), float(lagrange), error, error_bound, depth
    )


def sample_x_words(n_star: int, count: int, seed: int = 0, max_blocks: int = 8) -> list[tuple[int, ...]]:
    """`count` distinct random words of 1..max_blocks indices below `n_star`, reproducible from `seed`."""
    if count < 0:
        raise MalformedInputError("count must be nonnegative")
    possible = sum(n_star ** n for n in range(1, max_blocks + 1))
    if count > possible:
        raise MalformedInputError(f"only {possible} distinct words of at most {max_blocks} blocks exist")
    rng = random.Random(seed)
    seen: set[tuple[int, ...]] = set()
    out = []
    while len(out) < count:
        x = tuple(rng.randrange(n_star) for _ in range(rng.randint(1, max_blocks)))
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


def realize_samples(
    ms: MaximizerSet, count: int, pot: Potential, seed: int = 0, depth: int = 6, max_blocks: int = 8
) -> list[RealizationSpec]:
    return [realize(x, ms, pot, depth) for x in sample_x_words(len(ms.B_star), count, seed, max_blocks)]


def lagrange_samples(
    B: WordAlphabet,
    ms: MaximizerSet | None,
    count: int,
    pot: Potential,
    seed: int = 0,
    depth: int = 6,
    max_blocks: int = 8,
) -> list[float]:
    """Lagrange values realized from `count` distinct random words over B*.

    A single-word B has one orbit, whose Markov value is the only Lagrange
    value; it is returned `count` times.
    """
    if count < 0:
        raise MalformedInputError("count must be nonnegative")
    if len(B.words) == 1:
        value = float(markov_value_exact(PeriodicPoint(B.words[0]), pot))
        return [value] * count
    if ms is None:
        raise MalformedInputError("a maximizer set is required for alphabets with several words")
    return [spec.lagrange for spec in realize_samples(ms, count, pot, seed, depth, max_blocks)]
