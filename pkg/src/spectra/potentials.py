"""Potentials on bi-infinite sequences: certified window bounds and exact values.

A potential `f` assigns a real number to each point of the subshift.  Every
implementation provides

* ``bounds(past, future)``: an interval containing ``f(theta)`` for every
  admissible ``theta`` with the given coordinates around position 0;
* ``position_bounds(word)``: lower/upper bounds at every position of a finite
  word whose two tails are free;
* ``value(seq, n)``: the value at position ``n`` of an eventually periodic
  sequence, computed exactly (rational or 50-digit arithmetic).
"""
from __future__ import annotations

import heapq
import itertools
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import mpmath

from .errors import ConcatenationError, MalformedInputError
from .geometry import AffineGeometry, GeometryModel
from .symbolic import PeriodicPoint, TransitionSystem, Word, is_admissible

# Outward padding applied to every float enclosure.  Each enclosure is built
# from a few contracting float operations per symbol, so the accumulated
# rounding is many orders of magnitude below this.
ENCLOSURE_PAD = 1e-12

MP_DPS = 50


@dataclass(frozen=True)
class BiSequence:
    """Eventually periodic bi-infinite sequence ``... left left | core | right right ...``.

    Position 0 is ``core[0]`` (or ``right[0]`` when the core is empty); the
    left tail ends at position -1 with ``left[-1]``.
    """

    left: Word
    core: Word
    right: Word

    @classmethod
    def periodic(cls, word: Sequence[int], phase: int = 0) -> "BiSequence":
        w = tuple(word)
        w = w[phase:] + w[:phase]
        return cls(w, (), w)

    @classmethod
    def from_point(cls, p: PeriodicPoint) -> "BiSequence":
        return cls.periodic(p.period_word, p.phase)

    def symbol(self, n: int) -> int:
        if n < 0:
            return self.left[n % len(self.left)]
        if n < len(self.core):
            return self.core[n]
        return self.right[(n - len(self.core)) % len(self.right)]

    def window(self, start: int, stop: int) -> Word:
        return tuple(self.symbol(j) for j in range(start, stop))

    def future_split(self, n: int) -> tuple[Word, Word]:
        """(prefix, period) with the sequence from `n` onwards equal to prefix + period^inf."""
        c = len(self.core)
        if n >= c:
            k = (n - c) % len(self.right)
            return (), self.right[k:] + self.right[:k]
        return self.window(n, 0) + self.core[max(n, 0):], self.right

    def past_split(self, n: int) -> tuple[Word, Word]:
        """(finite, period) listing the symbols at n-1, n-2, ... as finite + period^inf."""
        p = len(self.left)
        if n <= 0:
            return (), tuple(self.left[j % p] for j in range(n - 1, n - 1 - p, -1))
        return tuple(reversed(self.window(0, n))), tuple(reversed(self.left))

    def check(self, ts: TransitionSystem) -> "BiSequence":
        span = self.window(-2 * len(self.left), len(self.core) + 2 * len(self.right))
        if not is_admissible(span, ts):
            raise MalformedInputError("sequence is not admissible")
        return self

    def reflected(self) -> "BiSequence":
        """Sequence read backwards; position j of the result is position len(core)-1-j here."""
        return BiSequence(tuple(reversed(self.right)), tuple(reversed(self.core)), tuple(reversed(self.left)))


class Potential(ABC):
    """Interface for potentials; see the module docstring."""

    ts: TransitionSystem
    name = "abstract"
    exact = True

    @abstractmethod
    def bounds(self, past: Sequence[int], future: Sequence[int]) -> tuple[float, float]:
        ...

    @abstractmethod
    def value(self, seq: BiSequence, n: int = 0):
        """Value at position `n` (exact type: Fraction or mpf)."""

    def position_bounds(self, word: Sequence[int]) -> tuple[list[float], list[float]]:
        word = tuple(word)
        lows, highs = [], []
        for i in range(len(word)):
            lo, hi = self.bounds(word[:i], word[i:])
            lows.append(lo)
            highs.append(hi)
        return lows, highs

    def phase_values(self, word: Sequence[int]) -> list[float]:
        """Float values of f at every phase of the periodic sequence `word`^inf."""
        seq = BiSequence.periodic(word)
        return [float(self.value(seq, j)) for j in range(len(word))]

    def reflected(self) -> "Potential":
        return ReflectedPotential(self)

    def tail_hulls(self, words: Sequence[Sequence[int]]):
        """Enclosures of the tail contributions over concatenations of `words`.

        Returns None when the potential has no such refinement; `enclose`
        then falls back to tails ranging over the whole system.
        """
        return None

    def enclose(self, past: Sequence[int], future: Sequence[int], tails) -> tuple[float, float]:
        """Like `bounds`, with both tails restricted as described by `tail_hulls`."""
        return self.bounds(past, future)

    def spec(self) -> dict:
        return {"name": self.name}


def _hull(intervals):
    los, his = zip(*intervals)
    return min(los), max(his)


class FoldPotential(Potential):
    """Potentials of the form f = u(future) + v(past) built from monotone one-symbol maps.

    ``u`` of a future ``a0 a1 ...`` satisfies ``u = phi(a0, u(a1 ...))`` and ``v``
    of a past read backwards ``a-1 a-2 ...`` satisfies ``v = psi(a-1, v(a-2 ...))``.
    """

    phi_increasing = True
    psi_increasing = True

    def __init__(self, ts: TransitionSystem):
        self.ts = ts
        self._u_hull = self._fixed_hull(ts.successors, self._phi, self.phi_increasing, self._u_start)
        self._v_hull = self._fixed_hull(ts.predecessors, self._psi, self.psi_increasing, self._v_start)
        # hull of u over futures whose first symbol follows `a`
        self._u_after = {a: _hull([self._u_hull[b] for b in ts.successors(a)]) for a in ts.alphabet}
        self._v_before = {a: _hull([self._v_hull[b] for b in ts.predecessors(a)]) for a in ts.alphabet}
        self._u_any = _hull(self._u_hull.values())
        self._v_any = _hull(self._v_hull.values())

    # -- one-symbol maps (floats) and their exact counterparts -----------------
    @abstractmethod
    def _phi(self, a, u):
        ...

    @abstractmethod
    def _psi(self, a, v):
        ...

    @abstractmethod
    def _u_start(self, a) -> tuple[float, float]:
        """Crude enclosure of u over futures starting with `a`."""

    @abstractmethod
    def _v_start(self, a) -> tuple[float, float]:
        ...

    @abstractmethod
    def _exact_u(self, prefix: Word, period: Word):
        ...

    @abstractmethod
    def _exact_v(self, finite: Word, period: Word):
        ...

    def _fixed_hull(self, nxt, fn, increasing, start):
        hull = {a: start(a) for a in self.ts.alphabet}
        for _ in range(400):
            new = {}
            for a in self.ts.alphabet:
                lo, hi = _hull([hull[b] for b in nxt(a)])
                x, y = fn(a, lo), fn(a, hi)
                new[a] = (x, y) if increasing else (y, x)
            done = all(abs(new[a][0] - hull[a][0]) + abs(new[a][1] - hull[a][1]) < 1e-17 for a in hull)
            hull = new
            if done:
                break
        return {a: (lo - ENCLOSURE_PAD, hi + ENCLOSURE_PAD) for a, (lo, hi) in hull.items()}

    def _map_interval(self, fn, increasing, a, lo, hi):
        x, y = fn(a, lo), fn(a, hi)
        return (x, y) if increasing else (y, x)

    def _fold_u(self, word, lo, hi):
        for a in reversed(word):
            lo, hi = self._map_interval(self._phi, self.phi_increasing, a, lo, hi)
        return lo, hi

    def _fold_v(self, word, lo, hi):
        for a in word:
            lo, hi = self._map_interval(self._psi, self.psi_increasing, a, lo, hi)
        return lo, hi

    def tail_hulls(self, words):
        # Start from the hulls over the whole system, which contain the
        # restricted sets; every iterate of the word maps still does.
        words = [tuple(w) for w in words]
        u, v = self._u_any, self._v_any
        for _ in range(400):
            nu = _hull([self._fold_u(w, *u) for w in words])
            nv = _hull([self._fold_v(w, *v) for w in words])
            done = abs(nu[0] - u[0]) + abs(nu[1] - u[1]) + abs(nv[0] - v[0]) + abs(nv[1] - v[1]) < 1e-17
            u, v = nu, nv
            if done:
                break
        return (u[0] - ENCLOSURE_PAD, u[1] + ENCLOSURE_PAD), (v[0] - ENCLOSURE_PAD, v[1] + ENCLOSURE_PAD)

    def enclose(self, past, future, tails):
        if tails is None:
            return self.bounds(past, future)
        (ulo, uhi), (vlo, vhi) = tails
        u_lo, u_hi = self._fold_u(future, ulo, uhi)
        v_lo, v_hi = self._fold_v(past, vlo, vhi)
        return u_lo + v_lo - ENCLOSURE_PAD, u_hi + v_hi + ENCLOSURE_PAD

    def _u_bounds(self, future: Sequence[int], after: int | None):
        """Enclosure of u for futures starting with `future`; `after` is the symbol before them."""
        if not future:
            return self._u_after[after] if after is not None else self._u_any
        lo, hi = self._u_after[future[-1]]
        for a in reversed(future):
            lo, hi = self._map_interval(self._phi, self.phi_increasing, a, lo, hi)
        return lo, hi

    def _v_bounds(self, past: Sequence[int], before: int | None):
        if not past:
            return self._v_before[before] if before is not None else self._v_any
        lo, hi = self._v_before[past[0]]
        for a in past:
            lo, hi = self._map_interval(self._psi, self.psi_increasing, a, lo, hi)
        return lo, hi

    def bounds(self, past, future):
        past, future = tuple(past), tuple(future)
        if past and future and not self.ts.allows(past[-1], future[0]):
            raise ConcatenationError(len(past), (past[-1], future[0]))
        u_lo, u_hi = self._u_bounds(future, past[-1] if past else None)
        v_lo, v_hi = self._v_bounds(past, future[0] if future else None)
        return u_lo + v_lo - ENCLOSURE_PAD, u_hi + v_hi + ENCLOSURE_PAD

    def position_bounds(self, word):
        n = len(word)
        if n == 0:
            return [], []
        phi, psi = self._phi, self._psi
        u_lo = [0.0] * n
        u_hi = [0.0] * n
        lo, hi = self._u_after[word[-1]]
        for i in range(n - 1, -1, -1):
            x, y = phi(word[i], lo), phi(word[i], hi)
            lo, hi = (x, y) if self.phi_increasing else (y, x)
            u_lo[i], u_hi[i] = lo, hi
        lows = [0.0] * n
        highs = [0.0] * n
        lo, hi = self._v_before[word[0]]
        for i in range(n):
            lows[i] = u_lo[i] + lo - ENCLOSURE_PAD
            highs[i] = u_hi[i] + hi + ENCLOSURE_PAD
            x, y = psi(word[i], lo), psi(word[i], hi)
            lo, hi = (x, y) if self.psi_increasing else (y, x)
        return lows, highs

    def value(self, seq, n=0):
        prefix, period = seq.future_split(n)
        finite, back = seq.past_split(n)
        return self._exact_u(prefix, period) + self._exact_v(finite, back)

    def phase_values(self, word):
        word = tuple(word)
        p = len(word)
        u = self._periodic_fixed(lambda x: self._fold_point(self._phi, reversed(word), x), self._u_start(word[0])[0])
        us = [0.0] * p
        for i in range(p - 1, -1, -1):
            u = self._phi(word[i], u)
            us[i] = u
        v = self._periodic_fixed(lambda x: self._fold_point(self._psi, word, x), self._v_start(word[-1])[0])
        out = [0.0] * p
        for i in range(p):
            out[i] = us[i] + v
            v = self._psi(word[i], v)
        return out

    @staticmethod
    def _fold_point(fn, symbols, x):
        for a in symbols:
            x = fn(a, x)
        return x

    @staticmethod
    def _periodic_fixed(step, x, max_reps=100_000):
        """Iterate a contracting map to its fixed point in float precision."""
        for _ in range(max_reps):
            y = step(x)
            if abs(y - x) <= 1e-16 * (1.0 + abs(y)):
                return y
            x = y
        return x


class ClassicalCFPotential(FoldPotential):
    """f(theta) = [a0; a1, a2, ...] + [0; a-1, a-2, ...] on a system with positive integer symbols."""

    name = "classical_cf"
    phi_increasing = False
    psi_increasing = False

    def __init__(self, ts: TransitionSystem):
        if any(a < 1 for a in ts.alphabet):
            raise MalformedInputError("continued-fraction potentials need positive integer symbols")
        super().__init__(ts)

    def _phi(self, a, u):
        return a + 1.0 / u

    def _psi(self, a, v):
        return 1.0 / (a + v)

    def _u_start(self, a):
        return (float(a), float(a + 1))

    def _v_start(self, a):
        return (0.0, 1.0)

    @staticmethod
    def _periodic_cf(period: Word):
        """Exact value of the purely periodic continued fraction [p0; p1, ..., p0, p1, ...]."""
        a, b, c, d = 1, 0, 0, 1
        for x in period:
            a, b, c, d = a * x + b, a, c * x + d, c
        with mpmath.workdps(MP_DPS):
            disc = mpmath.mpf((a - d) ** 2 + 4 * b * c)
            return ((a - d) + mpmath.sqrt(disc)) / (2 * c)

    def _exact_u(self, prefix, period):
        with mpmath.workdps(MP_DPS):
            x = self._periodic_cf(period)
            for a in reversed(prefix):
                x = a + 1 / x
            return x

    def _exact_v(self, finite, period):
        with mpmath.workdps(MP_DPS):
            return 1 / self._exact_u(finite, period)

    def reflected(self):
        # f is symmetric under reading the sequence backwards around position 0
        return ClassicalCFPotential(self.ts.transpose())


class AffineCoordinatePotential(FoldPotential):
    """f(theta) = x(future) + x(past read backwards), with x the affine Cantor-set coordinate."""

    name = "affine_coordinate"

    def __init__(self, ts: TransitionSystem, geometry: AffineGeometry):
        self.geometry = geometry
        self._ratio = {a: float(r) for a, r in geometry.ratios.items()}
        self._offset = {a: float(o) for a, o in geometry.offsets.items()}
        super().__init__(ts)

    def _phi(self, a, u):
        return self._offset[a] + self._ratio[a] * u

    _psi = _phi

    def _u_start(self, a):
        return (self._offset[a], self._offset[a] + self._ratio[a])

    _v_start = _u_start

    def _coordinate(self, prefix, period) -> Fraction:
        g = self.geometry
        slope, shift = Fraction(1), Fraction(0)
        for a in period:
            shift += slope * g.offsets[a]
            slope *= g.ratios[a]
        x = shift / (1 - slope)
        for a in reversed(prefix):
            x = g.offsets[a] + g.ratios[a] * x
        return x

    def _exact_u(self, prefix, period):
        return self._coordinate(prefix, period)

    def _exact_v(self, finite, period):
        return self._coordinate(finite, period)

    def reflected(self):
        return AffineCoordinatePotential(self.ts.transpose(), self.geometry)

    def spec(self):
        return {"name": self.name}


class WindowPotential(Potential):
    """f(theta) given by a table on the window theta[-past_len .. future_len-1].

    ``tail_modulus`` is the user's bound on how far the true potential may
    deviate from the table value; bounds are widened by it and values computed
    by the table are exact only when it is zero.
    """

    name = "window"

    def __init__(self, ts: TransitionSystem, past_len: int, future_len: int, table: Mapping[tuple, float], tail_modulus: float = 0.0, default: float | None = None):
        if future_len < 1 or past_len < 0:
            raise MalformedInputError("window needs future_len >= 1 and past_len >= 0")
        self.ts = ts
        self.past_len = past_len
        self.future_len = future_len
        self.table = {tuple(k): float(v) for k, v in table.items()}
        self.default = default
        self.tail_modulus = float(tail_modulus)
        self.exact = self.tail_modulus == 0.0

    def _lookup(self, window: Word) -> float:
        if window in self.table:
            return self.table[window]
        if self.default is None:
            raise MalformedInputError(f"window {window} missing from the potential table")
        return self.default

    def _completions(self, past: Word, future: Word):
        """All admissible windows compatible with the given coordinates."""
        need_past = max(0, self.past_len - len(past))
        need_future = max(0, self.future_len - len(future))
        known_past = past[len(past) - self.past_len:] if self.past_len else ()
        known_future = future[: self.future_len]
        alphabet = self.ts.alphabet
        for head in itertools.product(alphabet, repeat=need_past):
            for tail in itertools.product(alphabet, repeat=need_future):
                w = head + known_past + known_future + tail
                if is_admissible(w, self.ts):
                    yield w

    def bounds(self, past, future):
        past, future = tuple(past), tuple(future)
        if past and future and not self.ts.allows(past[-1], future[0]):
            raise ConcatenationError(len(past), (past[-1], future[0]))
        if not future:
            values = []
            succ = self.ts.successors(past[-1]) if past else self.ts.alphabet
            for c in succ:
                values.extend(self.bounds(past, (c,)))
            return min(values), max(values)
        values = [self._lookup(w) for w in self._completions(past, future)]
        return min(values) - self.tail_modulus, max(values) + self.tail_modulus

    def value(self, seq, n=0):
        return Fraction(self._lookup(seq.window(n - self.past_len, n + self.future_len)))

    def spec(self):
        return {
            "name": self.name,
            "past_len": self.past_len,
            "future_len": self.future_len,
            "table": [[list(k), v] for k, v in sorted(self.table.items())],
            "tail_modulus": self.tail_modulus,
        }


class ConstantPotential(WindowPotential):
    name = "constant"

    def __init__(self, ts: TransitionSystem, constant: float = 0.0):
        super().__init__(ts, 0, 1, {(a,): constant for a in ts.alphabet})
        self.constant = constant

    def spec(self):
        return {"name": self.name, "value": self.constant}


class ReflectedPotential(Potential):
    """f composed with the reflection (R theta)_n = theta_{-n}, living on the transposed system."""

    def __init__(self, base: Potential):
        self.base = base
        self.ts = base.ts.transpose()
        self.exact = base.exact
        self.name = f"reflected_{base.name}"

    def bounds(self, past, future):
        past, future = tuple(past), tuple(future)
        if past and future and not self.ts.allows(past[-1], future[0]):
            raise ConcatenationError(len(past), (past[-1], future[0]))
        if not future:
            options = self.ts.successors(past[-1]) if past else self.ts.alphabet
            values = [v for c in options for v in self.bounds(past, (c,))]
            return min(values), max(values)
        new_future = (future[0],) + tuple(reversed(past))
        new_past = tuple(reversed(future[1:]))
        return self.base.bounds(new_past, new_future)

    def value(self, seq, n=0):
        return self.base.value(seq.reflected(), len(seq.core) - 1 - n)

    def reflected(self):
        return self.base

    def spec(self):
        return {"name": "reflected", "base": self.base.spec()}


def potential_from_spec(spec: Mapping, ts: TransitionSystem, gm: GeometryModel | None = None) -> Potential:
    name = spec.get("name", "classical_cf")
    if name == "classical_cf":
        return ClassicalCFPotential(ts)
    if name == "affine_coordinate":
        if not isinstance(gm, AffineGeometry):
            raise MalformedInputError("affine_coordinate potential needs an affine geometry")
        return AffineCoordinatePotential(ts, gm)
    if name == "constant":
        return ConstantPotential(ts, float(spec.get("value", 0.0)))
    if name == "window":
        table = {tuple(k): v for k, v in spec["table"]}
        return WindowPotential(ts, int(spec["past_len"]), int(spec["future_len"]), table, float(spec.get("tail_modulus", 0.0)))
    raise MalformedInputError(f"unknown potential {name!r}")


# --------------------------------------------------------------------------
# Markov and Lagrange values


def markov_value(p: PeriodicPoint, pot: Potential) -> float:
    """Supremum of f over the orbit of a periodic point (a maximum over one period)."""
    return float(markov_value_exact(p, pot))


def markov_value_exact(p: PeriodicPoint, pot: Potential):
    seq = BiSequence.from_point(p)
    return max(pot.value(seq, j) for j in range(len(p.period_word)))


def lagrange_value(preperiod: Sequence[int], period: PeriodicPoint, pot: Potential) -> float:
    """Limsup of f along the forward orbit of preperiod . period^inf.

    The limsup of an eventually periodic sequence only sees the period.
    """
    preperiod = tuple(preperiod)
    body = period.rotated()
    if preperiod and not pot.ts.allows(preperiod[-1], body[0]):
        raise ConcatenationError(len(preperiod), (preperiod[-1], body[0]))
    return markov_value(PeriodicPoint(body), pot)


def sequence_markov_value(seq: BiSequence, pot: Potential, reach: int = 64) -> float:
    """Supremum of f over all shifts of an eventually periodic sequence.

    Positions more than `reach` symbols inside a periodic tail agree with a
    periodic point on a window of that radius, so their values are within
    the tail modulus of the tail's periodic maximum.
    """
    tails = [markov_value_exact(PeriodicPoint(seq.left), pot), markov_value_exact(PeriodicPoint(seq.right), pot)]
    lo = -len(seq.left) * (-(-reach // len(seq.left)))
    hi = len(seq.core) + len(seq.right) * (-(-reach // len(seq.right)))
    return float(max(max(tails), max(pot.value(seq, j) for j in range(lo, hi))))


def window_bounds(past: Sequence[int], future: Sequence[int], pot: Potential) -> tuple[float, float]:
    return pot.bounds(tuple(past), tuple(future))



@dataclass(frozen=True)
class SupremumBound:
    """Certified bracket on sup f over a complete shift of words.

    `window` is the (past, future) context of the node holding the upper
    bound when the search stopped.
    """

    upper: float
    lower: float
    window: tuple[Word, Word]
    nodes: int


def sup_over_concatenations(
    words: Sequence[Word],
    pot: Potential,
    starts: Sequence[tuple[int, int]] | None = None,
    tol: float = 1e-10,
    max_nodes: int = 200_000,
) -> SupremumBound:
    """Bound sup f over the positions `starts` of the complete shift on `words`.

    A start ``(i, k)`` stands for offset k inside an occurrence of words[i];
    by default every offset of every word is included.  A node fixes one
    start and finitely many neighbouring words on each side, and its
    enclosure covers every point with that context.  The node with the
    largest upper bound is refined by one more word on the side with less
    context (right on ties) until its upper bound is within `tol` of the best
    lower bound or `max_nodes` enclosures were computed.
    """
    words = tuple(tuple(w) for w in words)
    if not words or any(not w for w in words):
        raise MalformedInputError("words must be a nonempty family of nonempty words")
    if starts is None:
        starts = [(i, k) for i, w in enumerate(words) for k in range(len(w))]
    starts = list(starts)
    if not starts:
        raise MalformedInputError("no starting positions")
    tails = pot.tail_hulls(words)
    heap: list = []
    counter = itertools.count()
    best_lo = -math.inf
    nodes = 0

    def context(wi, offset, left, right):
        w = words[wi]
        past = tuple(itertools.chain.from_iterable(words[i] for i in left)) + w[:offset]
        return past, w[offset:] + tuple(itertools.chain.from_iterable(words[i] for i in right))

    def push(wi, offset, left, right):
        nonlocal best_lo, nodes
        past, future = context(wi, offset, left, right)
        lo, hi = pot.enclose(past, future, tails)
        nodes += 1
        best_lo = max(best_lo, lo)
        heapq.heappush(heap, (-hi, next(counter), wi, offset, left, right, len(past), len(future)))

    for wi, offset in starts:
        push(wi, offset, (), ())
    while -heap[0][0] - best_lo > tol and nodes < max_nodes:
        _, _, wi, offset, left, right, n_past, n_future = heapq.heappop(heap)
        for i in range(len(words)):
            if n_future <= n_past:
                push(wi, offset, left, right + (i,))
            else:
                push(wi, offset, (i,) + left, right)
    top = heap[0]
    return SupremumBound(-top[0], best_lo, context(*top[2:6]), nodes)


# --------------------------------------------------------------------------
# Local monotonicity constants


@dataclass(frozen=True)
class MonotonicityCertificate:
    c6: float
    c7: float
    depth: int
    verdict: str
    counterexample: tuple | None = None
    instances: int = 0


def _periodic_samples(ts: TransitionSystem, max_len: int = 2) -> list[Word]:
    out = []
    for n in range(1, max_len + 1):
        for w in itertools.product(ts.alphabet, repeat=n):
            if is_admissible(w, ts) and ts.allows(w[-1], w[0]):
                out.append(tuple(w))
    return out


def certify_monotonicity(ts: TransitionSystem, gm: GeometryModel, pot: Potential, depth: int, sample_period: int = 2) -> MonotonicityCertificate:
    """Measure the separation constant c6 and Lipschitz constant c7 on sampled instances.

    Each instance fixes a window, two different symbols just beyond it and a
    common periodic context; the exact difference of f is compared with the
    size of the window's cylinder (unstable side for future windows, stable
    side for past windows).
    """
    if depth < 2:
        raise MalformedInputError("depth must be at least 2")
    contexts = _periodic_samples(ts, sample_period)
    c6 = math.inf
    c7 = 0.0
    count = 0
    slack = 0.0 if pot.exact else 2 * getattr(pot, "tail_modulus", 0.0)
    inconclusive = False
    for n in range(1, depth):
        for window in itertools.product(ts.alphabet, repeat=n):
            if not is_admissible(window, ts):
                continue
            u_size = gm.u_size(window)
            s_size = gm.s_size(window)
            for side in ("future", "past"):
                for b, b2 in itertools.combinations(ts.alphabet, 2):
                    for ctx, tail in itertools.product(contexts, contexts):
                        if side == "future":
                            core1, core2 = window + (b,), window + (b2,)
                            if not (ts.allows(window[-1], b) and ts.allows(window[-1], b2)):
                                continue
                            if not (ts.allows(b, tail[0]) and ts.allows(b2, tail[0]) and ts.allows(ctx[-1], window[0])):
                                continue
                            s1, s2 = BiSequence(ctx, core1, tail), BiSequence(ctx, core2, tail)
                            pos, size = 0, u_size
                        else:
                            core1, core2 = (b,) + window, (b2,) + window
                            if not (ts.allows(b, window[0]) and ts.allows(b2, window[0])):
                                continue
                            if not (ts.allows(ctx[-1], b) and ts.allows(ctx[-1], b2) and ts.allows(window[-1], tail[0])):
                                continue
                            s1, s2 = BiSequence(ctx, core1, tail), BiSequence(ctx, core2, tail)
                            pos, size = n + 1, s_size
                        diff = abs(float(pot.value(s1, pos) - pot.value(s2, pos)))
                        count += 1
                        low = (diff - slack) / size
                        high = (diff + slack) / size
                        if diff <= slack:
                            if pot.exact:
                                return MonotonicityCertificate(0.0, c7, depth, "refuted", (s1, s2, pos), count)
                            inconclusive = True
                        c6 = min(c6, low)
                        c7 = max(c7, high)
    if count == 0:
        return MonotonicityCertificate(0.0, 0.0, depth, "inconclusive", None, 0)
    verdict = "inconclusive" if inconclusive else "certified"
    return MonotonicityCertificate(max(c6, 0.0), c7, depth, verdict, None, count)
