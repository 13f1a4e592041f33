"""Cylinder sizes, scales and distortion constants.

Two models are provided: `ContinuedFractionGeometry` (Gauss-map cylinders,
sizes from continuants) and `AffineGeometry` (exact self-similar sizes, used
as a zero-distortion oracle).  Stable sizes follow the symmetric convention
``s_size(word) == u_size(reversed(word))``.
"""
from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import EnumerationOverflowError, MalformedInputError
from .symbolic import TransitionSystem, Word, enumerate_words, transpose


class GeometryModel(ABC):
    """Sizes and interval order of unstable (and, by symmetry, stable) cylinders."""

    name = "abstract"

    @abstractmethod
    def u_interval(self, word: Sequence[int]) -> tuple[Fraction, Fraction]:
        """Exact closed interval of the unstable cylinder of `word`."""

    def u_size_exact(self, word: Sequence[int]) -> Fraction:
        lo, hi = self.u_interval(word)
        return hi - lo

    def u_size(self, word: Sequence[int]) -> float:
        return float(self.u_size_exact(word))

    def s_interval(self, word: Sequence[int]) -> tuple[Fraction, Fraction]:
        return self.u_interval(transpose(word))

    def s_size(self, word: Sequence[int]) -> float:
        return self.u_size(transpose(word))

    def u_scale(self, word: Sequence[int]) -> int:
        return math.floor(self.log_inv_size(self.state_of(word)))

    def s_scale(self, word: Sequence[int]) -> int:
        return self.u_scale(transpose(word))

    # Incremental interface used by the enumerators: a state summarises a
    # word so that extending it by one symbol is O(1).
    @abstractmethod
    def root(self):
        """State of the empty word."""

    @abstractmethod
    def step(self, state, symbol: int):
        """State after appending `symbol`."""

    @abstractmethod
    def log_inv_size(self, state) -> float:
        """Natural log of 1/size for the word summarised by `state`."""

    def state_of(self, word: Sequence[int]):
        state = self.root()
        for a in word:
            state = self.step(state, a)
        return state

    def strictly_left(self, a: Sequence[int], b: Sequence[int], side: str = "u") -> bool:
        """True when the cylinders of `a` and `b` have disjoint interiors with `a` to the left.

        Sibling cylinders share endpoints, so touching intervals count as ordered.
        """
        interval = self.u_interval if side == "u" else self.s_interval
        a_lo, a_hi = interval(a)
        b_lo, b_hi = interval(b)
        return a_hi <= b_lo and (a_lo, a_hi) != (b_lo, b_hi)

    def spec(self) -> dict:
        return {"name": self.name}


def _continuants(word: Sequence[int]) -> tuple[int, int, int, int]:
    """Return (p_n, q_n, p_{n-1}, q_{n-1}) for [0; a_1, ..., a_n]."""
    p_prev, q_prev = 1, 0
    p, q = 0, 1
    for a in word:
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
    return p, q, p_prev, q_prev


@lru_cache(maxsize=1 << 16)
def _cf_interval(word: tuple[int, ...]) -> tuple[Fraction, Fraction]:
    p, q, pp, qp = _continuants(word)
    a = Fraction(p, q)
    b = Fraction(p + pp, q + qp)
    return (a, b) if a <= b else (b, a)


class ContinuedFractionGeometry(GeometryModel):
    """Cylinders {x in (0,1): a_1(x)=a_1, ..., a_n(x)=a_n} of the Gauss map."""

    name = "continued_fraction"

    def u_interval(self, word):
        return _cf_interval(tuple(word))

    def u_size_exact(self, word):
        _, q, _, qp = _continuants(word)
        return Fraction(1, q * (q + qp))

    def u_size(self, word):
        _, q, _, qp = _continuants(word)
        return 1.0 / (q * (q + qp))

    def root(self):
        return (0, 1)

    def step(self, state, symbol):
        q_prev, q = state
        return (q, symbol * q + q_prev)

    def log_inv_size(self, state):
        q_prev, q = state
        return math.log(q * (q + q_prev))

    def __eq__(self, other):
        return isinstance(other, ContinuedFractionGeometry)

    def __hash__(self):
        return hash(self.name)


class AffineGeometry(GeometryModel):
    """Self-similar cylinders: symbol `a` maps [0,1] onto [offset_a, offset_a + ratio_a]."""

    name = "affine"

    def __init__(self, ratios: Mapping[int, Fraction | float | str], offsets: Mapping[int, Fraction] | None = None):
        symbols = sorted(ratios)
        self.ratios = {a: Fraction(ratios[a]) for a in symbols}
        if any(not 0 < r < 1 for r in self.ratios.values()):
            raise MalformedInputError("affine ratios must lie in (0, 1)")
        total = sum(self.ratios.values())
        if total > 1:
            raise MalformedInputError("affine ratios overlap (sum exceeds 1)")
        if offsets is None:
            gap = (1 - total) / (len(symbols) - 1) if len(symbols) > 1 else Fraction(0)
            offsets, x = {}, Fraction(0)
            for a in symbols:
                offsets[a] = x
                x += self.ratios[a] + gap
        self.offsets = {a: Fraction(offsets[a]) for a in symbols}

    @classmethod
    def uniform(cls, symbols: Iterable[int], ratio) -> "AffineGeometry":
        return cls({a: Fraction(ratio) for a in symbols})

    def u_interval(self, word):
        lo, scale = Fraction(0), Fraction(1)
        for a in word:
            lo += scale * self.offsets[a]
            scale *= self.ratios[a]
        return lo, lo + scale

    def u_size_exact(self, word):
        size = Fraction(1)
        for a in word:
            size *= self.ratios[a]
        return size

    def root(self):
        return 0.0

    def step(self, state, symbol):
        return state - math.log(self.ratios[symbol])

    def log_inv_size(self, state):
        return state

    def spec(self):
        return {
            "name": self.name,
            "ratios": {str(a): str(r) for a, r in self.ratios.items()},
            "offsets": {str(a): str(o) for a, o in self.offsets.items()},
        }

    def __eq__(self, other):
        return isinstance(other, AffineGeometry) and self.ratios == other.ratios and self.offsets == other.offsets

    def __hash__(self):
        return hash((self.name, tuple(self.ratios.items())))


def partition_at_scale(r: int, ts: TransitionSystem, gm: GeometryModel, depth_cap: int = 64) -> list[Word]:
    """Minimal words whose unstable scale first reaches `r`, in lexicographic order."""
    if r < 0:
        raise MalformedInputError("scale must be nonnegative")
    return [w for w, _ in _partition_with_states(r, ts, gm, depth_cap)]


def _partition_with_states(r, ts, gm, depth_cap=64):
    out = []
    stack = [((a,), gm.step(gm.root(), a)) for a in reversed(ts.alphabet)]
    while stack:
        w, state = stack.pop()
        if math.floor(gm.log_inv_size(state)) >= r:
            out.append((w, state))
            continue
        if len(w) >= depth_cap:
            raise EnumerationOverflowError(f"depth cap {depth_cap} reached")
        for b in reversed(ts.successors(w[-1])):
            stack.append((w + (b,), gm.step(state, b)))
    return out


@dataclass(frozen=True)
class GeometryConstants:
    """Measured distortion constants.

    c1 bounds |log(size(ab) / (size(a) size(b)))|, c2 compares unstable and
    stable sizes, c3 is the padding length of the submultiplicativity bound and
    mu is the minimal one-step contraction (inverted).
    """

    c1: float
    c2: float
    c3: int
    mu: float
    depth: int
    max_symbol_size: float

    def to_json(self) -> dict:
        return {
            "c1": self.c1,
            "c2": self.c2,
            "c3": self.c3,
            "mu": self.mu,
            "depth": self.depth,
            "max_symbol_size": self.max_symbol_size,
        }


def measure_constants(ts: TransitionSystem, gm: GeometryModel, depth: int) -> GeometryConstants:
    """Scan all admissible words up to `depth` for the distortion constants."""
    if depth < 2:
        raise MalformedInputError("depth must be at least 2")
    words = list(enumerate_words(ts, keep=lambda w: True, stop=lambda w: len(w) >= depth))
    seen: set[Word] = set()
    log_size: dict[Word, float] = {}

    def ls(w):
        v = log_size.get(w)
        if v is None:
            v = log_size[w] = math.log(gm.u_size(w))
        return v

    c1 = 0.0
    worst_ratio = 0.0
    c2 = 0.0
    for full in words:
        for n in range(1, depth + 1):
            w = full[:n]
            if w in seen:
                continue
            seen.add(w)
            lw = ls(w)
            for i in range(1, n):
                c1 = max(c1, abs(lw - ls(w[:i]) - ls(w[i:])))
            if n >= 2:
                worst_ratio = max(worst_ratio, math.exp(lw - ls(w[:-1])))
            c2 = max(c2, abs(lw - math.log(gm.s_size(transpose(w)))))
    # float noise on exactly multiplicative models
    if c1 < 1e-12:
        c1 = 0.0
    if c2 < 1e-12:
        c2 = 0.0
    mu = 1.0 / worst_ratio
    max_symbol = max(gm.u_size((a,)) for a in ts.alphabet)
    c3 = math.ceil(math.log(math.exp(2 * c1) * max_symbol) / math.log(mu) - 1e-12)
    return GeometryConstants(c1=c1, c2=c2, c3=max(0, c3), mu=mu, depth=depth, max_symbol_size=max_symbol)


def geometry_from_spec(spec: Mapping) -> GeometryModel:
    name = spec.get("name", "continued_fraction")
    if name in ("continued_fraction", "cf"):
        return ContinuedFractionGeometry()
    if name == "affine":
        ratios = {int(a): Fraction(r) for a, r in spec["ratios"].items()}
        offsets = spec.get("offsets")
        if offsets is not None:
            offsets = {int(a): Fraction(o) for a, o in offsets.items()}
        return AffineGeometry(ratios, offsets)
    raise MalformedInputError(f"unknown geometry {name!r}")
