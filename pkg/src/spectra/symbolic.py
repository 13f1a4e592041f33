"""Alphabets, transition tables and words of a subshift of finite type.

Words are plain tuples of integer symbols.  A `TransitionSystem` fixes the
alphabet order (used for deterministic enumeration) and the allowed pairs.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import (
    ConcatenationError,
    EnumerationOverflowError,
    IncompleteSubshiftError,
    MalformedInputError,
)

Word = tuple[int, ...]

DEFAULT_DEPTH_CAP = 64


@dataclass(frozen=True)
class TransitionSystem:
    """Alphabet plus the set of allowed ordered pairs."""

    alphabet: tuple[int, ...]
    transitions: frozenset[tuple[int, int]]
    _succ: dict = field(init=False, repr=False, compare=False)
    _pred: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        alphabet = tuple(int(a) for a in self.alphabet)
        if not alphabet:
            raise MalformedInputError("alphabet is empty")
        if len(set(alphabet)) != len(alphabet):
            raise MalformedInputError("alphabet has repeated symbols")
        pairs = frozenset((int(a), int(b)) for a, b in self.transitions)
        known = set(alphabet)
        for a, b in pairs:
            if a not in known or b not in known:
                raise MalformedInputError(f"transition ({a}, {b}) uses a symbol outside the alphabet")
        succ = {a: tuple(b for b in alphabet if (a, b) in pairs) for a in alphabet}
        pred = {b: tuple(a for a in alphabet if (a, b) in pairs) for b in alphabet}
        dead = [a for a in alphabet if not succ[a] or not pred[a]]
        if dead:
            raise MalformedInputError(f"dead symbols (missing successor or predecessor): {dead}")
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "transitions", pairs)
        object.__setattr__(self, "_succ", succ)
        object.__setattr__(self, "_pred", pred)

    @classmethod
    def full_shift(cls, n: int) -> "TransitionSystem":
        """Full shift on the symbols 1..n."""
        symbols = tuple(range(1, n + 1))
        return cls(symbols, frozenset((a, b) for a in symbols for b in symbols))

    @classmethod
    def from_json(cls, data: Mapping) -> "TransitionSystem":
        try:
            return cls(tuple(data["alphabet"]), frozenset(tuple(p) for p in data["transitions"]))
        except (KeyError, TypeError) as exc:
            raise MalformedInputError(f"bad transition system: {exc}") from exc

    def to_json(self) -> dict:
        order = {a: i for i, a in enumerate(self.alphabet)}
        pairs = sorted(self.transitions, key=lambda p: (order[p[0]], order[p[1]]))
        return {"alphabet": list(self.alphabet), "transitions": [list(p) for p in pairs]}

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def allows(self, a: int, b: int) -> bool:
        return (a, b) in self.transitions

    def successors(self, a: int) -> tuple[int, ...]:
        return self._succ[a]

    def predecessors(self, b: int) -> tuple[int, ...]:
        return self._pred[b]

    def transpose(self) -> "TransitionSystem":
        """System with every transition reversed (the inverse dynamics)."""
        return TransitionSystem(self.alphabet, frozenset((b, a) for a, b in self.transitions))

    def __reduce__(self):
        return (TransitionSystem, (self.alphabet, self.transitions))


def _check_symbols(word: Sequence[int], ts: TransitionSystem) -> None:
    for a in word:
        if a not in ts._succ:
            raise MalformedInputError(f"unknown symbol {a!r}")


def is_admissible(word: Sequence[int], ts: TransitionSystem) -> bool:
    """True iff every consecutive pair of `word` is an allowed transition."""
    _check_symbols(word, ts)
    if len(word) == 0:
        raise MalformedInputError("words must be nonempty")
    pairs = ts.transitions
    return all((word[i], word[i + 1]) in pairs for i in range(len(word) - 1))


def transpose(word: Sequence[int]) -> Word:
    return tuple(reversed(word))


def concat(words: Sequence[Sequence[int]], ts: TransitionSystem) -> Word:
    """Juxtapose `words`, checking each junction."""
    if not words:
        raise MalformedInputError("nothing to concatenate")
    out: list[int] = []
    for index, w in enumerate(words):
        _check_symbols(w, ts)
        if out and w and not ts.allows(out[-1], w[0]):
            raise ConcatenationError(index, (out[-1], w[0]))
        out.extend(w)
    return tuple(out)


@dataclass(frozen=True)
class WordAlphabet:
    """A finite set of words generating a complete subshift.

    ``kind`` is ``"free"`` or ``"framed"``; framed alphabets record the common
    first block ``gamma1`` and last block ``gamma2``.
    """

    words: tuple[Word, ...]
    ts: TransitionSystem
    kind: str = "free"
    gamma1: Word | None = None
    gamma2: Word | None = None

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self) -> Iterator[Word]:
        return iter(self.words)

    def transpose(self) -> "WordAlphabet":
        """Alphabet of transposed words on the transposed system."""
        words = tuple(sorted(transpose(w) for w in self.words))
        g1 = transpose(self.gamma2) if self.gamma2 is not None else None
        g2 = transpose(self.gamma1) if self.gamma1 is not None else None
        return WordAlphabet(words, self.ts.transpose(), self.kind, g1, g2)


def check_complete_subshift(
    B: Iterable[Sequence[int]],
    ts: TransitionSystem,
    blocks: Mapping[Word, Sequence[Sequence[int]]] | None = None,
) -> WordAlphabet:
    """Validate that every ordered concatenation of words in `B` is admissible.

    `blocks` optionally maps each word to its decomposition into blocks; when
    all words share a first and a last block the result is marked framed.
    """
    words = tuple(sorted({tuple(w) for w in B}))
    if not words:
        raise MalformedInputError("alphabet must be nonempty")
    for w in words:
        if not is_admissible(w, ts):
            raise IncompleteSubshiftError(w, ())
    for w in words:
        for v in words:
            if not ts.allows(w[-1], v[0]):
                raise IncompleteSubshiftError(w, v)
    if blocks:
        heads = {tuple(blocks[w][0]) for w in words}
        tails = {tuple(blocks[w][-1]) for w in words}
        if len(heads) == 1 and len(tails) == 1:
            return WordAlphabet(words, ts, "framed", heads.pop(), tails.pop())
    return WordAlphabet(words, ts, "free")


@dataclass(frozen=True)
class PeriodicPoint:
    """The periodic sequence ``period_word`` repeated forever, read from ``phase``."""

    period_word: Word
    phase: int = 0

    def __post_init__(self):
        w = tuple(int(a) for a in self.period_word)
        if not w:
            raise MalformedInputError("period word must be nonempty")
        if not 0 <= self.phase < len(w):
            raise MalformedInputError(f"phase {self.phase} outside [0, {len(w)})")
        object.__setattr__(self, "period_word", w)

    def validate(self, ts: TransitionSystem) -> "PeriodicPoint":
        w = self.period_word
        if not is_admissible(w, ts) or not ts.allows(w[-1], w[0]):
            raise MalformedInputError(f"period {w} does not close up admissibly")
        return self

    def rotated(self) -> Word:
        """Period word read starting at the phase."""
        w = self.period_word
        return w[self.phase:] + w[: self.phase]

    def symbol(self, n: int) -> int:
        w = self.period_word
        return w[(self.phase + n) % len(w)]


def minimal_period(word: Sequence[int]) -> Word:
    """Shortest word whose repetition equals the periodic extension of `word`."""
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and all(word[i] == word[i % p] for i in range(n)):
            return tuple(word[:p])
    return tuple(word)


def enumerate_words(
    ts: TransitionSystem,
    keep: Callable[[Word], bool],
    stop: Callable[[Word], bool],
    prefixes: Iterable[Sequence[int]] | None = None,
    prune: Callable[[Word], bool] | None = None,
    depth_cap: int = DEFAULT_DEPTH_CAP,
) -> Iterator[Word]:
    """Depth-first, lexicographic stream of admissible words.

    A word is emitted when `stop` holds for it and `keep` accepts it; words for
    which `stop` is false are extended by one symbol.  `prune` (optional) cuts
    a whole subtree.  `prefixes` restricts the search to given starting words,
    which is how parallel workers receive disjoint parts of the tree.
    """
    if prefixes is None:
        roots = [(a,) for a in ts.alphabet]
    else:
        roots = [tuple(p) for p in prefixes]
        for p in roots:
            if not is_admissible(p, ts):
                raise MalformedInputError(f"prefix {p} is not admissible")
    succ = ts._succ
    stack = list(reversed(roots))
    while stack:
        w = stack.pop()
        if prune is not None and prune(w):
            continue
        if stop(w):
            if keep(w):
                yield w
            continue
        if len(w) >= depth_cap:
            raise EnumerationOverflowError(f"depth cap {depth_cap} reached at {w[:8]}...")
        for b in reversed(succ[w[-1]]):
            stack.append(w + (b,))


def words_of_length(ts: TransitionSystem, n: int) -> list[Word]:
    return list(enumerate_words(ts, keep=lambda w: True, stop=lambda w: len(w) >= n))


def periodic_words_canonical(ts: TransitionSystem, max_len: int) -> list[Word]:
    """One word per primitive periodic orbit of period <= max_len: its least rotation.

    Ordered by length, then lexicographically.
    """
    out = []
    for n in range(1, max_len + 1):
        for w in words_of_length(ts, n):
            if not ts.allows(w[-1], w[0]) or minimal_period(w) != w:
                continue
            if w == min(w[i:] + w[:i] for i in range(n)):
                out.append(w)
    return out
