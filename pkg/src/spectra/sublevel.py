"""Three-valued test of whether a cylinder meets the sublevel set {m <= t}.

A verdict of YES comes with a periodic witness whose Markov value is at
most t.  A verdict of NO comes from a finite refutation tree: every two-sided
extension of the word, explored to some depth, contains a position whose
certified lower bound of f exceeds t.  Anything else is UNKNOWN.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .potentials import ENCLOSURE_PAD, Potential, markov_value_exact
from .symbolic import PeriodicPoint, Word

# Float Markov values closer than this to t are re-evaluated exactly.
DECISION_MARGIN = 1e-9

DEFAULT_WITNESS_DEPTH = 4


class Verdict(enum.Enum):
    YES = "yes_certified"
    NO = "no_certified"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Membership:
    verdict: Verdict
    witness: PeriodicPoint | None = None
    expansions: int = 0


def periodic_at_most(word: Word, t: float, pot: Potential) -> bool:
    """Decide m(word^inf) <= t, falling back to exact arithmetic near the threshold."""
    if math.isinf(t) and t > 0:
        return True
    best = max(pot.phase_values(word))
    if best < t - DECISION_MARGIN:
        return True
    if best > t + DECISION_MARGIN:
        return False
    return float(markov_value_exact(PeriodicPoint(word), pot)) <= t


def is_dead(word: Sequence[int], t: float, pot: Potential) -> bool:
    """True when some position of `word` has a certified lower bound of f above t."""
    lows, _ = pot.position_bounds(word)
    limit = t + ENCLOSURE_PAD
    return any(lo > limit for lo in lows)


def closure_candidates(alpha: Word, pot: Potential, extra: int):
    """Periodic words whose orbit has a point with future starting with `alpha`.

    Covers every period of length at most len(alpha) + extra: short periods
    of alpha itself first, then alpha followed by connectors of growing length.
    """
    ts = pot.ts
    n = len(alpha)
    for p in range(1, n):
        if all(alpha[i] == alpha[i - p] for i in range(p, n)) and ts.allows(alpha[p - 1], alpha[0]):
            yield alpha[:p]
    first = alpha[0]
    frontier: list[Word] = [()]
    for length in range(extra + 1):
        nxt = []
        for gamma in frontier:
            last = gamma[-1] if gamma else alpha[-1]
            if ts.allows(last, first):
                yield alpha + gamma
            if length < extra:
                for b in ts.successors(last):
                    nxt.append(gamma + (b,))
        frontier = nxt


def find_witness(alpha: Word, t: float, pot: Potential, extra: int = DEFAULT_WITNESS_DEPTH) -> PeriodicPoint | None:
    for period in closure_candidates(alpha, pot, extra):
        if periodic_at_most(period, t, pot):
            return PeriodicPoint(period)
    return None


def refute(alpha: Word, t: float, pot: Potential, budget: int) -> tuple[bool, int]:
    """Try to show that no point of the sublevel set has future starting with `alpha`.

    Depth-first over two-sided extensions ``L + alpha + R``, always extending
    the shorter side (right on ties).  The shape of the tree does not depend
    on t, which makes the verdict monotone in t.  Returns (proved, expansions).
    """
    ts = pot.ts
    expansions = 0

    def search(word: Word, left: int, right: int) -> bool:
        nonlocal expansions
        if is_dead(word, t, pot):
            return True
        if expansions >= budget:
            return False
        expansions += 1
        if right <= left:
            children = [(word + (b,), left, right + 1) for b in ts.successors(word[-1])]
        else:
            children = [((a,) + word, left + 1, right) for a in ts.predecessors(word[0])]
        return all(search(*child) for child in children)

    return search(tuple(alpha), 0, 0), expansions


def cylinder_meets_sublevel(
    alpha: Sequence[int],
    t: float,
    budget: int,
    pot: Potential,
    witness_depth: int = DEFAULT_WITNESS_DEPTH,
) -> Membership:
    """Three-valued membership of the cylinder of `alpha` in the sublevel set at `t`."""
    alpha = tuple(alpha)
    if math.isinf(t) and t > 0:
        return Membership(Verdict.YES, find_witness(alpha, t, pot, witness_depth))
    if is_dead(alpha, t, pot):
        return Membership(Verdict.NO)
    witness = find_witness(alpha, t, pot, witness_depth)
    if witness is not None:
        return Membership(Verdict.YES, witness)
    proved, used = refute(alpha, t, pot, budget)
    if proved:
        return Membership(Verdict.NO, None, used)
    return Membership(Verdict.UNKNOWN, None, used)


def witness_covers(witness: PeriodicPoint, alpha: Sequence[int]) -> bool:
    """True when the periodic orbit has a point whose future starts with `alpha`."""
    return all(witness.symbol(i) == a for i, a in enumerate(alpha))


def periodic_words(ts, max_len: int) -> list[Word]:
    """All cyclically admissible words of length up to `max_len` (not reduced by rotation)."""
    out = []
    for n in range(1, max_len + 1):
        for w in itertools.product(ts.alphabet, repeat=n):
            if all(ts.allows(w[i], w[(i + 1) % n]) for i in range(n)):
                out.append(w)
    return out
