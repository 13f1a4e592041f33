"""Covering counts, the submultiplicative dimension estimator, Moran and box-counting dimensions."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import bisect

from .errors import EnumerationOverflowError, MalformedInputError
from .geometry import GeometryModel, measure_constants
from .potentials import Potential
from .sublevel import (
    DEFAULT_WITNESS_DEPTH,
    Verdict,
    find_witness,
    is_dead,
    refute,
)
from .symbolic import DEFAULT_DEPTH_CAP, TransitionSystem, Word, WordAlphabet, enumerate_words

DEFAULT_BUDGET = 64


@dataclass(frozen=True)
class CoveringRow:
    lower: int
    upper: int
    words: tuple[tuple[Word, str], ...] | None = None


@dataclass(frozen=True)
class CoveringTable:
    """Bracketed covering counts N(t, r) for r = 0..r_max."""

    t: float
    budget: int
    rows: dict[int, CoveringRow] = field(default_factory=dict)

    @property
    def r_max(self) -> int:
        return max(self.rows)

    def lower(self, r: int) -> int:
        return self.rows[r].lower

    def upper(self, r: int) -> int:
        return self.rows[r].upper

    def to_json(self) -> dict:
        return {
            "t": _num(self.t),
            "budget": self.budget,
            "rows": {
                str(r): {
                    "lower": row.lower,
                    "upper": row.upper,
                    "words": None if row.words is None else [[list(w), v] for w, v in row.words],
                }
                for r, row in sorted(self.rows.items())
            },
        }

    @classmethod
    def from_json(cls, data: dict) -> "CoveringTable":
        rows = {}
        for r, row in data["rows"].items():
            words = row["words"]
            if words is not None:
                words = tuple((tuple(w), v) for w, v in words)
            rows[int(r)] = CoveringRow(int(row["lower"]), int(row["upper"]), words)
        return cls(_unnum(data["t"]), int(data["budget"]), rows)


def _num(x: float):
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


def _unnum(x) -> float:
    return float(x)


class _CoveringSearch:
    """Depth-first enumeration of the partitions P_r, r <= r_max, with membership verdicts.

    A node is a word; it belongs to P_r for every r in (scale(parent), scale(word)].
    Nodes whose certified lower bounds already exceed t are pruned with their
    subtree, and so are nodes refuted by the full search.
    """

    def __init__(self, t, r_max, ts, gm, pot, budget, witness_depth, keep_words, depth_cap=DEFAULT_DEPTH_CAP):
        self.t = t
        self.r_max = r_max
        self.ts = ts
        self.gm = gm
        self.pot = pot
        self.budget = budget
        self.witness_depth = witness_depth
        self.keep_words = frozenset(keep_words)
        self.depth_cap = depth_cap
        self.unbounded = math.isinf(t) and t > 0

    def _empty(self):
        n = self.r_max + 1
        return [0] * n, [0] * n, {r: [] for r in self.keep_words}

    def _verdict(self, word, witness):
        """Full verdict for a counted node; `witness` is an inherited candidate or None."""
        if self.unbounded:
            return Verdict.YES, None
        if witness is not None and all(witness.symbol(i) == a for i, a in enumerate(word)):
            return Verdict.YES, witness
        found = find_witness(word, self.t, self.pot, self.witness_depth)
        if found is not None:
            return Verdict.YES, found
        proved, _ = refute(word, self.t, self.pot, self.budget)
        return (Verdict.NO if proved else Verdict.UNKNOWN), None

    def explore(self, word, state, parent_scale, witness, out):
        lower, upper, words = out
        gm, ts = self.gm, self.ts
        stack = [(word, state, parent_scale, witness)]
        while stack:
            word, state, parent_scale, witness = stack.pop()
            if not self.unbounded and is_dead(word, self.t, self.pot):
                continue
            scale = math.floor(gm.log_inv_size(state))
            lo_r = parent_scale + 1
            hi_r = min(scale, self.r_max)
            if lo_r <= hi_r:
                verdict, witness = self._verdict(word, witness)
                if verdict is Verdict.NO:
                    continue
                yes = verdict is Verdict.YES
                for r in range(lo_r, hi_r + 1):
                    upper[r] += 1
                    if yes:
                        lower[r] += 1
                    if r in words:
                        words[r].append((word, verdict.value))
            if scale >= self.r_max:
                continue
            if len(word) >= self.depth_cap:
                raise EnumerationOverflowError(f"depth cap {self.depth_cap} reached")
            for b in reversed(ts.successors(word[-1])):
                stack.append((word + (b,), gm.step(state, b), scale, witness))
        return out

    def run_task(self, task):
        out = self._empty()
        word, state, parent_scale, witness = task
        return self.explore(word, state, parent_scale, witness, out)

    def split(self, min_tasks):
        """Top part of the tree as (task list, partial counts of nodes above the split)."""
        out = self._empty()
        frontier = [((a,), self.gm.step(self.gm.root(), a), -1, None) for a in self.ts.alphabet]
        while 0 < len(frontier) < min_tasks:
            nxt = []
            for node in frontier:
                # count this node here; its children become the new frontier
                nxt.extend(self._node_only(*node, out))
            if not nxt:
                frontier = []
                break
            frontier = nxt
        return frontier, out

    def _node_only(self, word, state, parent_scale, witness, out):
        lower, upper, words = out
        if not self.unbounded and is_dead(word, self.t, self.pot):
            return []
        scale = math.floor(self.gm.log_inv_size(state))
        lo_r, hi_r = parent_scale + 1, min(scale, self.r_max)
        if lo_r <= hi_r:
            verdict, witness = self._verdict(word, witness)
            if verdict is Verdict.NO:
                return []
            for r in range(lo_r, hi_r + 1):
                upper[r] += 1
                if verdict is Verdict.YES:
                    lower[r] += 1
                if r in words:
                    words[r].append((word, verdict.value))
        if scale >= self.r_max:
            return []
        return [(word + (b,), self.gm.step(state, b), scale, witness) for b in self.ts.successors(word[-1])]


def _merge(acc, part):
    lower, upper, words = acc
    plo, pup, pwords = part
    for r in range(len(lower)):
        lower[r] += plo[r]
        upper[r] += pup[r]
    for r in words:
        words[r].extend(pwords[r])


def _run_task(args):
    search, task = args
    return search.run_task(task)


def covering_table(
    t: float,
    r_max: int,
    ts: TransitionSystem,
    gm: GeometryModel,
    pot: Potential,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    keep_words: Iterable[int] = (),
    witness_depth: int = DEFAULT_WITNESS_DEPTH,
) -> CoveringTable:
    """Bracketed counts of the covering families for every scale r <= r_max.

    Word lists are kept for the scales listed in `keep_words`.  With several
    workers the tree is split into disjoint prefix subtrees whose results are
    merged in prefix order, so the table does not depend on `workers`.
    """
    if r_max < 0:
        raise MalformedInputError("r_max must be nonnegative")
    search = _CoveringSearch(t, r_max, ts, gm, pot, budget, witness_depth, keep_words)
    if workers <= 1:
        out = search._empty()
        for a in ts.alphabet:
            search.explore((a,), gm.step(gm.root(), a), -1, None, out)
    else:
        tasks, out = search.split(4 * workers)
        # tasks are in lexicographic order; results are merged in that order
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_run_task, [(search, task) for task in tasks]):
                _merge(out, part)
        for r in out[2]:
            out[2][r].sort()
    lower, upper, words = out
    rows = {}
    for r in range(r_max + 1):
        kept = tuple(sorted(words[r])) if r in words else None
        rows[r] = CoveringRow(lower[r], upper[r], kept)
    return CoveringTable(t, budget, rows)


def covering_count(
    t: float,
    r: int,
    ts: TransitionSystem,
    gm: GeometryModel,
    pot: Potential,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    witness_depth: int = DEFAULT_WITNESS_DEPTH,
) -> tuple[int, int, tuple[tuple[Word, str], ...]]:
    """(lower, upper, words-with-verdicts) for the covering family at scale `r`."""
    table = covering_table(t, r, ts, gm, pot, budget, workers, keep_words=(r,), witness_depth=witness_depth)
    row = table.rows[r]
    return row.lower, row.upper, row.words


def stable_covering_table(t, r_max, ts, gm, pot, budget=DEFAULT_BUDGET, workers=1, witness_depth=DEFAULT_WITNESS_DEPTH) -> CoveringTable:
    """Stable-side counts: the same machinery on the transposed system with the reflected potential."""
    return covering_table(t, r_max, ts.transpose(), gm, pot.reflected(), budget, workers, (), witness_depth)


# --------------------------------------------------------------------------
# Estimators


@dataclass(frozen=True)
class DimensionEstimate:
    value: float
    lower: float
    upper: float
    r_used: tuple[int, int] | None
    method: str
    exact: bool = False

    def to_json(self) -> dict:
        return {
            "estimate": self.value,
            "certified_lower": self.lower,
            "certified_upper": self.upper,
            "r_used": list(self.r_used) if self.r_used else None,
            "method": self.method,
            "exact": self.exact,
        }


def check_submultiplicative(t, n, m, ts, gm, pot, budget=DEFAULT_BUDGET, constants=None, table=None) -> tuple[bool, float]:
    """Check N(t, n+m) <= #A^c3 N(t, n) N(t, m) on upper counts; return (holds, slack).

    Slack is log(RHS) - log(LHS); zero counts follow log 0 = -inf, so an empty
    left side gives +inf slack.
    """
    if n < 1 or m < 1:
        raise MalformedInputError("n and m must be positive")
    if constants is None:
        constants = measure_constants(ts, gm, 8)
    if table is None or table.r_max < n + m:
        table = covering_table(t, n + m, ts, gm, pot, budget)
    lhs = table.upper(n + m)
    rhs_factor = table.upper(n) * table.upper(m)
    log_pad = constants.c3 * math.log(len(ts.alphabet))
    if lhs == 0:
        return True, math.inf
    if rhs_factor == 0:
        return False, -math.inf
    slack = log_pad + math.log(rhs_factor) - math.log(lhs)
    return slack >= -1e-12, slack


def estimate_from_table(table: CoveringTable, r_min: int, r_max: int, n_symbols: int, constants) -> DimensionEstimate:
    upper_counts = [table.upper(r) for r in range(r_min, r_max + 1)]
    if all(c == 0 for c in upper_counts):
        return DimensionEstimate(0.0, 0.0, 0.0, (r_min, r_max), "fekete", exact=True)
    top = table.upper(r_max)
    value = math.log(top) / r_max if top > 0 else 0.0
    pad = constants.c3 * math.log(n_symbols)
    upper = min(
        (pad + math.log(c)) / r if c > 0 else 0.0
        for r, c in zip(range(r_min, r_max + 1), upper_counts)
    )
    low_count = table.lower(r_max)
    lower = (math.log(low_count) - constants.c1) / r_max if low_count > 0 else 0.0
    upper = min(upper, 1.0)
    lower = max(0.0, min(lower, upper))
    value = min(max(value, lower), upper)
    return DimensionEstimate(value, lower, upper, (r_min, r_max), "fekete")


def estimate_Du(
    t: float,
    r_min: int,
    r_max: int,
    ts: TransitionSystem,
    gm: GeometryModel,
    pot: Potential,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    constants=None,
) -> DimensionEstimate:
    """Bracketed estimate of the box dimension of the unstable sublevel Cantor set."""
    if not 1 <= r_min <= r_max:
        raise MalformedInputError("need 1 <= r_min <= r_max")
    if constants is None:
        constants = measure_constants(ts, gm, 8)
    table = covering_table(t, r_max, ts, gm, pot, budget, workers)
    return estimate_from_table(table, r_min, r_max, len(ts.alphabet), constants)


def _moran_root(sizes: Sequence[float]) -> float:
    def pressure(d):
        return sum(s ** d for s in sizes) - 1.0

    # sum > 1 at d = 0 (two or more words) and < 1 at d = 1 (disjoint cylinders)
    hi = 1.0
    while pressure(hi) > 0:
        hi *= 2
    return bisect(pressure, 0.0, hi, xtol=1e-12, rtol=4 * np.finfo(float).eps, maxiter=500)


def moran_dimension(B: WordAlphabet | Sequence[Word], gm: GeometryModel, depth: int = 1, c1: float | None = None, ts: TransitionSystem | None = None) -> DimensionEstimate:
    """Root of sum size(beta)^d = 1 over the words of B (or of B^depth).

    The bracket uses the crude bound log #B / -log(size) evaluated at the
    smallest and largest sizes, moved outward by the distortion constant c1.
    """
    words = tuple(B.words) if isinstance(B, WordAlphabet) else tuple(tuple(w) for w in B)
    if not words:
        raise MalformedInputError("alphabet must be nonempty")
    if depth < 1:
        raise MalformedInputError("depth must be positive")
    if len(words) == 1:
        return DimensionEstimate(0.0, 0.0, 0.0, None, "moran", exact=True)
    if c1 is None:
        system = ts if ts is not None else (B.ts if isinstance(B, WordAlphabet) else None)
        c1 = measure_constants(system, gm, 8).c1 if system is not None else 0.0
    log_sizes = [math.log(gm.u_size(w)) for w in words]
    # sizes of depth-fold concatenations: products of word sizes (exact for
    # the model when computed on the concatenated word)
    if depth > 1:
        concat_words = [()]
        for _ in range(depth):
            concat_words = [c + w for c in concat_words for w in words]
        sizes = [gm.u_size(w) for w in concat_words]
        count = len(concat_words)
    else:
        sizes = [math.exp(x) for x in log_sizes]
        count = len(words)
    value = _moran_root(sizes)
    log_count = math.log(count)
    lower = log_count / (c1 - math.log(min(sizes)))
    denom = -math.log(max(sizes)) - c1
    upper = log_count / denom if denom > 0 else 1.0
    upper = min(upper, 1.0)
    lower = min(lower, value)
    upper = max(upper, value)
    return DimensionEstimate(value, lower, upper, None, "moran", exact=False)


def box_dimension_oracle(intervals: Sequence[tuple], levels: int | None = None) -> float:
    """Least-squares slope of log N(eps) against log(1/eps) over a dyadic ladder.

    The intervals are first rescaled so their hull is [0, 1].  N(eps) counts
    the grid boxes of side eps meeting some interval, and the ladder runs from
    eps = 1/2 down to the largest rescaled interval length.  Counting is done
    in exact rational arithmetic, so deep cylinders that collapse in float64
    (long words have sizes far below 1e-16) are still told apart.
    """
    iv = sorted((min(a, b), max(a, b)) for a, b in ((Fraction(a), Fraction(b)) for a, b in intervals))
    if len(iv) < 2:
        raise MalformedInputError("need at least two intervals")
    left = min(a for a, _ in iv)
    spread = max(b for _, b in iv) - left
    if spread <= 0:
        return 0.0
    # points (zero-width intervals) stop the ladder at a fixed relative depth
    finest = max(b - a for a, b in iv) / spread or Fraction(1, 10**15)
    ks = []
    k = 1
    while Fraction(1, 2**k) >= finest:
        ks.append(k)
        k += 1
    if levels is not None:
        ks = ks[-levels:]
    if len(ks) < 2:
        return 0.0
    offsets = [((a - left) / spread, (b - left) / spread) for a, b in iv]
    counts = []
    for k in ks:
        scale = 2**k
        total, cur_lo, cur_hi = 0, None, None
        # intervals are sorted by left end, so box ranges arrive in order
        for a, b in offsets:
            lo, hi = math.floor(a * scale), math.floor(b * scale)
            if cur_hi is None or lo > cur_hi:
                if cur_hi is not None:
                    total += cur_hi - cur_lo + 1
                cur_lo, cur_hi = lo, hi
            else:
                cur_hi = max(cur_hi, hi)
        total += cur_hi - cur_lo + 1
        counts.append(total)
    x = np.array(ks, dtype=float) * math.log(2)
    y = np.log(np.array(counts, dtype=float))
    slope = np.polyfit(x, y, 1)[0]
    return float(max(slope, 0.0))


def cylinder_intervals(words: Iterable[Word], gm: GeometryModel) -> list[tuple[Fraction, Fraction]]:
    """Exact unstable cylinder intervals, ready for `box_dimension_oracle`."""
    return [gm.u_interval(w) for w in words]


def concatenation_intervals(B: Sequence[Word], gm: GeometryModel, depth: int) -> list[tuple[Fraction, Fraction]]:
    """Cylinders of all depth-fold concatenations of words from B."""
    words = [()]
    for _ in range(depth):
        words = [c + w for c in words for w in B]
    return cylinder_intervals(words, gm)


def full_shift_intervals(ts: TransitionSystem, gm: GeometryModel, depth: int) -> list[tuple[Fraction, Fraction]]:
    words = enumerate_words(ts, keep=lambda w: True, stop=lambda w: len(w) >= depth)
    return cylinder_intervals(words, gm)
