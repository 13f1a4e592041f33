"""Extraction of a complete subshift inside a sublevel set, with certified containment.

Pipeline: base alphabet B0 (certified cylinders at scale r0) -> pool of
k-block concatenations meeting the sublevel set -> good positions and
excellent words -> a frame of fixed block pairs shared by many words -> a cut
between two repeated pairs, giving a framed alphabet B -> certification that
every point of the complete shift on B has Markov value at most t - delta.

The search stages are heuristic at desk scale; the certification stage does
not depend on how B was found.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .dimension import DEFAULT_BUDGET, DimensionEstimate, covering_count, estimate_Du, moran_dimension
from .errors import (
    CertificationFailed,
    EnumerationOverflowError,
    ExtractionImpossible,
    MalformedInputError,
    SpectraError,
    StageError,
)
from .geometry import GeometryConstants, GeometryModel, measure_constants
from .potentials import Potential, certify_monotonicity, sup_over_concatenations
from .sublevel import DEFAULT_WITNESS_DEPTH, Verdict, cylinder_meets_sublevel, witness_covers
from .symbolic import TransitionSystem, Word, WordAlphabet, check_complete_subshift

Blocks = tuple[int, ...]  # indices into the base alphabet


@dataclass(frozen=True)
class ExtractionParams:
    """Knobs of the extraction pipeline.

    Unset ``k``, ``L`` and ``spacing`` resolve to the asymptotic formulas
    8 N0^2 ceil(2/tau), 3 N0^2 and 2 ceil(2/tau); these are only feasible for
    tiny N0, so desk runs pass explicit values.
    """

    t: float
    eta: float = 0.2
    tau: float | None = None
    r0: int = 4
    k: int | None = None
    L: int | None = None
    spacing: int | None = None
    budget: int = DEFAULT_BUDGET
    excellent_threshold: float = 0.9
    allow_lower_threshold: bool = False
    pool_cap: int = 200_000
    witness_depth: int = DEFAULT_WITNESS_DEPTH
    du_r_max: int = 16
    exhaustive_frame: bool = False
    certify_tol: float = 1e-10
    certify_nodes: int = 200_000

    def __post_init__(self):
        if not 0 < self.eta < 1:
            raise MalformedInputError("eta must lie in (0, 1)")
        if self.tau is None:
            object.__setattr__(self, "tau", self.eta / 100)
        if not 0 < self.tau < 1:
            raise MalformedInputError("tau must lie in (0, 1)")
        if self.r0 < 1:
            raise MalformedInputError("r0 must be at least 1")
        if self.k is not None and self.k < 2:
            raise MalformedInputError("k must be at least 2")
        if self.L is not None and self.L < 2:
            raise MalformedInputError("L must be at least 2")
        if self.spacing is not None and self.spacing < 1:
            raise MalformedInputError("spacing must be positive")
        if not 0 < self.excellent_threshold <= 1:
            raise MalformedInputError("excellent_threshold must lie in (0, 1]")

    def resolved(self, n0: int) -> tuple[int, int, int, str | None]:
        """(k, L, spacing, note) with unset values replaced by their asymptotic formulas.

        When those formulas do not fit inside k (frame positions live in
        1..k-1), unset L and spacing fall back to the widest two-position
        frame, L = 2 and spacing = k - 2, and `note` says so.
        """
        step = math.ceil(2 / self.tau)
        k = self.k if self.k is not None else 8 * n0 * n0 * step
        L = self.L if self.L is not None else 3 * n0 * n0
        spacing = self.spacing if self.spacing is not None else 2 * step
        note = None
        if (L - 1) * spacing > k - 2 and (self.L is None or self.spacing is None):
            if self.L is None:
                L = 2
            if self.spacing is None:
                spacing = max(1, (k - 2) // (L - 1))
            note = f"asymptotic frame sizes do not fit in k={k}; using L={L}, spacing={spacing}"
        return k, L, spacing, note

# --------------------------------------------------------------------------
# Base alphabet and pool


@dataclass(frozen=True)
class BaseAlphabet:
    words: tuple[Word, ...]
    warnings: tuple[str, ...] = ()

    @property
    def n0(self) -> int:
        return len(self.words)


def base_alphabet(
    params: ExtractionParams,
    ts: TransitionSystem,
    gm: GeometryModel,
    pot: Potential,
    du: DimensionEstimate | None = None,
    workers: int = 1,
) -> BaseAlphabet:
    """Certified-yes words of the covering family at scale r0."""
    t, r0 = params.t, params.r0
    _, _, words = covering_count(t, r0, ts, gm, pot, params.budget, workers, params.witness_depth)
    chosen = tuple(w for w, verdict in words if verdict == Verdict.YES.value)
    if not chosen:
        raise ExtractionImpossible(f"no cylinder at scale {r0} meets the sublevel set at t={t}")
    notes = []
    if du is not None:
        if du.lower <= 0:
            notes.append("lower bracket of the dimension estimate is 0; the dimension target is vacuous")
        else:
            gap = abs(math.log(len(chosen)) / r0 - du.value)
            if gap >= params.tau / 2 * du.value:
                notes.append(
                    f"r0={r0} misses the scale condition: |ln N0/r0 - D| = {gap:.4g} "
                    f">= (tau/2) D = {params.tau / 2 * du.value:.4g}"
                )
    return BaseAlphabet(chosen, tuple(notes))


@dataclass(frozen=True)
class ConcatenationPool:
    """k-block words over B0 meeting the sublevel set: `upper` excludes only refuted words,
    `lower` keeps the certified ones."""

    base: tuple[Word, ...]
    k: int
    upper: tuple[Blocks, ...]
    lower: tuple[Blocks, ...]

    def symbols(self, blocks: Blocks) -> Word:
        return tuple(itertools.chain.from_iterable(self.base[i] for i in blocks))


def _pool_task(args):
    """DFS below the prefix (first,) restricted to second block `second` (None when k == 1)."""
    base, first, second, k, t, ts, pot, budget, witness_depth, cap = args
    upper, lower = [], []
    stack = [((first,), base[first], None)]
    while stack:
        blocks, word, inherited = stack.pop()
        if inherited is not None and witness_covers(inherited, word):
            # the parent's periodic witness still certifies this cylinder
            verdict, witness = Verdict.YES, inherited
        else:
            res = cylinder_meets_sublevel(word, t, budget, pot, witness_depth)
            verdict, witness = res.verdict, res.witness
        if verdict is Verdict.NO:
            continue
        if len(blocks) == k:
            upper.append(blocks)
            if verdict is Verdict.YES:
                lower.append(blocks)
            if len(upper) > cap:
                raise EnumerationOverflowError(f"concatenation pool exceeds {cap} words; use a smaller k or r0")
            continue
        choices = [second] if len(blocks) == 1 else range(len(base))
        for i in reversed(choices):
            nxt = base[i]
            if ts.allows(word[-1], nxt[0]):
                stack.append((blocks + (i,), word + nxt, witness))
    return upper, lower


def build_concatenation_pool(
    base: Sequence[Word],
    k: int,
    t: float,
    ts: TransitionSystem,
    pot: Potential,
    budget: int = DEFAULT_BUDGET,
    witness_depth: int = DEFAULT_WITNESS_DEPTH,
    pool_cap: int = 200_000,
    workers: int = 1,
) -> ConcatenationPool:
    """Depth-first enumeration of k-fold concatenations; refuted prefixes are never extended."""
    base = tuple(tuple(w) for w in base)
    if not base:
        raise MalformedInputError("base alphabet is empty")
    if k < 1:
        raise MalformedInputError("k must be positive")
    seconds = list(range(len(base))) if k > 1 else [None]
    # one task per (first, second) block pair, in lexicographic order
    tasks = [(base, i, j, k, t, ts, pot, budget, witness_depth, pool_cap) for i in range(len(base)) for j in seconds]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_pool_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        parts = [_pool_task(task) for task in tasks]
    upper = [w for part in parts for w in part[0]]
    lower = [w for part in parts for w in part[1]]
    if len(upper) > pool_cap:
        raise EnumerationOverflowError(f"concatenation pool exceeds {pool_cap} words; use a smaller k or r0")
    return ConcatenationPool(base, k, tuple(upper), tuple(lower))


# --------------------------------------------------------------------------
# Good positions


@dataclass(frozen=True)
class GoodPositionReport:
    """Good positions of a k-block word, 1-indexed."""

    word: Blocks
    right_good: frozenset[int]
    left_good: frozenset[int]

    @property
    def good(self) -> frozenset[int]:
        return self.right_good & self.left_good


class FlankIndex:
    """For each position j, the j-th blocks seen after each prefix and before each suffix."""

    def __init__(self, pool: Sequence[Blocks], base: Sequence[Word], gm: GeometryModel):
        self.base = tuple(tuple(w) for w in base)
        self.gm = gm
        self.after_prefix: dict[Blocks, set[int]] = defaultdict(set)
        self.before_suffix: dict[Blocks, set[int]] = defaultdict(set)
        for blocks in pool:
            for j in range(len(blocks)):
                self.after_prefix[blocks[:j]].add(blocks[j])
                self.before_suffix[blocks[j + 1:]].add(blocks[j])
        self._u = [gm.u_interval(w) for w in self.base]
        self._s = [gm.s_interval(w) for w in self.base]
        self._good_after: dict[Blocks, frozenset[int]] = {}
        self._good_before: dict[Blocks, frozenset[int]] = {}

    @staticmethod
    def _flanked_members(members, intervals) -> frozenset[int]:
        """Members with another member strictly to the left and one strictly to the right."""
        out = set()
        for me in members:
            lo, hi = intervals[me]
            left = right = False
            for o in members:
                olo, ohi = intervals[o]
                if (olo, ohi) == (lo, hi):
                    continue
                if ohi <= lo:
                    left = True
                elif hi <= olo:
                    right = True
            if left and right:
                out.add(me)
        return frozenset(out)

    def report(self, blocks: Blocks) -> GoodPositionReport:
        right, left = set(), set()
        for j, b in enumerate(blocks):
            key = blocks[:j]
            good = self._good_after.get(key)
            if good is None:
                good = self._good_after[key] = self._flanked_members(self.after_prefix.get(key, ()), self._u)
            if b in good:
                right.add(j + 1)
            key = blocks[j + 1:]
            good = self._good_before.get(key)
            if good is None:
                good = self._good_before[key] = self._flanked_members(self.before_suffix.get(key, ()), self._s)
            if b in good:
                left.add(j + 1)
        return GoodPositionReport(blocks, frozenset(right), frozenset(left))


def good_positions(blocks: Blocks, pool: Sequence[Blocks], base: Sequence[Word], gm: GeometryModel) -> GoodPositionReport:
    """Right-good: flanked in unstable order by pool words sharing the blocks before it.
    Left-good: flanked in stable order by pool words sharing the blocks after it."""
    return FlankIndex(pool, base, gm).report(tuple(blocks))


def filter_excellent(reports: Sequence[GoodPositionReport], k: int, threshold: float = 0.9) -> tuple[list[GoodPositionReport], float]:
    """Reports with at least threshold * k good positions, and their share of the pool."""
    need = threshold * k
    chosen = [rep for rep in reports if len(rep.good) >= need - 1e-12]
    share = len(chosen) / len(reports) if reports else 0.0
    return chosen, share


# --------------------------------------------------------------------------
# Frames and cuts


@dataclass(frozen=True)
class Frame:
    """Positions j_1 < ... < j_L (1-indexed) with the block pair fixed at (j_m, j_m + 1)."""

    positions: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]
    members: tuple[Blocks, ...]


def _satisfies(rep: GoodPositionReport, j: int, pair) -> bool:
    w = rep.word
    return j in rep.good and j + 1 in rep.good and w[j - 1] == pair[0] and w[j] == pair[1]


def find_frame(excellent: Sequence[GoodPositionReport], L: int, spacing: int, k: int, exhaustive: bool = False, exhaustive_cap: int = 200_000) -> Frame:
    """Choose L spaced positions with fixed block pairs shared by as many excellent words as possible.

    The greedy search first picks the block pair and two spaced positions
    shared by the most words (a cut needs one pair at two positions), then
    adds the remaining positions one at a time by the same count, preferring
    pairs already in the frame.  Ties go to smaller positions, then to
    smaller pairs.  `exhaustive` maximises the final count instead.
    """
    if not excellent:
        raise MalformedInputError("no excellent words to frame")
    if L < 1 or spacing < 1:
        raise MalformedInputError("need L >= 1 and spacing >= 1")
    if exhaustive:
        return _exhaustive_frame(excellent, L, spacing, k, exhaustive_cap)
    members = list(excellent)
    chosen: list[tuple[int, tuple[int, int]]] = []
    if L >= 2:
        counts: Counter = Counter()
        for rep in members:
            slots = [j for j in range(1, k) if j in rep.good and j + 1 in rep.good]
            for a, b in itertools.combinations(slots, 2):
                pair = (rep.word[a - 1], rep.word[a])
                if b - a >= spacing and (rep.word[b - 1], rep.word[b]) == pair:
                    counts[(a, b, pair)] += 1
        if counts:
            (a, b, pair), _ = min(counts.items(), key=lambda item: (-item[1], item[0]))
            chosen = [(a, pair), (b, pair)]
            members = [rep for rep in members if _satisfies(rep, a, pair) and _satisfies(rep, b, pair)]
    while len(chosen) < L:
        counts = Counter()
        for rep in members:
            for j in range(1, k):
                if all(abs(j - c) >= spacing for c, _ in chosen) and j in rep.good and j + 1 in rep.good:
                    counts[(j, (rep.word[j - 1], rep.word[j]))] += 1
        if not counts:
            raise SpectraError(
                f"no frame: placed {len(chosen)} of {L} positions (k={k}, spacing={spacing}, "
                f"{len(members)} words left)"
            )
        repeats = {key: n for key, n in counts.items() if key[1] in {p for _, p in chosen}}
        (j, pair), _ = min((repeats or counts).items(), key=lambda item: (-item[1], item[0]))
        chosen.append((j, pair))
        members = [rep for rep in members if _satisfies(rep, j, pair)]
    chosen.sort()
    return Frame(tuple(j for j, _ in chosen), tuple(p for _, p in chosen), tuple(rep.word for rep in members))


def _exhaustive_frame(excellent, L, spacing, k, cap):
    best = None
    explored = 0
    position_sets = [c for c in itertools.combinations(range(1, k), L) if all(b - a >= spacing for a, b in zip(c, c[1:]))]
    for positions in position_sets:
        groups: Counter = Counter()
        for rep in excellent:
            if all(j in rep.good and j + 1 in rep.good for j in positions):
                groups[tuple((rep.word[j - 1], rep.word[j]) for j in positions)] += 1
        for pairs, count in groups.items():
            explored += 1
            if explored > cap:
                raise EnumerationOverflowError(f"exhaustive frame search exceeds {cap} candidates")
            key = (-count, positions, pairs)
            if best is None or key < best:
                best = key
    if best is None:
        raise SpectraError(f"no frame with {L} positions at spacing {spacing} inside k={k}")
    _, positions, pairs = best
    members = [
        rep.word for rep in excellent if all(_satisfies(rep, j, p) for j, p in zip(positions, pairs))
    ]
    return Frame(positions, pairs, tuple(members))


@dataclass(frozen=True)
class Cut:
    p0: int
    q0: int
    words: tuple[Blocks, ...]
    density: float


def cut_candidates(frame: Frame) -> list[Cut]:
    """All cuts between two frame positions carrying the same block pair, best density first.

    The cut keeps blocks j_p + 1 .. j_q (1-indexed); ties go to the smaller p0.
    """
    out = []
    for p, q in itertools.combinations(range(len(frame.positions)), 2):
        if frame.pairs[p] != frame.pairs[q]:
            continue
        jp, jq = frame.positions[p], frame.positions[q]
        words = tuple(sorted({w[jp:jq] for w in frame.members}))
        out.append(Cut(p + 1, q + 1, words, math.log(len(words)) / (jq - jp)))
    out.sort(key=lambda c: (-c.density, c.p0, c.q0))
    return out


def cut_frame(frame: Frame) -> Cut:
    cuts = cut_candidates(frame)
    if not cuts:
        raise SpectraError("no two frame positions share a block pair; try a larger L")
    return cuts[0]


# --------------------------------------------------------------------------
# Certification


@dataclass(frozen=True)
class Containment:
    """Certified bound sup f <= t - delta over the complete shift on B."""

    delta: float
    sup_upper: float
    sup_lower: float
    window: tuple[Word, Word]
    nodes: int


def certify_containment(
    B: WordAlphabet,
    t: float,
    pot: Potential,
    tol: float = 1e-10,
    max_nodes: int = 200_000,
) -> Containment:
    """Certify sup f < t over the complete shift on B; delta = t - (certified sup).

    The supremum is bracketed by best-first context refinement over
    neighbouring words of B (see `sup_over_concatenations`).
    """
    if not B.words:
        raise MalformedInputError("empty alphabet")
    sb = sup_over_concatenations(B.words, pot, tol=tol, max_nodes=max_nodes)
    sup_upper, window = sb.upper, sb.window
    delta = t - sup_upper
    if delta <= 0:
        raise CertificationFailed(
            f"f may reach {sup_upper:.12g} > t = {t} on the complete shift", window=window, bound=sup_upper
        )
    return Containment(delta, sup_upper, sb.lower, window, sb.nodes)


def delta_components(B: WordAlphabet, gm: GeometryModel, c6: float) -> dict[str, float | None]:
    """The four margin formulas of the containment argument, from a measured c6.

    Informational: the certified delta is authoritative.
    """
    g1 = B.gamma1 or ()
    g2 = B.gamma2 or ()
    d1, d2, d3, d4 = [], [], [], []
    for w in B.words:
        body = w[len(g1): len(w) - len(g2)] if len(w) >= len(g1) + len(g2) else ()
        for j in range(1, len(body)):
            d1.append(gm.u_size(body[j - 1:] + g2))
            d2.append(gm.s_size(g1 + body[: j - 1]))
    for ell in range(1, len(g1)):
        d3.append(gm.s_size(g2 + g1[:ell]))
    for i in range(1, len(g2)):
        d4.append(gm.u_size(g2[i:] + g1))
    half = c6 / 2
    return {
        name: (half * min(vals) if vals else None)
        for name, vals in (("delta1", d1), ("delta2", d2), ("delta3", d3), ("delta4", d4))
    }


# --------------------------------------------------------------------------
# Pipeline


@dataclass(frozen=True)
class ExtractionResult:
    B: WordAlphabet
    blocks: tuple[Blocks, ...]
    base: tuple[Word, ...]
    frame_positions: tuple[int, ...]
    frame_pairs: tuple[tuple[int, int], ...]
    p0: int | None
    q0: int | None
    delta: float
    sup_upper: float
    delta_components: dict
    moran: DimensionEstimate
    du: DimensionEstimate
    achieved_eta: float
    stats: dict = field(default_factory=dict)
    warnings: tuple[str, ...] = ()

    @property
    def dim_lower(self) -> float:
        return self.moran.lower

    def to_json(self) -> dict:
        return {
            "words": [[list(self.base[i]) for i in blocks] for blocks in self.blocks],
            "gamma1": list(self.B.gamma1) if self.B.gamma1 is not None else None,
            "gamma2": list(self.B.gamma2) if self.B.gamma2 is not None else None,
            "frame": {
                "positions": list(self.frame_positions),
                "pairs": [[list(self.base[a]), list(self.base[b])] for a, b in self.frame_pairs],
            },
            "p0": self.p0,
            "q0": self.q0,
            "delta": {"certified_lower": self.delta},
            "sup_f": {"certified_upper": self.sup_upper},
            "delta_components": {k: ({"estimate": v} if v is not None else None) for k, v in self.delta_components.items()},
            "dimension": {
                "certified_lower": self.moran.lower,
                "estimate": self.moran.value,
                "certified_upper": self.moran.upper,
            },
            "du": self.du.to_json(),
            "achieved_eta": {"estimate": self.achieved_eta},
            "stats": self.stats,
            "warnings": list(self.warnings),
        }


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ExtractionImpossible:
        raise
    except SpectraError as exc:
        raise StageError(name, exc) from exc


def extract(
    params: ExtractionParams,
    ts: TransitionSystem,
    gm: GeometryModel,
    pot: Potential,
    workers: int = 1,
    constants: GeometryConstants | None = None,
    c6: float | None = None,
    du: DimensionEstimate | None = None,
) -> ExtractionResult:
    """Run the full pipeline; stage failures are raised as StageError naming the stage.

    `du` may carry a precomputed estimate of the target dimension at ``params.t``.
    """
    t = params.t
    if constants is None:
        constants = measure_constants(ts, gm, 8)
    if du is None:
        du = _stage("estimate", estimate_Du, t, 1, params.du_r_max, ts, gm, pot, params.budget, workers, constants)
    base = _stage("base_alphabet", base_alphabet, params, ts, gm, pot, du, workers)
    warnings = list(base.warnings)
    stats: dict = {"n0": base.n0}

    if base.n0 == 1:
        # only one cylinder survives: the complete shift is a single periodic orbit
        word = base.words[0]
        B = check_complete_subshift([word], ts)
        B = WordAlphabet(B.words, ts, "framed", word, word)
        cert = _stage("certify", certify_containment, B, t, pot, params.certify_tol, params.certify_nodes)
        moran = moran_dimension(B, gm, c1=constants.c1)
        comps = delta_components(B, gm, c6) if c6 is not None else {}
        return ExtractionResult(
            B, ((0,),), base.words, (), (), None, None, cert.delta, cert.sup_upper, comps, moran, du,
            _achieved_eta(moran, du), {**stats, "certify_nodes": cert.nodes}, tuple(warnings),
        )

    k, L, spacing, note = params.resolved(base.n0)
    if note:
        warnings.append(note)
    stats.update(k=k, L=L, spacing=spacing)
    pool = _stage(
        "pool", build_concatenation_pool, base.words, k, t, ts, pot, params.budget,
        params.witness_depth, params.pool_cap, workers,
    )
    stats.update(pool_upper=len(pool.upper), pool_lower=len(pool.lower))
    if not pool.lower:
        raise StageError("pool", SpectraError("no certified k-block concatenation"))
    # Both the words and their flanks come from the certified pool, so the
    # whole pipeline is independent of the refutation budget.
    index = FlankIndex(pool.lower, base.words, gm)
    reports = [index.report(w) for w in pool.lower]
    threshold = params.excellent_threshold
    excellent, share = filter_excellent(reports, k, threshold)
    while not excellent and params.allow_lower_threshold and threshold * k > 1:
        threshold = max(1 / k, threshold - 0.1)
        excellent, share = filter_excellent(reports, k, threshold)
        warnings.append(f"lowered excellence threshold to {threshold:.2f} (non-default mode)")
    stats.update(excellent=len(excellent), excellent_share=share, excellent_threshold=threshold)
    if not excellent:
        raise StageError(
            "excellent",
            SpectraError(f"no word has {threshold:.2f}*k good positions; allow_lower_threshold relaxes this"),
        )
    frame = _stage("frame", find_frame, excellent, L, spacing, k, params.exhaustive_frame)
    stats["frame_members"] = len(frame.members)
    cuts = cut_candidates(frame)
    if not cuts:
        raise StageError("cut", SpectraError("no two frame positions share a block pair; try a larger L"))

    failure = None
    for cut in cuts:
        gamma2, gamma1 = frame.pairs[cut.p0 - 1]
        symbol_words = {pool.symbols(b): [base.words[i] for i in b] for b in cut.words}
        try:
            B = check_complete_subshift(symbol_words, ts, symbol_words)
        except SpectraError as exc:
            failure = exc
            continue
        if B.kind != "framed":
            B = WordAlphabet(B.words, ts, "framed", base.words[gamma1], base.words[gamma2])
        try:
            cert = certify_containment(B, t, pot, params.certify_tol, params.certify_nodes)
        except CertificationFailed as exc:
            failure = exc
            continue
        moran = moran_dimension(B, gm, c1=constants.c1)
        comps = delta_components(B, gm, c6) if c6 is not None else {}
        stats.update(cuts_tried=cuts.index(cut) + 1, certify_nodes=cert.nodes)
        order = {pool.symbols(b): b for b in cut.words}
        return ExtractionResult(
            B, tuple(order[w] for w in B.words), base.words, frame.positions, frame.pairs, cut.p0, cut.q0,
            cert.delta, cert.sup_upper, comps, moran, du, _achieved_eta(moran, du), stats, tuple(warnings),
        )
    raise StageError("certify", failure)


def _achieved_eta(moran: DimensionEstimate, du: DimensionEstimate) -> float:
    if du.upper <= 0:
        return 0.0
    return 1.0 - moran.lower / du.upper


def measured_c6(ts: TransitionSystem, gm: GeometryModel, pot: Potential, depth: int = 5) -> float:
    return certify_monotonicity(ts, gm, pot, depth).c6
