"""Property checks of every module, run on a configured model (the verify-invariants command).

Each check samples its inputs from a seeded generator, so a report is a pure
function of the configuration.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

from .dimension import (
    check_submultiplicative,
    covering_table,
    estimate_from_table,
    moran_dimension,
    stable_covering_table,
)
from .errors import IncompleteSubshiftError, InconclusiveError, SpectraError
from .geometry import GeometryModel, measure_constants
from .potentials import BiSequence, Potential, markov_value_exact, sup_over_concatenations
from .realizer import find_maximizers, realize, sample_x_words
from .sublevel import Verdict, cylinder_meets_sublevel, periodic_words, witness_covers
from .symbolic import PeriodicPoint, TransitionSystem, Word, check_complete_subshift, concat, is_admissible, transpose

SYMMETRIC_POTENTIALS = ("classical_cf", "affine_coordinate")


@dataclass(frozen=True)
class CheckResult:
    module: str
    name: str
    status: str  # "pass", "fail" or "skip"
    detail: str = ""

    def to_json(self) -> dict:
        return {"module": self.module, "name": self.name, "status": self.status, "detail": self.detail}


def _random_word(rng: random.Random, ts: TransitionSystem, n: int) -> Word:
    w = [rng.choice(ts.alphabet)]
    while len(w) < n:
        w.append(rng.choice(ts.successors(w[-1])))
    return tuple(w)


def _random_period(rng: random.Random, ts: TransitionSystem, max_len: int) -> Word:
    closed = periodic_words(ts, max_len)
    return rng.choice(closed)


class _Suite:
    def __init__(self):
        self.results: list[CheckResult] = []

    def run(self, module: str, name: str, fn):
        try:
            outcome = fn()
        except SpectraError as exc:
            self.results.append(CheckResult(module, name, "fail", f"{type(exc).__name__}: {exc}"))
            return
        if outcome is None:
            outcome = (True, "")
        ok, detail = outcome
        status = "skip" if ok is None else ("pass" if ok else "fail")
        self.results.append(CheckResult(module, name, status, detail))


def run_invariants(
    ts: TransitionSystem,
    gm: GeometryModel,
    pot: Potential,
    depth: int = 8,
    r_max: int = 8,
    samples: int = 25,
    t_values=(2.5, 3.1, math.inf),
    seed: int = 0,
    budget: int = 64,
    witness_depth: int = 4,
    workers: int = 1,
) -> list[CheckResult]:
    rng = random.Random(seed)
    suite = _Suite()
    t_values = sorted(t_values)

    # symbolic_core
    def transpose_involution():
        tts = ts.transpose()
        for _ in range(samples):
            w = _random_word(rng, ts, rng.randint(1, depth))
            if transpose(transpose(w)) != w or not is_admissible(transpose(w), tts):
                return False, f"word {w}"
        return True, f"{samples} words"

    def concat_associative():
        for _ in range(samples):
            a = _random_word(rng, ts, rng.randint(1, 4))
            b = _random_word(rng, ts, rng.randint(1, 4))
            c = _random_word(rng, ts, rng.randint(1, 4))
            if not (ts.allows(a[-1], b[0]) and ts.allows(b[-1], c[0])):
                continue
            if concat([concat([a, b], ts), c], ts) != concat([a, concat([b, c], ts)], ts):
                return False, f"words {a} {b} {c}"
        return True, ""

    suite.run("symbolic_core", "transpose_involution", transpose_involution)
    suite.run("symbolic_core", "concat_associative", concat_associative)

    # cylinder_geometry
    def cylinder_nesting():
        checked = 0
        for _ in range(samples):
            w = _random_word(rng, ts, rng.randint(1, depth - 1))
            lo, hi = gm.u_interval(w)
            kids = sorted(gm.u_interval(w + (b,)) for b in ts.successors(w[-1]))
            for (a_lo, a_hi), (b_lo, b_hi) in zip(kids, kids[1:]):
                if a_hi > b_lo:
                    return False, f"children of {w} overlap"
            if kids[0][0] < lo or kids[-1][1] > hi:
                return False, f"children of {w} leave the parent"
            checked += 1
        return True, f"{checked} parents"

    def stable_symmetry():
        for _ in range(samples):
            w = _random_word(rng, ts, rng.randint(1, depth))
            if gm.s_interval(w) != gm.u_interval(transpose(w)):
                return False, f"word {w}"
        return True, ""

    constants = measure_constants(ts, gm, depth)

    def distortion_bound():
        worst = 0.0
        for _ in range(samples):
            n = rng.randint(2, depth)
            w = _random_word(rng, ts, n)
            i = rng.randint(1, n - 1)
            gap = abs(math.log(gm.u_size(w)) - math.log(gm.u_size(w[:i])) - math.log(gm.u_size(w[i:])))
            worst = max(worst, gap)
        return worst <= constants.c1 + 1e-12, f"worst {worst:.3g} vs c1 {constants.c1:.3g}"

    suite.run("cylinder_geometry", "cylinder_nesting", cylinder_nesting)
    suite.run("cylinder_geometry", "stable_symmetry", stable_symmetry)
    suite.run("cylinder_geometry", "distortion_bound", distortion_bound)

    # potential_engine
    def enclosure_contains_exact():
        for _ in range(samples):
            p = _random_period(rng, ts, 4)
            seq = BiSequence.periodic(p)
            j = rng.randrange(len(p))
            exact = float(pot.value(seq, j))
            a, b = rng.randint(0, depth), rng.randint(1, depth)
            lo, hi = pot.bounds(seq.window(j - a, j), seq.window(j, j + b))
            if not lo <= exact <= hi:
                return False, f"period {p} phase {j}: {exact} not in [{lo}, {hi}]"
        return True, ""

    def phase_values_match():
        worst = 0.0
        for _ in range(samples):
            p = _random_period(rng, ts, 5)
            seq = BiSequence.periodic(p)
            for j, v in enumerate(pot.phase_values(p)):
                worst = max(worst, abs(v - float(pot.value(seq, j))))
        return worst <= 1e-12 * (1 + worst), f"max deviation {worst:.3g}"

    def reflection():
        # f(R theta) = f(theta) for potentials symmetric under time reversal
        if pot.name not in SYMMETRIC_POTENTIALS:
            return None, f"potential {pot.name} has no reflection symmetry"
        ref = pot.reflected()
        for _ in range(samples):
            p = _random_period(rng, ts, 4)
            seq = BiSequence.periodic(p)
            j = rng.randrange(len(p))
            if abs(float(pot.value(seq, j)) - float(ref.value(seq, j))) > 1e-12:
                return False, f"period {p} phase {j}"
        return True, ""

    suite.run("potential_engine", "enclosure_contains_exact", enclosure_contains_exact)
    suite.run("potential_engine", "phase_values_match_exact", phase_values_match)
    suite.run("potential_engine", "reflection_consistent", reflection)

    # dimension_estimators (sublevel verdicts live underneath)
    finite_ts = [t for t in t_values if math.isfinite(t)]

    def verdict_monotone():
        if len(finite_ts) < 2:
            return None, "needs two finite t values"
        for _ in range(samples):
            w = _random_word(rng, ts, rng.randint(1, 5))
            verdicts = [cylinder_meets_sublevel(w, t, budget, pot, witness_depth).verdict for t in finite_ts]
            for a, b in zip(verdicts, verdicts[1:]):
                if (a is Verdict.YES and b is not Verdict.YES) or (b is Verdict.NO and a is not Verdict.NO):
                    return False, f"word {w}: {[v.value for v in verdicts]}"
        return True, ""

    def witnesses_valid():
        for _ in range(samples):
            w = _random_word(rng, ts, rng.randint(1, 5))
            t = rng.choice(t_values)
            res = cylinder_meets_sublevel(w, t, budget, pot, witness_depth)
            if res.verdict is Verdict.YES and res.witness is not None:
                if not witness_covers(res.witness, w) or float(markov_value_exact(res.witness, pot)) > t:
                    return False, f"word {w} at t={t}"
        return True, ""

    suite.run("dimension_estimators", "verdict_monotone_in_t", verdict_monotone)
    suite.run("dimension_estimators", "witnesses_valid", witnesses_valid)

    tables = {t: covering_table(t, r_max, ts, gm, pot, budget, workers, witness_depth=witness_depth) for t in t_values}

    def brackets_ordered():
        for t, table in tables.items():
            for r in range(r_max + 1):
                if table.lower(r) > table.upper(r):
                    return False, f"t={t} r={r}"
        for (t1, a), (t2, b) in zip(tables.items(), list(tables.items())[1:]):
            for r in range(r_max + 1):
                if a.lower(r) > b.lower(r) or a.upper(r) > b.upper(r):
                    return False, f"counts decrease from t={t1} to t={t2} at r={r}"
        return True, ""

    def estimate_ordered():
        for t, table in tables.items():
            est = estimate_from_table(table, 1, r_max, len(ts.alphabet), constants)
            if not est.lower <= est.value <= est.upper:
                return False, f"t={t}: {est}"
        return True, ""

    def stable_equals_unstable():
        if pot.name not in SYMMETRIC_POTENTIALS:
            return None, f"potential {pot.name} has no reflection symmetry"
        for t in t_values:
            s = stable_covering_table(t, r_max, ts, gm, pot, budget, workers, witness_depth)
            u = tables[t]
            for r in range(r_max + 1):
                if (s.lower(r), s.upper(r)) != (u.lower(r), u.upper(r)):
                    return False, f"t={t} r={r}"
        return True, ""

    def submultiplicative():
        worst = math.inf
        for t, table in tables.items():
            for n in range(1, r_max):
                for m in range(1, r_max - n + 1):
                    holds, slack = check_submultiplicative(t, n, m, ts, gm, pot, budget, constants, table)
                    if not holds:
                        return False, f"t={t} n={n} m={m} slack {slack:.3g}"
                    worst = min(worst, slack)
        return True, f"min slack {worst:.3g}"

    suite.run("dimension_estimators", "covering_brackets_ordered", brackets_ordered)
    suite.run("dimension_estimators", "estimate_bracket_ordered", estimate_ordered)
    suite.run("dimension_estimators", "stable_equals_unstable", stable_equals_unstable)
    suite.run("dimension_estimators", "submultiplicative", submultiplicative)

    try:
        letters = check_complete_subshift([(a,) for a in ts.alphabet], ts)
    except IncompleteSubshiftError:
        letters = None

    def moran_bracket():
        if letters is None or len(letters.words) < 2:
            return None, "the letters do not form a complete subshift with two words"
        est = moran_dimension(letters, gm, depth=min(depth, 8), c1=constants.c1)
        return est.lower <= est.value <= est.upper, f"{est.value:.6f} in [{est.lower:.6f}, {est.upper:.6f}]"

    suite.run("dimension_estimators", "moran_bracket_ordered", moran_bracket)

    # subshift_extraction
    def supremum_bracket_sound():
        words = tuple({_random_word(rng, ts, rng.randint(1, 3)) for _ in range(3)})
        try:
            B = check_complete_subshift(words, ts)
        except IncompleteSubshiftError:
            if letters is None:
                return None, "no complete alphabet found"
            B = letters
        sb = sup_over_concatenations(B.words, pot, tol=1e-9, max_nodes=20_000)
        for _ in range(samples):
            blocks = [rng.choice(B.words) for _ in range(rng.randint(1, 3))]
            v = float(markov_value_exact(_point(blocks), pot))
            if v > sb.upper:
                return False, f"periodic value {v} above certified sup {sb.upper}"
        return sb.lower <= sb.upper, f"sup in [{sb.lower:.12g}, {sb.upper:.12g}]"

    suite.run("subshift_extraction", "supremum_bracket_sound", supremum_bracket_sound)

    # lagrange_realizer
    def realization_identity():
        if letters is None or len(letters.words) < 2:
            return None, "the letters do not form a complete subshift with two words"
        ms = None
        for m in (1, 2, 3):
            try:
                ms = find_maximizers(letters, m, pot)
                break
            except InconclusiveError:
                continue
        if ms is None:
            return None, "no certified maximizer gap for m <= 3"
        n_star = len(ms.B_star)
        available = sum(n_star ** n for n in range(1, 5))
        xs = sample_x_words(n_star, min(samples, 10, available), seed, 4)
        for x in xs:
            spec = realize(x, ms, pot, depth=6)
            bounds = [realize(x, ms, pot, depth=d, tol=1.0).error_bound for d in (2, 4, 6)]
            if any(b2 > b1 for b1, b2 in zip(bounds, bounds[1:])):
                return False, f"error bound grows with depth for x={x}: {bounds}"
            if spec.error > spec.error_bound:
                return False, f"error {spec.error} above bound {spec.error_bound}"
        return True, f"m={ms.m}, gap {ms.eta_gap:.3g}, {len(xs)} words"

    suite.run("lagrange_realizer", "realization_identity", realization_identity)
    return suite.results


def _point(blocks) -> PeriodicPoint:
    return PeriodicPoint(tuple(itertools.chain.from_iterable(blocks)))
