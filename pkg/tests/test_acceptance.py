"""Acceptance suite: one test per criterion, summarized as PASS/FAIL lines.

Run with `pytest tests/test_acceptance.py`; the summary at the end of the
session prints one line per criterion with its runtime and the measured
numbers.  `python3 tests/test_acceptance.py` does the same.
"""

import itertools
import math
import random
import time

import pytest

from spectra.cli import RunConfig, run
from spectra.dimension import (
    box_dimension_oracle,
    check_submultiplicative,
    concatenation_intervals,
    covering_table,
    estimate_Du,
    estimate_from_table,
    full_shift_intervals,
    moran_dimension,
    stable_covering_table,
)
from spectra.geometry import measure_constants
from spectra.potentials import ENCLOSURE_PAD, markov_value
from spectra.realizer import find_maximizers, lagrange_samples, realize, sample_x_words
from spectra.symbolic import PeriodicPoint, check_complete_subshift

LITERATURE_E2 = 0.5313
ESTIMATOR_TOL = 0.05


@pytest.fixture
def within(record_property):
    """Fail the criterion if it overruns its wall-clock allowance."""
    start = time.perf_counter()
    limits = []
    yield limits.append
    elapsed = time.perf_counter() - start
    record_property("seconds", round(elapsed, 2))
    for limit in limits:
        assert elapsed < limit, f"took {elapsed:.1f} s, allowance {limit} s"


@pytest.mark.criterion(1, "exact anchors")
def test_exact_anchors(pot, within, record_property):
    within(1)
    expected = {(1,): math.sqrt(5), (2,): 2 * math.sqrt(2), (2, 2, 1, 1): math.sqrt(221) / 5}
    worst = 0.0
    for period, value in expected.items():
        worst = max(worst, abs(markov_value(PeriodicPoint(period), pot) - value))
    record_property("max_error", worst)
    assert worst < 1e-12


@pytest.mark.criterion(2, "empty sublevel below root five")
def test_empty_sublevel(ts2, cf, pot, within):
    within(10)
    table = covering_table(2.2, 20, ts2, cf, pot)
    assert all((table.lower(r), table.upper(r)) == (0, 0) for r in range(1, 21))
    est = estimate_Du(2.2, 1, 20, ts2, cf, pot)
    assert (est.value, est.lower, est.upper) == (0.0, 0.0, 0.0)


@pytest.mark.criterion(3, "discreteness below three")
def test_discreteness(ts2, cf, pot, within, record_property):
    within(60)
    k = measure_constants(ts2, cf, 8)
    table = covering_table(2.5, 20, ts2, cf, pot)
    uppers = [estimate_from_table(table, 1, r, 2, k).upper for r in (8, 12, 16, 20)]
    record_property("uppers_r8_12_16_20", [round(u, 4) for u in uppers])
    assert all(b <= a for a, b in zip(uppers, uppers[1:])) and uppers[0] > uppers[-1]
    assert uppers[-1] <= ESTIMATOR_TOL


@pytest.mark.criterion(4, "essential submultiplicativity")
def test_submultiplicativity(ts2, cf, pot, within, record_property):
    within(300)
    k = measure_constants(ts2, cf, 8)
    record_property("c3", k.c3)
    worst = math.inf
    for t in (2.5, 3.1, 3.5, math.inf):
        table = covering_table(t, 14, ts2, cf, pot)
        for n in range(1, 14):
            for m in range(1, 15 - n):
                holds, slack = check_submultiplicative(t, n, m, ts2, cf, pot, constants=k, table=table)
                assert holds, (t, n, m, slack)
                worst = min(worst, slack)
    record_property("min_log_slack", round(worst, 4))


@pytest.mark.criterion(5, "estimator cross-validation")
def test_estimators_agree(ts2, cf, pot, within, record_property):
    within(300)
    moran = moran_dimension([(1,), (2,)], cf, depth=12, ts=ts2).value
    du = estimate_Du(math.inf, 1, 25, ts2, cf, pot).value
    box = box_dimension_oracle(full_shift_intervals(ts2, cf, 10))
    record_property("moran_d12", round(moran, 4))
    record_property("du_r25", round(du, 4))
    record_property("box_d10", round(box, 4))
    record_property("literature_info", LITERATURE_E2)
    for a, b in itertools.combinations((moran, du, box), 2):
        assert abs(a - b) <= ESTIMATOR_TOL


@pytest.mark.criterion(6, "stable and unstable counts coincide")
def test_stable_equals_unstable(ts2, cf, pot, within):
    within(60)
    for t in (2.5, 2.9, 3.1, 3.3, 3.5, math.inf):
        u = covering_table(t, 12, ts2, cf, pot)
        s = stable_covering_table(t, 12, ts2, cf, pot)
        for r in range(13):
            assert (u.lower(r), u.upper(r)) == (s.lower(r), s.upper(r)), (t, r)


@pytest.mark.criterion(7, "no certified jump on the 2.9..3.6 grid")
def test_semicontinuity_grid(ts2, cf, pot, within, record_property):
    within(1800)
    k = measure_constants(ts2, cf, 8)
    grid = [round(2.9 + 0.05 * i, 2) for i in range(15)]
    brackets = []
    for t in grid:
        est = estimate_from_table(covering_table(t, 16, ts2, cf, pot), 1, 16, 2, k)
        brackets.append((est.lower, est.upper))
    record_property("brackets", {t: (round(lo, 3), round(hi, 3)) for t, (lo, hi) in zip(grid, brackets)})
    steps = [(nxt[0] - cur[1], (a, b)) for (a, cur), (b, nxt) in zip(zip(grid, brackets), zip(grid[1:], brackets[1:]))]
    worst, pair = max(steps)
    record_property("max_step_over_upper", round(worst, 4))
    record_property("at_pair", pair)
    assert worst <= ESTIMATOR_TOL
    assert [hi for _, hi in brackets] == sorted(hi for _, hi in brackets)


@pytest.mark.criterion(8, "extraction soundness at t = 3.1")
def test_extraction_soundness(ts2, cf, pot, extracted, within, record_property):
    within(600)
    res = extracted
    limit = 3.1 - res.delta
    record_property("delta", res.delta)
    record_property("words", len(res.B.words))
    assert res.delta > 0
    words = res.B.words
    assert check_complete_subshift(words, ts2).words == words
    tails = pot.tail_hulls(words)
    rng = random.Random(2024)
    for _ in range(1000):
        ws = [rng.choice(words) for _ in range(rng.randint(3, 6))]
        i = rng.randrange(1, len(ws) - 1)
        past, mid, future = sum(ws[:i], ()), ws[i], sum(ws[i + 1:], ())
        for j in range(len(mid)):
            assert pot.enclose(past + mid[:j], mid[j:] + future, tails)[1] <= limit
    for n in range(1, 4):
        for combo in itertools.product(words, repeat=n):
            assert markov_value(PeriodicPoint(sum(combo, ())), pot) <= limit + ENCLOSURE_PAD
    moran = moran_dimension(words, cf, ts=ts2)
    record_property("moran", round(moran.value, 4))
    record_property("du_upper", round(res.du.upper, 4))
    assert moran.value <= res.du.upper


@pytest.mark.criterion(9, "sandwich chain")
def test_sandwich(cf, pot, extracted, within, record_property):
    within(300)
    res = extracted
    box = box_dimension_oracle(concatenation_intervals(res.B.words, cf, 4))
    record_property("lower_bound", round(res.dim_lower, 4))
    record_property("moran", round(res.moran.value, 4))
    record_property("box_d4", round(box, 4))
    assert res.dim_lower <= res.moran.value <= box + ESTIMATOR_TOL
    ms = find_maximizers(res.B, 1, pot)
    values = lagrange_samples(res.B, ms, 100, pot, seed=11)
    record_property("max_lagrange", max(values))
    assert len(values) == 100
    assert max(values) < 3.1 - res.delta


@pytest.mark.criterion(10, "realization identity on a toy alphabet")
def test_realization_identity(ts2, pot, within, record_property):
    within(120)
    ms = find_maximizers(check_complete_subshift([(1,), (2,)], ts2), 2, pot)
    worst_error, worst_gap = 0.0, math.inf
    for x in sample_x_words(len(ms.B_star), 100, seed=5):
        spec = realize(x, ms, pot, tol=1e-9)
        assert spec.error <= 1e-9
        worst_error = max(worst_error, spec.error)
        d, g = len(spec.d_word), len(ms.gamma_word)
        for j in range(len(spec.theta.core)):
            if not d <= j < d + g:
                gap = spec.value - float(pot.value(spec.theta, j))
                assert gap >= ms.eta_gap - ENCLOSURE_PAD
                worst_gap = min(worst_gap, gap)
    record_property("max_identity_error", worst_error)
    record_property("eta_gap", round(ms.eta_gap, 4))
    record_property("min_gap_outside_insertion", round(worst_gap, 4))


DETERMINISM_CONFIGS = [
    RunConfig("dimension-curve", params={"t_grid": "2.9:3.3:0.1", "r_max": 12}),
    RunConfig("extract"),
    RunConfig("lagrange-sample", params={"count": 20}),
    RunConfig("verify-invariants"),
    RunConfig("spectrum-table"),
]


@pytest.mark.criterion(11, "determinism under 1, 4 and 16 workers")
def test_determinism(within, record_property):
    within(600)
    for cfg in DETERMINISM_CONFIGS:
        outputs = []
        for workers in (1, 1, 4, 16):
            again = RunConfig.loads(cfg.dumps())
            again.workers = workers
            outputs.append(run(cfg.command, again, use_cache=False).payload_text())
        assert len(set(outputs)) == 1, cfg.command
    record_property("commands", [c.command for c in DETERMINISM_CONFIGS])


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
