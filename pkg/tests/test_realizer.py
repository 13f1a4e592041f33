import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectra.errors import InconclusiveError, MalformedInputError
from spectra.potentials import ENCLOSURE_PAD, markov_value
from spectra.realizer import find_maximizers, lagrange_samples, realize, realize_samples, sample_x_words
from spectra.symbolic import PeriodicPoint, check_complete_subshift

TWO_ROOT3 = 2 * math.sqrt(3)


@pytest.fixture(scope="module")
def toy(ts2):
    return check_complete_subshift([(1,), (2,)], ts2)


@pytest.fixture(scope="module")
def cf_m2(toy, pot):
    return find_maximizers(toy, 2, pot)


@pytest.fixture(scope="module")
def affine_m2(toy, affine_pot):
    return find_maximizers(toy, 2, affine_pot)


class TestMaximizers:
    def test_alternating_pattern_in_cf(self, cf_m2, pot):
        assert cf_m2.gamma_word == (2, 1, 2, 1, 2)
        assert cf_m2.max_lower <= TWO_ROOT3 <= cf_m2.max_upper
        assert cf_m2.max_upper == pytest.approx(TWO_ROOT3, abs=1e-9)
        assert cf_m2.eta_gap > 0
        # oracle: brute force over periods <= 6 puts the maximum at (1,2)-type orbits
        words = [w for n in range(1, 7) for w in itertools.product((1, 2), repeat=n)]
        best = max((markov_value(PeriodicPoint(w), pot), w) for w in words)
        assert best[0] == pytest.approx(TWO_ROOT3, abs=1e-12)
        assert set(best[1]) == {1, 2} and all(a != b for a, b in zip(best[1], best[1][1:]))

    def test_remainder_is_nonempty_and_avoids_gammas(self, cf_m2):
        assert cf_m2.B_star
        assert not set(cf_m2.B_star) & set(cf_m2.gammas)
        assert cf_m2.rest_upper < cf_m2.max_lower

    def test_single_orbit_has_nothing_to_remove(self, ts2, pot):
        with pytest.raises(InconclusiveError):
            find_maximizers(check_complete_subshift([(1,)], ts2), 1, pot)

    def test_affine_maximizer_is_the_rightmost_block(self, affine_m2, affine):
        rightmost = max(affine_m2.B.words, key=lambda w: affine.u_interval(w))
        assert affine_m2.gamma_word == rightmost * 5
        assert affine_m2.eta_gap > 0

    def test_m_must_be_positive(self, toy, pot):
        with pytest.raises(MalformedInputError):
            find_maximizers(toy, 0, pot)


class TestRealize:
    def test_single_word_degenerate(self, cf_m2, pot):
        spec = realize((0,), cf_m2, pot)
        assert spec.lagrange == pytest.approx(spec.value, abs=1e-9)

    @given(st.lists(st.integers(0, 1), min_size=4, max_size=4))
    @settings(max_examples=20)
    def test_identity_cf(self, cf_m2, pot, x):
        spec = realize(x, cf_m2, pot, depth=6)
        assert spec.error <= 1e-9
        assert spec.error <= spec.error_bound + 1e-15

    def test_affine_identity_is_exact_up_to_truncation(self, affine_m2, affine_pot):
        for x in [(0,), (1, 0), (3, 2, 1, 0), (7, 7, 0)]:
            spec = realize(x, affine_m2, affine_pot)
            assert spec.error < 1e-15

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=5))
    @settings(max_examples=15)
    def test_error_bound_non_increasing_in_depth(self, cf_m2, pot, x):
        # shallow truncations miss the 1e-9 identity, so only the bound is compared here
        specs = [realize(x, cf_m2, pot, depth=d, tol=math.inf) for d in (1, 2, 3, 4, 6, 8)]
        bounds = [s.error_bound for s in specs]
        assert all(b <= a for a, b in zip(bounds, bounds[1:]))
        assert all(s.error <= s.error_bound + 1e-15 for s in specs)

    def test_gap_outside_the_insertion(self, cf_m2, pot):
        spec = realize((1, 0, 0, 1), cf_m2, pot)
        d, g = len(spec.d_word), len(cf_m2.gamma_word)
        limit = spec.value - cf_m2.eta_gap + ENCLOSURE_PAD
        core = spec.theta.core
        for j in range(len(core)):
            if not d <= j < d + g:
                assert float(pot.value(spec.theta, j)) <= limit
        assert 0 <= spec.n < g

    def test_bad_indices(self, cf_m2, pot):
        with pytest.raises(MalformedInputError):
            realize((), cf_m2, pot)
        with pytest.raises(MalformedInputError):
            realize((len(cf_m2.B_star),), cf_m2, pot)


class TestSamples:
    def test_golden_orbit(self, ts2, pot):
        B = check_complete_subshift([(1,)], ts2)
        values = lagrange_samples(B, None, 5, pot)
        assert values == [pytest.approx(math.sqrt(5), abs=1e-12)] * 5

    def test_toy_range(self, toy, cf_m2, pot):
        values = lagrange_samples(toy, cf_m2, 10, pot)
        assert len(values) == 10
        assert all(math.sqrt(5) - 1e-12 <= v <= cf_m2.max_upper for v in values)

    def test_distinct_and_reproducible(self):
        a = sample_x_words(3, 50, seed=7)
        assert len(set(a)) == 50
        assert a == sample_x_words(3, 50, seed=7)
        assert a != sample_x_words(3, 50, seed=8)

    def test_too_many_requested(self):
        with pytest.raises(MalformedInputError):
            sample_x_words(1, 3, max_blocks=2)

    def test_extracted_alphabet(self, extracted, pot):
        ms = find_maximizers(extracted.B, 1, pot)
        limit = 3.1 - extracted.delta
        for spec in realize_samples(ms, 10, pot, seed=3):
            assert spec.lagrange <= limit
