import itertools
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spectra.errors import (
    ConcatenationError,
    EnumerationOverflowError,
    IncompleteSubshiftError,
    MalformedInputError,
)
from spectra.geometry import partition_at_scale
from spectra.symbolic import (
    PeriodicPoint,
    TransitionSystem,
    check_complete_subshift,
    concat,
    enumerate_words,
    is_admissible,
    minimal_period,
    periodic_words_canonical,
    transpose,
)

LOOPS_ONLY = TransitionSystem((1, 2), frozenset({(1, 1), (2, 2)}))
# golden-mean shift: 2 may not follow 2
GOLDEN = TransitionSystem((1, 2), frozenset({(1, 1), (1, 2), (2, 1)}))


def words(ts, max_len=8):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_len))
        w = [draw(st.sampled_from(ts.alphabet))]
        while len(w) < n:
            w.append(draw(st.sampled_from(ts.successors(w[-1]))))
        return tuple(w)

    return build()


class TestTransitionSystem:
    def test_rejects_dead_symbols(self):
        with pytest.raises(MalformedInputError, match="dead"):
            TransitionSystem((1, 2), frozenset({(1, 1), (1, 2)}))

    def test_rejects_unknown_symbols_in_transitions(self):
        with pytest.raises(MalformedInputError):
            TransitionSystem((1,), frozenset({(1, 2)}))

    def test_json_round_trip(self):
        ts = GOLDEN
        again = TransitionSystem.from_json(json.loads(json.dumps(ts.to_json())))
        assert again == ts
        assert again.digest() == ts.digest()

    def test_transpose_reverses_pairs(self):
        ts = TransitionSystem((1, 2, 3), frozenset({(1, 2), (2, 3), (3, 1), (1, 1)}))
        assert ts.transpose().transitions == frozenset({(2, 1), (3, 2), (1, 3), (1, 1)})
        assert ts.transpose().transpose() == ts


class TestIsAdmissible:
    @pytest.mark.parametrize("word", [(1, 2, 1), (2, 2, 1, 1)])
    def test_full_shift_admits_everything(self, ts2, word):
        assert is_admissible(word, ts2)

    def test_missing_pair(self):
        assert not is_admissible((1, 2), LOOPS_ONLY)

    def test_unknown_symbol(self, ts2):
        with pytest.raises(MalformedInputError):
            is_admissible((1, 3), ts2)

    def test_empty_word(self, ts2):
        with pytest.raises(MalformedInputError):
            is_admissible((), ts2)


class TestTranspose:
    @pytest.mark.parametrize("word,expected", [((1, 2, 2), (2, 2, 1)), ((1,), (1,)), ((1, 1, 2), (2, 1, 1))])
    def test_examples(self, word, expected):
        assert transpose(word) == expected

    @given(words(GOLDEN))
    def test_involution_and_transposed_admissibility(self, w):
        assert transpose(transpose(w)) == w
        assert is_admissible(transpose(w), GOLDEN.transpose())


class TestConcat:
    def test_examples(self, ts2):
        assert concat([(1,), (2,)], ts2) == (1, 2)
        assert concat([(1, 2), (2, 1)], ts2) == (1, 2, 2, 1)

    def test_bad_junction_names_index(self):
        with pytest.raises(ConcatenationError) as info:
            concat([(1,), (1,), (2,)], LOOPS_ONLY)
        assert info.value.index == 2
        assert info.value.pair == (1, 2)

    @given(words(GOLDEN, 4), words(GOLDEN, 4), words(GOLDEN, 4))
    def test_associative_where_defined(self, a, b, c):
        try:
            left = concat([concat([a, b], GOLDEN), c], GOLDEN)
        except ConcatenationError:
            with pytest.raises(ConcatenationError):
                concat([a, concat([b, c], GOLDEN)], GOLDEN)
            return
        assert left == concat([a, concat([b, c], GOLDEN)], GOLDEN) == a + b + c


class TestCompleteSubshift:
    def test_free_examples(self, ts2):
        assert check_complete_subshift([(1,), (2,)], ts2).kind == "free"
        assert check_complete_subshift([(1, 2), (1, 1, 2)], ts2).kind == "free"

    def test_self_concatenation_fails(self):
        ts = TransitionSystem((1, 2), frozenset({(1, 2), (1, 1), (2, 2)}))
        with pytest.raises(IncompleteSubshiftError):
            check_complete_subshift([(1, 2)], ts)

    def test_framed_detection(self, ts2):
        blocks = {(1, 1, 2, 2): [(1, 1), (2, 2)], (1, 1, 1, 2, 2): [(1, 1), (1,), (2, 2)]}
        B = check_complete_subshift(blocks, ts2, blocks)
        assert (B.kind, B.gamma1, B.gamma2) == ("framed", (1, 1), (2, 2))

    @given(st.lists(words(GOLDEN, 4), min_size=1, max_size=3), st.data())
    def test_random_concatenations_admissible(self, B, data):
        try:
            alphabet = check_complete_subshift(B, GOLDEN)
        except IncompleteSubshiftError:
            return
        picks = data.draw(st.lists(st.sampled_from(alphabet.words), min_size=1, max_size=6))
        assert is_admissible(tuple(itertools.chain.from_iterable(picks)), GOLDEN)


class TestEnumerate:
    def test_length_two(self, ts2):
        out = list(enumerate_words(ts2, keep=lambda w: True, stop=lambda w: len(w) >= 2))
        assert out == [(1, 1), (1, 2), (2, 1), (2, 2)]

    def test_length_one(self, ts2):
        assert list(enumerate_words(ts2, keep=lambda w: True, stop=lambda w: len(w) >= 1)) == [(1,), (2,)]

    def test_scale_stop_gives_partition(self, ts2, cf):
        out = enumerate_words(ts2, keep=lambda w: True, stop=lambda w: cf.u_scale(w) >= 2)
        assert sorted(out) == sorted(partition_at_scale(2, ts2, cf))

    @pytest.mark.parametrize("n", range(1, 9))
    def test_matches_naive_generation(self, n):
        naive = sorted(w for w in itertools.product((1, 2), repeat=n) if is_admissible(w, GOLDEN))
        out = list(enumerate_words(GOLDEN, keep=lambda w: True, stop=lambda w: len(w) >= n))
        assert out == naive  # lexicographic and duplicate-free

    def test_depth_cap(self, ts2):
        with pytest.raises(EnumerationOverflowError):
            list(enumerate_words(ts2, keep=lambda w: True, stop=lambda w: False, depth_cap=5))

    def test_prefix_partition_merges_to_whole(self, ts2):
        whole = list(enumerate_words(ts2, keep=lambda w: True, stop=lambda w: len(w) >= 5))
        parts = [list(enumerate_words(ts2, lambda w: True, lambda w: len(w) >= 5, prefixes=[p])) for p in [(1,), (2,)]]
        assert whole == parts[0] + parts[1]


class TestPeriodic:
    def test_closure_required(self):
        with pytest.raises(MalformedInputError):
            PeriodicPoint((1, 2)).validate(LOOPS_ONLY)

    def test_phase_range(self):
        with pytest.raises(MalformedInputError):
            PeriodicPoint((1, 2), 2)

    def test_rotation_and_symbol(self):
        p = PeriodicPoint((1, 2, 2), 1)
        assert p.rotated() == (2, 2, 1)
        assert [p.symbol(n) for n in range(-1, 4)] == [1, 2, 2, 1, 2]

    def test_minimal_period(self):
        assert minimal_period((1, 2, 1, 2)) == (1, 2)
        assert minimal_period((1, 1, 2)) == (1, 1, 2)

    def test_canonical_orbits_count(self, ts2):
        # primitive binary necklaces: 2, 1, 2, 3, 6, 9 of lengths 1..6
        counts = [0] * 7
        for w in periodic_words_canonical(ts2, 6):
            counts[len(w)] += 1
        assert counts[1:] == [2, 1, 2, 3, 6, 9]
