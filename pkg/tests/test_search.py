import itertools

import pytest
from hypothesis import given, strategies as st

from arithindex.core import GtmSequence, InvalidInputError, digit_sum, shift_word
from arithindex import search
from arithindex.search import (
    Occurrence,
    SearchInconsistencyError,
    arithmetic_factor_count,
    arithmetic_factor_set,
    arithmetical_complexity,
    factor_complexity,
    jump_table,
    least_z_with_jump,
    max_index_for_length,
    max_run_length,
    min_difference,
    occurs_prefix_oracle,
    occurs_with_difference,
    run_length_at,
    window_size,
)
from arithindex.constructive import lemma2_witness


def brute_force_jumps(q, limit):
    seq = GtmSequence.of(q)
    first = {}
    for z in range(limit):
        a = digit_sum(z, seq.base)
        delta = (digit_sum(z + 1, seq.base) - a) % q
        first.setdefault((a, delta), z)
    return first


class TestJumpTable:
    @pytest.mark.parametrize("q,limit", [(2, 64), (3, 400), (5, 8000)])
    def test_least_z_matches_brute_force(self, q, limit):
        first = brute_force_jumps(q, limit)
        assert len(first) == q * q
        table = jump_table(q)
        for (a, delta), z in first.items():
            assert least_z_with_jump(q, a, delta) == z
            assert table[a, delta] == z

    def test_table_is_read_only(self):
        with pytest.raises(ValueError):
            jump_table(2)[0, 0] = 1


class TestOccurrence:
    def test_examples(self, tm):
        assert occurs_with_difference(tm, (0, 1), 1) == Occurrence(c=0, d=1)
        assert occurs_with_difference(tm, (0, 0, 0), 1) is None

    def test_least_start_for_000(self, tm):
        occurrence = occurs_with_difference(tm, (0, 0, 0), 3)
        assert occurrence == Occurrence(c=0, d=3)
        assert tm.arithmetic_slice(6, 3, 3) == (0, 0, 0)

    def test_single_symbols(self, gtm3):
        for a in range(3):
            assert occurs_with_difference(gtm3, (a,), 1) == Occurrence(c=a, d=1)

    def test_crossing_only_occurrence(self, tm):
        # 11 never fits inside the window [0, 2) but crosses into the next block.
        assert occurs_with_difference(tm, (1, 1), 1) == Occurrence(c=1, d=1)

    def test_rejects_bad_input(self, tm):
        with pytest.raises(InvalidInputError):
            occurs_with_difference(tm, (), 1)
        with pytest.raises(InvalidInputError):
            occurs_with_difference(tm, (0, 2), 1)
        with pytest.raises(InvalidInputError):
            occurs_with_difference(tm, (0, 1), 0)

    def test_window_power_does_not_change_answer(self, tm, gtm3):
        for seq in (tm, gtm3):
            for u in itertools.product(range(seq.q), repeat=3):
                for d in (1, 2, 4, 5):
                    assert occurs_with_difference(seq, u, d) == occurs_with_difference(
                        seq, u, d, window_power=2
                    )

    def test_window_size(self):
        assert window_size(2, 3, 3) == 16
        assert window_size(2, 3, 3, window_power=2) == 256
        assert window_size(3, 1, 1) == 1
        with pytest.raises(InvalidInputError):
            window_size(2, 3, 3, window_power=0)

    def test_oracle_examples(self, tm, gtm3):
        assert occurs_prefix_oracle(tm, (0, 1), 1, 10) == Occurrence(0, 1)
        assert occurs_prefix_oracle(gtm3, (0, 1, 2), 1, 10) == Occurrence(0, 1)
        assert occurs_prefix_oracle(tm, (0, 0, 0), 3, 100) == Occurrence(0, 3)
        assert occurs_prefix_oracle(tm, (0, 0, 0), 1, 10_000) is None

    @given(
        st.sampled_from([2, 3]),
        st.integers(min_value=1, max_value=12),
        st.data(),
    )
    def test_oracle_agreement(self, q, d, data):
        seq = GtmSequence.of(q)
        u = tuple(data.draw(st.lists(st.integers(0, q - 1), min_size=1, max_size=4)))
        assert occurs_with_difference(seq, u, d) == occurs_prefix_oracle(seq, u, d, 20_000)

    @given(st.sampled_from([2, 3]), st.integers(min_value=1, max_value=9), st.data())
    def test_shift_closure(self, q, d, data):
        seq = GtmSequence.of(q)
        u = tuple(data.draw(st.lists(st.integers(0, q - 1), min_size=1, max_size=4)))
        a = data.draw(st.integers(0, q - 1))
        found = occurs_with_difference(seq, u, d) is not None
        assert (occurs_with_difference(seq, shift_word(u, a, seq.base), d) is not None) == found

    @pytest.mark.slow
    @pytest.mark.parametrize("q", [2, 3])
    def test_oracle_equivalence_exhaustive(self, q):
        seq = GtmSequence.of(q)
        disagreements = []
        for m in range(1, 6):
            for u in itertools.product(range(q), repeat=m):
                for d in range(1, 21):
                    complete = occurs_with_difference(seq, u, d)
                    oracle = occurs_prefix_oracle(seq, u, d, 10 ** 6)
                    if complete != oracle:
                        disagreements.append((u, d, complete, oracle))
        assert disagreements == []


class TestRuns:
    def test_run_length_at_examples(self, tm):
        assert run_length_at(tm, 0, 1) == 1
        assert run_length_at(tm, 1, 1) == 2

    def test_run_length_at_maximal_witness(self, gtm3):
        occurrence = lemma2_witness(gtm3.base, 3)
        assert run_length_at(gtm3, occurrence.c, 26) == 33

    def test_max_run_length_examples(self, tm):
        assert max_run_length(tm, 1).length == 2
        assert max_run_length(tm, 3).length == 8
        assert max_run_length(tm, 2).length == 2

    def test_witness_is_a_maximal_run(self, tm, gtm3):
        for seq, d in ((tm, 5), (tm, 7), (gtm3, 8)):
            report = max_run_length(seq, d)
            assert run_length_at(seq, report.witness_c, d) == report.length

    def test_witness_run_cannot_extend_left(self, tm, gtm3):
        for seq, d in ((tm, 3), (tm, 7), (gtm3, 8)):
            report = max_run_length(seq, d)
            run = seq.arithmetic_slice(report.witness_c, d, report.length)
            assert len(set(run)) == 1
            if report.witness_c >= d:
                assert seq.symbol_at(report.witness_c - d) != run[0]

    @pytest.mark.parametrize("q,d", [(2, 1), (2, 3), (2, 5), (3, 1), (3, 2), (3, 4)])
    def test_residue_class_identity(self, q, d):
        seq = GtmSequence.of(q)
        assert max_run_length(seq, q * d).length == max_run_length(seq, d).length


class TestIndex:
    def test_examples(self, tm, gtm3):
        report = min_difference(tm, (0,))
        assert (report.d_min, report.index) == (1, 1)
        report = min_difference(tm, (0, 0, 0))
        assert (report.d_min, report.occurrence.c, report.index) == (3, 0, 2)
        report = min_difference(gtm3, (0, 1, 2))
        assert (report.d_min, report.occurrence.c, report.index) == (1, 0, 1)

    def test_d_min_never_divisible_by_q(self, tm, gtm3):
        for seq, n in ((tm, 5), (gtm3, 3)):
            for u in itertools.product(range(seq.q), repeat=n):
                assert min_difference(seq, u).d_min % seq.q != 0

    def test_d_min_is_minimal(self, tm):
        for u in itertools.product(range(2), repeat=4):
            d_min = min_difference(tm, u).d_min
            assert all(occurs_with_difference(tm, u, d) is None for d in range(1, d_min))

    def test_max_index_small(self, tm):
        row = max_index_for_length(tm, 1)
        assert row.I == 1
        assert row.extremal_words == ((0,), (1,))

        row = max_index_for_length(tm, 3)
        reports = {r.u: r for r in row.reports}
        assert reports[(0, 0, 0)].index == 2
        assert row.I >= 2
        assert len(row.reports) == 8

    def test_max_index_independent_of_workers(self, gtm3):
        serial = max_index_for_length(gtm3, 3, workers=1)
        parallel = max_index_for_length(gtm3, 3, workers=4)
        assert serial.I == parallel.I
        assert serial.extremal_words == parallel.extremal_words
        assert serial.reports == parallel.reports

    def test_arithmetical_complexity_examples(self, tm, gtm3):
        assert arithmetical_complexity(tm, 1) == 2
        assert arithmetical_complexity(tm, 6) == 64
        assert arithmetical_complexity(gtm3, 3) == 27

    @pytest.mark.parametrize("workers", [1, 2])
    def test_complexity_surfaces_inconsistency(self, tm, monkeypatch, workers):
        genuine = search.occurs_with_difference

        def broken(seq, u, d, **kwargs):
            if tuple(u) == (1, 1, 0):
                raise SearchInconsistencyError("witness does not reproduce 110")
            return genuine(seq, u, d, **kwargs)

        monkeypatch.setattr(search, "occurs_with_difference", broken)
        with pytest.raises(SearchInconsistencyError):
            arithmetical_complexity(tm, 3, workers=workers)

    @pytest.mark.slow
    def test_arithmetic_universality(self, tm, gtm3):
        for n in range(1, 9):
            assert arithmetical_complexity(tm, n, workers=4) == 2 ** n
        for n in range(1, 5):
            assert arithmetical_complexity(gtm3, n, workers=4) == 3 ** n


class TestComplexity:
    def test_factor_complexity_small(self, tm):
        assert [factor_complexity(tm, m) for m in range(1, 5)] == [2, 4, 6, 10]

    def test_factor_complexity_example(self, tm):
        assert factor_complexity(tm, 16) <= 64

    @pytest.mark.slow
    def test_factor_complexity_ceiling(self, tm):
        for m in range(1, 65):
            assert factor_complexity(tm, m) <= 4 * m

    def test_difference_one_gives_factors(self, tm, gtm3):
        for seq in (tm, gtm3):
            for m in range(1, 6):
                assert arithmetic_factor_count(seq, 1, m) == factor_complexity(seq, m)

    def test_factor_set_residue_identity(self, tm, gtm3):
        for seq in (tm, gtm3):
            for d in (1, 2, 4):
                assert arithmetic_factor_set(seq, seq.q * d, 4) == arithmetic_factor_set(seq, d, 4)

    @pytest.mark.slow
    @pytest.mark.parametrize("q", [2, 3])
    def test_factor_set_residue_identity_grid(self, q):
        seq = GtmSequence.of(q)
        mismatches = [
            (d, m)
            for d in range(1, 31)
            for m in range(1, 6)
            if arithmetic_factor_set(seq, q * d, m) != arithmetic_factor_set(seq, d, m)
        ]
        assert mismatches == []

    @pytest.mark.slow
    @pytest.mark.parametrize("q", [2, 3])
    def test_run_residue_identity_grid(self, q):
        seq = GtmSequence.of(q)
        for d in range(1, 31):
            assert max_run_length(seq, q * d).length == max_run_length(seq, d).length

    def test_factor_set_matches_occurrence_search(self, tm, gtm3):
        for seq in (tm, gtm3):
            for d in (1, 3, 5):
                factors = arithmetic_factor_set(seq, d, 3)
                for u in itertools.product(range(seq.q), repeat=3):
                    assert (u in factors) == (occurs_with_difference(seq, u, d) is not None)

    def test_factor_count_bounded_by_complexity(self, tm):
        for d in range(1, 6):
            for m in range(1, 5):
                assert arithmetic_factor_count(tm, d, m) <= factor_complexity(tm, d * m)

    def test_factor_set_closed_under_shift(self, gtm3):
        factors = arithmetic_factor_set(gtm3, 5, 3)
        for u in factors:
            assert shift_word(u, 1, gtm3.base) in factors


def test_inconsistency_error_is_runtime_error():
    assert issubclass(SearchInconsistencyError, RuntimeError)
