import itertools
import random

import pytest
from hypothesis import given, strategies as st

import cantor_audit.powerset as ps
from cantor_audit.errors import AuditFailure
from cantor_audit.powerset import (
    MappingTable,
    all_mappings,
    audit_report,
    build_M,
    exhaustive_audit,
    has_period_two,
    members,
    oscillation_trace,
    to_mask,
    trace_labels,
    verify_M_not_in_range,
)


def brute_M(sets):
    """Set-based restatement: {i : i not in s(i)}."""
    return frozenset(i for i, s in enumerate(sets, 1) if i not in s)


def mappings(n):
    return st.lists(st.integers(0, 2**n - 1), min_size=n, max_size=n).map(
        lambda imgs: MappingTable(n, tuple(imgs))
    )


any_mapping = st.integers(1, 4).flatmap(mappings)


class TestMasks:
    def test_round_trip(self):
        for n in range(1, 5):
            for mask in range(2**n):
                assert to_mask(members(mask, n)) == mask

    def test_table_validation(self):
        with pytest.raises(ValueError):
            MappingTable(5, (0,) * 5)
        with pytest.raises(ValueError):
            MappingTable(2, (0,))
        with pytest.raises(ValueError):
            MappingTable(2, (0, 4))


class TestBuildM:
    @pytest.mark.parametrize("sets,expected", [
        ([{1}, {1, 2}], set()),
        ([set()], {1}),
        ([{1}, {2}, {3}], set()),
        ([{2}, {1}], {1, 2}),
    ])
    def test_examples(self, sets, expected):
        s = MappingTable.from_sets(sets)
        assert set(members(build_M(s), s.ground_size)) == expected

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_against_set_oracle(self, n):
        for images in all_mappings(n):
            s = MappingTable(n, images)
            sets = [frozenset(members(m, n)) for m in images]
            M = brute_M(sets)
            assert frozenset(members(build_M(s), n)) == M
            assert M not in sets


class TestVerify:
    def test_singleton(self):
        v = verify_M_not_in_range(MappingTable.from_sets([set()]))
        assert v.not_in_range and members(v.M, 1) == [1]
        assert v.witnesses == (1,)

    def test_two(self):
        v = verify_M_not_in_range(MappingTable.from_sets([{1}, {1, 2}]))
        assert v.not_in_range
        assert v.first_differences == (1, 1)
        assert v.witnesses == (1, 2)

    @given(any_mapping)
    def test_witness_is_diagonal_disagreement(self, s):
        v = verify_M_not_in_range(s)
        assert v.not_in_range
        n = s.ground_size
        for i in range(1, n + 1):
            w = v.witnesses[i - 1]
            in_M = i in members(v.M, n)
            in_si = i in members(s.image(i), n)
            assert w == i and in_M != in_si
            first = v.first_differences[i - 1]
            assert first <= i
            assert (first in members(v.M, n)) != (first in members(s.image(i), n))

    def test_json(self):
        out = verify_M_not_in_range(MappingTable.from_sets([{1}, {1, 2}])).to_json()
        assert out == {"mapping": [[1], [1, 2]], "M": [], "not_in_range": True,
                       "witnesses": [1, 2], "first_differences": [1, 1]}


class TestExhaustive:
    @pytest.mark.parametrize("n,count", [(1, 2), (2, 16), (3, 512), (4, 65536)])
    def test_counts(self, n, count):
        assert exhaustive_audit(n) == count == sum(1 for _ in all_mappings(n))

    def test_lexicographic_order(self):
        first = list(itertools.islice(all_mappings(2), 5))
        assert first == [(0, 0), (0, 1), (0, 2), (0, 3), (1, 0)]

    @pytest.mark.parametrize("n", [0, 5])
    def test_bounds(self, n):
        with pytest.raises(ValueError):
            exhaustive_audit(n)

    def test_counterexample_aborts(self, monkeypatch):
        # a broken M that returns s(1) must be caught and reported
        monkeypatch.setattr(ps, "build_M", lambda s: s.image(1))
        with pytest.raises(AuditFailure) as err:
            ps.exhaustive_audit(1)
        assert err.value.witness == MappingTable(1, (0,))

    def test_report(self):
        rep = audit_report(2, steps=4, samples=2)
        assert rep["n"] == 2 and rep["mappings_checked"] == 16 and rep["failures"] == []
        assert len(rep["sample_traces"]) == 2
        assert all(t["period_two"] for t in rep["sample_traces"])


class TestOscillation:
    def test_four_steps(self):
        s = MappingTable.from_sets([{1}, set()])
        assert trace_labels(oscillation_trace(s, 1, 4)) == ["in", "out", "in", "out"]
        s = MappingTable.from_sets([set(), set()])
        assert trace_labels(oscillation_trace(s, 1, 4)) == ["out", "in", "out", "in"]

    def test_single_step(self):
        assert len(oscillation_trace(MappingTable.from_sets([{1}]), 1, 1)) == 1

    def test_forced_example(self):
        trace = oscillation_trace(MappingTable.from_sets([{2}, set()]), 1, 6)
        assert trace == [False, True, False, True, False, True]
        assert has_period_two(trace)

    def test_random_pairs(self):
        rng = random.Random(2024)
        for _ in range(20):
            n = rng.randint(1, 4)
            s = MappingTable(n, tuple(rng.randrange(2**n) for _ in range(n)))
            m = rng.randint(1, n)
            trace = oscillation_trace(s, m, 100)
            assert has_period_two(trace) and len(set(trace)) == 2

    def test_validation(self):
        s = MappingTable.from_sets([{1}])
        with pytest.raises(ValueError):
            oscillation_trace(s, 2, 3)
        with pytest.raises(ValueError):
            oscillation_trace(s, 1, 0)
