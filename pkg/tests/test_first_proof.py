from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cantor_audit.enumeration import SequenceSource, from_terms, harmonic, harmonic_term, rationals_in
from cantor_audit.errors import NotInjective
from cantor_audit.first_proof import (
    BudgetExhausted,
    Converged,
    FiniteCase,
    FiniteCaseWithinBudget,
    audit_members_outside,
    next_interval,
    run_nested,
)
from cantor_audit.numerics import Interval

START = Interval(-1, Fraction(1, 2))


def closed_form(k):
    """k-th harmonic interval from (-1, 1/2), k = 0 being the start."""
    return Interval(Fraction(-1, 2 * k + 1), Fraction(1, 2 * k + 2))


class TestNextInterval:
    def test_first_step(self):
        assert next_interval(harmonic(), START, 3, 10**6) == (Interval(Fraction(-1, 3), Fraction(1, 4)), 5)

    def test_second_step(self):
        iv = Interval(Fraction(-1, 3), Fraction(1, 4))
        assert next_interval(harmonic(), iv, 5, 10**6) == (Interval(Fraction(-1, 5), Fraction(1, 6)), 7)

    def test_two_term_file(self):
        src = from_terms([0, 1])
        assert next_interval(src, Interval(-1, 2), 1, 100) == (Interval(0, 1), 3)

    def test_endpoints_are_outside(self):
        # scanning from 1 skips w1 = -1 and w2 = 1/2, the endpoints themselves
        assert next_interval(harmonic(), START, 1, 10**6) == (Interval(Fraction(-1, 3), Fraction(1, 4)), 5)

    def test_orders_by_value(self):
        src = from_terms([Fraction(3, 4), Fraction(1, 4)])
        assert next_interval(src, Interval(0, 1), 1, 10) == (Interval(Fraction(1, 4), Fraction(3, 4)), 3)

    def test_finite_case_by_budget(self):
        res = next_interval(harmonic(), START, 3, 3)
        assert isinstance(res, FiniteCase)
        assert res.count == 1 and not res.exhausted and res.scanned_to == 3

    def test_finite_case_by_exhaustion(self):
        res = next_interval(from_terms([5, 6]), Interval(0, 1), 1, 100)
        assert isinstance(res, FiniteCase)
        assert res.count == 0 and res.exhausted

    def test_duplicate_detected(self):
        terms = {1: Fraction(1, 2), 2: Fraction(1, 3), 3: Fraction(1, 2)}
        src = SequenceSource("file", terms.__getitem__, length=3)
        with pytest.raises(NotInjective) as err:
            next_interval(src, Interval(-1, Fraction(1, 4)), 1, 10)
        assert (err.value.first_index, err.value.second_index) == (1, 3)

    def test_scan_from_validated(self):
        with pytest.raises(ValueError):
            next_interval(harmonic(), START, 0, 10)


class TestRunNested:
    def test_depth_one_is_start(self):
        run = run_nested(harmonic(), START, 1)
        assert run.steps == ()
        assert run.outcome == Converged(START)

    def test_short_chain(self):
        run = run_nested(harmonic(), START, 3)
        assert [s.interval for s in run.steps] == [closed_form(1), closed_form(2)]
        assert [s.consumed for s in run.steps] == [(3, 4), (5, 6)]
        assert run.outcome == Converged(closed_form(2))

    def test_depth_fifty(self):
        run = run_nested(harmonic(), START, 50)
        bounds = run.outcome.bounds
        assert bounds == Interval(Fraction(-1, 99), Fraction(1, 100))
        assert 0 in bounds

    @pytest.mark.parametrize("depth", [2, 7, 20, 100])
    def test_matches_closed_form(self, depth):
        run = run_nested(harmonic(), START, depth)
        assert run.intervals == [closed_form(k) for k in range(depth)]

    def test_two_term_file(self):
        run = run_nested(from_terms([0, 1]), Interval(-1, 2), 5)
        assert len(run.steps) == 1
        assert isinstance(run.outcome, FiniteCaseWithinBudget)
        assert run.outcome.witnesses_found == 0 and run.outcome.source_exhausted
        assert run.outcome.eta == Fraction(1, 2)

    def test_eta_perturbed_off_member(self):
        run = run_nested(from_terms([0, 1, Fraction(1, 2)]), Interval(-1, 2), 5)
        assert run.outcome.witnesses_found == 1
        assert run.outcome.eta == Fraction(1, 4)

    def test_budget_exhausted(self):
        # the budget runs out exactly at a step boundary
        run = run_nested(harmonic(), START, 10, budget=6)
        assert isinstance(run.outcome, BudgetExhausted)
        assert len(run.steps) == 2 and run.outcome.scanned_to == 6

    def test_budget_mid_scan_is_finite_case(self):
        run = run_nested(harmonic(), START, 10, budget=5)
        assert isinstance(run.outcome, FiniteCaseWithinBudget)
        assert not run.outcome.source_exhausted

    def test_propagates_not_injective(self):
        terms = [Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(1, 3)]
        src = SequenceSource("file", lambda nu: terms[nu - 1], length=4)
        with pytest.raises(NotInjective):
            run_nested(src, Interval(0, 1), 5)

    def test_depth_validated(self):
        with pytest.raises(ValueError):
            run_nested(harmonic(), START, 0)

    def test_json(self):
        out = run_nested(harmonic(), START, 2).to_json()
        assert out["start"] == {"lo": "-1/1", "hi": "1/2"}
        assert out["steps"] == [{"lo": "-1/3", "hi": "1/4", "consumed": [3, 4]}]
        assert out["outcome"] == "converged"
        assert out["bounds"] == {"lo": "-1/3", "hi": "1/4"}


class TestAudit:
    def test_depth_fifty(self):
        src = harmonic()
        run = run_nested(src, START, 50)
        audit = audit_members_outside(run, src)
        assert audit.ok and audit.checked == 100
        # independent restatement: |w_nu| >= 1/100 keeps every term out
        assert all(abs(harmonic_term(nu)) >= Fraction(1, 100) for nu in range(1, 101))

    def test_one_step(self):
        src = harmonic()
        run = run_nested(src, START, 2)
        audit = audit_members_outside(run, src)
        assert audit.ok and audit.checked == 4
        iv = run.outcome.bounds
        assert (iv.lo, iv.hi) == (harmonic_term(3), harmonic_term(4))

    def test_rationals_reachable_depth(self):
        src = rationals_in(Interval(0, 1))
        run = run_nested(src, Interval(0, 1), 7)
        assert isinstance(run.outcome, Converged)
        audit = audit_members_outside(run, src)
        assert audit.ok and audit.checked == run.last_consumed

    def test_needs_converged(self):
        src = from_terms([0, 1])
        with pytest.raises(ValueError):
            audit_members_outside(run_nested(src, Interval(-1, 2), 5), src)


finite_lists = st.lists(st.fractions(-3, 3, max_denominator=30), min_size=0, max_size=40, unique=True)


class TestProperties:
    @given(finite_lists, st.integers(1, 25))
    def test_nesting_and_exclusion(self, terms, depth):
        src = from_terms(terms)
        run = run_nested(src, Interval(-4, 4), depth)
        ivs = run.intervals
        for a, b in zip(ivs, ivs[1:]):
            assert b.strictly_inside(a)
            assert b.width < a.width
        consumed = [i for s in run.steps for i in s.consumed]
        assert consumed == sorted(set(consumed))
        if isinstance(run.outcome, Converged):
            assert audit_members_outside(run, src).ok
        else:
            last = run.outcome.last
            assert run.outcome.eta in last
            assert run.outcome.eta not in terms[run.last_consumed:]

    @settings(max_examples=30, deadline=None)
    @given(st.fractions(-2, 2, max_denominator=12), st.fractions(Fraction(1, 10), 2, max_denominator=12),
           st.integers(1, 6))
    def test_dense_source_runs(self, lo, width, depth):
        iv = Interval(lo, lo + width)
        src = rationals_in(iv)
        run = run_nested(src, iv, depth)
        assert isinstance(run.outcome, Converged)
        assert audit_members_outside(run, src).ok

    @pytest.mark.parametrize("depth", [1, 10, 100])
    def test_harmonic_exclusion(self, depth):
        src = harmonic()
        assert audit_members_outside(run_nested(src, START, depth), src).ok


def test_dense_source_never_hits_finite_case():
    src = rationals_in(Interval(0, 1))
    run = run_nested(src, Interval(0, 1), 30, budget=10**6)
    assert not isinstance(run.outcome, FiniteCaseWithinBudget), (
        f"finite case after {len(run.steps)} steps; the chain closes in on sqrt(2) - 1 "
        f"and the next pair of terms lies past the scan budget"
    )
