from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from cantor_audit.errors import OutOfRange
from cantor_audit.numerics import (
    DigitStream,
    Interval,
    NumberClass,
    TaggedReal,
    format_rational,
    locate_first_difference,
    parse_interval,
    parse_rational,
    prefix_value,
    rational_to_stream,
    shifted_transcendental,
)


def long_division(p, q, k):
    """Schoolbook digits of p/q (0 <= p < q), remainder by remainder."""
    digits, r = [], p
    for _ in range(k):
        r *= 10
        digits.append(r // q)
        r %= q
    return tuple(digits)


unit_rationals = st.builds(
    lambda q, p: Fraction(p % q, q),
    st.integers(min_value=1, max_value=10**6),
    st.integers(min_value=0, max_value=10**9),
)


class TestParsing:
    @pytest.mark.parametrize("text,value", [
        ("1/2", Fraction(1, 2)),
        ("-1", Fraction(-1)),
        ("0.25", Fraction(1, 4)),
        ("-1/3", Fraction(-1, 3)),
        (" 7 ", Fraction(7)),
    ])
    def test_literals(self, text, value):
        assert parse_rational(text) == value

    @pytest.mark.parametrize("bad", ["abc", "1/0", "1e3", "", "1/2/3", 0.5])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            parse_rational(bad)

    def test_format_is_num_den(self):
        assert format_rational(Fraction(-1)) == "-1/1"
        assert format_rational(Fraction(2, 4)) == "1/2"

    def test_interval(self):
        iv = parse_interval("-1,1/2")
        assert (iv.lo, iv.hi) == (Fraction(-1), Fraction(1, 2))
        with pytest.raises(ValueError):
            parse_interval("1,1")
        with pytest.raises(ValueError):
            parse_interval("1")


class TestInterval:
    def test_open(self):
        iv = Interval(0, 1)
        assert Fraction(1, 2) in iv
        assert 0 not in iv and 1 not in iv

    def test_strict_subset(self):
        assert Interval(Fraction(1, 3), Fraction(1, 2)).strictly_inside(Interval(0, 1))
        assert not Interval(0, 1).strictly_inside(Interval(0, 1))
        assert Interval(0, Fraction(1, 2)).strictly_inside(Interval(0, 1))

    @given(unit_rationals, unit_rationals)
    def test_reduced(self, a, b):
        for q in (a + b, a - b, a * b):
            assert q.denominator > 0
            assert gcd(abs(q.numerator), q.denominator) == 1


class TestRationalToStream:
    def test_one_ninth(self):
        s = rational_to_stream(Fraction(1, 9))
        assert s.prefix(30) == (1,) * 30

    def test_zero(self):
        assert rational_to_stream(0).prefix(10) == (0,) * 10

    def test_quarter(self):
        assert rational_to_stream(Fraction(1, 4)).prefix(6) == long_division(1, 4, 6) == (2, 5, 0, 0, 0, 0)

    @pytest.mark.parametrize("q", [Fraction(-1, 2), Fraction(1), Fraction(3, 2)])
    def test_out_of_range(self, q):
        with pytest.raises(OutOfRange):
            rational_to_stream(q)

    @given(unit_rationals)
    def test_matches_long_division(self, q):
        assert rational_to_stream(q).prefix(40) == long_division(q.numerator, q.denominator, 40)

    @given(st.integers(0, 12), st.integers(0, 12), st.data())
    def test_terminating_tail_is_zero(self, a, b, data):
        d = 2**a * 5**b
        m = data.draw(st.integers(0, d - 1))
        s = rational_to_stream(Fraction(m, d))
        assert s.eventually is not None and s.eventually[1] == 0
        assert s.is_canonical()
        start = max(a, b) + 1
        assert all(s.digit_at(n) == 0 for n in range(start, start + 30))

    @given(unit_rationals, st.integers(1, 50))
    def test_round_trip(self, q, k):
        v = prefix_value(rational_to_stream(q), k)
        assert v <= q < v + Fraction(1, 10**k)

    def test_non_canonical_claim_detected(self):
        nines = DigitStream(lambda n: 9, eventually=(1, 9))
        assert not nines.is_canonical()


class TestFirstDifference:
    def test_table2_row(self):
        ones = rational_to_stream(Fraction(1, 9))
        r3 = DigitStream(lambda n: 1 if n < 3 else 0)
        assert locate_first_difference(ones, r3, 10) == 3

    def test_identity(self):
        s = rational_to_stream(Fraction(3, 7))
        assert locate_first_difference(s, s, 100) is None

    def test_dual_expansion(self):
        a = rational_to_stream(Fraction(1, 4))
        b = DigitStream(lambda n: (2, 4)[n - 1] if n <= 2 else 9)  # 0.24999...
        assert locate_first_difference(a, b, 10) == 2

    def test_budget(self):
        with pytest.raises(ValueError):
            locate_first_difference(rational_to_stream(0), rational_to_stream(0), 0)


class TestPrefixValue:
    def test_direct(self):
        ones = rational_to_stream(Fraction(1, 9))
        assert prefix_value(ones, 3) == Fraction(111, 1000)
        assert prefix_value(rational_to_stream(0), 5) == 0

    def test_one_ninth_gap(self):
        v = prefix_value(rational_to_stream(Fraction(1, 9)), 4)
        assert v == Fraction(1111, 10000)
        assert abs(v - Fraction(1, 9)) == Fraction(1, 90000) <= Fraction(1, 10**4)


class TestTaggedReal:
    def test_natural_and_rational(self):
        assert TaggedReal.rational(3).number_class is NumberClass.NATURAL
        assert TaggedReal.rational(0).number_class is NumberClass.NATURAL
        assert TaggedReal.rational(-3).number_class is NumberClass.RATIONAL
        assert TaggedReal.rational("1/2").number_class is NumberClass.RATIONAL

    def test_symbolic(self):
        t = TaggedReal.symbolic("pi", "1/2", 1)
        assert t.number_class is NumberClass.TRANSCENDENTAL
        assert TaggedReal.symbolic("sqrt2").number_class is NumberClass.ALGEBRAIC_IRRATIONAL
        lo, hi = t.enclosure()
        assert lo == Fraction(5, 2) and hi == 3

    @pytest.mark.parametrize("kwargs", [
        dict(number_class=NumberClass.NATURAL, offset=Fraction(1, 2)),
        dict(number_class=NumberClass.TRANSCENDENTAL, offset=Fraction(0), symbol="pi", scale=Fraction(0)),
        dict(number_class=NumberClass.RATIONAL, offset=Fraction(0), symbol="pi", scale=Fraction(1)),
        dict(number_class=NumberClass.TRANSCENDENTAL, offset=Fraction(0), symbol="nope", scale=Fraction(1)),
    ])
    def test_inconsistent_tags(self, kwargs):
        with pytest.raises(ValueError):
            TaggedReal(**kwargs)

    nonzero = st.fractions(max_denominator=1000).filter(lambda q: q != 0)

    @given(st.sampled_from(["pi", "e", "sqrt2"]), nonzero, st.fractions(max_denominator=1000),
           nonzero, st.fractions(max_denominator=1000))
    def test_class_algebra(self, sym, scale, offset, s, q):
        x = TaggedReal.symbolic(sym, scale, offset)
        y = x.affine(s, q)
        assert y.number_class is x.number_class
        assert y.render_approx == s * x.render_approx + q

    def test_natural_not_preserved(self):
        assert TaggedReal.natural(2).affine(Fraction(1, 3), 0).number_class is NumberClass.RATIONAL

    def test_json_round_trip(self):
        for t in (TaggedReal.symbolic("e", "-2/3", "1/7"), TaggedReal.rational("-5/2"), TaggedReal.natural(4)):
            assert TaggedReal.from_json(t.to_json()) == t

    def test_json_accepts_weaker_rational_tag(self):
        assert TaggedReal.from_json({"class": "rational", "offset": "3"}) == TaggedReal.natural(3)
        with pytest.raises(ValueError):
            TaggedReal.from_json({"class": "natural", "offset": "1/2"})
        with pytest.raises(ValueError):
            TaggedReal.from_json({"class": "rational", "symbol": "pi", "offset": "0"})


class TestShiftedTranscendental:
    def test_unit_radius(self):
        t = shifted_transcendental(0, 1)
        assert t.number_class is NumberClass.TRANSCENDENTAL
        assert (t.offset, t.scale) == (0, Fraction(1, 10))

    def test_small_radius(self):
        t = shifted_transcendental(Fraction(1, 2), Fraction(1, 1000))
        assert (t.offset, t.scale) == (Fraction(1, 2), Fraction(1, 10**4))

    @given(st.fractions(max_denominator=10**4), st.fractions(min_value=Fraction(1, 10**9), max_value=10))
    def test_within_radius_over_bounds(self, target, radius):
        t = shifted_transcendental(target, radius)
        assert t.number_class is NumberClass.TRANSCENDENTAL
        lo, hi = t.enclosure()
        assert abs(lo - target) < radius and abs(hi - target) < radius
        # smallest such power of ten
        assert 10 * t.scale * 4 >= radius

    def test_radius_positive(self):
        with pytest.raises(ValueError):
            shifted_transcendental(0, 0)
