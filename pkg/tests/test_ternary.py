from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dendrite_ifs.interval import RationalInterval
from dendrite_ifs.ternary import (
    CConstant,
    CantorPoint,
    DigitFileError,
    DigitStream,
    NotFoundWithinBound,
    PrecisionExhausted,
    StreamExhausted,
    c_digits,
    c_interval,
    enumerate_tuples,
    find_shift,
    occurrence_index,
    shift_digits,
    shift_interval,
    truncation_value,
)


def naive_digits(n):
    """Independent oracle: build the canonical stream by counting in binary."""
    out = [1, 1]
    length = 1
    while len(out) < n:
        for rank in range(2**length):
            bits = format(rank, f"0{length}b")
            out.extend(2 * int(b) for b in bits)
        length += 1
    return "".join(map(str, out[:n]))


def positional_value(digits):
    return sum(Fraction(int(d), 3 ** (i + 1)) for i, d in enumerate(digits))


def test_enumerate_tuples_small():
    assert enumerate_tuples(1) == [(0,), (2,)]
    assert enumerate_tuples(2) == [(0,), (2,), (0, 0), (0, 2), (2, 0), (2, 2)]
    three = enumerate_tuples(3)
    assert len(three) == 14
    assert three[-1] == (2, 2, 2)


@pytest.mark.parametrize("max_len", [1, 4, 7])
def test_enumerate_tuples_count(max_len):
    assert len(enumerate_tuples(max_len)) == sum(2**k for k in range(1, max_len + 1))


def test_enumerate_tuples_rejects_zero():
    with pytest.raises(ValueError):
        enumerate_tuples(0)


def test_c_digits_examples():
    assert c_digits(2) == "11"
    assert c_digits(6) == "110200"
    assert c_digits(12) == "110200022022"


def test_canonical_matches_naive_oracle():
    assert c_digits(5000) == naive_digits(5000)


def test_printed_prefix_agrees_through_digit_six():
    printed = "110200220020222"
    assert c_digits(6) == printed[:6]
    assert c_digits(15) != printed  # enumeration orders differ from digit 7 on


def test_digit_invariants():
    digits = c_digits(20000)
    assert digits[:2] == "11"
    assert set(digits[2:]) == {"0", "2"}


def test_c_interval_examples():
    assert c_interval(2) == RationalInterval(Fraction(4, 9), Fraction(5, 9))
    assert c_interval(6) == RationalInterval(Fraction(342, 729), Fraction(343, 729))
    assert c_interval(4) == RationalInterval(Fraction(38, 81), Fraction(39, 81))


@given(st.integers(min_value=1, max_value=300))
def test_c_interval_nesting_and_width(p):
    outer, inner = c_interval(p), c_interval(p + 1)
    assert outer.contains(inner)
    assert outer.width == 3 * inner.width == Fraction(1, 3**p)


@given(st.integers(min_value=1, max_value=200))
def test_truncation_matches_interval_lower_end(p):
    assert truncation_value(c_digits(p)) == c_interval(p).lo


def test_truncation_value_examples():
    assert truncation_value("1") == Fraction(1, 3)
    assert truncation_value("11") == Fraction(4, 9)
    assert truncation_value("0001121") == Fraction(43, 2187)
    assert truncation_value("0001121") == positional_value("0001121")


@given(st.text(alphabet="012", min_size=1, max_size=40))
def test_truncation_value_positional_oracle(s):
    assert truncation_value(s) == positional_value(s)


def test_shift_digits_examples():
    assert shift_digits(0, 2) == "11"
    assert shift_digits(2, 4) == "0200"
    assert shift_digits(3, 1) == "2"


@given(st.integers(min_value=0, max_value=400), st.integers(min_value=1, max_value=60))
def test_shift_is_substring(k, n):
    assert shift_digits(k, n) == c_digits(k + n)[k:]


def brute_find(target, digits):
    for k in range(2, len(digits) - len(target) + 1):
        if all(digits[k + i] == target[i] for i in range(len(target))):
            return k
    return None


def test_find_shift_examples():
    assert find_shift("0", 10) == 2
    assert find_shift("2", 10) == 3
    # d8 d9 = "22" (end of block "02", start of block "20")
    assert find_shift("22", 20) == 7
    assert brute_find("22", c_digits(20)) == 7


def test_find_shift_not_found():
    with pytest.raises(NotFoundWithinBound):
        find_shift("2222", 12)


@pytest.mark.parametrize("length", [1, 2, 3, 4, 5, 6])
def test_find_shift_against_brute_force_and_closed_form(length):
    digits = c_digits(10_000)
    for t in enumerate_tuples(length):
        if len(t) != length:
            continue
        block = "".join(map(str, t))
        k = find_shift(block, 10_000)
        assert k == brute_find(block, digits)
        closed = occurrence_index(block)
        assert digits[closed : closed + length] == block
        assert k <= closed < 10_000


def test_occurrence_index_small():
    assert occurrence_index("0") == 2
    assert occurrence_index("2") == 3
    assert occurrence_index("22") == 10


@given(st.text(alphabet="02", min_size=1, max_size=6))
@settings(max_examples=60)
def test_found_shift_is_within_distance_bound(block):
    k = find_shift(block, 10_000)
    n = len(block)
    sigma = shift_interval(k, n + 30)
    y = truncation_value(block)
    assert sigma.hi - y < Fraction(1, 3**n)
    assert sigma.lo >= y


def test_cantor_point_validation():
    assert CantorPoint("0202").value == Fraction(20, 81)
    with pytest.raises(ValueError):
        CantorPoint("012")
    with pytest.raises(ValueError):
        CantorPoint("")


def test_explicit_file_mode(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("0.11 0200 2200\n20222")
    stream = DigitStream.from_file(path)
    assert stream.digits(15) == "110200220020222"
    assert c_digits(6, stream) == "110200"
    with pytest.raises(StreamExhausted):
        c_digits(16, stream)
    with pytest.raises(StreamExhausted):
        shift_digits(10, 6, stream)


@pytest.mark.parametrize(
    "text",
    ["12020", "1102x0", "110210", "0.2"],
)
def test_explicit_file_rejects_bad_digits(text):
    with pytest.raises(DigitFileError):
        DigitStream.from_text(text)


def test_repeated_requests_are_identical():
    s = DigitStream.canonical()
    a = s.digits(300)
    s.digits(5000)
    assert s.digits(300) == a


def test_constant_sign_exact_zero_and_refinement():
    c = CConstant(precision_start=4)
    assert c.sign((0, 0, 0)) == 0
    assert c.sign((Fraction(-1, 2), 1)) == -1  # c < 1/2
    # c - 342/729 is tiny and positive: needs more than 4 digits
    assert c.sign((Fraction(-342, 729), 1)) == 1
    assert c.precision_used > 4


def test_constant_precision_exhausted():
    stream = DigitStream.from_text("110200")
    c = CConstant(stream, precision_start=2, precision_cap=6)
    with pytest.raises(PrecisionExhausted):
        c.sign((-truncation_value("110200"), 1))


def test_constant_range_contains_samples():
    c = CConstant()
    poly = (Fraction(1, 7), Fraction(-3), Fraction(5))
    rng = c.range_of(poly)
    iv = c.interval()
    for x in (iv.lo, iv.midpoint, iv.hi):
        value = poly[0] + poly[1] * x + poly[2] * x * x
        assert rng.lo <= value <= rng.hi
