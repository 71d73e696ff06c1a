from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dynca import LogTable, Rational, cmp_rational, lsb, msb


def test_cmp_rational_frozen():
    assert cmp_rational(Rational(10, 7), Rational(3, 2)) == -1  # 20 < 21
    assert cmp_rational(Rational(6, 5), Rational(12, 10)) == 0
    assert cmp_rational(Rational(2, 1), Rational(10, 7)) == 1


def test_cmp_rational_rejects_bad_denominator():
    with pytest.raises(ValueError):
        cmp_rational(Rational(1, 0), Rational(1, 1))
    with pytest.raises(ValueError):
        cmp_rational(Rational(1, 2), Rational(1, -3))


def test_bit_helpers_frozen():
    assert msb(0b0110) == 2
    assert lsb(0b0110) == 1
    assert msb(1) == 0 and lsb(1) == 0
    assert msb(2 ** 40) == 40
    with pytest.raises(ValueError):
        msb(0)
    with pytest.raises(ValueError):
        lsb(0)


def test_floor_log_frozen():
    t2 = LogTable(Rational(2, 1), 1 << 20)
    assert t2.floor_log_beta(8) == 3
    t = LogTable(Rational(10, 7), 100)
    assert t.floor_log_beta(1) == 0
    assert t.floor_log_beta(2) == 1  # 10/7 <= 2 < 100/49
    with pytest.raises(ValueError):
        t.floor_log_beta(0)
    with pytest.raises(ValueError):
        LogTable(Rational(1, 1), 10)


@pytest.mark.parametrize("beta", [Rational(2, 1), Rational(10, 7), Rational(3, 2)])
def test_floor_log_exact_rational_bracket(beta):
    limit = 10 ** 6
    t = LogTable(beta, limit)
    b = Fraction(beta.num, beta.den)
    # dense small range plus a coarse sweep of the full range
    points = list(range(1, 2000)) + list(range(2000, limit + 1, 997))
    for r in points:
        i = t.floor_log_beta(r)
        assert b ** i <= r < b ** (i + 1), (beta, r, i)


def test_threshold_list_strictly_increasing():
    for beta in (Rational(2, 1), Rational(10, 7), Rational(3, 2)):
        t = LogTable(beta, 10 ** 6)
        assert all(a < b for a, b in zip(t.thresholds, t.thresholds[1:]))


@given(st.integers(min_value=1, max_value=2 ** 63 - 1))
def test_bit_scans_agree_three_ways(w):
    t = LogTable(Rational(2, 1), 4)
    assert msb(w) == t.msb_by_table(w)
    assert lsb(w) == t.lsb_by_table(w)
    # positional semantics
    assert w >> msb(w) == 1
    assert (w >> lsb(w)) & 1 == 1


def test_bit_scan_random_words(rng):
    t = LogTable(Rational(2, 1), 4)
    for _ in range(10 ** 5):
        w = rng.getrandbits(rng.randrange(1, 64)) | 1
        w <<= rng.randrange(0, 4)
        if w == 0:
            continue
        assert msb(w) == t.msb_by_table(w) == w.bit_length() - 1
        assert lsb(w) == t.lsb_by_table(w)
