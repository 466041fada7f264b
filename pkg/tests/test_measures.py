import math
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctmlab.measures import change_complexity, entropy, entropy2

from conftest import DATA_DIR


def histogram_entropy_oracle(items) -> float:
    """Direct frequency-count entropy, independent of the implementation."""
    counts = Counter(items)
    n = sum(counts.values())
    total = 0.0
    for c in counts.values():
        p = c / n
        total -= p * math.log2(p)
    return total


class TestEntropy:
    def test_balanced_binary_is_one_bit(self):
        assert entropy("0101010101010101") == 1.0

    def test_balanced_beats_unbalanced(self):
        assert entropy("0101010101010101") > entropy("0100101100100010")

    def test_constant_is_zero(self):
        assert entropy("aaaa") == 0.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            entropy("")

    @given(st.text(alphabet="abcd01", min_size=1, max_size=40))
    @settings(max_examples=200)
    def test_matches_histogram_oracle(self, s):
        assert abs(entropy(s) - histogram_entropy_oracle(s)) < 1e-12

    @given(st.text(alphabet="abc", min_size=1, max_size=30))
    @settings(max_examples=100)
    def test_invariant_under_renaming(self, s):
        renamed = s.translate(str.maketrans("abc", "xyz"))
        assert abs(entropy(s) - entropy(renamed)) < 1e-15

    @given(st.text(alphabet="abcd", min_size=1, max_size=30))
    @settings(max_examples=100)
    def test_bounded_by_log_alphabet(self, s):
        assert entropy(s) <= math.log2(len(set(s))) + 1e-12

    def test_zero_iff_constant(self):
        assert entropy("bbbbbb") == 0.0
        assert entropy("ab") > 0.0


class TestEntropy2:
    def test_single_digram_type_is_zero(self):
        assert entropy2("aaaa") == 0.0

    def test_too_short_rejected(self):
        with pytest.raises(ValueError):
            entropy2("a")

    @given(st.text(alphabet="01", min_size=2, max_size=40))
    @settings(max_examples=200)
    def test_matches_digram_oracle(self, s):
        digrams = [s[i : i + 2] for i in range(len(s) - 1)]
        assert abs(entropy2(s) - histogram_entropy_oracle(digrams)) < 1e-12

    @given(st.text(alphabet="01", min_size=2, max_size=40))
    @settings(max_examples=200)
    def test_reversal_invariance(self, s):
        assert abs(entropy2(s) - entropy2(s[::-1])) < 1e-12

    def test_near_equifrequent_digrams(self):
        s = "01100110011001100110"
        digrams = [s[i : i + 2] for i in range(len(s) - 1)]
        counts = Counter(digrams)
        assert sorted(counts.values()) == [4, 5, 5, 5]
        expected = histogram_entropy_oracle(digrams)
        assert abs(entropy2(s) - expected) < 1e-12
        assert 1.99 < entropy2(s) < 2.0

    def test_equifrequent_maximizes_over_length_12(self):
        best = max(
            entropy2(format(i, "012b")) for i in range(2**12)
        )
        assert abs(entropy2("011001100110") - best) < 1e-12


class TestChangeComplexity:
    def test_constant_is_minimum_of_length_class(self):
        length = 8
        values = [
            change_complexity(format(i, f"0{length}b")) for i in range(2**length)
        ]
        constant = change_complexity("0" * length)
        assert constant == 0.0
        assert all(v > constant for v in values if v != constant)
        assert values.count(0.0) == 2  # the two constant strings only

    def test_non_binary_rejected(self):
        with pytest.raises(ValueError):
            change_complexity("abc")
        with pytest.raises(ValueError):
            change_complexity("0102")

    def test_too_short_rejected(self):
        with pytest.raises(ValueError):
            change_complexity("0")

    def test_any_two_symbols_allowed(self):
        assert change_complexity("HTHT") == change_complexity("0101")
        assert change_complexity("XXXO") == change_complexity("0001")

    @given(st.text(alphabet="01", min_size=2, max_size=24))
    @settings(max_examples=200)
    def test_complement_invariance(self, s):
        flipped = s.translate(str.maketrans("01", "10"))
        assert change_complexity(s) == change_complexity(flipped)

    @given(st.text(alphabet="01", min_size=2, max_size=24))
    @settings(max_examples=200)
    def test_reversal_invariance(self, s):
        assert abs(change_complexity(s) - change_complexity(s[::-1])) < 1e-12

    def test_reference_fixture_suite(self):
        fixture = (DATA_DIR / "change_complexity_fixture.csv").read_text()
        rows = [line.split(",") for line in fixture.splitlines()[1:] if line]
        assert len(rows) == 50
        for s, expected in rows:
            assert abs(change_complexity(s) - float(expected)) < 1e-6
