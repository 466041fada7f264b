import math
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctmlab.distribution import (
    NA,
    DataError,
    FrequencyDataset,
    KTable,
    build_dataset,
    canonicalize,
    complete,
    d_of,
    import_published,
    k_of,
    load_dataset,
    save_dataset,
)
from ctmlab.enumeration import CampaignConfig, Full, RawCounts, run_campaign
from ctmlab.machines import SpaceSpec

from oracles import naive_tm


def oracle_pattern(s: str) -> str:
    """Independent first-occurrence relabeling used to cross-check patterns."""
    order = dict.fromkeys(s)
    table = {ch: str(rank) for rank, ch in enumerate(order)}
    return s.translate(str.maketrans(table))


class TestCanonicalize:
    def test_footnote_pair(self):
        assert canonicalize("22311") == canonicalize("11233") == "00122"

    def test_single_symbol(self):
        assert canonicalize("aaa") == "000"

    def test_idempotent(self):
        for s in ("0", "0102", "banana", "22311"):
            assert canonicalize(canonicalize(s)) == canonicalize(s)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            canonicalize("")

    def test_too_many_symbols(self):
        with pytest.raises(ValueError):
            canonicalize("0123456789")

    @given(st.text(alphabet="abcdefghi", min_size=1, max_size=9), st.integers(0, 10**6))
    @settings(max_examples=200)
    def test_permutation_invariance(self, s, seed):
        rng = random.Random(seed)
        symbols = "abcdefghi"
        image = list(symbols)
        rng.shuffle(image)
        permuted = s.translate(str.maketrans(symbols, "".join(image)))
        assert canonicalize(permuted) == canonicalize(s)
        assert canonicalize(s) == oracle_pattern(s)


class TestComplete:
    def test_reversal_credit_2_2(self):
        raw = RawCounts({"01": 5}, machines_run=2000, machines_halted=5)
        done = complete(raw, SpaceSpec(2, 2))
        # "01" reversed is "10", which renames back to pattern "01"
        assert done.patterns["01"] == 10

    def test_palindrome_double_credit(self):
        raw = RawCounts({"010": 3}, machines_run=100, machines_halted=3)
        done = complete(raw, SpaceSpec(2, 2))
        assert done.patterns["010"] == 6

    def test_immediate_halters_2_2(self):
        raw = RawCounts({}, machines_run=2000, machines_halted=0)
        done = complete(raw, SpaceSpec(2, 2))
        assert done.patterns["0"] == 2000  # 10**3 per written symbol
        assert done.total == 2000

    def test_total_identity(self):
        raw = RawCounts({"01": 5, "1": 7}, machines_run=2000, machines_halted=12)
        done = complete(raw, SpaceSpec(2, 2))
        assert done.total == 2 * 12 + 2000
        assert sum(done.patterns.values()) == done.total

    def test_completed_2_2_equals_naive_full_space(self):
        """Reduced campaign + completions == brute force over all 10^4 machines."""
        space = SpaceSpec(2, 2)
        cutoff = 120
        raw = run_campaign(CampaignConfig(space, Full(), cutoff))
        done = complete(raw, space)
        counts, ran, halted = naive_tm.output_counts(
            naive_tm.enumerate_full(2, 2), cutoff
        )
        assert ran == 10_000
        expected: Counter = Counter()
        for s, c in counts.items():
            expected[oracle_pattern(s)] += c
        assert done.patterns == dict(expected)
        assert done.total == halted


def small_dataset(patterns, total, threshold=1, space=SpaceSpec(2, 2)):
    return FrequencyDataset(
        space=space,
        cutoff=100,
        mode="full",
        seed=None,
        generator="n/a",
        threshold=threshold,
        total=total,
        patterns=patterns,
    )


class TestBuildDataset:
    def test_threshold_one_keeps_all(self):
        raw = RawCounts({"01": 2, "011": 1}, 2000, 3)
        done = complete(raw, SpaceSpec(2, 2))
        ds = build_dataset(done, 1, SpaceSpec(2, 2), 100, "full")
        assert ds.patterns == done.patterns

    def test_threshold_drops_small_and_keeps_total(self):
        raw = RawCounts({"01": 4, "011": 1}, 2000, 5)
        done = complete(raw, SpaceSpec(2, 2))
        ds = build_dataset(done, 5, SpaceSpec(2, 2), 100, "full")
        assert "011" not in ds.patterns  # count 2 < 5
        assert ds.patterns["01"] == 8
        assert ds.total == done.total
        assert all(c >= 5 for c in ds.patterns.values())

    def test_threshold_validation(self):
        done = complete(RawCounts({}, 10, 0), SpaceSpec(2, 2))
        with pytest.raises(ValueError):
            build_dataset(done, 0, SpaceSpec(2, 2), 100, "full")


class TestKOf:
    def test_half_total_is_one_bit(self):
        ds = small_dataset({"0": 500, "01": 250, "001": 250}, 1000)
        assert k_of(ds, "0") == 1.0

    def test_missing_is_nan_not_zero(self):
        ds = small_dataset({"0": 500}, 1000)
        assert math.isnan(k_of(ds, "0101"))
        assert math.isnan(d_of(ds, "0101"))

    def test_reversal_and_renaming_share_k(self):
        space = SpaceSpec(2, 2)
        raw = run_campaign(CampaignConfig(space, Full(), 120))
        ds = build_dataset(complete(raw, space), 1, space, 120, "full")
        for s in ("001", "0010", "01101", "000111"):
            if math.isnan(k_of(ds, s)):
                continue
            assert k_of(ds, s) == k_of(ds, s[::-1])
            renamed = s.translate(str.maketrans("01", "10"))
            assert k_of(ds, s) == k_of(ds, renamed)

    def test_matches_log_frequency_oracle(self):
        ds = small_dataset({"0": 123, "01": 456, "011": 78}, 1000)
        for p, c in ds.patterns.items():
            assert abs(k_of(ds, p) - (-math.log2(c / 1000))) < 1e-12
            assert abs(d_of(ds, p) - c / 1000) < 1e-15

    def test_count_monotonicity(self):
        ds = small_dataset({"0": 500, "01": 100, "001": 30}, 1000)
        assert k_of(ds, "0") < k_of(ds, "01") < k_of(ds, "001")

    def test_kraft_bound_on_built_dataset(self):
        space = SpaceSpec(2, 2)
        raw = run_campaign(CampaignConfig(space, Full(), 120))
        for threshold in (1, 5):
            ds = build_dataset(complete(raw, space), threshold, space, 120, "full")
            kraft = sum(2.0 ** -k_of(ds, p) for p in ds.patterns)
            assert kraft <= 1.0 + 1e-12


class TestDatasetCsv:
    def test_round_trip_equality_and_bytes(self, tmp_path):
        space = SpaceSpec(2, 2)
        raw = run_campaign(CampaignConfig(space, Full(), 120))
        ds = build_dataset(
            complete(raw, space), 2, space, 120, "full", generator="n/a"
        )
        path = tmp_path / "ds.csv"
        save_dataset(ds, path)
        loaded = load_dataset(path)
        assert loaded == ds
        path2 = tmp_path / "ds2.csv"
        save_dataset(loaded, path2)
        assert path.read_bytes() == path2.read_bytes()

    def test_header_format(self, tmp_path):
        ds = small_dataset({"0": 5, "01": 3}, 10, threshold=2)
        path = tmp_path / "ds.csv"
        save_dataset(ds, path)
        text = path.read_text()
        assert text.startswith(
            "# acss-dataset v1\n# space: n=2,m=2\n# cutoff: 100\n# mode: full\n"
            "# seed: n/a\n# generator: n/a\n# threshold: 2\n# total: 10\n"
        )
        assert text.endswith("0,5\n01,3\n")
        assert "\r" not in text

    def test_rows_sorted_lexicographically(self, tmp_path):
        ds = small_dataset({"01": 1, "0": 2, "0011": 3, "00": 4}, 10)
        path = tmp_path / "ds.csv"
        save_dataset(ds, path)
        rows = [line.split(",")[0] for line in path.read_text().splitlines()[8:]]
        assert rows == sorted(rows)

    def test_load_rejects_garbage(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("not a dataset\n")
        with pytest.raises(DataError):
            load_dataset(bad)


class TestImportPublished:
    def write_table(self, tmp_path, rows, alphabet=9):
        path = tmp_path / "ktable.csv"
        lines = [f"# acss-ktable alphabet={alphabet}"] + rows
        path.write_text("\n".join(lines) + "\n")
        return path

    def test_published_examples(self, tmp_path):
        path = self.write_table(tmp_path, ["aba,11.90539", "aaa,11.66997"])
        table = import_published(path, 9)
        assert abs(table.k("aba") - 11.90539) < 1e-12
        assert abs(table.d("aba") - 0.0002606874) < 1e-9
        assert abs(table.d("aaa") - 0.0003068947) < 1e-9

    def test_lookup_is_pattern_based(self, tmp_path):
        path = self.write_table(tmp_path, ["aba,11.90539"])
        table = import_published(path, 9)
        assert table.k("010") == table.k("aba") == table.k("xyx")

    def test_missing_is_nan(self, tmp_path):
        path = self.write_table(tmp_path, ["aba,11.90539"])
        table = import_published(path, 9)
        assert math.isnan(table.k("abc"))

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        table = import_published(path, 2)
        assert table.k_by_pattern == {} and math.isnan(table.k("01"))

    def test_duplicate_pattern_rejected(self, tmp_path):
        # "bab" renames to the same pattern as "aba"
        path = self.write_table(tmp_path, ["aba,11.9", "bab,11.9"])
        with pytest.raises(DataError):
            import_published(path, 9)

    def test_nonpositive_k_rejected(self, tmp_path):
        path = self.write_table(tmp_path, ["aba,0.0"])
        with pytest.raises(DataError):
            import_published(path, 9)

    def test_malformed_row_rejected(self, tmp_path):
        path = self.write_table(tmp_path, ["aba"])
        with pytest.raises(DataError):
            import_published(path, 9)

    def test_alphabet_mismatch(self, tmp_path):
        path = self.write_table(tmp_path, ["aba,11.9"], alphabet=9)
        with pytest.raises(DataError):
            import_published(path, 2)
        with pytest.raises(ValueError):
            import_published(path, 3)
