"""From raw output counts to an ACSS frequency dataset.

Pipeline: canonicalize outputs to patterns, apply the symmetric completions
(reversals, plus the analytic count of immediate halters excluded from the
reduced space), threshold rare patterns, and expose D(s) = count/total and
K(s) = -log2(D(s)).  Also reads/writes the dataset CSV format and imports
published K-table CSVs.

A *pattern* is the equivalence class of strings under symbol renaming; it is
represented by the member whose symbols appear in first-occurrence order
0, 1, 2, ...  All strings sharing a pattern share one K value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .enumeration import RawCounts
from .machines import SpaceSpec

_DIGITS = "0123456789"

NA = float("nan")


class DataError(Exception):
    """Malformed or inconsistent data file."""


def canonicalize(s: str) -> str:
    """Relabel symbols by first occurrence: first distinct -> 0, next -> 1, ...

    Idempotent; two strings canonicalize identically iff one is a symbol
    renaming of the other.
    """
    if not s:
        raise ValueError("cannot canonicalize an empty string")
    mapping: dict[str, str] = {}
    out = []
    for ch in s:
        try:
            out.append(mapping[ch])
        except KeyError:
            if len(mapping) >= 9:
                raise ValueError("more than 9 distinct symbols") from None
            mapping[ch] = _DIGITS[len(mapping)]
            out.append(mapping[ch])
    return "".join(out)


@dataclass(frozen=True)
class CompletedCounts:
    """Pattern counts after symmetric completions, with the halting total."""

    patterns: dict[str, int]
    total: int


def complete(raw: RawCounts, space: SpaceSpec) -> CompletedCounts:
    """Apply symmetric completions to reduced-space output counts.

    Every observed output credits its own pattern and its reversal's pattern
    (palindromic patterns are credited twice -- the rule is uniform).  The
    immediate halters excluded from the reduced space are added analytically:
    m * (m*(2n+1))**(n*m - 1) machines halt on the first step, all collapsing
    to the single-cell pattern "0".
    """
    patterns: dict[str, int] = {}
    for s, count in raw.counts.items():
        for key in (canonicalize(s), canonicalize(s[::-1])):
            patterns[key] = patterns.get(key, 0) + count
    per_symbol = space.actions_per_entry ** (space.n_entries - 1)
    immediate = space.n_symbols * per_symbol
    patterns["0"] = patterns.get("0", 0) + immediate
    return CompletedCounts(patterns, 2 * raw.machines_halted + immediate)


@dataclass(frozen=True)
class FrequencyDataset:
    """Canonical-pattern counts with campaign metadata.

    ``total`` is the completed halting count *before* thresholding, so
    dropping rare patterns never inflates D of the retained ones and the
    Kraft-style bound sum(2**-K) <= 1 holds by construction.
    """

    space: SpaceSpec
    cutoff: int
    mode: str  # "full" | "sample"
    seed: int | None
    generator: str
    threshold: int
    total: int
    patterns: dict[str, int] = field(repr=False)

    def __post_init__(self) -> None:
        if self.mode not in ("full", "sample"):
            raise ValueError(f"mode must be 'full' or 'sample', got {self.mode!r}")
        if self.threshold < 1:
            raise ValueError("threshold must be >= 1")


def build_dataset(
    completed: CompletedCounts,
    threshold: int,
    space: SpaceSpec,
    cutoff: int,
    mode: str,
    seed: int | None = None,
    generator: str = "n/a",
) -> FrequencyDataset:
    """Drop patterns below ``threshold``; keep the pre-threshold total."""
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    kept = {p: c for p, c in completed.patterns.items() if c >= threshold}
    return FrequencyDataset(
        space=space,
        cutoff=cutoff,
        mode=mode,
        seed=seed,
        generator=generator,
        threshold=threshold,
        total=completed.total,
        patterns=kept,
    )


def d_of(dataset: FrequencyDataset, s: str) -> float:
    """Observed output frequency of the pattern of ``s`` (NaN if absent)."""
    count = dataset.patterns.get(canonicalize(s))
    if count is None:
        return NA
    return count / dataset.total


def k_of(dataset: FrequencyDataset, s: str) -> float:
    """Complexity estimate -log2(D(s)) in bits (NaN if the pattern is absent)."""
    count = dataset.patterns.get(canonicalize(s))
    if count is None:
        return NA
    return math.log2(dataset.total) - math.log2(count)


# -- dataset CSV -------------------------------------------------------------


def save_dataset(dataset: FrequencyDataset, path: str | Path) -> None:
    """Write the dataset CSV: metadata comment header, then sorted
    ``pattern,count`` rows.  UTF-8, LF line endings."""
    lines = [
        "# acss-dataset v1",
        f"# space: n={dataset.space.n_states},m={dataset.space.n_symbols}",
        f"# cutoff: {dataset.cutoff}",
        f"# mode: {dataset.mode}",
        f"# seed: {'n/a' if dataset.seed is None else dataset.seed}",
        f"# generator: {dataset.generator}",
        f"# threshold: {dataset.threshold}",
        f"# total: {dataset.total}",
    ]
    lines += [f"{p},{c}" for p, c in sorted(dataset.patterns.items())]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _header_value(line: str, key: str, path) -> str:
    prefix = f"# {key}:"
    if not line.startswith(prefix):
        raise DataError(f"{path}: expected header line '{prefix} ...', got {line!r}")
    return line[len(prefix) :].strip()


def load_dataset(path: str | Path) -> FrequencyDataset:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].strip() != "# acss-dataset v1":
        raise DataError(f"{path}: missing '# acss-dataset v1' header")
    if len(lines) < 8:
        raise DataError(f"{path}: truncated header")
    space_field = _header_value(lines[1], "space", path)
    try:
        n_part, m_part = space_field.split(",")
        space = SpaceSpec(int(n_part.split("=")[1]), int(m_part.split("=")[1]))
    except (ValueError, IndexError) as exc:
        raise DataError(f"{path}: bad space header {space_field!r}") from exc
    cutoff = int(_header_value(lines[2], "cutoff", path))
    mode = _header_value(lines[3], "mode", path)
    seed_field = _header_value(lines[4], "seed", path)
    seed = None if seed_field == "n/a" else int(seed_field)
    generator = _header_value(lines[5], "generator", path)
    threshold = int(_header_value(lines[6], "threshold", path))
    total = int(_header_value(lines[7], "total", path))
    patterns: dict[str, int] = {}
    for lineno, line in enumerate(lines[8:], start=9):
        if not line:
            continue
        try:
            pattern, count = line.split(",")
            patterns[pattern] = int(count)
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: bad row {line!r}") from exc
    try:
        return FrequencyDataset(
            space, cutoff, mode, seed, generator, threshold, total, patterns
        )
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from exc


# -- published K tables ------------------------------------------------------


@dataclass(frozen=True)
class KTable:
    """Per-pattern complexity lookup imported from a published table."""

    alphabet: int
    k_by_pattern: dict[str, float] = field(repr=False)

    def k(self, s: str) -> float:
        return self.k_by_pattern.get(canonicalize(s), NA)

    def d(self, s: str) -> float:
        return 2.0 ** -self.k(s)


def import_published(path: str | Path, alphabet: int) -> KTable:
    """Load a ``string,K`` CSV of published complexity values.

    The file starts with ``# acss-ktable alphabet=<A>``; strings are
    canonicalized on load, so lookups are pattern-based.  An empty file is an
    empty table.
    """
    if alphabet not in (2, 4, 5, 6, 9):
        raise ValueError(f"alphabet must be one of 2,4,5,6,9, got {alphabet}")
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if not text.strip():
        return KTable(alphabet, {})
    lines = text.splitlines()
    header = lines[0].strip()
    if not header.startswith("# acss-ktable alphabet="):
        raise DataError(f"{path}: missing '# acss-ktable alphabet=...' header")
    try:
        declared = int(header.split("=", 1)[1])
    except ValueError as exc:
        raise DataError(f"{path}: bad alphabet in header {header!r}") from exc
    if declared != alphabet:
        raise DataError(
            f"{path}: table is for alphabet {declared}, requested {alphabet}"
        )
    table: dict[str, float] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise DataError(f"{path}:{lineno}: expected 'string,K', got {line!r}")
        s, k_text = parts
        try:
            k = float(k_text)
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: bad K value {k_text!r}") from exc
        if not k > 0 or math.isinf(k):
            raise DataError(f"{path}:{lineno}: K must be finite and > 0, got {k}")
        try:
            key = canonicalize(s)
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: bad string {s!r}: {exc}") from exc
        if key in table:
            raise DataError(f"{path}:{lineno}: duplicate string {s!r}")
        table[key] = k
    return KTable(alphabet, table)
