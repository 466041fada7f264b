"""User-facing complexity calculus over a loaded frequency table.

Works against either an imported published :class:`~ctmlab.distribution.KTable`
or a self-built :class:`~ctmlab.distribution.FrequencyDataset`.  Queries are
pattern-based: strings sharing a pattern (symbol renaming) share K and D.
Missing values are NaN and propagate through the Bayesian chain instead of
raising, mirroring the NA semantics of the original statistical package.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .distribution import NA, FrequencyDataset, KTable, canonicalize

MIN_LENGTH = 2
MAX_LENGTH = 12

ALPHABETS = (2, 4, 5, 6, 9)


class CoverageWarning(UserWarning):
    """The table is missing patterns at the queried length; the likelihood
    normalization used the available patterns only."""


@dataclass(frozen=True)
class ComplexityResult:
    string: str
    alphabet: int
    K: float  # bits; NaN when missing
    D: float  # 2**-K; NaN when missing


@dataclass(frozen=True)
class BayesResult:
    string: str
    likelihood_random: float  # P(s|R) = 1/m**len(s)
    likelihood_deterministic: float  # P(s|D)
    bayes_factor: float  # P(s|R) / P(s|D)
    posterior_random: float | None  # P(R|s) at the supplied prior, if any


class TableView:
    """Uniform pattern -> K access over a KTable or FrequencyDataset."""

    def __init__(self, table: KTable | FrequencyDataset):
        if isinstance(table, KTable):
            self.alphabet = table.alphabet
            self._k = dict(table.k_by_pattern)
        elif isinstance(table, FrequencyDataset):
            self.alphabet = table.space.n_symbols
            log_total = math.log2(table.total)
            self._k = {
                p: log_total - math.log2(c) for p, c in table.patterns.items()
            }
        else:
            raise TypeError(f"not a complexity table: {table!r}")
        self._by_length: dict[int, dict[str, float]] = {}
        for p, k in self._k.items():
            self._by_length.setdefault(len(p), {})[p] = k
        self._denominators: dict[int, float] = {}

    def k_for_pattern(self, pattern: str) -> float:
        return self._k.get(pattern, NA)

    def patterns_of_length(self, length: int) -> dict[str, float]:
        return self._by_length.get(length, {})


def as_view(table: KTable | FrequencyDataset | TableView) -> TableView:
    return table if isinstance(table, TableView) else TableView(table)


def _check_alphabet(view: TableView, alphabet: int | None) -> int:
    if alphabet is None:
        return view.alphabet
    if alphabet not in ALPHABETS:
        raise ValueError(f"alphabet must be one of {ALPHABETS}, got {alphabet}")
    if alphabet != view.alphabet:
        raise ValueError(
            f"table holds alphabet-{view.alphabet} values, requested {alphabet}"
        )
    return alphabet


def _k_string(view: TableView, s: str, alphabet: int) -> float:
    """K of one string; NaN when it uses too many symbols or is not tabled."""
    if len(set(s)) > alphabet:
        return NA
    return view.k_for_pattern(canonicalize(s))


def _as_strings(strings: str | Iterable[str]) -> list[str]:
    return [strings] if isinstance(strings, str) else list(strings)


def acss(
    strings: str | Iterable[str],
    table: KTable | FrequencyDataset | TableView,
    alphabet: int | None = None,
) -> list[ComplexityResult]:
    """K and D for strings of length 2..12 under the table's alphabet.

    Strings with more distinct symbols than the alphabet, or with no tabled
    pattern, get NaN results.
    """
    view = as_view(table)
    m = _check_alphabet(view, alphabet)
    results = []
    for s in _as_strings(strings):
        if not MIN_LENGTH <= len(s) <= MAX_LENGTH:
            raise ValueError(
                f"string length must be in [{MIN_LENGTH}, {MAX_LENGTH}], "
                f"got {len(s)} for {s!r}"
            )
        k = _k_string(view, s, m)
        results.append(ComplexityResult(s, m, k, 2.0**-k))
    return results


def local_complexity(
    s: str,
    table: KTable | FrequencyDataset | TableView,
    span: int,
    alphabet: int | None = None,
) -> np.ndarray:
    """K of every length-``span`` window of ``s`` (len(s) - span + 1 values)."""
    view = as_view(table)
    m = _check_alphabet(view, alphabet)
    if not MIN_LENGTH <= span <= MAX_LENGTH:
        raise ValueError(f"span must be in [{MIN_LENGTH}, {MAX_LENGTH}], got {span}")
    if span > len(s):
        raise ValueError(f"span {span} exceeds string length {len(s)}")
    return np.array(
        [_k_string(view, s[i : i + span], m) for i in range(len(s) - span + 1)]
    )


# -- Bayesian chain ----------------------------------------------------------


@lru_cache(maxsize=None)
def _stirling2(n: int, k: int) -> int:
    """Partitions of an n-set into k non-empty blocks."""
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * _stirling2(n - 1, k) + _stirling2(n - 1, k - 1)


def _pattern_count_full(length: int, alphabet: int) -> int:
    """Patterns of this length drawing on at most ``alphabet`` symbols."""
    return sum(_stirling2(length, d) for d in range(1, min(length, alphabet) + 1))


def _class_size(pattern: str, alphabet: int) -> int:
    """Strings over the alphabet sharing this pattern (falling factorial)."""
    size = 1
    for i in range(len(set(pattern))):
        size *= alphabet - i
    return size


def _length_denominator(view: TableView, length: int, alphabet: int) -> float:
    """Sum of D over all strings of ``length``, by pattern-class expansion."""
    cached = view._denominators.get(length)
    if cached is not None:
        return cached
    tabled = view.patterns_of_length(length)
    if not tabled:
        raise ValueError(f"table has no patterns of length {length}")
    if len(tabled) < _pattern_count_full(length, alphabet):
        warnings.warn(
            f"table covers {len(tabled)} of "
            f"{_pattern_count_full(length, alphabet)} patterns at length "
            f"{length}; likelihoods at this length are approximate",
            CoverageWarning,
            stacklevel=3,
        )
    denom = sum(
        _class_size(p, alphabet) * 2.0**-k for p, k in tabled.items()
    )
    view._denominators[length] = denom
    return denom


def likelihood_d(
    s: str,
    table: KTable | FrequencyDataset | TableView,
    alphabet: int | None = None,
) -> float:
    """P(s | deterministic process): D(s) normalized over all strings of the
    same length, expanding each tabled pattern by its class size."""
    view = as_view(table)
    m = _check_alphabet(view, alphabet)
    k = _k_string(view, s, m)
    if math.isnan(k):
        return NA
    return 2.0**-k / _length_denominator(view, len(s), m)


def likelihood_ratio(
    s: str,
    table: KTable | FrequencyDataset | TableView,
    alphabet: int | None = None,
) -> float:
    """Bayes factor P(s|R) / P(s|D) with P(s|R) = 1/m**len(s)."""
    view = as_view(table)
    m = _check_alphabet(view, alphabet)
    return m ** -len(s) / likelihood_d(s, view)


def prob_random(
    s: str,
    table: KTable | FrequencyDataset | TableView,
    prior: float = 0.5,
    alphabet: int | None = None,
) -> float:
    """Posterior P(random | s) at prior P(R) = ``prior``."""
    if not 0 <= prior <= 1:
        raise ValueError(f"prior must be in [0, 1], got {prior}")
    if prior == 1:
        return 1.0
    if prior == 0:
        return 0.0
    view = as_view(table)
    m = _check_alphabet(view, alphabet)
    p_random = m ** -len(s) * prior
    return p_random / (p_random + likelihood_d(s, view) * (1 - prior))


def bayes(
    strings: str | Sequence[str],
    table: KTable | FrequencyDataset | TableView,
    prior: float | None = 0.5,
    alphabet: int | None = None,
) -> list[BayesResult]:
    """The full Bayesian record per string; posterior omitted when prior is None."""
    view = as_view(table)
    m = _check_alphabet(view, alphabet)
    results = []
    for s in _as_strings(strings):
        lik_r = float(m ** -len(s))
        lik_d = likelihood_d(s, view)
        results.append(
            BayesResult(
                string=s,
                likelihood_random=lik_r,
                likelihood_deterministic=lik_d,
                bayes_factor=lik_r / lik_d,
                posterior_random=None if prior is None else prob_random(s, view, prior),
            )
        )
    return results
