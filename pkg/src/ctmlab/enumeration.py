"""Campaign driver: full enumeration or seeded sampling of a reduced machine
space, runtime-cutoff calibration, and parallel output counting.

The reduced space restricts the (state 1, blank) entry to a rightward step
into a non-initial state; the excluded machines (immediate halters, initial
left-movers, initial self-loops) are reinstated by the completion step in
:mod:`ctmlab.distribution`.

Determinism: work is split into fixed-size batches; sample batch ``b`` draws
from ``numpy`` PCG64 seeded with ``SeedSequence(seed, spawn_key=(b,))``.
Batch boundaries never depend on the worker count, and per-batch counts merge
by plain addition, so results are identical for any number of workers.
"""

from __future__ import annotations

import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _engine
from .machines import SpaceSpec

#: Machines per work batch (fixed: part of the sampling determinism contract).
BATCH_SIZE = 1 << 18

#: Name recorded in dataset metadata for the sampling generator.
GENERATOR_NAME = "numpy-pcg64-batched"

DEFAULT_FULL_BUDGET = 10**10


class CalibrationError(RuntimeError):
    """No machine halted during a calibration probe."""


@dataclass(frozen=True)
class Full:
    """Enumerate every machine of the reduced space."""


@dataclass(frozen=True)
class Sample:
    """Draw ``count`` machines uniformly with replacement, seeded."""

    count: int
    seed: int


@dataclass(frozen=True)
class CampaignConfig:
    space: SpaceSpec
    mode: Full | Sample
    cutoff: int

    def __post_init__(self) -> None:
        if self.cutoff < 1:
            raise ValueError(f"cutoff must be >= 1, got {self.cutoff}")
        if isinstance(self.mode, Sample) and self.mode.count < 1:
            raise ValueError("sample count must be >= 1")


@dataclass(frozen=True)
class RuntimeHistogram:
    """Halting-time distribution from a calibration probe."""

    bins: dict[int, int]  # exact step count -> number of halting machines
    probed: int
    probe_cutoff: int

    @property
    def halted(self) -> int:
        return sum(self.bins.values())

    def quantile_cutoff(self, quantile: float) -> int:
        """Smallest step count covering ``quantile`` of all halters."""
        if not 0 < quantile <= 1:
            raise ValueError(f"quantile must be in (0, 1], got {quantile}")
        total = self.halted
        if total == 0:
            raise CalibrationError("no halting machines in probe")
        seen = 0
        for steps in sorted(self.bins):
            seen += self.bins[steps]
            if seen / total >= quantile:
                return steps
        return max(self.bins)  # unreachable: seen/total hits 1.0 on the last bin


@dataclass
class RawCounts:
    """Output-string occurrence counts from one campaign."""

    counts: dict[str, int]
    machines_run: int
    machines_halted: int


def reduced_count(space: SpaceSpec) -> int:
    """Machines in the reduced space: the initial entry keeps only
    m*(n-1) rightward steps; all other entries are unrestricted."""
    if space.n_states < 2:
        raise ValueError("reduced space requires n_states >= 2")
    return (
        space.reduced_initial_actions
        * space.actions_per_entry ** (space.n_entries - 1)
    )


# -- batch plumbing ----------------------------------------------------------


def _full_batches(space: SpaceSpec) -> list[tuple[int, int]]:
    total = reduced_count(space)
    return [(lo, min(lo + BATCH_SIZE, total)) for lo in range(0, total, BATCH_SIZE)]


def _sample_batches(count: int) -> list[tuple[int, int]]:
    # (batch ordinal, size); ordinal seeds the batch RNG stream
    return [
        (ordinal, min(BATCH_SIZE, count - ordinal * BATCH_SIZE))
        for ordinal in range((count + BATCH_SIZE - 1) // BATCH_SIZE)
    ]


def _batch_actions(config: CampaignConfig, batch) -> _engine.ActionArrays:
    if isinstance(config.mode, Full):
        lo, hi = batch
        return _engine.decode_range(lo, hi, config.space, reduced=True)
    ordinal, size = batch
    rng = np.random.default_rng(
        np.random.SeedSequence(entropy=config.mode.seed, spawn_key=(ordinal,))
    )
    return _engine.sample_actions(rng, size, config.space)


def _count_batch(config: CampaignConfig, batch) -> tuple[Counter, int, int]:
    acts = _batch_actions(config, batch)
    counter: Counter = Counter()
    halted = 0
    for chunk in _engine.iter_chunks(acts, config.cutoff):
        halted += _engine.count_chunk_outputs(chunk, config.cutoff, counter)
    return counter, len(acts), halted


def run_campaign(
    config: CampaignConfig,
    workers: int = 1,
    budget: int = DEFAULT_FULL_BUDGET,
    progress: bool = False,
) -> RawCounts:
    """Run the configured campaign and return merged output counts.

    Results are identical for any ``workers`` >= 1 given the same config.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if isinstance(config.mode, Full):
        total = reduced_count(config.space)
        if total > budget:
            raise ValueError(
                f"full enumeration of {total} machines exceeds budget {budget}"
            )
        batches = _full_batches(config.space)
    else:
        batches = _sample_batches(config.mode.count)

    merged: Counter = Counter()
    machines_run = 0
    machines_halted = 0

    def _absorb(result, done):
        nonlocal machines_run, machines_halted
        counter, ran, halted = result
        merged.update(counter)
        machines_run += ran
        machines_halted += halted
        if progress:
            print(
                f"[campaign] batch {done}/{len(batches)}: "
                f"{machines_halted}/{machines_run} halted",
                file=sys.stderr,
                flush=True,
            )

    if workers == 1:
        for i, batch in enumerate(batches, 1):
            _absorb(_count_batch(config, batch), i)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_count_batch, [config] * len(batches), batches)
            for i, result in enumerate(results, 1):
                _absorb(result, i)

    return RawCounts(dict(merged), machines_run, machines_halted)


def calibrate_cutoff(
    space: SpaceSpec,
    probe_size: int,
    probe_cutoff: int,
    quantile: float = 0.999999,
    seed: int = 0,
) -> tuple[int, RuntimeHistogram]:
    """Pick a runtime cutoff from halting-time statistics of a probe.

    Runs ``probe_size`` sampled reduced machines at ``probe_cutoff`` (or the
    whole reduced space exhaustively when ``probe_size`` covers it) and
    returns the smallest step count reached by at least ``quantile`` of the
    halters, together with the halting-time histogram.
    """
    if probe_size < 1:
        raise ValueError("probe_size must be >= 1")
    if probe_cutoff < 1:
        raise ValueError("probe_cutoff must be >= 1")
    if not 0 < quantile <= 1:
        raise ValueError(f"quantile must be in (0, 1], got {quantile}")

    total = reduced_count(space)
    bins: Counter = Counter()
    if probe_size >= total:
        probed = total
        for lo, hi in _full_batches(space):
            acts = _engine.decode_range(lo, hi, space, reduced=True)
            for chunk in _engine.iter_chunks(acts, probe_cutoff):
                steps = _engine.chunk_halting_steps(chunk, probe_cutoff)
                bins.update(Counter(steps.tolist()))
    else:
        probed = probe_size
        for ordinal, size in _sample_batches(probe_size):
            rng = np.random.default_rng(
                np.random.SeedSequence(entropy=seed, spawn_key=(ordinal,))
            )
            acts = _engine.sample_actions(rng, size, space)
            for chunk in _engine.iter_chunks(acts, probe_cutoff):
                steps = _engine.chunk_halting_steps(chunk, probe_cutoff)
                bins.update(Counter(steps.tolist()))

    histogram = RuntimeHistogram(dict(bins), probed, probe_cutoff)
    if histogram.halted == 0:
        raise CalibrationError(
            f"no machine halted within {probe_cutoff} steps; "
            "check the space or raise the probe cutoff"
        )
    return histogram.quantile_cutoff(quantile), histogram
