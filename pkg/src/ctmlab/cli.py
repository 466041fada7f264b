"""The ``ctm`` command line: dataset generation, cutoff calibration,
complexity queries, Bayesian evidence, classical measures, correlation
matrices, and the three response-file analyses.

Report-style subcommands write delimited output to ``--out`` and render a
companion ``.png`` figure next to it (suppress with ``--no-figure``).
Exit codes: 0 success, 2 usage error, 1 data error.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from . import plots
from .distribution import (
    DataError,
    FrequencyDataset,
    KTable,
    build_dataset,
    complete,
    import_published,
    load_dataset,
    save_dataset,
)
from .enumeration import (
    GENERATOR_NAME,
    CalibrationError,
    CampaignConfig,
    Full,
    RawCounts,
    RuntimeHistogram,
    Sample,
    calibrate_cutoff,
    reduced_count,
    run_campaign,
)
from .machines import SpaceSpec
from .measures import change_complexity, entropy, entropy2
from .queries import TableView, bayes, local_complexity
from .stats import (
    PerfectSeparationError,
    logistic_curve,
    logistic_fit_with_cov,
    one_sample_t,
    read_response_csv,
    span_scan,
)


class UsageError(Exception):
    """Bad argument combination not expressible in the parser itself."""


def _fmt(value: float) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "NA"
    if isinstance(value, float):
        return f"{value:.8g}"
    return str(value)


def _write_rows(path: str | Path, header: list[str], rows) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _print_rows(header: list[str], rows) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def _load_table(path: str | Path) -> KTable | FrequencyDataset:
    """Sniff a table file: self-built dataset CSV or published K-table CSV."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"{path}: no such file")
    with path.open(encoding="utf-8") as fh:
        first = fh.readline().strip()
    if first.startswith("# acss-dataset"):
        return load_dataset(path)
    if first.startswith("# acss-ktable alphabet="):
        return import_published(path, int(first.split("=", 1)[1]))
    raise DataError(f"{path}: not an acss dataset or K-table (header {first!r})")


def _read_strings_file(path: str | Path) -> list[str]:
    path = Path(path)
    if not path.exists():
        raise DataError(f"{path}: no such file")
    strings = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            strings.append(line)
    if not strings:
        raise DataError(f"{path}: no strings")
    return strings


def _space(args) -> SpaceSpec:
    try:
        return SpaceSpec(args.states, args.symbols)
    except ValueError as exc:
        raise DataError(str(exc)) from exc


# -- subcommands ---------------------------------------------------------------


def cmd_generate(args) -> int:
    space = _space(args)
    if args.sample is not None:
        if args.seed is None:
            raise UsageError("--sample requires --seed")
        mode = Sample(args.sample, args.seed)
        mode_name, seed = "sample", args.seed
    else:
        mode = Full()
        mode_name, seed = "full", None

    cutoff = args.cutoff
    if cutoff is None:
        probe_seed = args.seed if args.seed is not None else 0
        cutoff, _ = calibrate_cutoff(
            space,
            probe_size=args.probe,
            probe_cutoff=args.probe_cutoff,
            quantile=args.calibrate,
            seed=probe_seed,
        )
        print(f"[generate] calibrated cutoff: {cutoff}", file=sys.stderr)

    config = CampaignConfig(space, mode, cutoff)
    raw = run_campaign(
        config, workers=args.workers, budget=args.budget, progress=args.progress
    )
    if args.raw_out:
        _save_raw_counts(raw, args.raw_out, space, cutoff)
    dataset = build_dataset(
        complete(raw, space),
        threshold=args.threshold,
        space=space,
        cutoff=cutoff,
        mode=mode_name,
        seed=seed,
        generator=GENERATOR_NAME if mode_name == "sample" else "n/a",
    )
    save_dataset(dataset, args.out)
    print(
        f"[generate] ({space.n_states},{space.n_symbols}) {mode_name}: "
        f"{raw.machines_halted}/{raw.machines_run} machines halted, "
        f"{len(dataset.patterns)} patterns -> {args.out}",
        file=sys.stderr,
    )
    return 0


def _save_raw_counts(raw: RawCounts, path, space: SpaceSpec, cutoff: int) -> None:
    lines = [
        "# acss-rawcounts v1",
        f"# space: n={space.n_states},m={space.n_symbols}",
        f"# cutoff: {cutoff}",
        f"# machines_run: {raw.machines_run}",
        f"# machines_halted: {raw.machines_halted}",
    ]
    lines += [f"{s},{c}" for s, c in sorted(raw.counts.items())]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def cmd_calibrate(args) -> int:
    space = _space(args)
    cutoff, hist = calibrate_cutoff(
        space,
        probe_size=args.probe,
        probe_cutoff=args.probe_cutoff,
        quantile=args.quantile,
        seed=args.seed,
    )
    print(
        f"calibrated cutoff: {cutoff} "
        f"(quantile {args.quantile}; {hist.halted} of {hist.probed} probed "
        f"machines halted within {hist.probe_cutoff} steps)"
    )
    if args.out:
        _save_histogram(hist, args.out)
        if not args.no_figure:
            plots.save_figure(
                plots.runtime_histogram_figure(hist), plots.figure_path(args.out)
            )
    return 0


def _save_histogram(hist: RuntimeHistogram, path) -> None:
    lines = [
        "# acss-runtime-histogram v1",
        f"# probed: {hist.probed}",
        f"# probe_cutoff: {hist.probe_cutoff}",
        "steps,halting_machines",
    ]
    lines += [f"{s},{hist.bins[s]}" for s in sorted(hist.bins)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def cmd_query(args) -> int:
    view = TableView(_load_table(args.table))
    if args.alphabet is not None and args.alphabet != view.alphabet:
        raise DataError(
            f"table holds alphabet-{view.alphabet} values, requested {args.alphabet}"
        )
    if args.local is not None:
        rows = []
        for s in args.strings:
            values = local_complexity(s, view, span=args.local)
            rows += [
                [s, i + 1, s[i : i + args.local], _fmt(float(k))]
                for i, k in enumerate(values)
            ]
        _print_rows(["string", "position", "window", "K"], rows)
    else:
        from .queries import acss

        results = acss(args.strings, view)
        _print_rows(
            ["string", "K", "D"],
            [[r.string, _fmt(r.K), _fmt(r.D)] for r in results],
        )
    return 0


def cmd_bayes(args) -> int:
    view = TableView(_load_table(args.table))
    if args.alphabet is not None and args.alphabet != view.alphabet:
        raise DataError(
            f"table holds alphabet-{view.alphabet} values, requested {args.alphabet}"
        )
    if not 0 <= args.prior <= 1:
        raise DataError(f"prior must be in [0, 1], got {args.prior}")
    results = bayes(args.strings, view, prior=args.prior)
    _print_rows(
        ["string", "likelihood_d", "likelihood_ratio", "prob_random"],
        [
            [
                r.string,
                _fmt(r.likelihood_deterministic),
                _fmt(r.bayes_factor),
                _fmt(r.posterior_random),
            ]
            for r in results
        ],
    )
    return 0


def cmd_measures(args) -> int:
    selected = [
        name
        for name, flag in (
            ("entropy", args.entropy),
            ("entropy2", args.entropy2),
            ("change", args.change),
        )
        if flag
    ]
    strict = bool(selected)
    if not selected:
        selected = ["entropy", "entropy2", "change"]
    funcs = {"entropy": entropy, "entropy2": entropy2, "change": change_complexity}
    rows = []
    for s in args.strings:
        for name in selected:
            try:
                value = _fmt(funcs[name](s))
            except ValueError as exc:
                if strict:
                    raise DataError(f"{name}({s!r}): {exc}") from exc
                print(f"[measures] {name}({s!r}): {exc}", file=sys.stderr)
                value = "NA"
            rows.append([s, name, value])
    _print_rows(["string", "measure", "value"], rows)
    return 0


def _nan_on_error(func):
    def wrapped(s: str) -> float:
        try:
            return func(s)
        except ValueError:
            return float("nan")

    return wrapped


def cmd_correlate(args) -> int:
    from .distribution import canonicalize as _canon
    from .stats import correlation_matrix

    strings = _read_strings_file(args.strings)
    measures: dict = {}
    for table_path in args.table:
        view = TableView(_load_table(table_path))
        name = f"K{view.alphabet}"
        if name in measures:
            raise DataError(f"two tables for alphabet {view.alphabet}")
        measures[name] = lambda s, v=view: v.k_for_pattern(_canon(s))
    if not args.no_entropy:
        measures["entropy"] = entropy
    if not args.no_entropy2:
        measures["entropy2"] = entropy2
    if args.change:
        measures["change"] = _nan_on_error(change_complexity)

    names, matrix = correlation_matrix(strings, measures)
    _write_rows(
        args.out,
        ["measure"] + names,
        [[name] + [_fmt(v) for v in matrix[i]] for i, name in enumerate(names)],
    )
    if not args.no_figure:
        columns = np.array(
            [[measures[name](s) for name in names] for s in strings], dtype=float
        )
        columns = columns[~np.isnan(columns).any(axis=1)]
        plots.save_figure(
            plots.scatter_matrix_figure(names, columns), plots.figure_path(args.out)
        )
    return 0


def _records_with_k(records, view: TableView):
    from .distribution import canonicalize as _canon

    ks, kept = [], []
    for record in records:
        k = view.k_for_pattern(_canon(record.string))
        if math.isnan(k):
            print(
                f"[analyze] dropping {record.string!r}: not in table",
                file=sys.stderr,
            )
            continue
        ks.append(k)
        kept.append(record)
    if not kept:
        raise DataError("no response strings found in the table")
    return kept, np.array(ks)


def cmd_analyze(args) -> int:
    records = read_response_csv(args.data)
    view = TableView(_load_table(args.table))
    if args.which == "exp1":
        return _analyze_overcomplexity(args, records, view)
    if args.which == "exp2":
        return _analyze_threshold(args, records, view)
    return _analyze_span(args, records, view)


def _analyze_overcomplexity(args, records, view: TableView) -> int:
    records, ks = _records_with_k(records, view)
    lengths = {len(r.string) for r in records}
    if len(lengths) != 1:
        raise DataError(f"responses must share one length, got {sorted(lengths)}")
    length = lengths.pop()
    population = view.patterns_of_length(length)
    if args.mu0 is not None:
        mu0 = args.mu0
    elif not population:
        raise DataError(
            f"table has no patterns of length {length}; pass --mu0 explicitly"
        )
    elif args.mu_weighting == "pattern":
        mu0 = float(np.mean(list(population.values())))
    else:
        from .queries import _class_size

        weights = np.array([_class_size(p, view.alphabet) for p in population])
        values = np.array(list(population.values()))
        mu0 = float((weights * values).sum() / weights.sum())
    result = one_sample_t(ks, mu0)
    _write_rows(
        args.out,
        ["statistic", "value"],
        [
            ["n", len(records)],
            ["mean_complexity", _fmt(float(ks.mean()))],
            ["mu0", _fmt(mu0)],
            ["mu_weighting", "override" if args.mu0 is not None else args.mu_weighting],
            ["t", _fmt(result.t)],
            ["df", result.df],
            ["p", _fmt(result.p)],
        ],
    )
    if not args.no_figure and population:
        plots.save_figure(
            plots.complexity_violin_figure(ks, list(population.values())),
            plots.figure_path(args.out),
        )
    print(
        f"[analyze exp1] t({result.df}) = {result.t:.4f}, p = {result.p:.3g}",
        file=sys.stderr,
    )
    return 0


def _analyze_threshold(args, records, view: TableView) -> int:
    records, ks = _records_with_k(records, view)
    choices = np.array([r.value for r in records])
    if not set(np.unique(choices)) <= {0.0, 1.0}:
        raise DataError("exp2 responses must be 0/1 choices")
    try:
        fit, cov = logistic_fit_with_cov(ks, choices)
    except PerfectSeparationError as exc:
        raise DataError(str(exc)) from exc
    _write_rows(
        args.out,
        ["statistic", "value"],
        [
            ["n", len(records)],
            ["slope", _fmt(fit.slope)],
            ["intercept", _fmt(fit.intercept)],
            ["odds_ratio", _fmt(fit.odds_ratio)],
            ["threshold", _fmt(fit.threshold)],
            ["p_slope", _fmt(fit.p_value_slope)],
        ],
    )
    grid = np.linspace(float(ks.min()), float(ks.max()), 200)
    curve = logistic_curve(fit, cov, grid)
    curve_path = Path(args.out).with_name(Path(args.out).stem + "_curve.csv")
    _write_rows(
        curve_path,
        ["x", "y", "lower", "upper"],
        [
            [_fmt(float(a)), _fmt(float(b)), _fmt(float(c)), _fmt(float(d))]
            for a, b, c, d in zip(curve["x"], curve["y"], curve["lower"], curve["upper"])
        ],
    )
    if not args.no_figure:
        plots.save_figure(
            plots.logistic_figure(ks, choices, fit, curve), plots.figure_path(args.out)
        )
    print(
        f"[analyze exp2] slope = {fit.slope:.4f}, odds ratio = "
        f"{fit.odds_ratio:.4f}, threshold = {fit.threshold:.4f}",
        file=sys.stderr,
    )
    return 0


def _parse_spans(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
    elif "-" in text:
        lo, hi = text.split("-", 1)
    else:
        return [int(text)]
    return list(range(int(lo), int(hi) + 1))


def _analyze_span(args, records, view: TableView) -> int:
    spans = _parse_spans(args.spans)
    try:
        r2 = span_scan(records, view, spans)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    _write_rows(
        args.out,
        ["span", "r_squared"],
        [[span, _fmt(r2[span])] for span in sorted(r2)],
    )
    if not args.no_figure:
        plots.save_figure(plots.span_r2_figure(r2), plots.figure_path(args.out))
    best = max(r2, key=r2.get)
    print(
        f"[analyze span] best span {best} (R^2 = {r2[best]:.4f})", file=sys.stderr
    )
    return 0


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctm",
        description=(
            "Coding-theorem-method laboratory: enumerate or sample small "
            "Turing machines, build output-frequency datasets, and query the "
            "derived complexity estimates."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="run a campaign and write a dataset CSV")
    gen.add_argument("--states", type=int, required=True)
    gen.add_argument("--symbols", type=int, required=True)
    mode = gen.add_mutually_exclusive_group(required=True)
    mode.add_argument("--full", action="store_true", help="enumerate the reduced space")
    mode.add_argument("--sample", type=int, metavar="COUNT", help="sample with replacement")
    gen.add_argument("--seed", type=int, help="sampling seed (required with --sample)")
    cut = gen.add_mutually_exclusive_group(required=True)
    cut.add_argument("--cutoff", type=int, help="runtime cutoff in steps")
    cut.add_argument(
        "--calibrate",
        type=float,
        metavar="Q",
        help="calibrate the cutoff at halting quantile Q first",
    )
    gen.add_argument("--probe", type=int, default=100_000, help="calibration probe size")
    gen.add_argument("--probe-cutoff", type=int, default=2000)
    gen.add_argument("--threshold", type=int, default=1, help="minimum pattern count kept")
    gen.add_argument("--workers", type=int, default=1)
    gen.add_argument("--budget", type=int, default=10**10, help="full-mode machine budget")
    gen.add_argument("--raw-out", metavar="FILE", help="also write raw output counts")
    gen.add_argument("--progress", action="store_true", help="report batches on stderr")
    gen.add_argument("--out", required=True, metavar="FILE")
    gen.set_defaults(func=cmd_generate)

    cal = sub.add_parser("calibrate", help="pick a runtime cutoff from a probe")
    cal.add_argument("--states", type=int, required=True)
    cal.add_argument("--symbols", type=int, required=True)
    cal.add_argument("--probe", type=int, required=True, help="machines to probe")
    cal.add_argument("--probe-cutoff", type=int, required=True)
    cal.add_argument("--quantile", type=float, default=0.999999)
    cal.add_argument("--seed", type=int, default=0)
    cal.add_argument("--out", metavar="FILE", help="write the halting-time histogram CSV")
    cal.add_argument("--no-figure", action="store_true")
    cal.set_defaults(func=cmd_calibrate)

    qry = sub.add_parser("query", help="K and D lookups, optionally sliding-window")
    qry.add_argument("--table", required=True, metavar="FILE")
    qry.add_argument("--alphabet", type=int)
    qry.add_argument("--local", type=int, metavar="SPAN", help="sliding-window span")
    qry.add_argument("strings", nargs="+", metavar="STRING")
    qry.set_defaults(func=cmd_query)

    bay = sub.add_parser("bayes", help="likelihoods, Bayes factor, posterior")
    bay.add_argument("--table", required=True, metavar="FILE")
    bay.add_argument("--alphabet", type=int)
    bay.add_argument("--prior", type=float, default=0.5, help="prior P(random)")
    bay.add_argument("strings", nargs="+", metavar="STRING")
    bay.set_defaults(func=cmd_bayes)

    mea = sub.add_parser("measures", help="entropy, digram entropy, change complexity")
    mea.add_argument("--entropy", action="store_true")
    mea.add_argument("--entropy2", action="store_true")
    mea.add_argument("--change", action="store_true")
    mea.add_argument("strings", nargs="+", metavar="STRING")
    mea.set_defaults(func=cmd_measures)

    cor = sub.add_parser("correlate", help="correlation matrix of measures")
    cor.add_argument(
        "--table", action="append", required=True, metavar="FILE",
        help="complexity table (repeatable, one per alphabet)",
    )
    cor.add_argument("--strings", required=True, metavar="FILE", help="one string per line")
    cor.add_argument("--no-entropy", action="store_true")
    cor.add_argument("--no-entropy2", action="store_true")
    cor.add_argument("--change", action="store_true", help="include change complexity")
    cor.add_argument("--no-figure", action="store_true")
    cor.add_argument("--out", required=True, metavar="CSV")
    cor.set_defaults(func=cmd_correlate)

    ana = sub.add_parser("analyze", help="response-file analyses")
    ana.add_argument("which", choices=["exp1", "exp2", "span"])
    ana.add_argument("--data", required=True, metavar="CSV", help="string,value responses")
    ana.add_argument("--table", required=True, metavar="FILE")
    ana.add_argument("--spans", default="3..11", help="span range, e.g. 3..11")
    ana.add_argument("--mu0", type=float, help="population mean override (exp1)")
    ana.add_argument(
        "--mu-weighting",
        choices=["pattern", "string"],
        default="pattern",
        help="average the population per pattern or weighted by class size",
    )
    ana.add_argument("--no-figure", action="store_true")
    ana.add_argument("--out", required=True, metavar="CSV")
    ana.set_defaults(func=cmd_analyze)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ctm: usage error: {exc}", file=sys.stderr)
        return 2
    except (DataError, CalibrationError, OSError, ValueError) as exc:
        print(f"ctm: error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
