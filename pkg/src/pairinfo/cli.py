"""Command-line surface: ingest CSV data, estimate, test, run studies.

Subcommands
-----------
estimate    joint entropy and mutual information with confidence intervals
test        likelihood-ratio independence test
trace       convergence trace over growing sample sizes (plot-ready rows)
normality   standardized-estimate distribution vs the standard normal
power       rejection rate of the test under the ingested distribution

Input is CSV in one of two layouts: ``pairs`` (one observation per row,
two label columns) or ``counts`` (one cell per row: x label, y label,
count).  Labels are enumerated in first-appearance order, never sorted.
Study commands treat the ingested table's relative frequencies as the true
distribution to simulate from.

Reports go to ``--output`` (default ``-`` = standard output) as JSON with
a fixed key order and floats rounded to 9 significant digits, so identical
input and configuration produce byte-identical bytes.  The trace command
emits CSV rows by default; ``--output-format`` switches between json and
csv for the two row-oriented studies.  Logs go to standard error only.

Exit codes: 0 success, 2 input or data error, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, TextIO

import numpy as np

from .asymptotics import EstimateReport, estimate_report
from .inference import TestReport, independence_test
from .montecarlo import (
    ConvergenceTrace,
    NormalityStudy,
    RngSpec,
    convergence_trace,
    normality_study,
    rejection_rate,
)
from .pmf import EmpiricalPmf, LabeledAlphabets, estimate_pmf

log = logging.getLogger("pairinfo")

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved invocation, embedded in every report for provenance."""

    command: str
    input: str
    format: str
    header: bool = False
    alpha: float = 0.05
    seed: int = 0
    n: int | None = None
    replicates: int | None = None
    sizes: list[int] | None = None
    measure: str | None = None
    output: str = "-"
    output_format: str = "json"


def parse_pairs_csv(
    stream: TextIO, header: bool = False
) -> tuple[LabeledAlphabets, np.ndarray]:
    """Read one observation per row (x label, y label).

    Returns the alphabets in first-appearance order and the sample as
    1-based flattened outcome indices.  Encoding needs the column-alphabet
    size, so rows are collected first and encoded once the file is read.
    """
    x_order: dict[str, int] = {}
    y_order: dict[str, int] = {}
    rows: list[tuple[int, int]] = []
    reader = csv.reader(stream)
    for lineno, row in enumerate(reader, start=1):
        if header and lineno == 1:
            continue
        if not row:
            continue
        if len(row) != 2:
            raise ValueError(f"line {lineno}: expected 2 fields, got {len(row)}")
        x, y = row[0].strip(), row[1].strip()
        rows.append(
            (x_order.setdefault(x, len(x_order)), y_order.setdefault(y, len(y_order)))
        )
    if not rows:
        raise ValueError("empty input: no data rows")
    alphabets = LabeledAlphabets(tuple(x_order), tuple(y_order))
    cols = len(y_order)
    sample = np.array([cols * xi + yi + 1 for xi, yi in rows], dtype=np.int64)
    return alphabets, sample


def parse_counts_csv(
    stream: TextIO, header: bool = False
) -> tuple[LabeledAlphabets, EmpiricalPmf]:
    """Read one cell per row (x label, y label, count).

    Cells never mentioned get count 0; mentioning a cell twice is an
    error.  At least one count must be positive.
    """
    x_order: dict[str, int] = {}
    y_order: dict[str, int] = {}
    cells: dict[tuple[int, int], int] = {}
    reader = csv.reader(stream)
    for lineno, row in enumerate(reader, start=1):
        if header and lineno == 1:
            continue
        if not row:
            continue
        if len(row) != 3:
            raise ValueError(f"line {lineno}: expected 3 fields, got {len(row)}")
        x, y, raw = (field.strip() for field in row)
        try:
            count = int(raw)
        except ValueError:
            raise ValueError(
                f"line {lineno}: count must be an integer, got {raw!r}"
            ) from None
        if count < 0:
            raise ValueError(f"line {lineno}: count must be nonnegative, got {count}")
        key = (x_order.setdefault(x, len(x_order)), y_order.setdefault(y, len(y_order)))
        if key in cells:
            raise ValueError(f"line {lineno}: duplicate cell ({x}, {y})")
        cells[key] = count
    if not cells:
        raise ValueError("empty input: no data rows")
    alphabets = LabeledAlphabets(tuple(x_order), tuple(y_order))
    counts = np.zeros(alphabets.shape.size, dtype=np.int64)
    cols = len(y_order)
    for (xi, yi), count in cells.items():
        counts[cols * xi + yi] = count
    if counts.sum() == 0:
        raise ValueError("all counts are zero: n = 0")
    return alphabets, EmpiricalPmf(counts, alphabets.shape)


def serialize_counts_csv(alphabets: LabeledAlphabets, emp: EmpiricalPmf) -> str:
    """Counts-layout CSV for an empirical table, one row per cell.

    Zero cells are written too, so parsing the result reproduces the
    alphabets and counts exactly.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    cols = emp.shape.cols
    for xi, x in enumerate(alphabets.x_labels):
        for yi, y in enumerate(alphabets.y_labels):
            writer.writerow([x, y, int(emp.counts[cols * xi + yi])])
    return buf.getvalue()


def parse_sizes(text: str) -> list[int]:
    """Expand ``start:stop:step`` into an inclusive-stop size grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"sizes must be start:stop:step, got {text!r}")
    try:
        start, stop, step = (int(part) for part in parts)
    except ValueError:
        raise ValueError(f"sizes must be three integers, got {text!r}") from None
    if start < 1:
        raise ValueError(f"sizes start must be >= 1, got {start}")
    if step < 1:
        raise ValueError(f"sizes step must be >= 1, got {step}")
    if stop < start:
        raise ValueError(f"sizes stop must be >= start, got {start}:{stop}:{step}")
    return list(range(start, stop + 1, step))


def _nine_sig(value: float) -> float:
    return float(format(value, ".9g"))


def _jsonable(obj):
    """Plain JSON types with floats rounded to 9 significant digits."""
    if isinstance(obj, dict):
        return {key: _jsonable(val) for key, val in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(val) for val in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(val) for val in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _nine_sig(float(obj))
    return obj


def _config_dict(config: RunConfig) -> dict:
    return {
        "command": config.command,
        "input": config.input,
        "format": config.format,
        "header": config.header,
        "alpha": config.alpha,
        "seed": config.seed,
        "n": config.n,
        "replicates": config.replicates,
        "sizes": config.sizes,
        "measure": config.measure,
        "output": config.output,
        "output_format": config.output_format,
    }


def _report_json(config: RunConfig, alphabets: LabeledAlphabets, results: dict) -> str:
    report = {
        "schema_version": SCHEMA_VERSION,
        "config": _config_dict(config),
        "alphabets": {
            "x": list(alphabets.x_labels),
            "y": list(alphabets.y_labels),
        },
        "results": results,
    }
    return json.dumps(_jsonable(report), indent=2) + "\n"


def _estimate_dict(rep: EstimateReport) -> dict:
    return {
        "estimate": rep.estimate,
        "n": rep.n,
        "std_error": rep.std_error,
        "ci_lower": rep.ci_lower,
        "ci_upper": rep.ci_upper,
        "alpha": rep.alpha,
        "variance": {
            "canonical": rep.variance.canonical,
            "alternate": rep.variance.alternate,
            "discrepancy": rep.variance.discrepancy,
        },
    }


def _test_dict(rep: TestReport) -> dict:
    return {
        "gamma_sq": rep.gamma_sq,
        "df": rep.df,
        "threshold": rep.threshold,
        "mi_threshold": rep.mi_threshold,
        "p_value": rep.p_value,
        "reject": rep.reject,
        "alpha": rep.alpha,
        "n": rep.n,
    }


def _config_comment(config: RunConfig) -> str:
    return "# config: " + json.dumps(_jsonable(_config_dict(config)), separators=(",", ":"))


def _trace_csv(config: RunConfig, trace: ConvergenceTrace) -> str:
    buf = io.StringIO()
    buf.write(_config_comment(config) + "\n")
    buf.write(f"# measure: {trace.measure}, true_value: {format(trace.true_value, '.9g')}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["size", "estimate", "abs_error", "a_zn", "ratio"])
    for idx in range(trace.sizes.size):
        writer.writerow(
            [
                int(trace.sizes[idx]),
                format(trace.estimates[idx], ".9g"),
                format(trace.abs_errors[idx], ".9g"),
                format(trace.a_zn[idx], ".9g"),
                format(trace.ratio[idx], ".9g"),
            ]
        )
    return buf.getvalue()


def _trace_json(
    config: RunConfig, alphabets: LabeledAlphabets, trace: ConvergenceTrace
) -> str:
    results = {
        "trace": {
            "measure": trace.measure,
            "true_value": trace.true_value,
            "sizes": trace.sizes,
            "estimates": trace.estimates,
            "abs_errors": trace.abs_errors,
            "a_zn": trace.a_zn,
            "ratio": trace.ratio,
        }
    }
    return _report_json(config, alphabets, results)


def _normality_summary(study: NormalityStudy) -> dict:
    return {
        "measure": study.measure,
        "n": study.n,
        "replicates": study.replicates,
        "true_value": study.true_value,
        "sigma": study.sigma,
        "mean": study.mean,
        "variance": study.variance,
        "ks_distance": study.ks_distance,
    }


def _normality_csv(config: RunConfig, study: NormalityStudy) -> str:
    buf = io.StringIO()
    buf.write(_config_comment(config) + "\n")
    buf.write("# summary: " + json.dumps(_jsonable(_normality_summary(study)), separators=(",", ":")) + "\n")
    buf.write("# bin_edges: " + json.dumps(_jsonable(study.bin_edges)) + "\n")
    buf.write("# bin_counts: " + json.dumps(_jsonable(study.bin_counts)) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "t_value", "qq_theoretical", "qq_order_statistic"])
    for idx in range(study.replicates):
        writer.writerow(
            [
                idx + 1,
                format(study.t_values[idx], ".9g"),
                format(study.qq_theoretical[idx], ".9g"),
                format(study.qq_sample[idx], ".9g"),
            ]
        )
    return buf.getvalue()


def _normality_json(
    config: RunConfig, alphabets: LabeledAlphabets, study: NormalityStudy
) -> str:
    results = {"normality": dict(_normality_summary(study))}
    results["normality"].update(
        {
            "t_values": study.t_values,
            "bin_edges": study.bin_edges,
            "bin_counts": study.bin_counts,
            "qq_theoretical": study.qq_theoretical,
            "qq_sample": study.qq_sample,
        }
    )
    return _report_json(config, alphabets, results)


def _ingest(config: RunConfig) -> tuple[LabeledAlphabets, EmpiricalPmf]:
    path = Path(config.input)
    with path.open(newline="", encoding="utf-8") as stream:
        if config.format == "pairs":
            alphabets, sample = parse_pairs_csv(stream, header=config.header)
            emp = estimate_pmf(sample, alphabets.shape)
        else:
            alphabets, emp = parse_counts_csv(stream, header=config.header)
    log.info(
        "ingested %s: %dx%d alphabet, n = %d",
        config.input,
        emp.shape.rows,
        emp.shape.cols,
        emp.n,
    )
    return alphabets, emp


def _emit(config: RunConfig, text: str) -> None:
    if config.output == "-":
        sys.stdout.write(text)
    else:
        Path(config.output).write_text(text, encoding="utf-8")
        log.info("wrote %s", config.output)


def run(config: RunConfig) -> int:
    """Execute one resolved command; returns the process exit code."""
    alphabets, emp = _ingest(config)
    rng = RngSpec(config.seed)
    if config.command == "estimate":
        results = {
            "joint_entropy": _estimate_dict(
                estimate_report("joint_entropy", emp, config.alpha)
            ),
            "mutual_information": _estimate_dict(
                estimate_report("mutual_information", emp, config.alpha)
            ),
        }
        _emit(config, _report_json(config, alphabets, results))
    elif config.command == "test":
        rep = independence_test(emp, config.alpha)
        _emit(config, _report_json(config, alphabets, {"independence_test": _test_dict(rep)}))
    elif config.command == "trace":
        trace = convergence_trace(emp.as_zpmf(), config.sizes, config.measure, rng)
        if config.output_format == "csv":
            _emit(config, _trace_csv(config, trace))
        else:
            _emit(config, _trace_json(config, alphabets, trace))
    elif config.command == "normality":
        study = normality_study(
            emp.as_zpmf(), config.n, config.replicates, config.measure, rng
        )
        if config.output_format == "csv":
            _emit(config, _normality_csv(config, study))
        else:
            _emit(config, _normality_json(config, alphabets, study))
    elif config.command == "power":
        rate = rejection_rate(
            emp.as_zpmf(), config.n, config.replicates, config.alpha, rng
        )
        results = {
            "rejection_rate": {
                "rate": rate,
                "n": config.n,
                "replicates": config.replicates,
                "alpha": config.alpha,
            }
        }
        _emit(config, _report_json(config, alphabets, results))
    else:
        raise ValueError(f"unknown command {config.command!r}")
    return 0


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the contract here is 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(64, f"{self.prog}: error: {message}\n")


def _add_io_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--input", required=True, help="input CSV path")
    sub.add_argument(
        "--format",
        required=True,
        choices=("pairs", "counts"),
        help="input layout: one observation per row, or one cell count per row",
    )
    sub.add_argument(
        "--header",
        action="store_true",
        help="skip the first input row (header detection is never automatic)",
    )
    sub.add_argument(
        "--output", default="-", help="report path, or - for standard output"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="pairinfo",
        description=(
            "Plug-in joint entropy and mutual information for a pair of "
            "categorical variables, with asymptotic inference, an "
            "independence test, and seeded Monte Carlo studies."
        ),
    )
    commands = parser.add_subparsers(dest="command", required=True)

    est = commands.add_parser("estimate", help="entropy and MI with confidence intervals")
    _add_io_flags(est)
    est.add_argument("--alpha", type=float, default=0.05, help="CI level (default 0.05)")

    test = commands.add_parser("test", help="likelihood-ratio independence test")
    _add_io_flags(test)
    test.add_argument("--alpha", type=float, default=0.05, help="test level (default 0.05)")

    trace = commands.add_parser("trace", help="convergence trace over sample sizes")
    _add_io_flags(trace)
    trace.add_argument("--measure", required=True, choices=("entropy", "mi"))
    trace.add_argument(
        "--sizes", required=True, help="sample-size grid start:stop:step (stop inclusive)"
    )
    trace.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    trace.add_argument(
        "--output-format", choices=("json", "csv"), default="csv",
        help="csv rows (default) or a json report",
    )

    norm = commands.add_parser("normality", help="standardized estimates vs N(0,1)")
    _add_io_flags(norm)
    norm.add_argument("--measure", required=True, choices=("entropy", "mi"))
    norm.add_argument("--n", type=int, required=True, help="sample size per replicate")
    norm.add_argument("--replicates", type=int, required=True)
    norm.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    norm.add_argument(
        "--output-format", choices=("json", "csv"), default="json",
        help="json report (default) or csv rows of T values and QQ pairs",
    )

    power = commands.add_parser("power", help="test rejection rate under the ingested p.m.f.")
    _add_io_flags(power)
    power.add_argument("--n", type=int, required=True, help="sample size per replicate")
    power.add_argument("--replicates", type=int, required=True)
    power.add_argument("--alpha", type=float, default=0.05, help="test level (default 0.05)")
    power.add_argument("--seed", type=int, default=0, help="master seed (default 0)")

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    sizes = parse_sizes(args.sizes) if getattr(args, "sizes", None) else None
    return RunConfig(
        command=args.command,
        input=args.input,
        format=args.format,
        header=args.header,
        alpha=getattr(args, "alpha", 0.05),
        seed=getattr(args, "seed", 0),
        n=getattr(args, "n", None),
        replicates=getattr(args, "replicates", None),
        sizes=sizes,
        measure=getattr(args, "measure", None),
        output=args.output,
        output_format=getattr(args, "output_format", "json"),
    )


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(message)s")
    args = build_parser().parse_args(argv)
    try:
        return run(_config_from_args(args))
    except (ValueError, OSError, UnicodeDecodeError) as exc:
        print(f"pairinfo: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
