"""Batch comparison of every bound against the exact count."""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Iterator

from ._numeric import ceil_decimal, fraction_str
from .bounds import UNSAT_CERTIFIED, bound_report
from .cnf import CnfFormula, read_formula
from .frustration import moments
from .oracle import enumerate_distribution

BOUND_COLUMNS = ("basic", "sharpened_medium", "medium_cutoff", "optimized_m1", "cs_given_v1", "cutoff_scan",
                 "estimate_ratio")


@dataclass
class CompareRow:
    instance: str
    n: int
    m: int
    exact_count: int | None = None
    v0: Fraction | None = None
    values: dict[str, Fraction] = field(default_factory=dict)
    caps: dict[str, int] = field(default_factory=dict)
    verdict: str = ""
    timings: dict[str, float] = field(default_factory=dict)
    error: str = ""

    @property
    def violations(self) -> list[str]:
        """Sound caps below the true count, or a false UNSAT verdict."""
        if self.exact_count is None:
            return []
        bad = [name for name, cap in self.caps.items() if cap < self.exact_count]
        if self.verdict == UNSAT_CERTIFIED and self.exact_count > 0:
            bad.append("false-unsat")
        return bad


def compare_row(instance: str, source: CnfFormula | str | Path) -> CompareRow:
    row = CompareRow(instance, 0, 0)
    try:
        f = source if isinstance(source, CnfFormula) else read_formula(source)
        row.n, row.m = f.n, f.m
        t0 = time.perf_counter()
        moments(f)
        t1 = time.perf_counter()
        dist = enumerate_distribution(f)
        t2 = time.perf_counter()
        report = bound_report(f, dist)
        t3 = time.perf_counter()
    except Exception as exc:  # recorded in-row; the run continues
        row.error = f"{type(exc).__name__}: {exc}"
        return row
    row.exact_count = dist.counts[0]
    row.v0 = dist.v(0)
    row.values = {e.name: e.value for e in report.entries if e.value is not None}
    row.caps = dict(report.max_solutions)
    row.verdict = report.verdict
    row.timings = {"moments": t1 - t0, "oracle": t2 - t1, "bounds": t3 - t2}
    return row


def _row_job(args):
    return compare_row(*args)


def run_compare(instances: Iterable[tuple[str, CnfFormula | Path]], workers: int = 1) -> Iterator[CompareRow]:
    """Rows in input order; ``workers > 1`` fans out to a process pool."""
    if workers <= 1:
        for name, f in instances:
            yield compare_row(name, f)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(_row_job, instances)


def directory_instances(path) -> list[tuple[str, Path]]:
    """``.cnf`` / ``.json`` files in ``path``, sorted by name; parsed lazily per row."""
    files = sorted(p for p in Path(path).iterdir() if p.suffix in (".cnf", ".json"))
    return [(p.name, p) for p in files]


def csv_header() -> list[str]:
    cols = ["instance", "n", "m", "exact_count", "v0"]
    for name in BOUND_COLUMNS:
        cols += [name, f"{name}_dec", f"{name}_cap"]
    return cols + ["verdict", "t_moments", "t_oracle", "t_bounds", "error"]


def csv_record(row: CompareRow) -> list:
    rec = [row.instance, row.n, row.m,
           "" if row.exact_count is None else row.exact_count,
           "" if row.v0 is None else fraction_str(row.v0)]
    for name in BOUND_COLUMNS:
        v = row.values.get(name)
        rec += ["" if v is None else fraction_str(v), "" if v is None else ceil_decimal(v),
                row.caps.get(name, "")]
    rec.append(row.verdict)
    rec += [f"{row.timings[k]:.6f}" if k in row.timings else "" for k in ("moments", "oracle", "bounds")]
    rec.append(row.error)
    return rec


@dataclass
class CompareSummary:
    instances: int = 0
    errors: int = 0
    violations: int = 0
    ratio_sums: dict[str, float] = field(default_factory=dict)
    ratio_counts: dict[str, int] = field(default_factory=dict)

    def add(self, row: CompareRow):
        self.instances += 1
        if row.error:
            self.errors += 1
            return
        self.violations += len(row.violations)
        if row.v0:
            for name, v in row.values.items():
                if name in BOUND_COLUMNS:
                    self.ratio_sums[name] = self.ratio_sums.get(name, 0.0) + float(v / row.v0)
                    self.ratio_counts[name] = self.ratio_counts.get(name, 0) + 1

    def line(self) -> str:
        parts = [f"instances={self.instances}", f"errors={self.errors}",
                 f"soundness_violations={self.violations}"]
        for name in BOUND_COLUMNS:
            if self.ratio_counts.get(name):
                parts.append(f"mean_ratio_{name}={self.ratio_sums[name] / self.ratio_counts[name]:.4f}")
        return "# summary " + " ".join(parts)


def write_compare_csv(rows: Iterable[CompareRow], out: io.TextIOBase) -> CompareSummary:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(csv_header())
    summary = CompareSummary()
    for row in rows:
        writer.writerow(csv_record(row))
        summary.add(row)
    out.write(summary.line() + "\n")
    return summary
