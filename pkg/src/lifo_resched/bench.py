"""Random instance generation and the stack-size study.

For every instance and objective the DP tables are built once up to the
largest stack size; each smaller size is then read off the same tables.
"""
from __future__ import annotations

import csv
import hashlib
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .baselines import baseline_value
from .model import Instance
from .moves import apply_moves, stack_metrics
from .solvers import TABLE_OBJECTIVES, LevelProfile

D_LO = (0.2, 0.4, 0.6, 0.8)
D_HI = (0.2, 0.4, 0.6, 0.8, 1.0)
CLASSES = tuple((lo, hi) for lo in D_LO for hi in D_HI if lo <= hi)
STUDY_OBJECTIVES = ("twct", "lmax", "numlate")

CSV_HEADER = ("instance", "objective", "n", "S", "dp_value", "baseline", "gap",
              "moves", "max_stack", "avg_stack", "time_ms")
SUMMARY_HEADER = ("objective", "n", "S", "count", "mean_gap", "mean_moves",
                  "mean_max_stack", "mean_avg_stack", "mean_time_ms")


@dataclass(frozen=True)
class GenConfig:
    n: int
    seed: int
    d_lo: float
    d_hi: float
    count: int = 1

    def __post_init__(self):
        if self.n < 1 or self.count < 0:
            raise ValueError("need n >= 1 and count >= 0")
        if not 0 < self.d_lo <= self.d_hi <= 1:
            raise ValueError(f"need 0 < d_lo <= d_hi <= 1, got {self.d_lo}, {self.d_hi}")

    def rng(self) -> np.random.Generator:
        # one stream per (seed, n, class) so classes do not share draws
        key = [self.seed, self.n, round(self.d_lo * 1000), round(self.d_hi * 1000)]
        return np.random.default_rng(np.random.SeedSequence(key))


def generate(config: GenConfig) -> list[Instance]:
    """p, w ~ U{1..100}; d ~ U{round(P d_lo)..round(P d_hi)}, P the total processing time."""
    rng = config.rng()
    out = []
    for _ in range(config.count):
        p = rng.integers(1, 101, size=config.n)
        w = rng.integers(1, 101, size=config.n)
        total = int(p.sum())
        lo, hi = int(round(total * config.d_lo)), int(round(total * config.d_hi))
        d = rng.integers(lo, hi + 1, size=config.n)
        out.append(Instance.from_lists(p.tolist(), w.tolist(), d.tolist()))
    return out


def instance_id(config: GenConfig, k: int) -> str:
    return f"n{config.n}-l{config.d_lo:g}-u{config.d_hi:g}-{k:02d}"


def gap(objective: str, dp_value: int, baseline: int, instance: Instance) -> Fraction:
    """Distance of the constrained optimum from the unconstrained one.

    Percent for twct, divided by the makespan for lmax, plain difference
    for the late-job counts.
    """
    diff = Fraction(dp_value - baseline)
    if objective == "twct":
        return 100 * diff / baseline if baseline else Fraction(0)
    if objective == "lmax":
        return diff / instance.total_processing
    if objective in ("numlate", "wlate"):
        return diff
    raise ValueError(f"no gap defined for {objective!r}")


@dataclass
class RunRecord:
    instance: str
    objective: str
    n: int
    S: int
    dp_value: int
    baseline: int
    gap: Fraction
    moves: int
    max_stack: int
    avg_stack: float
    time_ms: float
    error: str = ""

    def csv_row(self) -> list:
        if self.error:
            return [self.instance, self.objective, self.n, self.S, "", "", "", "", "", "", ""]
        return [self.instance, self.objective, self.n, self.S, self.dp_value, self.baseline,
                f"{float(self.gap):.6f}", self.moves, self.max_stack, f"{self.avg_stack:.6f}",
                f"{self.time_ms:.3f}"]


def run_instance(name: str, instance: Instance, objectives: Sequence[str], s_max: int) -> list[RunRecord]:
    """All records of one instance; a failing objective yields error rows and the rest go on."""
    out = []
    for objective in objectives:
        try:
            base = baseline_value(objective, instance)
            profile = LevelProfile(objective, instance, s_max)
            for S in range(1, s_max + 1):
                sol = profile.solution(S)
                _, trace = apply_moves(instance, sol.moves, capacity=S)
                moves, max_stack, avg_stack = stack_metrics(trace)
                out.append(RunRecord(name, objective, instance.n, S, sol.value, base,
                                     gap(objective, sol.value, base, instance), moves, max_stack,
                                     avg_stack, 1000 * profile.seconds(S)))
        except Exception as exc:  # recorded per row, the study continues
            msg = f"{type(exc).__name__}: {exc}"
            out.extend(RunRecord(name, objective, instance.n, S, 0, 0, Fraction(0), 0, 0, 0.0, 0.0, msg)
                       for S in range(1, s_max + 1))
    return out


def _run_task(task):
    return run_instance(*task)


def worker_count() -> int:
    cap = os.environ.get("LIFO_RESCHED_THREADS")
    workers = os.cpu_count() or 1
    if cap:
        workers = min(workers, max(1, int(cap)))
    return workers


def study_instances(ns: Iterable[int], count: int, seed: int,
                    classes: Sequence[tuple[float, float]] = CLASSES) -> list[tuple[str, Instance]]:
    out = []
    for n in ns:
        for lo, hi in classes:
            config = GenConfig(n, seed, lo, hi, count)
            out.extend((instance_id(config, k), inst) for k, inst in enumerate(generate(config)))
    return out


def run_study(instances: Sequence[tuple[str, Instance]], s_max: int,
              objectives: Sequence[str] = STUDY_OBJECTIVES, workers: int | None = None) -> list[RunRecord]:
    for obj in objectives:
        if obj not in TABLE_OBJECTIVES:
            raise ValueError(f"unknown objective {obj!r}")
    workers = worker_count() if workers is None else workers
    tasks = [(name, inst, tuple(objectives), s_max) for name, inst in instances]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        chunks = [_run_task(t) for t in tasks]
    records = [r for chunk in chunks for r in chunk]
    order = {obj: k for k, obj in enumerate(objectives)}
    records.sort(key=lambda r: (order[r.objective], r.n, r.instance, r.S))
    return records


def audit(records: Sequence[RunRecord]) -> list[str]:
    """Invariant violations: gap rising with S, too many moves, stack overuse."""
    problems = []
    last: dict[tuple[str, str], RunRecord] = {}
    for r in records:
        if r.error:
            problems.append(f"{r.instance} {r.objective} S={r.S}: {r.error}")
            continue
        if r.gap < 0:
            problems.append(f"{r.instance} {r.objective} S={r.S}: negative gap {float(r.gap)}")
        if r.moves > r.n - 1 or r.max_stack > r.S or r.avg_stack > r.max_stack:
            problems.append(f"{r.instance} {r.objective} S={r.S}: bad stack metrics "
                            f"moves={r.moves} max={r.max_stack} avg={r.avg_stack}")
        prev = last.get((r.instance, r.objective))
        if prev is not None and r.gap > prev.gap:
            problems.append(f"{r.instance} {r.objective}: gap rises from S={prev.S} to S={r.S}")
        last[(r.instance, r.objective)] = r
    return problems


def summarize(records: Sequence[RunRecord]) -> list[dict]:
    """Means per (objective, n, S), ignoring error rows."""
    groups: dict[tuple[str, int, int], list[RunRecord]] = {}
    for r in records:
        if not r.error:
            groups.setdefault((r.objective, r.n, r.S), []).append(r)
    out = []
    for (objective, n, S), rows in groups.items():
        out.append(dict(
            objective=objective, n=n, S=S, count=len(rows),
            mean_gap=float(np.mean([float(r.gap) for r in rows])),
            mean_moves=float(np.mean([r.moves for r in rows])),
            mean_max_stack=float(np.mean([r.max_stack for r in rows])),
            mean_avg_stack=float(np.mean([r.avg_stack for r in rows])),
            mean_time_ms=float(np.mean([r.time_ms for r in rows])),
        ))
    return out


def plateau_report(summary: Sequence[dict]) -> list[str]:
    """Human-readable lines on where each curve ends up; nothing is asserted."""
    lines = []
    keys = sorted({(row["objective"], row["n"]) for row in summary})
    for objective, n in keys:
        rows = sorted((r for r in summary if r["objective"] == objective and r["n"] == n), key=lambda r: r["S"])
        first, final = rows[0], rows[-1]
        lines.append(f"{objective} n={n}: mean gap {first['mean_gap']:.4g} at S={first['S']} -> "
                     f"{final['mean_gap']:.4g} at S={final['S']}; mean moves "
                     f"{first['mean_moves']:.3g} -> {final['mean_moves']:.3g}")
        if objective == "twct":
            lines.append(f"twct n={n}: smallest mean gap {min(r['mean_gap'] for r in rows):.2f}% "
                         f"(whether it stays above 20% is observed, not required)")
    return lines


def records_csv(records: Sequence[RunRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow(r.csv_row())
    return buf.getvalue()


def summary_csv(summary: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SUMMARY_HEADER)
    for row in sorted(summary, key=lambda r: (r["objective"], r["n"], r["S"])):
        writer.writerow([row["objective"], row["n"], row["S"], row["count"],
                         *(f"{row[k]:.6f}" for k in SUMMARY_HEADER[4:])])
    return buf.getvalue()


def read_records(path: str | Path) -> list[RunRecord]:
    """Parse a results CSV back into records (gap as a float-backed Fraction)."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            if row["dp_value"] == "":
                out.append(RunRecord(row["instance"], row["objective"], int(row["n"]), int(row["S"]),
                                     0, 0, Fraction(0), 0, 0, 0.0, 0.0, "failed"))
                continue
            out.append(RunRecord(row["instance"], row["objective"], int(row["n"]), int(row["S"]),
                                 int(row["dp_value"]), int(row["baseline"]), Fraction(row["gap"]),
                                 int(row["moves"]), int(row["max_stack"]), float(row["avg_stack"]),
                                 float(row["time_ms"])))
    return out


def digest(records_text: str) -> str:
    """SHA-256 of a results CSV with the timing column dropped."""
    rows = list(csv.reader(io.StringIO(records_text)))
    col = rows[0].index("time_ms") if rows else -1
    h = hashlib.sha256()
    for row in rows:
        h.update((",".join(v for k, v in enumerate(row) if k != col) + "\n").encode())
    return h.hexdigest()


def write_study(records: Sequence[RunRecord], out_dir: str | Path) -> dict[str, Path]:
    """Write ``results.csv``, ``summary.csv`` and, if any, ``errors.txt``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {"results": out_dir / "results.csv", "summary": out_dir / "summary.csv"}
    paths["results"].write_text(records_csv(records))
    paths["summary"].write_text(summary_csv(summarize(records)))
    errors = [f"{r.instance},{r.objective},{r.S},{r.error}" for r in records if r.error]
    if errors:
        paths["errors"] = out_dir / "errors.txt"
        paths["errors"].write_text("\n".join(errors) + "\n")
    return paths
