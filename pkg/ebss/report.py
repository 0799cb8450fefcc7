"""
ebss/report.py

Benchmark record types and their outputs:
- per-record CSV (plus the per-iteration log in a sibling .iters.csv)
- aggregate tables in the layout of the published result tables
- plain-text run summary

Expansions and generations are shown in millions for the weighted tile and
pancake suites and as raw counts for the Mero and random suites.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from ebss.driver import IterationLog

DOMAINS = ("stp", "pancake", "mero", "random")
ALGORITHMS = ("ebts", "ebgs", "astar", "idastar", "oracle")

STATUS_SOLVED = "solved"
STATUS_UNSOLVABLE = "unsolvable"
STATUS_TIMEOUT = "timeout"
STATUS_RESOURCE = "resource"
STATUS_ERROR = "error"

CSV_COLUMNS = [
    "algorithm",
    "label",
    "domain",
    "c1",
    "c2",
    "delta",
    "resolution",
    "seed",
    "instance",
    "status",
    "cost_raw",
    "cost_int",
    "expansions",
    "generations",
    "heval",
    "time_s",
]

ITER_COLUMNS = ["instance", "round", "phase", "f_max", "n_min", "n_max", "expanded", "status", "cache_hit"]

# domain -> (scale divisor, decimals)
_TABLE_SCALE = {
    "stp": (1_000_000, 1),
    "pancake": (1_000_000, 2),
    "mero": (1, 1),
    "random": (1, 2),
}

_DISPLAY = {"astar": "A*", "idastar": "IDA*", "oracle": "Oracle"}


def format_param(value: Union[int, Fraction]) -> str:
    """Compact parameter text: 1000000 -> 1e6, Fraction(3, 2) -> 3/2."""
    value = Fraction(value)
    if value.denominator == 1:
        n = value.numerator
        if n >= 1000:
            exp = len(str(n)) - 1
            if n == 10 ** exp:
                return f"1e{exp}"
        return str(n)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class ExperimentConfig:
    domain: str
    algorithm: str
    c1: Fraction = Fraction(2)
    c2: Fraction = Fraction(5)
    delta: int = 1
    resolution: int = 1_000_000
    instances: str = "1..1"
    seed: int = 1
    time_limit: Optional[float] = None
    output: Optional[Path] = None
    workers: int = 1
    # Bounded engine for the oracle: dfbnb or dijkstra (default by domain).
    engine: Optional[str] = None
    # Pancake stack size / tile random-walk length.
    size: int = 14
    walk_length: int = 30
    korf_path: Optional[Path] = None
    debug: bool = False

    def __post_init__(self) -> None:
        if self.domain not in DOMAINS:
            raise ValueError(f"unknown domain {self.domain!r} (choose from {', '.join(DOMAINS)})")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r} (choose from {', '.join(ALGORITHMS)})")
        object.__setattr__(self, "c1", Fraction(self.c1))
        object.__setattr__(self, "c2", Fraction(self.c2))
        if self.resolution < 1:
            raise ValueError(f"resolution must be >= 1, got {self.resolution}")
        if self.delta < 1:
            raise ValueError(f"delta must be >= 1, got {self.delta}")

    @property
    def weighted(self) -> bool:
        return self.domain in ("stp", "pancake")

    @property
    def effective_resolution(self) -> int:
        return self.resolution if self.weighted else 1

    def label(self) -> str:
        """Row label such as EBTS(2,5,1e6,1) or EBGS(2,5,1)."""
        if self.algorithm in ("ebts", "ebgs"):
            parts = [format_param(self.c1), format_param(self.c2)]
            if self.weighted:
                parts.append(format_param(self.resolution))
            parts.append(format_param(self.delta))
            return f"{self.algorithm.upper()}({','.join(parts)})"
        return _DISPLAY[self.algorithm]


@dataclass
class RunRecord:
    label: str
    domain: str
    algorithm: str
    c1: str
    c2: str
    delta: int
    resolution: int
    seed: int
    instance: str
    status: str
    cost_int: Optional[int] = None
    cost_raw: Optional[Fraction] = None
    expansions: int = 0
    generations: int = 0
    heuristic_evals: int = 0
    time_s: float = 0.0
    peak_rss_kb: Optional[int] = None
    problem_size: Optional[int] = None
    error: Optional[str] = None
    iterations: list[IterationLog] = field(default_factory=list)

    @property
    def solved(self) -> bool:
        return self.status == STATUS_SOLVED

    @classmethod
    def for_config(cls, config: ExperimentConfig, instance: str, status: str, **kwargs) -> "RunRecord":
        return cls(
            label=config.label(),
            domain=config.domain,
            algorithm=config.algorithm,
            c1=format_param(config.c1),
            c2=format_param(config.c2),
            delta=config.delta,
            resolution=config.effective_resolution,
            seed=config.seed,
            instance=instance,
            status=status,
            **kwargs,
        )


@dataclass(frozen=True)
class AggregateRow:
    label: str
    domain: str
    problem_size: Optional[int]
    instances: int
    solved: int
    expansions: int
    generations: int
    time_s: float


def format_raw_cost(raw: Optional[Fraction]) -> str:
    if raw is None:
        return ""
    return f"{float(raw):.6f}"


def aggregate(records: Iterable[RunRecord]) -> list[AggregateRow]:
    """
    Totals per (label, problem size) in first-appearance order. Expansion,
    generation and time totals cover solved records only.
    """
    groups: dict[tuple[str, str, Optional[int]], list[RunRecord]] = {}
    for r in records:
        size = r.problem_size if r.domain == "mero" else None
        groups.setdefault((r.label, r.domain, size), []).append(r)
    rows = []
    for (label, domain, size), recs in groups.items():
        solved = [r for r in recs if r.solved]
        rows.append(
            AggregateRow(
                label=label,
                domain=domain,
                problem_size=size,
                instances=len(recs),
                solved=len(solved),
                expansions=sum(r.expansions for r in solved),
                generations=sum(r.generations for r in solved),
                time_s=sum(r.time_s for r in solved),
            )
        )
    return rows


def emit_csv(records: Sequence[RunRecord], path: Union[str, Path], include_time: bool = True) -> Path:
    """
    Write one row per record, and the iteration logs to <stem>.iters.csv.
    With include_time=False the time_s column is left out, so reruns of the
    same config and seed produce byte-identical files.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    columns = CSV_COLUMNS if include_time else [c for c in CSV_COLUMNS if c != "time_s"]
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(columns)
        for r in records:
            row = {
                "algorithm": r.algorithm,
                "label": r.label,
                "domain": r.domain,
                "c1": r.c1,
                "c2": r.c2,
                "delta": r.delta,
                "resolution": r.resolution,
                "seed": r.seed,
                "instance": r.instance,
                "status": r.status,
                "cost_raw": format_raw_cost(r.cost_raw),
                "cost_int": "" if r.cost_int is None else r.cost_int,
                "expansions": r.expansions,
                "generations": r.generations,
                "heval": r.heuristic_evals,
                "time_s": f"{r.time_s:.3f}",
            }
            w.writerow([row[c] for c in columns])

    iters_path = path.with_name(f"{path.stem}.iters.csv")
    with open(iters_path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(ITER_COLUMNS)
        for r in records:
            for it in r.iterations:
                w.writerow(
                    [
                        r.instance,
                        it.round,
                        it.phase.value,
                        it.f_max,
                        "" if it.n_min is None else it.n_min,
                        "inf" if it.n_max is None else it.n_max,
                        it.expanded_nodes,
                        it.status,
                        int(it.cache_hit),
                    ]
                )
    return path


def _scaled(value: float, domain: str) -> str:
    divisor, decimals = _TABLE_SCALE.get(domain, (1, 2))
    if divisor == 1:
        return str(int(value))
    return f"{value / divisor:,.{decimals}f}"


def _seconds(value: float, domain: str) -> str:
    _, decimals = _TABLE_SCALE.get(domain, (1, 2))
    return f"{value:,.{decimals}f}"


def emit_table(records: Sequence[RunRecord], style: str = "markdown") -> str:
    """Aggregate table. Mero suites get a problem-size column and no solved/gen columns."""
    if style != "markdown":
        raise ValueError(f"unsupported table style: {style!r}")
    rows = aggregate(records)
    mero = bool(rows) and all(r.domain == "mero" for r in rows)
    lines = []
    if mero:
        lines.append("| Prob. Size | Alg. | Exp. | Time |")
        lines.append("|---|---|---|---|")
        for r in rows:
            lines.append(f"| {r.problem_size} | {r.label} | {r.expansions} | {_seconds(r.time_s, r.domain)} |")
    else:
        lines.append("| Alg. | Solved | Exp. | Gen. | Time |")
        lines.append("|---|---|---|---|---|")
        for r in rows:
            lines.append(
                f"| {r.label} | {r.solved} | {_scaled(r.expansions, r.domain)} | "
                f"{_scaled(r.generations, r.domain)} | {_seconds(r.time_s, r.domain)} |"
            )
    return "\n".join(lines) + "\n"


def write_summary(outdir: Path, run_id: str, manifest: dict, records: Sequence[RunRecord]) -> Path:
    counts: dict[str, int] = {}
    for r in records:
        counts[r.status] = counts.get(r.status, 0) + 1
    lines = [f"run_id: {run_id}"]
    for key in ("domain", "algorithm", "label", "instances", "seed", "time_limit", "workers"):
        if key in manifest:
            lines.append(f"  {key:<11}: {manifest[key]}")
    lines.append(f"  records    : {len(records)} " + " ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    peak = max((r.peak_rss_kb or 0 for r in records), default=0)
    if peak:
        lines.append(f"  peak_rss_kb: {peak}")
    lines.append("")
    lines.append(emit_table(records))
    out = outdir / "summary.txt"
    out.write_text("\n".join(lines))
    return out
