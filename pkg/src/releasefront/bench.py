"""Instance parsing and generation, plus the benchmark harness.

Two public dataset grammars are supported.  The classic grammar groups
requirements into levels and carries an explicit dependency section:

    <levels>
    per level: <count> then that many costs
    <dependency count> then one (i, j) pair per entry
    <customer count> then per customer: weight, request count, request ids

The realistic grammar has no dependency section:

    <requirement count> then that many costs
    <customer count> then per customer: weight, request count, request ids

The harness runs an (instance, algorithm, repetition) matrix, streams one
row per discovered point and summarizes hypervolume and front-coverage
percentages exactly.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .anytime import RunConfig, RunReport, run
from .metrics import (
    InstanceTooLargeError,
    ParetoArchive,
    brute_force_front,
    format_fraction,
    hypervolume,
)
from .model import NrpInstance, Point, loads_instance
from .oracle import solve


class MalformedInstanceError(ValueError):
    """Parse failure with the offending line and column."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class _Tokens:
    def __init__(self, text: str) -> None:
        self._items: list[tuple[str, int, int]] = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            col = 1
            for part in line.split():
                col = line.index(part, col - 1) + 1
                self._items.append((part, lineno, col))
                col += len(part)
        self._pos = 0
        self._last = (1, 1)

    def next_int(self, what: str, minimum: int | None = None) -> int:
        if self._pos >= len(self._items):
            line, col = self._last
            raise MalformedInstanceError(f"unexpected end of input, expected {what}", line, col)
        token, line, col = self._items[self._pos]
        self._pos += 1
        self._last = (line, col)
        try:
            value = int(token)
        except ValueError:
            raise MalformedInstanceError(f"expected {what}, got {token!r}", line, col) from None
        if minimum is not None and value < minimum:
            raise MalformedInstanceError(f"{what} must be >= {minimum}, got {value}", line, col)
        return value

    def expect_end(self) -> None:
        if self._pos < len(self._items):
            token, line, col = self._items[self._pos]
            raise MalformedInstanceError(f"trailing content {token!r}", line, col)

    @property
    def position(self) -> tuple[int, int]:
        return self._last


def _parse_customers(tokens: _Tokens, n: int):
    m = tokens.next_int("customer count", minimum=0)
    weights, requests = [], []
    for k in range(1, m + 1):
        weights.append(tokens.next_int(f"weight of customer {k}", minimum=1))
        count = tokens.next_int(f"request count of customer {k}", minimum=1)
        ids = set()
        for _ in range(count):
            rid = tokens.next_int(f"request id of customer {k}")
            if not 1 <= rid <= n:
                line, col = tokens.position
                raise MalformedInstanceError(
                    f"customer {k} requests unknown requirement {rid}", line, col
                )
            ids.add(rid)
        requests.append(frozenset(ids))
    return tuple(weights), tuple(requests)


def parse_classic(text: str, name: str = "classic") -> NrpInstance:
    """Parse the classic levelled dataset grammar."""
    tokens = _Tokens(text)
    levels = tokens.next_int("level count", minimum=1)
    costs: list[int] = []
    for lvl in range(1, levels + 1):
        count = tokens.next_int(f"requirement count of level {lvl}", minimum=0)
        for _ in range(count):
            costs.append(tokens.next_int(f"cost in level {lvl}", minimum=0))
    n = len(costs)
    dep_count = tokens.next_int("dependency count", minimum=0)
    precedence = set()
    for _ in range(dep_count):
        i = tokens.next_int("dependency source")
        j = tokens.next_int("dependency target")
        if not (1 <= i <= n and 1 <= j <= n):
            line, col = tokens.position
            raise MalformedInstanceError(f"dependency ({i}, {j}) out of range", line, col)
        precedence.add((i, j))
    weights, requests = _parse_customers(tokens, n)
    tokens.expect_end()
    return NrpInstance(name, tuple(costs), weights, requests, frozenset(precedence))


def parse_realistic(text: str, name: str = "realistic") -> NrpInstance:
    """Parse the realistic dataset grammar (no dependency section)."""
    tokens = _Tokens(text)
    n = tokens.next_int("requirement count", minimum=1)
    costs = tuple(tokens.next_int("requirement cost", minimum=0) for _ in range(n))
    weights, requests = _parse_customers(tokens, n)
    tokens.expect_end()
    return NrpInstance(name, costs, weights, requests, frozenset())


def load_instance(path) -> NrpInstance:
    """Load an instance file: canonical JSON, classic or realistic text."""
    path = Path(path)
    text = path.read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        instance = loads_instance(text)
        return instance
    errors = []
    for parser in (parse_classic, parse_realistic):
        try:
            return parser(text, name=path.stem)
        except (MalformedInstanceError, ValueError) as exc:
            errors.append(f"{parser.__name__}: {exc}")
    raise MalformedInstanceError(
        "not parseable as classic or realistic format (%s)" % "; ".join(errors), 1, 1
    )


@dataclass(frozen=True)
class GeneratorParams:
    n: int
    m: int
    max_cost: int = 9
    max_weight: int = 9
    precedence_density: float = 0.1
    request_density: float = 0.25
    seed: int = 0

    def __post_init__(self) -> None:
        if not (0 <= self.precedence_density <= 1 and 0 <= self.request_density <= 1):
            raise ValueError("densities must lie in [0, 1]")
        if self.n < 1 or self.m < 1:
            raise ValueError("need at least one requirement and one stakeholder")


def generate_instance(params: GeneratorParams) -> NrpInstance:
    """Deterministic random instance; precedence runs low id to high id."""
    rng = random.Random(params.seed)
    costs = tuple(rng.randint(1, params.max_cost) for _ in range(params.n))
    weights = tuple(rng.randint(1, params.max_weight) for _ in range(params.m))
    precedence = frozenset(
        (i, j)
        for i in range(1, params.n + 1)
        for j in range(i + 1, params.n + 1)
        if rng.random() < params.precedence_density
    )
    requests = []
    for _ in range(params.m):
        ids = {i for i in range(1, params.n + 1) if rng.random() < params.request_density}
        if not ids:
            ids = {rng.randint(1, params.n)}
        requests.append(frozenset(ids))
    name = f"gen-n{params.n}-m{params.m}-s{params.seed}"
    return NrpInstance(name, costs, weights, tuple(requests), precedence)


# --- harness -----------------------------------------------------------------

BENCH_COLUMNS = (
    "instance",
    "algorithm",
    "run_index",
    "elapsed_ms",
    "event_index",
    "f1",
    "f2",
    "hv",
    "hv_fraction",
    "oracle_calls",
)

SUMMARY_COLUMNS = (
    "instance",
    "algorithm",
    "repetitions",
    "pct_hyper",
    "pct_pf",
    "pearson_pct_hyper",
    "mean_oracle_calls",
    "termination",
)


@dataclass(frozen=True)
class BenchRow:
    instance: str
    algorithm: str
    run_index: int
    elapsed_ms: float
    event_index: int
    f1: int
    f2: int
    hv: int
    hv_fraction: Fraction | None
    oracle_calls: int


@dataclass(frozen=True)
class BenchSummary:
    instance: str
    algorithm: str
    repetitions: int
    pct_hyper: Fraction | None
    pct_pf: Fraction | None
    pearson_pct_hyper: float | None
    mean_oracle_calls: float
    termination: str


@dataclass
class BenchResult:
    rows: list[BenchRow]
    summaries: list[BenchSummary]
    errors: list[str]


def instance_totals(instance: NrpInstance, oracle=solve) -> tuple[int, int, Point]:
    """Total hypervolume, front size and Nadir for percentage denominators.

    Small instances are brute forced; larger ones fall back to one exhaustive
    exact run, which can take long but stays exact.
    """
    try:
        front = brute_force_front(instance)
        points = list(front.points)
    except InstanceTooLargeError:
        from .model import build_bi_objective

        report = run(build_bi_objective(instance), RunConfig("any-hybrid"), oracle=oracle)
        points = list(report.archive.points)
    lo = min(points, key=lambda p: p.f1)
    hi = max(points, key=lambda p: p.f1)
    nadir = Point(hi.f1, lo.f2)
    return hypervolume(points, nadir), len(points), nadir


def replay_rows(
    instance_name: str,
    report: RunReport,
    run_index: int,
    total_hv: int | None,
    nadir: Point | None,
) -> list[BenchRow]:
    """One row per event, with the archive hypervolume replayed exactly."""
    rows = []
    archive = ParetoArchive()
    for idx, event in enumerate(report.events):
        archive.insert(event.point, event.solution)
        hv = hypervolume(archive.points, nadir) if nadir is not None else 0
        fraction = None
        if total_hv is not None:
            fraction = Fraction(1) if total_hv == 0 else Fraction(hv, total_hv)
        rows.append(
            BenchRow(
                instance=instance_name,
                algorithm=report.algorithm,
                run_index=run_index,
                elapsed_ms=event.elapsed * 1000.0,
                event_index=idx,
                f1=event.point.f1,
                f2=event.point.f2,
                hv=hv,
                hv_fraction=fraction,
                oracle_calls=event.oracle_calls,
            )
        )
    return rows


def bench(
    instances,
    algorithms,
    repetitions: int = 1,
    deadline: float | None = None,
    oracle=solve,
    totals: dict[str, tuple[int, int, Point]] | None = None,
    node_budget: int | None = None,
) -> BenchResult:
    """Run the full matrix; a failing cell is recorded, not fatal."""
    from .model import build_bi_objective

    rows: list[BenchRow] = []
    summaries: list[BenchSummary] = []
    errors: list[str] = []
    for instance in instances:
        if totals and instance.name in totals:
            total_hv, pf_size, nadir = totals[instance.name]
        else:
            total_hv, pf_size, nadir = instance_totals(instance, oracle=oracle)
        problem = build_bi_objective(instance)
        for algorithm in algorithms:
            fractions: list[Fraction] = []
            pf_fracs: list[Fraction] = []
            calls: list[int] = []
            termination = "error"
            try:
                for rep in range(repetitions):
                    kwargs = {} if node_budget is None else {"node_budget": node_budget}
                    config = RunConfig(algorithm=algorithm, deadline=deadline, **kwargs)
                    report = run(problem, config, oracle=oracle)
                    termination = report.termination
                    run_rows = replay_rows(instance.name, report, rep, total_hv, nadir)
                    rows.extend(run_rows)
                    final_hv = run_rows[-1].hv if run_rows else 0
                    fractions.append(
                        Fraction(1) if total_hv == 0 else Fraction(final_hv, total_hv)
                    )
                    pf_fracs.append(Fraction(len(report.archive), pf_size))
                    calls.append(report.stats.oracle_calls)
            except Exception as exc:  # per-cell isolation
                errors.append(f"{instance.name}/{algorithm}: {exc}")
                continue
            mean_hyper = sum(fractions, Fraction(0)) / len(fractions) * 100
            mean_pf = sum(pf_fracs, Fraction(0)) / len(pf_fracs) * 100
            if mean_hyper > 0:
                variance = sum(
                    (f * 100 - mean_hyper) ** 2 for f in fractions
                ) / len(fractions)
                pearson = float(variance) ** 0.5 / float(mean_hyper)
            else:
                pearson = None
            summaries.append(
                BenchSummary(
                    instance=instance.name,
                    algorithm=algorithm,
                    repetitions=repetitions,
                    pct_hyper=mean_hyper,
                    pct_pf=mean_pf,
                    pearson_pct_hyper=pearson,
                    mean_oracle_calls=sum(calls) / len(calls),
                    termination=termination,
                )
            )
    return BenchResult(rows, summaries, errors)


def write_rows_csv(rows, fh) -> None:
    writer = csv.writer(fh)
    writer.writerow(BENCH_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                row.instance,
                row.algorithm,
                row.run_index,
                f"{row.elapsed_ms:.3f}",
                row.event_index,
                row.f1,
                row.f2,
                row.hv,
                "" if row.hv_fraction is None else format_fraction(row.hv_fraction * 100, 3),
                row.oracle_calls,
            ]
        )


def write_summary_csv(summaries, fh) -> None:
    writer = csv.writer(fh)
    writer.writerow(SUMMARY_COLUMNS)
    for s in summaries:
        writer.writerow(
            [
                s.instance,
                s.algorithm,
                s.repetitions,
                "" if s.pct_hyper is None else format_fraction(s.pct_hyper, 3),
                "" if s.pct_pf is None else format_fraction(s.pct_pf, 1),
                "" if s.pearson_pct_hyper is None else f"{s.pearson_pct_hyper:.4f}",
                f"{s.mean_oracle_calls:.1f}",
                s.termination,
            ]
        )


def write_progress_dat(rows, fh) -> None:
    """Gnuplot-ready hypervolume progress: elapsed seconds vs percentage."""
    fh.write("# elapsed_s pct_hyper\n")
    for row in rows:
        if row.hv_fraction is None:
            continue
        fh.write(
            f"{row.elapsed_ms / 1000.0:.6f} {format_fraction(row.hv_fraction * 100, 3)}\n"
        )
