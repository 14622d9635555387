"""Benchmark the whole algorithm family on a handful of instances.

Prints the summary table the harness would write to summary.csv: exact
hypervolume and front-coverage percentages per (instance, algorithm) cell.
With no deadline every exact algorithm reaches 100 of both; add a deadline
or an oracle budget to see them separate.
"""

from releasefront import ALGORITHMS, GeneratorParams, bench, generate_instance
from releasefront.metrics import format_fraction

instances = [generate_instance(GeneratorParams(n=12, m=6, seed=s)) for s in (1, 2, 3)]
algorithms = [a for a in ALGORITHMS if a not in ("spf", "ads")]

result = bench(instances, algorithms, repetitions=1)

print(f"{'instance':>18} {'algorithm':>16} {'%Hyper':>9} {'%PF':>7} {'calls':>7}")
for s in result.summaries:
    print(
        f"{s.instance:>18} {s.algorithm:>16}"
        f" {format_fraction(s.pct_hyper, 3):>9}"
        f" {format_fraction(s.pct_pf, 1):>7}"
        f" {s.mean_oracle_calls:>7.1f}"
    )

for error in result.errors:
    print("error:", error)

print("\nsame matrix at a 12-call oracle budget (partial fronts):")
from releasefront import RunConfig, run, build_bi_objective, hypervolume, Point
from releasefront.metrics import brute_force_front
from fractions import Fraction

for instance in instances[:1]:
    front = brute_force_front(instance).points
    nadir = Point(front[-1].f1, front[0].f2)
    total = hypervolume(front, nadir)
    problem = build_bi_objective(instance)
    for algorithm in ("any-hybrid", "any-tchebycheff", "mix-sht", "econst1-1", "tchebycheff"):
        report = run(problem, RunConfig(algorithm=algorithm, max_oracle_calls=12))
        frac = Fraction(hypervolume(report.archive.points, nadir), total)
        print(f"  {instance.name} {algorithm:>16}: {float(100 * frac):7.3f}% with {len(report.archive)} points")
