"""Model a small release-planning problem and compute its exact front.

A release selects requirements (each with a cost) to satisfy stakeholders
(each with a weight); a stakeholder counts as satisfied only when all of
their requested requirements are in, and prerequisites drag extra
requirements along.  Internally both objectives are minimized, so
satisfaction appears negated.
"""

from releasefront import (
    NrpInstance,
    Point,
    Solution,
    brute_force_front,
    classify_supported,
    evaluate,
    feasible,
    hypervolume,
)

instance = NrpInstance(
    name="team-demo",
    costs=(2, 3, 4, 1, 5),
    weights=(5, 4, 2),
    requests=(frozenset({2}), frozenset({3}), frozenset({4, 5})),
    precedence=frozenset({(1, 2), (4, 5)}),
)

print(f"instance {instance.name}: {instance.n} requirements, {instance.m} stakeholders")

# picking stakeholder 1 pulls in requirement 2 and its prerequisite 1
sol = instance.select_stakeholders([1])
print("smallest release satisfying stakeholder 1:", sol.r)
print("feasible:", feasible(instance, sol), " objectives:", evaluate(instance, sol))

# the full Pareto front by enumeration (fine at this size)
front = brute_force_front(instance)
flags = classify_supported(front.points)
print("\nexact Pareto front (satisfaction = -f1, cost = f2):")
for point, supported in zip(front.points, flags):
    marker = "supported" if supported else "non-supported"
    print(f"  satisfaction {-point.f1:3d}  cost {point.f2:3d}   {marker}")

nadir = Point(front.points[-1].f1, front.points[0].f2)
print("\nnadir reference:", nadir.as_pair())
print("total hypervolume:", hypervolume(front.points, nadir))

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    xs = [p.f2 for p in front.points]
    ys = [-p.f1 for p in front.points]
    colors = ["tab:blue" if s else "tab:orange" for s in flags]
    plt.figure(figsize=(5, 4))
    plt.scatter(xs, ys, c=colors)
    plt.xlabel("cost")
    plt.ylabel("satisfaction")
    plt.title("exact front (blue = supported)")
    plt.savefig("demo01_front.png", dpi=120, bbox_inches="tight")
    print("\nwrote demo01_front.png")
except ImportError:
    pass
