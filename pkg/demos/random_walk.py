"""The diffusive regime: a marked walker over a mod-2 linear sea.

The background is the full shift on two unmarked symbols, driven by the
three-cell mod-2 sum; one marked cell rides on top.  Because the rule is
permutative on the sea, fresh background noise arrives at unit speed from
both sides and the mark performs an exact finite-state random walk: its
six-cell neighborhood is a Markov chain whose transition masses are
exactly 1/4.
"""

from fractions import Fraction

from defectca import (
    build_walk_kernel,
    markov_property_test,
    sample_walks,
    stationary_and_drift,
    verify_resolving_system,
)
from defectca import zoo

rule = zoo.diffusive_rule()
sea = zoo.diffusive_background()
delta = {(s,): 0.5 for s in zoo.diffusive_marked_symbols()}

report = verify_resolving_system(rule, sea, sea)
print("resolving system:", report.passed)

kernel = build_walk_kernel(rule, sea, sea, 1, delta_support=list(delta))
print(f"kernel: {len(kernel.states)} reachable states; every entry is",
      set().union(*(set(r.values()) for r in kernel.rows.values())))

classes = stationary_and_drift(kernel)
print("theoretical drift:", classes[0].drift)

trajs, stats = sample_walks(rule, sea, sea, delta, T=5000, n=50, seed=7,
                            kernel=kernel)
print(f"monte carlo ({stats.sample_count} walks x {stats.horizon} steps): "
      f"drift = {stats.empirical_drift:+.5f}, "
      f"variance/step = {stats.variance_per_step:.4f}")

mk = markov_property_test(stats, kernel)
print(f"markov property: {len(mk.rows)} rows checked, max TV = {mk.max_tv:.4f},"
      f" passed = {mk.passed}")

# a biased cousin: a frozen wall eating a random sea, exact drift -1/7
wall_kernel = build_walk_kernel(zoo.wall_rule(), zoo.wall_left_shift(),
                                zoo.wall_right_shift(), 0)
drift = stationary_and_drift(wall_kernel)[0].drift
_, wstats = sample_walks(zoo.wall_rule(), zoo.wall_left_shift(),
                         zoo.wall_right_shift(), {}, T=4000, n=40, seed=11, W=0)
print(f"\nwall walker: exact drift {drift} = {float(drift):.5f}, "
      f"empirical {wstats.empirical_drift:+.5f}")
assert drift == Fraction(-1, 7)
