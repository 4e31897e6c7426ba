"""
Three equally spaced atoms: where the middle mass must start
============================================================

For atoms ``{a - b, a, a + b}`` with mean one, membership for two summands
depends on the middle mass ``f2``. This script locates the boundary with
the exact grid oracle and compares it with the rule used by the decider.

The grid has 60 cells per margin, so masses are resolved to 1/3600.
"""

import time
from fractions import Fraction as F

from uniform_sums.distributions import MixtureDistribution
from uniform_sums.membership import decide, triatomic_threshold
from uniform_sums.oracle import GridSpec, feasible, target_from_atoms


def law(a, b, f2):
    f1 = (1 - f2 - (1 - a) / b) / 2
    return MixtureDistribution.discrete([(a - b, f1), (a, f2), (a + b, f1 + (1 - a) / b)])


spec = GridSpec(60, 2)
unit = F(1, 3600)

for a, b in [(F(1), F(1, 3)), (F(5, 6), F(1, 3)), (F(9, 10), F(1, 5)), (F(5, 6), F(1, 4))]:
    case, threshold = triatomic_threshold(a, b)
    t0 = time.time()
    at = feasible(target_from_atoms(law(a, b, threshold), spec), spec).verdict
    below = "n/a (threshold is 0)"
    if threshold > 0:
        below = feasible(target_from_atoms(law(a, b, threshold - unit), spec), spec).verdict
    print(f"a={a}, b={b}: case {case}, threshold {threshold}; "
          f"oracle at threshold: {at}, one mass unit below: {below} ({time.time() - t0:.1f}s)")
    print("   decide at threshold:", decide(law(a, b, threshold), 2).verdict.value)

# The mixed-case rule printed in some sources reads a + b - 1/2 for odd 1/b.
# At a = 5/6, b = 1/3 that would demand f2 >= 2/3, but f2 = 1/6 is feasible.
print("oracle at a=5/6, b=1/3, f2=1/6:",
      feasible(target_from_atoms(law(F(5, 6), F(1, 3), F(1, 6)), spec), spec).verdict)
