"""
Two-point laws: convex order is not enough for two summands
===========================================================

A law on two points ``{a, a + b}`` with mean one is the law of ``U + V``
for some dependence between two U[0,1] variables exactly when ``1/b`` is a
positive integer. Convex order against U[0,2] only sees the mean and the
stop-loss curve, so it accepts many laws that no coupling realises.
"""

from fractions import Fraction as F

from uniform_sums.coupling import synthesize_biatomic, verify_coupling
from uniform_sums.distributions import MixtureDistribution, convex_order_vs_uniform
from uniform_sums.membership import decide

# A rational stand-in for the atoms 1 - 1/pi and 1 + 1/pi.
eps = F(113, 355)
law = MixtureDistribution.discrete([(1 - eps, F(1, 2)), (1 + eps, F(1, 2))])

cx = convex_order_vs_uniform(law, 2)
verdict = decide(law, 2)
print("law:", law)
print("convex order vs U[0,2]:", cx.verdict.value, "max gap", cx.certificate["max_gap"])
print("decide(n=2):", verdict.verdict.value, "via", verdict.rule.value,
      "since 1/b =", verdict.certificate["inverse_b"])

# The same law stretched to mean 3/2 is a sum of three uniforms: for n >= 3
# convex order is the whole story.
three = law.scale_shift(F(3, 2), 0)
print("decide(n=3) of the stretched law:", decide(three, 3).verdict.value)

# Spacings 1/k do come with explicit couplings. Each one is a piecewise
# map Y = intercept - X, checked by exact pushforward.
for k in range(1, 5):
    a = 1 - F(1, 2 * k)
    c = synthesize_biatomic(k, a)
    report = verify_coupling(c)
    pieces = ", ".join(f"[{s.x_lo}, {s.x_hi}) -> {s.intercept} - X" for s in c.segments[:4])
    more = " ..." if len(c.segments) > 4 else ""
    print(f"k={k}: target {c.target}; exact check {'ok' if report.ok else 'FAILED'}; {pieces}{more}")
