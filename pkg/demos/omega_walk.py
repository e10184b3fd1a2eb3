"""Walk the one-parameter family of pairwise independent laws on three elements.

omega is the mass on the empty set. E[f] is affine in omega, so the best
pairwise independent law for f sits at one end of the feasible interval.
"""

from fractions import Fraction

from corrgap import closedform as cf
from corrgap.distributions import check_pairwise_independent, cylinder_signature
from corrgap.reproduce import REFERENCE_F1

x = [Fraction(1, 2), Fraction(2, 5), Fraction(1, 3)]
lo, hi = cf.omega_bounds_n3(x)
print(f"x = {[str(v) for v in x]}, omega in [{lo}, {hi}]")
steps = 4
for k in range(steps + 1):
    w = lo + (hi - lo) * Fraction(k, steps)
    d = cf.pairwise_family_n3(x, w)
    assert check_pairwise_independent(d, x)
    triple = cylinder_signature(d, x).sign((1, 2, 3))
    print(f"  omega={str(w):>8}  E[f1]={str(d.expectation(REFERENCE_F1)):>10}  triple sign={triple:+d}")
print(f"f_pp(f1, x) = {cf.f_pp_n3(REFERENCE_F1, x)} at omega = {cf.optimal_omega_n3(REFERENCE_F1, x)}")
