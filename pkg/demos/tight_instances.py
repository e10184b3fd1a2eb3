"""Instances where f_plus / f_pp reaches the bound for their class."""

from fractions import Fraction

from corrgap import closedform as cf
from corrgap.extensions import concave_closure, upper_pairwise
from corrgap.setfn import uniform_matroid_rank

half = Fraction(1, 2)
f = uniform_matroid_rank(2, 1)
plus, pp = concave_closure(f, [half, half]).value, upper_pairwise(f, [half, half]).value
print(f"min(|S|,1), n=2, x=1/2: {plus} / {pp} = {plus / pp}")

for k in (1, 2, 3):
    n = 2 * k
    f = uniform_matroid_rank(n, k)
    x = [half] * n
    plus, pp = concave_closure(f, x).value, upper_pairwise(f, x).value
    print(f"min(|S|,{k}), n={n}, x=1/2: ratio {plus / pp}, bound {cf.kuniform_ratio_bound(k)}")
