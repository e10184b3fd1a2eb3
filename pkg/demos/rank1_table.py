"""min(|S|, 1) with all marginals 1/n: the pairwise bound stays near 1 while F tends to 1 - 1/e."""

from fractions import Fraction

from corrgap.extensions import multilinear, upper_pairwise
from corrgap.setfn import uniform_matroid_rank

print(f"{'n':>2} {'f_pp':>12} {'F':>12} {'f_pp/F':>8}")
for n in range(2, 8):
    f = uniform_matroid_rank(n, 1)
    x = [Fraction(1, n)] * n
    pp = upper_pairwise(f, x).value
    F = multilinear(f, x)
    print(f"{n:>2} {str(pp):>12} {float(F):>12.6f} {float(pp / F):>8.4f}")
