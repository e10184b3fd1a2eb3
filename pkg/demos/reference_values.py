"""Print the exact f_plus, f_pp and F values of two three-element functions at x = 1/2."""

from fractions import Fraction

from corrgap import closedform as cf
from corrgap.extensions import concave_closure, multilinear, upper_pairwise
from corrgap.reproduce import REFERENCE_F1, REFERENCE_F2

x = [Fraction(1, 2)] * 3
for name, f in (("f1", REFERENCE_F1), ("f2", REFERENCE_F2)):
    plus = concave_closure(f, x).value
    pp = upper_pairwise(f, x).value
    F = multilinear(f, x)
    assert plus == cf.f_plus_n3(f, x) and pp == cf.f_pp_n3(f, x)
    print(f"{name}: f_plus={plus}  f_pp={pp}  F={F}  f_plus/f_pp={plus / pp}")
    print(f"    slope g2-g1={cf.pp_slope_n3(f)}  optimal omega={cf.optimal_omega_n3(f, x)}")
