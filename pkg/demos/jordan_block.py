"""A 2x2 Jordan block: the smallest generator whose height is not log-convex."""
import numpy as np

from logdecay import classify, criterion_gap, logconvexity_gap, trajectory_scan
from logdecay.dynamics import find_violating_triple

A = np.array([[1.0, 1.0], [0.0, 1.0]])
x = np.array([np.sqrt(3) / 2, 0.5])

# The criterion compares 2 (Re<Ax,x>)^2 with Re<A^2x,x> + |Ax|^2 on the unit sphere.
print("gap at x:", criterion_gap(A, x))

rep = classify(A)
print("numerical abscissa m(A):", rep.numerical_abscissa)
print("spectral abscissa      :", rep.spectral_abscissa)
print("smallest gap found     :", rep.criterion_min_gap, "(exact value is -b^2/8 = -0.125)")
print("hyponormality defect   :", rep.hyponormality_defect)

# Starting the flow at the witness, log h is concave at t = 0 ...
print("h h'' - h'^2 at t=0:", logconvexity_gap(A, x, 0.0))

# ... so some three-point inequality must fail near 0.
(r, s, t), residual = find_violating_triple(A, x)
print(f"violating triple r={r:.3g}, s={s:.3g}, t={t:.3g}: residual {residual:.3e}")

tr = trajectory_scan(A, x)
print("flags:", tr.flags())
