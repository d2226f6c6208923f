"""Log-convexity of sampled scalar functions."""
import numpy as np

from logdecay import logconvex_scan
from logdecay.dynamics import stretched

t = np.linspace(0.5, 3.0, 101)
for name, f in [("e^t", np.exp(t)), ("e^t - 1", np.exp(t) - 1), ("cosh", np.cosh(t))]:
    r = logconvex_scan(list(zip(t, f)))
    print(f"{name:8s} log-convex: {r.pointwise}  three-point: {r.three_point}")

# Holding a log-convex function constant at its minimum keeps it log-convex,
# but it is then no longer strictly convex.
s = np.linspace(0.0, 3.0, 121)
g = stretched(np.cosh, 0.0, 1.0)
r = logconvex_scan(list(zip(s, g(s))))
print("stretched cosh: log-convex", r.pointwise, " strictly convex", r.strictly_convex,
      " flat on", r.flat_segments)

# Away from a minimum the plateau breaks log-convexity.
h = stretched(lambda x: np.exp(-x), 1.0, 2.0)
r = logconvex_scan(list(zip(s, h(s))))
print("stretched e^-t: log-convex", r.pointwise)
