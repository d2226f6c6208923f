"""Random search for generators that violate the log-convexity criterion."""
import numpy as np

from logdecay import SearchConfig, counterexample_search, numerical_abscissa

for family in ("jordan", "normal_accretive", "complex_symmetric"):
    found = counterexample_search(family, SearchConfig(budget=40, seed=0))
    print(f"{family:18s}: {len(found):2d} violations out of 40")

# Accretive complex-symmetric 2x2 matrices fail too; real symmetric ones cannot.
A, w = counterexample_search("complex_symmetric", SearchConfig(budget=40))[0]
print("example A =\n", np.round(A, 4))
print("symmetric:", np.allclose(A, A.T), " m(A) =", round(numerical_abscissa(A), 4), " gap:", w.gap)
