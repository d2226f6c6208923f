"""Named numerical tolerances.

Every comparison made by the library goes through one of these fields, so a
run can be reproduced exactly from the values recorded in its report.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # ||H - H*|| <= hermitian_rel * ||H|| for eig_hermitian input
    hermitian_rel: float = 1e-10
    # sigma_min(M + lam I) <= singular_rel * max(1, ||M + lam I||) counts as singular
    singular_rel: float = 1e-12
    # gap < -violation_threshold is reported as a criterion violation
    violation_threshold: float = 1e-8
    # |m(A) - spectral abscissa| <= abscissa_rel * (1 + ||A||)
    abscissa_rel: float = 1e-6
    # accretivity band around m(A) = 0, scaled by (1 + ||A||)
    accretive_rel: float = 1e-10
    # pointwise log-convexity: gap >= -gap_rel * (1 + ||A||^2) * |u0|^2
    gap_rel: float = 1e-9
    # three-point residual >= -three_point_abs * |u0|
    three_point_abs: float = 1e-8
    # samples with h below this are dropped from a trajectory
    underflow: float = 1e-280
    # short-time check: |FD h'(0) + Re<Au0,u0>| <= short_time_abs
    short_time_abs: float = 1e-6
    # h'(0) <= -m(A) + slope_abs when the criterion holds
    slope_abs: float = 1e-8
    # fraction of C0 the measured ellipticity ratio must reach
    ellipticity_fraction: float = 0.9

    def replace(self, **changes: float) -> "Tolerances":
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict[str, float]:
        return dataclasses.asdict(self)

    @classmethod
    def names(cls) -> list[str]:
        return [f.name for f in dataclasses.fields(cls)]


DEFAULT = Tolerances()
