"""Finite-difference advection-diffusion -u'' +- u' on (0, 1).

With Dirichlet data at both ends the self-commutator of the discrete operator
lives only on the two boundary nodes, so it vanishes on interior-supported
vectors. With a Neumann or Robin end it does not.
"""
import numpy as np

from logdecay import DiscretizationSpec, assemble_advection_diffusion, classify
from logdecay.analysis import hyponormality_defect, interior_mask, restricted_hyponormality_defect
from logdecay.operators import assemble_form, ellipticity_check, norm_identity_check, sin2_bump

for n in (16, 64, 128):
    A = assemble_advection_diffusion(DiscretizationSpec(n=n, sign=1, bc="DD"))
    print(f"DD n={n:4d}: defect {hyponormality_defect(A):12.4g}, "
          f"interior defect {restricted_hyponormality_defect(A, interior_mask(n)):g}")

for bc in ("DN", "DR"):
    A = assemble_advection_diffusion(DiscretizationSpec(n=64, sign=1, bc=bc))
    print(f"{bc}: defect {hyponormality_defect(A):.4g}, adjoint defect {hyponormality_defect(A.T):.4g}")

# |A u|^2 = |u''|^2 + |u'|^2 for u vanishing near the ends, up to O(h)
bump = sin2_bump(0.25, 0.75)
for n in (64, 128, 256):
    r = norm_identity_check(DiscretizationSpec(n=n), bump)
    print(f"norm identity n={n}: residual {r.residual:.4g} (discrete {r.discrete_residual:.1e})")

# The form int u'v' + u'v is elliptic on H^1 with constant min(1/2, (beta-alpha)^-2).
rec = ellipticity_check(assemble_form(DiscretizationSpec(n=128)))
print(f"ellipticity: measured {rec.measured_min_ratio:.5f} against C0 = {rec.C0}")

# The discrete matrices are nonnormal, so the criterion fails somewhere on the
# sphere. The violation is a vanishing fraction of |A|^2 as the mesh refines.
for n in (8, 16, 32):
    A = assemble_advection_diffusion(DiscretizationSpec(n=n, sign=1, bc="DD"))
    rep = classify(A)
    norm2 = np.linalg.norm(A, 2) ** 2
    print(f"n={n:3d}: min gap {rep.criterion_min_gap:10.4g}   relative to |A|^2: {rep.criterion_min_gap / norm2:.2e}")
