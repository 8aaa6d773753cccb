# The multivariate mixture: tensor-product component tuples, the joint
# density, the state-dependent diffusion matrix, and cutoff truncation.

import numpy as np

from mvmix import (
    AssetMixture,
    CorrelationMatrix,
    MultiAssetModel,
    density_count,
    mvmd_diffusion_squared,
    scmd_covariance,
    truncate,
    volume_estimate,
)
from mvmix.multivariate import mixture_pdf

a1 = AssetMixture.from_arrays(1.0, 0.05, [0.6, 0.4], [0.3, 0.2])
a2 = AssetMixture.from_arrays(1.0, 0.05, [0.7, 0.3], [0.25, 0.35])
model = MultiAssetModel((a1, a2), CorrelationMatrix([[1.0, 0.6], [0.6, 1.0]]))

print("component tuples (one mixture component per asset):")
for tp, w in truncate(model, 0.0):
    print(f"  indices {tp.indices}  product weight {w:.2f}")

print("\njoint density at a few points (weighted sum of 4 bivariate lognormals):")
for x in ([1.0, 1.0], [0.8, 1.2], [1.5, 0.7]):
    print(f"  p{tuple(x)} = {mixture_pdf(model, 1.0, np.array(x)):.5f}")

# The diffusion matrix is a density-weighted average of the per-tuple
# covariance matrices, so it moves with the state.
print("\ndiffusion matrix CC^T(1, x) vs the simply-correlated covariance:")
for x in ([1.0, 1.0], [0.5, 2.0]):
    full = mvmd_diffusion_squared(model, 1.0, np.array(x))
    simple = scmd_covariance(model, 1.0, np.array(x))
    print(f"  x={x}: CC^T offdiag {full[0, 1]:.5f}  vs nu_i nu_j rho {simple[0, 1]:.5f}")

# Truncation: drop tuples whose product weight is below the cutoff and
# renormalize; the surviving-count estimate explains why this scales.
cut = truncate(model, 0.2)
print(f"\ncutoff 0.2 keeps {[tp.indices for tp, _ in cut]} with weights {np.round(cut.weights, 3)}")
print("\nsurviving-tuple estimate N_n(5%) at weight density 3 per asset:")
for n in (4, 6, 8, 10, 12):
    print(f"  n={n:2d}: V_n={volume_estimate(0.05, n):8.5f}  N_n={density_count(0.05, n, 3.0):6.1f}")
print("the count peaks near n=8: truncation tames the N^n tuple explosion")
