"""
Coherence and the restricted isometry ratio
===========================================

The coherence index compares measurement rows with the sparsity basis: 1
is ideal and sqrt(N) is the worst case. The RIP ratio ||M f||^2 / ||f||^2
over random sparse f shows how evenly a matrix keeps sparse energy.
"""

import numpy as np

from gradcs import ObservationMatrix, TransformOperator, coherence_index, generate_observation
from gradcs.sensing import rip_ratio_estimate

n = 64
spikes = ObservationMatrix(np.eye(n)[:16])
gauss = generate_observation(16, n, "normal01", seed=1)
for name, obs in [("identity rows", spikes), ("gaussian", gauss)]:
    for kind in ("identity", "dct", "haar"):
        chi = coherence_index(TransformOperator(kind, n), obs)
        print(f"{name:14s} vs {kind:8s}: coherence {chi:6.3f}  (range 1 .. {np.sqrt(n):.0f})")

# scaled so that E||M f||^2 = ||f||^2
scaled = ObservationMatrix(gauss.mat / np.sqrt(16))
for name, obs in [("identity rows", spikes), ("gaussian", scaled)]:
    est = rip_ratio_estimate(obs, k=4, trials=2000, seed=1)
    print(f"{name:14s}: ratio in [{est.min_ratio:.3f}, {est.max_ratio:.3f}] for 4-sparse f")
