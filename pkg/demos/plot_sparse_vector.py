"""
Recovering a sparse vector from three measurements
==================================================

A 1-sparse vector of length 4 is measured by a 3x4 Gaussian matrix. The
l1 subgradient iteration finds it again, also with a little noise added.
The same signal in a DCT basis shows the transform-domain form.
"""

import numpy as np

from gradcs import (L1Params, RecoveryProblem, SolverConfig, TransformOperator, acquire,
                    add_measurement_noise, generate_observation, recover_vector)

f = np.array([0.0, 3.0, 0.0, 0.0])
obs = generate_observation(3, 4, "normal01", seed=2)
y = acquire("a", obs, f)

problem = RecoveryProblem("a", obs, y, regularizer=L1Params(lam=0.005))
rec, trace = recover_vector(problem, SolverConfig("steepest", max_iters=5000))
print("clean:", np.round(rec, 4), f"({len(trace)} iterations)")

# noise at 1% of the measurement energy
sigma = 0.01 * np.linalg.norm(y) / np.sqrt(len(y))
noisy = RecoveryProblem("a", obs, add_measurement_noise(y, sigma, seed=5),
                        regularizer=L1Params(lam=0.005))
rec, _ = recover_vector(noisy, SolverConfig("steepest", max_iters=5000))
print("noisy:", np.round(rec, 4))

# a signal that is sparse only after a DCT, measured in time (form c)
psi = TransformOperator("dct", 16)
coef = np.zeros(16)
coef[2] = 5.0
signal = psi.inverse(coef)
obs16 = generate_observation(4, 16, "normal01", seed=4)
problem = RecoveryProblem("c", obs16, acquire("c", obs16, signal, psi), psi=psi,
                          regularizer=L1Params(lam=0.01, decay=0.995))
rec, trace = recover_vector(problem, SolverConfig("newton", max_iters=20000))
print("DCT coefficients:", np.round(psi.forward(rec), 4))
