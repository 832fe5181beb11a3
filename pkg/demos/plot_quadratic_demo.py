"""
Three step rules on a two-variable quadratic
============================================

The function (x + y)^2 + (x + 1)^2 + (y + 3)^2 is a least-squares problem
||A f - b||^2 in disguise. Its minimum sits at (1/3, -5/3). We compare the
fixed-step gradient method, steepest descent and the Newton step.
"""

import numpy as np

from gradcs import SolverConfig, iterate

A = np.array([[1.0, 1.0], [1.0, 0.0], [0.0, 1.0]])
b = np.array([0.0, -1.0, -3.0])
target = np.array([1 / 3, -5 / 3])

# one Newton step lands on the minimum of a quadratic
f, trace = iterate(SolverConfig("newton", eps_newton=0.0, max_iters=1), A, b)
print(f"newton   after {len(trace):3d} step(s): {f}  error {np.abs(f - target).max():.2e}")

# gradient methods need many small steps
for mode, extra in [("fixed", {"fixed_mu": 0.05}), ("steepest", {})]:
    cfg = SolverConfig(mode, max_iters=200, stop_tol=0, eps_denominator=0, **extra)
    f, trace = iterate(cfg, A, b)
    print(f"{mode:8s} after {len(trace):3d} steps:   {f}  error {np.abs(f - target).max():.2e}")

# the residual history shows the zig-zag of steepest descent settling down
_, trace = iterate(SolverConfig("steepest", max_iters=10, stop_tol=0), A, b)
print("steepest residuals:", np.round(trace.residual, 6))
