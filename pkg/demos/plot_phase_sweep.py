"""
How many measurements does a K-sparse signal need?
==================================================

Success rate of l1 recovery over random Gaussian problems with N = 64. Below
2K measurements recovery is hopeless; around 4K to 8K it becomes routine.
The grid is written to ``demo_out/phase.csv``.
"""

from pathlib import Path

from gradcs import experiments

k_list, m_list = [1, 3], [2, 5, 8, 12, 16, 24]
rates = experiments.phase_sweep(64, k_list, m_list, trials=20, seed=1)
Path("demo_out").mkdir(exist_ok=True)
experiments.write_phase_csv("demo_out/phase.csv", k_list, m_list, rates)

print("M:    " + " ".join(f"{m:5d}" for m in m_list))
for k, row in zip(k_list, rates):
    print(f"K={k}: " + " ".join(f"{v:5.2f}" for v in row))
