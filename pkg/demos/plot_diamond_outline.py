"""
The diamond outline from 10 to 20 rows
======================================

Each column of a 64x64 diamond outline has at most two nonzero pixels. We
measure every column with the same uniform random matrix and recover them
with the Newton-step l1 iteration, sweeping the number of rows.
Recovered images land in ``demo_out/diamond``.
"""

from gradcs import experiments

cells = experiments.run_experiment({"experiment": "diamond", "seed": 1,
                                    "output_dir": "demo_out/diamond"})
for rows, value in experiments.median_psnr_by_rows(cells).items():
    print(f"{rows:3d} rows: PSNR {value:7.2f} dB")
