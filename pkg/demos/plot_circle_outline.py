"""
A circle outline is sparse, but not in every column
===================================================

Columns near the left and right edges of the circle hold many more
nonzero pixels than the rest, so they need more measurements. Steepest
descent with a fixed lambda, rows 15 to 30.
"""

import numpy as np

from gradcs import TestImageSpec, experiments, generate_test_image

img = generate_test_image(TestImageSpec("circle", 64))
counts = np.count_nonzero(img, axis=0)
print("nonzeros per column (min/mean/max over occupied):",
      counts[counts > 0].min(), round(counts[counts > 0].mean(), 2), counts.max())

cells = experiments.run_experiment({"experiment": "circle", "seed": 1,
                                    "output_dir": "demo_out/circle"})
for rows, value in experiments.median_psnr_by_rows(cells).items():
    print(f"{rows:3d} rows: PSNR {value:7.2f} dB")
