"""
A 256x256 image in the Haar domain
==================================

Natural images are sparse after a wavelet transform. Pass a 256x256 PGM
(for instance Cameraman) as the first argument, or run without one to use
the built-in piecewise-constant image. Each column is measured by the same
100x256 Gaussian matrix and recovered in the Haar domain with Newton steps.
"""

import sys

from gradcs import experiments

config = {"experiment": "general", "seed": 1, "output_dir": "demo_out/general"}
if len(sys.argv) > 1:
    config["image"] = {"path": sys.argv[1]}
cell = experiments.run_experiment(config)[0]
print(f"PSNR {cell.report.psnr_vs_reference:.2f} dB after "
      f"{cell.report.total_iterations} column iterations, {cell.report.elapsed:.1f} s")
