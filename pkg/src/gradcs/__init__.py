"""Gradient-based compressive sensing recovery.

Sparse signals and images are recovered from random linear measurements
with fixed-step, steepest-descent and Newton iterations, regularized by an
l1 subgradient or a smoothed total variation.
"""

from .errors import (ConfigError, DimensionError, DivergenceError, FormatError, GradCSError,
                     NumericalError)
from .imaging import TestImageSpec, generate_test_image, psnr, read_pgm, write_pgm
from .recovery import (ProblemForm, RecoveryProblem, RecoveryReport, acquire,
                       add_measurement_noise, reconstruction_matrix, recover_image,
                       recover_vector)
from .regularizers import L1Params, TvParams, l1_subgradient, tv_gradient, tv_value
from .sensing import (Distribution, ObservationMatrix, coherence_index, generate_observation,
                      measure, rip_ratio_estimate)
from .solvers import ConvergenceTrace, NewtonOperator, SolverConfig, StepMode, iterate
from .transforms import TransformKind, TransformOperator

__version__ = "0.1.0"
