"""Integrated density of states and localization-landscape counting for
disordered Jacobi operators on graphs."""

__version__ = "0.1.0"

from .analysis import (LandscapeLawReport, TailFit, ensemble_mean, fit_tail,
                       landscape_law_check, lowest_positive_decade, scaled_overlay)
from .curves import CountingCurve, log_energy_grid
from .graphs import (Ball, Covering, Graph, GraphError, MetricKind, Region, ball,
                     build_covering, covering_is_exhaustive, exterior_boundary,
                     interior_boundary, measure_overlap, translation_covers,
                     volume_growth_probe)
from .landscape import (CountingEvaluator, LandscapeFunction, RadiusPolicy,
                        SolveError, counting_curve_landscape, landscape_counting,
                        solve_landscape, uncertainty_identity_residual)
from .operator import (BoundaryMode, DisorderConfig, Dist, JacobiOperator,
                       OperatorError, assemble, epsilon_cutoff_check,
                       quadratic_form, sample_disorder)
from .spectral import (BallKernel, InertiaResult, ball_green, band1d_kernel_bounds,
                       count_leq, dense_spectrum, harmonic_weight_1d, ids_curve)
from .zoo import (BandGraphSpec, PenroseSpec, SierpinskiSpec, StackSpec,
                  build_band_graph, build_penrose, build_sierpinski, build_stacked)
