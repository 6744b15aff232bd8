"""First-order convex optimization under relative gradient noise.

Solvers: ISTM (:func:`istm_run`), restarted ISTM (:func:`ristm_run`),
adaptive AIM (:func:`aim_run`) and AIM with variable ``p``
(:func:`aimvp_run`).  Supporting pieces are the test objectives, noise
policies, coefficient schedules, feasible sets, trace I/O and the
interpolation checker.
"""

from .aim import (AimState, BacktrackingError, aim_init, aim_iteration, aim_run,
                  certificate_estimate1, certificate_estimate2, estimate1_from_trace,
                  relative_delta_rule)
from .aim_varp import aimvp_run, compute_E
from .certify import (InterpolationResult, divergence_onset, interpolation_check,
                      interpolation_slack, plateau_detect)
from .harness import ConfigError, SolverConfig, run_config, run_sweep
from .istm import (IstmState, istm_bound, istm_bound_proper, istm_init, istm_query_point,
                   istm_run, istm_step)
from .noise import NoisePolicy, NoisyGradientOracle, noisy_gradient, verify_relative_bound
from .objective import (ObjectiveSpec, finite_difference_gradient, quadratic,
                        regularized_worst_case, worst_case_function)
from .ristm import RestartPlan, restart_schedule, ristm_run
from .schedule import IstmSchedule, aim_alpha_B, istm_A, istm_alpha, proper_a
from .sets import FeasibleSet, ball, box, whole_space
from .trace import COLUMNS, RunTrace, read_trace, write_trace

__version__ = "0.1.0"
