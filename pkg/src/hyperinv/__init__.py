"""Hypergeometric lower-triangular inverse pairs, their inversion criterion and
the generating-function transforms that come with them."""

from .errors import *  # noqa: F401,F403
from .genfun import (
    egf_S,
    ogf_S_from_T,
    ogf_T_from_S,
    omega_closed,
    omega_series,
    psi_nu,
    sigma_closed,
    sigma_series,
    theta_newton,
    theta_series,
    xi_series,
)
from .hyperfun import confluent_phi, d_closed, d_sum_direct, gauss_poly, pochhammer
from .invpair import Params, TriMatrix, apply, build_A, build_B, criterion_check, forward_solve, identity, mat_mul
from .numfield import DOUBLE, EXACT, FieldMode, float_mode
from .powerseries import Series
from .queueapp import QueueProblem, build_Q, solve_E

__version__ = "0.1.0"
