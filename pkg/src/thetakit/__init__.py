"""Numerical library and verification suite for Jacobi theta quotients.

Evaluates the four theta series with certified truncation bounds, builds the
Weierstrass elliptic data of the lattice (1, i*pi*t), differentiates theta
quotients exactly in t through the heat equation, and certifies the sign,
root, limit and convexity claims organized around them.
"""

from .backend import FLOAT, PRECISION_ENV, context_for, dps_for, mp_context, precision_mode
from .elliptic import (DerivedConstants, EdgeId, EllipticData, WpJet, derived_constants,
                       eisenstein_c0, elliptic_data_for, half_periods_and_invariants,
                       invert_wp, wp_jet, wp_laurent_near_half)
from .errors import (ConfigError, DomainError, LimitError, PoleError,
                     PrecisionExhaustedError, RangeError, ThetakitError,
                     VerificationError)
from .proofcheck import (A1, A2, F2, F2_prime, F3, F3_at_half, F3_prime, G2, G3,
                         LimitEstimate, Qfun, RootData, SignScanReport, Workspace,
                         cm_scan, endpoint_limit, lemma_T, lemma_U, nu1_check,
                         one_minus_Q, root_data, roots_a1_a2, root_x0, sign_scan)
from .quotients import (K_MAX, DerivSeries, QuotientSpec, S, S_t_derivs, fd_oracle,
                        log_second_t)
from .suite import (RunConfig, VerificationReport, VERSION, identity_residuals,
                    run_conjecture, run_figures, run_verify)
from .theta import (ModularPoint, ThetaEval, ThetaIndex, log_theta_derivs,
                    nome_from_time, theta_deriv, theta_null)

__version__ = VERSION
