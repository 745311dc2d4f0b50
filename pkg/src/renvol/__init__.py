"""Renormalized volume of disc bundles over polarized Kahler-Einstein manifolds.

Three independent routes to the same number: the closed formula
(:mod:`renvol.exact_core`), the exact eps-expansion by series reversion
(:mod:`renvol.volume`, built on :mod:`renvol.series` and
:mod:`renvol.profile`), and high-precision numerics with a Laurent fit.
:mod:`renvol.chern` checks the localized Chern number by quadrature.
"""
from .errors import ConvergenceError, IllConditionedError, NoKEMetricError, RenvolError, TruncationError
from .exact_core import (
    ModelParams,
    PiValue,
    Rational,
    check_decomposition,
    eval_chern_integral_general,
    eval_chern_integral_tube,
    eval_renvol_formula,
    eval_total_qprime,
)
from .profile import Profile, build_profile, potential_F, tau_of_eps
from .series import TruncatedSeries, constant_term_residue, constant_term_reversion, series_revert
from .volume import expansion_exact, fit_expansion, formula_comparison, sample_volumes, vol_of_eps_numeric
from .chern import build_cutoff, cutoff_independence, localized_integral

__version__ = "0.1.0"
