"""
Recovering the constant term numerically
========================================

Solve ``F(tau) = -log eps`` on a log-spaced grid, measure the volumes and fit
a Laurent polynomial.  The fitted constant is compared with the exact one.
"""

from fractions import Fraction

import mpmath

from renvol import ModelParams, build_profile, expansion_exact, fit_expansion, sample_volumes, tau_of_eps

p = ModelParams(2, Fraction(-1), Fraction(1))
prof = build_profile(p.n, p.beta)
print("tau0 =", prof.tau0, " C =", prof.capC)

# %%
# Level sets move out to infinity as eps shrinks, with ``tau_eps ~ 1/eps``.
for eps in (1e-2, 1e-4, 1e-6):
    tau = tau_of_eps(prof, eps, 128)
    print(f"eps={eps:g}: tau_eps*eps = {mpmath.nstr(tau * eps, 12)}")

# %%
# Twelve samples between 1e-2 and 1e-7 at 256 bits.
samples = sample_volumes(p)
fit = fit_expansion(samples, p.n)
exact = expansion_exact(p).renormalized_volume
print("fitted constant:", mpmath.nstr(fit.constant, 20))
print("exact constant: ", exact, "=", exact.decimal(20))
print("condition", mpmath.nstr(fit.condition, 4), " residual", mpmath.nstr(fit.residual_norm, 4))

# %%
# A log eps column does not help the fit, its coefficient sits at noise level.
with_log = fit_expansion(samples, p.n, weight_exponent=2, with_log=True)
print("log coefficient:", mpmath.nstr(with_log.coefficients["log"], 3))
