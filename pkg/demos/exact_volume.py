"""
Renormalized volume from the closed formula and from series reversion
=====================================================================

Two exact routes to the constant term of the volume expansion of the
sublevel sets ``{rho < -eps}`` of a disc bundle.
"""

from fractions import Fraction

from renvol import ModelParams, check_decomposition, eval_renvol_formula
from renvol.volume import exact_constant_residue, expansion_exact, formula_comparison

# %%
# A model is a base dimension ``n``, an Einstein constant ``beta`` and the
# volume of the polarization.  Everything stays rational; pi is carried as a
# separate power.
p = ModelParams(1, Fraction(1, 2), Fraction(2))
print("closed formula     V =", eval_renvol_formula(p))
print("decomposition residual:", check_decomposition(p))

# %%
# The momentum profile gives the potential as ``log tau`` plus a Laurent tail.
# Reverting ``eps = u exp(-sum a_k u^k)`` produces the expansion of the
# volume, pure powers of eps and a constant term.
e = expansion_exact(p)
for k in sorted(e.laurent):
    print(f"  eps^{k}: {e.laurent[k]}")
print("  eps^0:", e.constant, "  (times", e.scale, ")")
print("renormalized volume", e.renormalized_volume)

# %%
# For ``n >= 1`` this is not the closed-formula value printed above.  The
# gap sits entirely in the boundary term, as the comparison at the end shows.

# %%
# The constant term only needs ``a_(n+1)``; the residue shortcut agrees
# with the full reversion.
print("residue shortcut agrees:", exact_constant_residue(p) == e.constant)

# %%
# Split into a cap term and a boundary term, then compare each with the
# printed closed formula.  The cap terms match; the boundary term differs by
# a factor that depends only on ``n``.
for n in range(4):
    r = formula_comparison(ModelParams(n, Fraction(-1, 2), 1))
    print(f"n={n}: cap ratio {r.cap_ratio}, boundary ratio {r.boundary_ratio}")
