# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
# ---

# %% [markdown]
# # Building members from points, and the dimension count
#
# X6: a point `x` and two quintics.  X4: five points in general position; the
# determinant then vanishes at all five and the linear block cuts out the conic
# through them.

# %%
from strata_lab import classify
from strata_lab.field import GF
from strata_lab.geometry import PointP2, conic_through, construct_x4, construct_x6
from strata_lab.parsing import parse_poly

F = GF(101)
x = PointP2.make(F, [0, 0, 1])
phi = construct_x6(x, parse_poly("X^5 + Y^5", F), parse_poly("Z^5", F))
print(phi)
print(classify(phi).label, "det(x) =", phi.det.evaluate(x.coords))

# %%
pts = [PointP2.make(F, c) for c in ([1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 3])]
psi = construct_x4(pts, seed=0)
print(psi)
print("conic:", conic_through(pts))
print("det at points:", [psi.det.evaluate(p.coords) for p in pts])
print(classify(psi).label)

# %% [markdown]
# Three ways to count each stratum's dimension: geometric fibrations, parameter
# counts, and the rank of the orbit tangent map at a sample.

# %%
from strata_lab.experiments import dimension_ledger, ledger_markdown

print(ledger_markdown(dimension_ledger()))
