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
# # Forbidden forms and their certificates
#
# Membership in X0, X2 and X4 is an open condition: the morphism must not be
# equivalent to one with certain zero cells.  When a form is reachable the
# decider hands back the group element that produces the zeros, so the claim can
# be checked by one matrix product.

# %%
import numpy as np

from strata_lab import TEMPLATES, apply_equivalence, random_morphism
from strata_lab.field import GF
from strata_lab.morphism import random_equivalence
from strata_lab.patterns import X0_PATTERNS, probe_pattern, x0_pattern_free

F = GF(101)
rng = np.random.default_rng(5)

# %% [markdown]
# Plant pattern P2 (a 2x2 zero block), then hide it under a random group element.

# %%
phi = random_morphism(TEMPLATES["X0"], rng, F, zero_cells=X0_PATTERNS["P2"])
hidden = apply_equivalence(random_equivalence(phi, rng), phi)
print(hidden)

# %%
report = x0_pattern_free(hidden)
for v in report.verdicts:
    print(v.name, v.reachable)

# %%
v = report["P2"]
moved = apply_equivalence(v.certificate, report.morphism)
print(moved)
print("zero cells:", all(moved.is_zero_at(i, j) for i, j in v.cells))

# %% [markdown]
# A generic member is free of all three patterns.  As a sanity check, a thousand
# random group elements never hit a pattern by accident.

# %%
generic = random_morphism(TEMPLATES["X0"], 11, F)
print(bool(x0_pattern_free(generic)))
for name, cells in X0_PATTERNS.items():
    print(name, probe_pattern(generic, cells, trials=1000, seed=0))

# %% [markdown]
# Kronecker semistability (used by X1) reports a destabilising subspace when it fails.

# %%
from strata_lab import KroneckerModule, kronecker_semistable, parse_poly

forms = [[parse_poly(c, F) for c in row] for row in [["X", "2*X"], ["Y", "2*Y"], ["Z", "2*Z"]]]
res = kronecker_semistable(KroneckerModule.from_forms(forms))
print(res.semistable, res.witness.T)
