"""Base measures with atoms: dish draws, tie probabilities and Karlin's counting function."""
# %%
import numpy as np

from atompart import BaseMeasure, PathState, a_ml, alpha_of, h_sharp, sample_dish

# %% A spike of mass 0.3 at one point plus a diffuse slab.
H = BaseMeasure.spike_slab(0.3)
state = PathState(np.random.default_rng(0))
dishes = [sample_dish(H, state) for _ in range(10)]
print([str(d) for d in dishes])

# %% H#(m): probability that k groups, group i holding m_i i.i.d. draws, are internally tied and
# mutually distinct. Groups of size one may land on the slab.
print(h_sharp(H, (1, 1)), h_sharp(H, (2, 1)), h_sharp(H, (2, 2)))

# %% Two atoms: sums over distinct atom indices, by inclusion-exclusion.
H2 = BaseMeasure.finite((0.2, 0.1))
print("sum_{i != j} a_i^2 a_j =", a_ml(H2, (2,), 1))
print("H#(2,1) =", h_sharp(H2, (2, 1)))

# %% alpha(x) counts atoms of mass at least 1/x (after normalizing the atomic part).
geo = BaseMeasure.geometric(0.5, 60)
pl = BaseMeasure.power_law(2.0, 10_000)
for x in (10, 1e3, 1e5):
    print(x, alpha_of(geo, x), alpha_of(pl, x))
print("truncated power-law tail mass:", pl.tail_mass)
