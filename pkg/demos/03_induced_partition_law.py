"""Exact law of the partition induced by dish ties, four ways, against simulation."""
# %%
import math

from atompart import (BaseMeasure, PitmanYor, induced_probability, joint_atom_probability,
                      enumerate_partitions, sample_paths)
from atompart.sampling import empirical_law

model = PitmanYor(0.5, 1.0)
H = BaseMeasure.spike_slab(0.3)

# %% The two observations share a value with probability 0.3175.
for method in ("general", "gibbs", "spike_slab", "oracle"):
    print(method, induced_probability(model, H, (2,), method).value)
print("by hand:", 0.7 * 0.25 + 0.3 * 0.5 * 0.5 + 0.09 * 0.75)

# %% Induced probabilities over P_4 sum to one; the diffuse case gives back the EPPF.
print(sum(induced_probability(model, H, p).value for p in enumerate_partitions(4)))
print(induced_probability(model, BaseMeasure.diffuse(), (2, 1)).value, model.eppf((2, 1)))

# %% Probability that both observations equal the first atom.
print(joint_atom_probability(model, BaseMeasure.finite((0.3, 0.2)), [1, 1]))

# %% Simulated frequencies against the exact law at n = 4.
draws = 50_000
counts = empirical_law(sample_paths(model, H, 4, draws, seed=1))
for p in enumerate_partitions(4):
    exact = induced_probability(model, H, p).value
    freq = counts.get(p, 0) / draws
    se = math.sqrt(exact * (1 - exact) / draws)
    print(f"{p.to_json():22s} exact {exact:.4f}  sim {freq:.4f}  z {(freq - exact) / se:+.2f}")
