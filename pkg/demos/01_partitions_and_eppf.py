"""Set partitions, the Pitman-Yor EPPF and generalized Stirling numbers."""
# %%
from collections import Counter

from atompart import PitmanYor, enumerate_partitions, py_v_table, sample_latent_partition, stirling_sigma
from atompart.partitions import block_sizes

# %% Partitions of [4] in restricted-growth order; there are B_4 = 15 of them.
parts = list(enumerate_partitions(4))
print(len(parts), [p.to_json() for p in parts[:4]], "...")

# %% The EPPF depends only on block sizes and sums to one over P_n.
py = PitmanYor(0.5, 1.0)
print("q(2) =", py.eppf((2,)), " q(1,1) =", py.eppf((1, 1)), " q(2,1) =", py.eppf((2, 1)))
for n in range(1, 7):
    print(n, sum(py.eppf(block_sizes(p)) for p in enumerate_partitions(n)))

# %% Predictive weights: existing blocks get n_j - sigma, a new block gets theta + sigma k.
print(py.predictive_weights((3, 1)))

# %% Negative sigma caps the number of blocks at theta / |sigma|.
capped = PitmanYor(-0.5, 1.5)
print("max blocks:", capped.max_blocks, " q(1,1,1,1) =", capped.eppf((1, 1, 1, 1)))

# %% Law of the number of blocks K_n: V_{n,k} S_sigma(n,k).
n = 8
law = {k: py_v_table(0.5, 1.0, n).value(n, k) * stirling_sigma(0.5, n, k) for k in range(1, n + 1)}
print({k: round(v, 4) for k, v in law.items()}, sum(law.values()))

# %% Compare with sequential seating.
draws = Counter(len(sample_latent_partition(py, n, seed=s)) for s in range(20000))
print({k: round(draws[k] / 20000, 4) for k in sorted(draws)})

# %% At sigma = 0 the generalized Stirling numbers are the unsigned first-kind ones.
print([int(stirling_sigma(0.0, 5, k)) for k in range(1, 6)])
