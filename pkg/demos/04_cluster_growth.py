"""Large-n growth of the number of clusters when the base measure has atoms."""
# %%
import os
import tempfile

import numpy as np

from atompart import (BaseMeasure, ExperimentConfig, PitmanYor, karlin_regime, kr_limit_constant,
                      log_checkpoints, run_experiment, simulate_path)

ck = log_checkpoints(10, 10 ** 5)

# %% One path: merged clusters equal diffuse tables plus distinct atoms, at every checkpoint.
p = simulate_path(PitmanYor(0.5, 1.0), BaseMeasure.spike_slab(0.3), ck, seed=0)
for i in range(0, len(ck), 10):
    print(p.checkpoints[i], p.K[i], p.N[i], p.Lambda[i], p.merged[i])
print("identity violations:", p.identity_violations())

# %% With a spike of mass a, the cluster count is about (1 - a) times the table count,
# and blocks of size r make up a sigma Gamma(r - sigma) / (Gamma(1 - sigma) r!) share.
cfg = ExperimentConfig(PitmanYor(0.5, 1.0), BaseMeasure.spike_slab(0.3), replicates=10, checkpoints=ck,
                       statistics=("ratio", "slope", "kr", "identity"), slope_range=(1e3, 1e5))
rep = run_experiment(cfg)
for s in rep.statistics:
    print(f"{s.name:20s} {s.estimate:.4f} +/- {s.stderr:.4f}  target {s.target}  passed {s.passed}")
print([round(kr_limit_constant(0.5, r), 4) for r in range(1, 6)])

# %% All mass on power-law atoms: the exponent becomes sigma times Karlin's index.
H = BaseMeasure.power_law(2.0, 10 ** 4)
print(karlin_regime(H).description)
rep = run_experiment(ExperimentConfig(PitmanYor(0.5, 1.0), H, replicates=10, checkpoints=ck,
                                      statistics=("slope",), slope_range=(1e3, 1e5)))
print("slope", rep.statistic("slope").estimate, "target", rep.statistic("slope").target)

# %% Finitely many atoms and no slab: the count saturates at the number of atoms.
H = BaseMeasure.finite((0.3, 0.25, 0.2, 0.2, 0.05))
paths = [simulate_path(PitmanYor(0.5, 1.0), H, [10, 100, 1000, 10 ** 4], seed=(0, i)) for i in range(50)]
print("final counts:", np.bincount([q.merged[-1] for q in paths]))

# %% Per-checkpoint CSV for plotting elsewhere.
out = os.path.join(tempfile.mkdtemp(), "paths.csv")
with open(out, "w", newline="") as fh:
    rep.write_csv(fh)
print("wrote", out)
