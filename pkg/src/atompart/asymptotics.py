"""Large-n cluster-count experiments.

A simulated path seats customers one at a time and keeps, for the induced
(dish-level) partition, a map from dish to cluster size together with a
histogram of cluster sizes, so each customer costs O(1) expected work.
"""
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln
from scipy.special import gamma as gamma_fn

from .basemeasure import BaseMeasure, atom_for_uniform
from .eppf import NEG_INF, Custom, Gibbs, PitmanYor, choose_index
from .errors import InvalidArgument, ResourceLimit

MAX_PATH_LENGTH = 10 ** 6
CUSTOM_PATH_CAP = 10 ** 3


@dataclass
class SamplePath:
    seed: object
    checkpoints: np.ndarray
    K: np.ndarray  # latent tables
    N: np.ndarray  # tables whose dish is diffuse
    Lambda: np.ndarray  # distinct atoms among atom-dish tables
    merged: np.ndarray  # blocks of the induced partition
    atom_tables: np.ndarray
    block_mass: np.ndarray  # sum over all r of r * K_r
    small_blocks: np.ndarray  # [checkpoint, r - 1] -> K_r, r = 1..r_max

    @property
    def r_max(self):
        return self.small_blocks.shape[1]

    def identity_violations(self):
        bad = (self.merged != self.N + self.Lambda)
        bad |= (self.block_mass != self.checkpoints)
        bad |= (self.N + self.atom_tables != self.K)
        return int(np.count_nonzero(bad))

    def rows(self, replicate):
        for i, n in enumerate(self.checkpoints):
            yield [replicate, int(n), int(self.K[i]), int(self.N[i]), int(self.Lambda[i]),
                   int(self.merged[i])] + [int(x) for x in self.small_blocks[i]]


def csv_header(r_max):
    return ["replicate", "n", "K_n", "N_n", "Lambda_n", "merged"] + [f"k{r}" for r in range(1, r_max + 1)]


def _seed_sequence(seed):
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, tuple):
        master, replicate = seed
        return np.random.SeedSequence(entropy=master, spawn_key=(replicate,))
    return np.random.SeedSequence(seed)


def _python_rngs(seed):
    state = _seed_sequence(seed).generate_state(4, dtype=np.uint64)
    return random.Random(int(state[0]) << 64 | int(state[1])), random.Random(int(state[2]) << 64 | int(state[3]))


def simulate_path(model, H, checkpoints, r_max=5, seed=0):
    """Simulate one trajectory and record statistics at each checkpoint.

    Seating and dish draws use separate streams, and each new table consumes
    exactly one dish uniform, so paths with different base measures but the
    same seed share their latent seating.
    """
    checkpoints = np.asarray(sorted(set(int(c) for c in checkpoints)), dtype=np.int64)
    if len(checkpoints) == 0 or checkpoints[0] < 1:
        raise InvalidArgument("checkpoints must be positive integers")
    n_max = int(checkpoints[-1])
    if n_max > MAX_PATH_LENGTH:
        raise ResourceLimit(f"paths are capped at n = {MAX_PATH_LENGTH}")
    if isinstance(model, Custom) and n_max > CUSTOM_PATH_CAP:
        raise ResourceLimit(f"custom EPPF paths are capped at n = {CUSTOM_PATH_CAP}")
    if isinstance(model, Gibbs) and n_max > model.v.n_max:
        raise ResourceLimit(f"V-table only covers n <= {model.v.n_max}")
    seat_rng, dish_rng = _python_rngs(seed)
    srand = seat_rng.random
    drand = dish_rng.random

    sigma = getattr(model, "sigma", 0.0)
    is_py = isinstance(model, PitmanYor)
    is_gibbs = isinstance(model, Gibbs)
    theta = model.theta if is_py else 0.0

    assign = []
    tsize = []
    tdish = []
    csize = {}
    hist = {}
    K = N = atom_tables = lam = 0
    fresh = 0

    n_ck = len(checkpoints)
    rec = {name: np.zeros(n_ck, dtype=np.int64)
           for name in ("K", "N", "Lambda", "merged", "atom_tables", "block_mass")}
    small = np.zeros((n_ck, r_max), dtype=np.int64)
    ck_i = 0

    for n in range(n_max):  # n customers already seated
        if n == 0:
            table = -1
        elif is_py:
            table = -1 if srand() * (theta + n) < theta + sigma * K else None
        elif is_gibbs:
            lv = model.v.log(n, K)
            p_new = math.exp(model.v.log(n + 1, K + 1) - lv) if lv != NEG_INF else 0.0
            table = -1 if srand() < p_new else None
        else:
            j = choose_index(model.predictive_weights(tuple(tsize)), srand())
            table = -1 if j == K else j

        if table is None:
            # existing table with probability proportional to size - sigma
            if sigma >= 0:
                while True:
                    table = assign[int(srand() * n)]
                    if sigma == 0 or srand() * tsize[table] < tsize[table] - sigma:
                        break
            elif srand() * (n - sigma * K) < n:
                table = assign[int(srand() * n)]
            else:
                table = int(srand() * K)

        if table == -1:
            table = K
            K += 1
            tsize.append(0)
            idx = atom_for_uniform(H, drand())
            if idx is None:
                key = -1 - fresh
                fresh += 1
                N += 1
            else:
                key = idx
                atom_tables += 1
                if key not in csize:
                    lam += 1
            tdish.append(key)
        tsize[table] += 1
        assign.append(table)

        key = tdish[table]
        s = csize.get(key, 0)
        if s:
            c = hist[s] - 1
            if c:
                hist[s] = c
            else:
                del hist[s]
        csize[key] = s + 1
        hist[s + 1] = hist.get(s + 1, 0) + 1

        if n + 1 == checkpoints[ck_i]:
            rec["K"][ck_i] = K
            rec["N"][ck_i] = N
            rec["Lambda"][ck_i] = lam
            rec["merged"][ck_i] = len(csize)
            rec["atom_tables"][ck_i] = atom_tables
            rec["block_mass"][ck_i] = sum(r * c for r, c in hist.items())
            for r in range(1, r_max + 1):
                small[ck_i, r - 1] = hist.get(r, 0)
            ck_i += 1

    return SamplePath(seed, checkpoints, rec["K"], rec["N"], rec["Lambda"], rec["merged"],
                      rec["atom_tables"], rec["block_mass"], small)


@dataclass(frozen=True)
class Normalizer:
    """Deterministic normalizing sequence: constant, log n, n^sigma, or n^sigma * ell(n)."""

    kind: str
    sigma: float = 0.0
    ell: object = None

    def __call__(self, n):
        n = np.asarray(n, dtype=float)
        if self.kind == "constant":
            out = np.ones_like(n)
        elif self.kind == "log":
            out = np.log(n)
        elif self.kind == "power":
            out = n ** self.sigma
        elif self.kind == "power_slowly":
            out = n ** self.sigma * np.vectorize(self.ell)(n)
        else:
            raise InvalidArgument(f"unknown normalizer kind {self.kind!r}")
        return float(out) if out.ndim == 0 else out

    def __str__(self):
        return {"constant": "1", "log": "log(n)", "power": f"n^{self.sigma:g}",
                "power_slowly": f"n^{self.sigma:g} l(n)"}[self.kind]


def gibbs_normalizer(sigma):
    """Growth rate of the number of blocks of a Gibbs-type partition."""
    if not sigma < 1:
        raise InvalidArgument(f"sigma must be < 1, got {sigma}")
    if sigma < 0:
        return Normalizer("constant")
    if sigma == 0:
        return Normalizer("log")
    return Normalizer("power", sigma)


@dataclass(frozen=True)
class KarlinRegime:
    sigma0: float
    z0: float
    ell0: object  # slowly varying factor of the distinct-atom count, callable
    ell0_star: object  # slowly varying factor of alpha(x) itself
    degenerate: bool = False
    description: str = ""

    def normalizer(self):
        return Normalizer("power_slowly", self.sigma0, self.ell0)


def karlin_regime(H):
    """Growth regime of the number of distinct atoms among i.i.d. draws from H.

    Supported for parametric atom families; a finite atom set is reported as
    degenerate (the count saturates at the number of atoms).
    """
    if H.family is None:
        if H.n_atoms == 0:
            raise InvalidArgument("base measure has no atoms")
        return KarlinRegime(0.0, float(H.n_atoms), lambda x: 1.0, lambda x: 1.0, True,
                            f"finite atom set of size {H.n_atoms}")
    fam = H.family
    a = fam.total_atom_mass
    if fam.kind == "power_law":
        s = fam.parameter
        sigma0 = 1.0 / s
        c = float(fam.raw_weight(1)) ** sigma0  # zeta(s)^(-1/s)
        return KarlinRegime(sigma0, a ** sigma0 * float(gamma_fn(1 - sigma0)),
                            lambda x: c, lambda x: c, False,
                            f"power law j^-{s:g}: alpha(x) ~ {c:.6g} x^{sigma0:.6g}")
    rho = fam.parameter
    scale = math.log(1 / rho)
    return KarlinRegime(0.0, 1.0, lambda x: math.log(a * x) / scale, lambda x: math.log(x) / scale,
                        False, f"geometric ratio {rho:g}: alpha(x) ~ log(x) / log(1/{rho:g})")


def kr_limit_constant(sigma, r):
    """sigma Gamma(r - sigma) / (Gamma(1 - sigma) r!): limiting share of blocks of size r."""
    if not 0 < sigma < 1:
        raise InvalidArgument(f"sigma must lie in (0, 1), got {sigma}")
    if r < 1:
        raise InvalidArgument("r must be at least 1")
    return float(sigma * np.exp(gammaln(r - sigma) - gammaln(1 - sigma) - gammaln(r + 1)))


def log_checkpoints(lo, hi, per_decade=10):
    """Roughly log-spaced integer checkpoints from lo to hi inclusive."""
    if lo < 1 or hi < lo:
        raise InvalidArgument("need 1 <= lo <= hi")
    count = max(2, int(round(per_decade * math.log10(hi / lo))) + 1)
    pts = np.unique(np.round(np.geomspace(lo, hi, count)).astype(np.int64))
    return [int(x) for x in pts]


def fit_slope(ns, values):
    """Least-squares slope of log(values) against log(ns)."""
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


STATISTICS = ("ratio", "slope", "kr", "saturation", "diversity", "identity", "diffuse_slln")
DEFAULT_TOLERANCES = {"ratio": 0.03, "slope": 0.05, "kr": {1: 0.05}, "kr_default": 0.03,
                      "saturation": 0.95, "diversity": 0.8, "diffuse_slln": 0.99}


@dataclass
class ExperimentConfig:
    model: object
    base_measure: BaseMeasure
    replicates: int = 20
    checkpoints: list = field(default_factory=lambda: log_checkpoints(10, 10 ** 5))
    r_max: int = 5
    statistics: tuple = ("ratio", "slope", "kr", "identity")
    seed: int = 0
    slope_range: tuple = None
    tolerances: dict = field(default_factory=dict)
    threads: int = 1

    def tolerance(self, name, r=None):
        tol = dict(DEFAULT_TOLERANCES)
        tol.update(self.tolerances)
        if name == "kr":
            per_r = tol.get("kr", {})
            if isinstance(per_r, dict):
                per_r = {int(k): v for k, v in per_r.items()}
                return per_r.get(r, tol.get("kr_default", 0.03))
            return per_r
        return tol[name]


@dataclass
class StatisticResult:
    name: str
    estimate: float
    stderr: float
    target: float = None
    tolerance: float = None
    rule: str = "abs"  # "abs": |estimate - target| <= tolerance; "min": estimate >= target
    passed: bool = None

    def as_dict(self):
        return {"name": self.name, "estimate": self.estimate, "stderr": self.stderr,
                "target": self.target, "tolerance": self.tolerance, "rule": self.rule,
                "passed": self.passed}


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    paths: list
    statistics: list
    partial: bool = False

    @property
    def replicates(self):
        return len(self.paths)

    @property
    def passed(self):
        return all(s.passed is not False for s in self.statistics) and not self.partial

    def statistic(self, name):
        for s in self.statistics:
            if s.name == name:
                return s
        raise KeyError(name)

    def summary(self):
        return {"replicates": self.replicates, "partial": self.partial, "passed": self.passed,
                "statistics": [s.as_dict() for s in self.statistics]}

    def write_csv(self, fh):
        import csv

        w = csv.writer(fh, lineterminator="\n")
        w.writerow(csv_header(self.config.r_max))
        for i, p in enumerate(self.paths):
            w.writerows(p.rows(i))


def _mean_se(values):
    v = np.asarray(values, dtype=float)
    se = float(v.std(ddof=1) / math.sqrt(len(v))) if len(v) > 1 else float("nan")
    return float(v.mean()), se


def _judge(res):
    if res.target is None or res.tolerance is None:
        return res
    if res.rule == "min":
        res.passed = bool(res.estimate >= res.target)
    else:
        res.passed = bool(abs(res.estimate - res.target) <= res.tolerance)
    return res


def _run_replicate(args):
    model, H, checkpoints, r_max, seed, i = args
    return simulate_path(model, H, checkpoints, r_max, (seed, i))


def simulate_replicates(config):
    jobs = [(config.model, config.base_measure, config.checkpoints, config.r_max, config.seed, i)
            for i in range(config.replicates)]
    if config.threads and config.threads > 1 and not isinstance(config.model, Custom):
        with ProcessPoolExecutor(max_workers=config.threads) as ex:
            return list(ex.map(_run_replicate, jobs))
    return [_run_replicate(j) for j in jobs]


def run_experiment(config):
    """Simulate the replicates named by ``config`` and compare limit statistics to targets."""
    if isinstance(config, dict):
        from .io import experiment_from_dict

        config = experiment_from_dict(config)
    unknown = set(config.statistics) - set(STATISTICS)
    if unknown:
        raise InvalidArgument(f"unknown statistics {sorted(unknown)}")
    paths = simulate_replicates(config)
    return summarize(config, paths)


def summarize(config, paths):
    model, H = config.model, config.base_measure
    sigma = getattr(model, "sigma", None)
    a = H.family.total_atom_mass if H.family is not None else H.a
    stats = []
    final = [p.checkpoints[-1] for p in paths]
    for name in config.statistics:
        if name == "ratio":
            est, se = _mean_se([p.merged[-1] / p.K[-1] for p in paths])
            target = 1 - a if a < 1 else None
            stats.append(_judge(StatisticResult("ratio", est, se, target, config.tolerance("ratio"))))
        elif name == "slope":
            lo, hi = config.slope_range or (final[0] / 100, final[0])
            slopes = []
            for p in paths:
                sel = (p.checkpoints >= lo) & (p.checkpoints <= hi)
                if sel.sum() < 2:
                    raise InvalidArgument("slope range contains fewer than two checkpoints")
                slopes.append(fit_slope(p.checkpoints[sel], p.merged[sel]))
            est, se = _mean_se(slopes)
            target = None
            if sigma is not None and 0 < sigma < 1:
                if a < 1:
                    target = sigma
                elif H.family is not None:
                    target = sigma * karlin_regime(H).sigma0
            stats.append(_judge(StatisticResult("slope", est, se, target, config.tolerance("slope"))))
        elif name == "kr":
            for r in range(1, config.r_max + 1):
                est, se = _mean_se([p.small_blocks[-1, r - 1] / p.merged[-1] for p in paths])
                target = kr_limit_constant(sigma, r) if sigma is not None and 0 < sigma < 1 and a < 1 else None
                stats.append(_judge(StatisticResult(f"k{r}_share", est, se, target,
                                                    config.tolerance("kr", r))))
        elif name == "saturation":
            hits = [float(p.merged[-1] == H.n_atoms) for p in paths]
            est, se = _mean_se(hits)
            target = config.tolerance("saturation") if H.family is None and a == 1 else None
            stats.append(_judge(StatisticResult("saturation", est, se, target, None, rule="min")))
            if target is not None:
                stats[-1].tolerance = 0.0
                _judge(stats[-1])
        elif name == "diversity":
            c = gibbs_normalizer(sigma) if sigma is not None else None
            est, se = _mean_se([p.K[-1] / c(p.checkpoints[-1]) for p in paths])
            target = None
            if isinstance(model, PitmanYor) and sigma <= 0:
                target = model.theta if sigma == 0 else model.theta / abs(sigma)
            stats.append(_judge(StatisticResult("diversity", est, se, target, config.tolerance("diversity"))))
        elif name == "identity":
            bad = sum(p.identity_violations() for p in paths)
            stats.append(_judge(StatisticResult("identity_violations", float(bad), 0.0, 0.0, 0.0)))
        elif name == "diffuse_slln":
            inside = total = 0
            for p in paths:
                sel = p.K >= 1000
                if 0 < a < 1 and sel.any():
                    k = p.K[sel].astype(float)
                    band = 4 * np.sqrt(a * (1 - a) / k)
                    inside += int(np.count_nonzero(np.abs(p.N[sel] / k - (1 - a)) <= band))
                    total += int(sel.sum())
            est = inside / total if total else float("nan")
            target = config.tolerance("diffuse_slln") if total else None
            stats.append(_judge(StatisticResult("diffuse_slln", est, float("nan"), target, 0.0, rule="min")))
    return ExperimentReport(config, paths, stats)
