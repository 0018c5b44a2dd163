"""Exchangeable partition probability functions.

Three model kinds are supported: the Pitman-Yor two-parameter family, a
general Gibbs-type model given by a table of weights V[n, k], and a custom
user-supplied evaluator. Probabilities are handled in log space with
``-inf`` standing for an exact zero.
"""
import csv
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidArgument, InvalidModel, InvalidState, ResourceLimit
from .partitions import Partition, validate_sizes

NEG_INF = -math.inf
RECURSION_RTOL = 1e-10


def log_rising(x, m):
    """log of the rising factorial (x)_m = x (x+1) ... (x+m-1), for x > 0."""
    if m == 0:
        return 0.0
    return math.lgamma(x + m) - math.lgamma(x)


def _exp(logp):
    return 0.0 if logp == NEG_INF else math.exp(logp)


def _canonical(sizes):
    # one arithmetic path for every ordering of the same multiset
    return tuple(sorted(validate_sizes(sizes), reverse=True))


class EppfModel:
    """Common interface. Subclasses implement :meth:`log_eppf`."""

    def log_eppf(self, sizes):
        raise NotImplementedError

    def eppf(self, sizes):
        return _exp(self.log_eppf(sizes))

    def predictive_weights(self, sizes):
        """Probabilities of joining each existing block, then a new block."""
        sizes = validate_sizes(sizes)
        if not sizes:
            return [1.0]
        base = self.log_eppf(sizes)
        if base == NEG_INF:
            raise InvalidState(f"configuration {sizes} has probability zero")
        out = []
        for i in range(len(sizes)):
            bumped = sizes[:i] + (sizes[i] + 1,) + sizes[i + 1:]
            out.append(_exp(self.log_eppf(bumped) - base))
        out.append(_exp(self.log_eppf(sizes + (1,)) - base))
        return out


@dataclass(frozen=True)
class PitmanYor(EppfModel):
    sigma: float
    theta: float

    def __post_init__(self):
        s, t = float(self.sigma), float(self.theta)
        object.__setattr__(self, "sigma", s)
        object.__setattr__(self, "theta", t)
        if 0 <= s < 1:
            if not t > -s:
                raise InvalidModel(f"Pitman-Yor needs theta > -sigma, got sigma={s}, theta={t}")
        elif s < 0:
            m = t / abs(s)
            if not (m >= 1 and abs(m - round(m)) < 1e-9):
                raise InvalidModel(
                    f"Pitman-Yor with sigma < 0 needs theta = |sigma| * m for a positive integer m, "
                    f"got sigma={s}, theta={t}")
        else:
            raise InvalidModel(f"Pitman-Yor needs sigma < 1, got {s}")

    @property
    def max_blocks(self):
        """Largest reachable number of blocks (None when unbounded)."""
        if self.sigma < 0:
            return int(round(self.theta / abs(self.sigma)))
        return None

    def log_v(self, n, k):
        if not 1 <= k <= n:
            if n == 0 and k == 0:
                return 0.0
            return NEG_INF
        s, t = self.sigma, self.theta
        acc = 0.0
        for i in range(1, k):
            f = t + i * s
            if f <= 0:
                return NEG_INF
            acc += math.log(f)
        return acc - log_rising(t + 1, n - 1)

    def log_eppf(self, sizes):
        sizes = _canonical(sizes)
        if not sizes:
            return 0.0
        lv = self.log_v(sum(sizes), len(sizes))
        if lv == NEG_INF:
            return NEG_INF
        return lv + sum(log_rising(1 - self.sigma, c - 1) for c in sizes)

    def predictive_weights(self, sizes):
        sizes = validate_sizes(sizes)
        n, k = sum(sizes), len(sizes)
        if not sizes:
            return [1.0]
        denom = self.theta + n
        out = [(c - self.sigma) / denom for c in sizes]
        out.append(max(self.theta + self.sigma * k, 0.0) / denom)
        return out


class VTable:
    """Gibbs weights V[n, k] for 1 <= k <= n <= n_max, stored as logs."""

    def __init__(self, log_v, sigma=None):
        log_v = np.array(log_v, dtype=float)
        if log_v.ndim != 2 or log_v.shape[0] != log_v.shape[1] or log_v.shape[0] < 2:
            raise InvalidModel("V-table must be a square array indexed [n, k] with n_max >= 1")
        self._log_v = log_v
        self._log_v.setflags(write=False)
        self.n_max = log_v.shape[0] - 1
        self.sigma = sigma
        if not math.isclose(log_v[1, 1], 0.0, abs_tol=1e-12):
            raise InvalidModel(f"V[1,1] must equal 1, got {math.exp(log_v[1, 1])}")
        if np.isnan(log_v).any():
            raise InvalidModel("V-table contains NaN")

    @classmethod
    def from_entries(cls, entries, n_max=None):
        """Build from an iterable of (n, k, log_v) triples; missing entries are zero."""
        entries = list(entries)
        if n_max is None:
            n_max = max(n for n, _, _ in entries)
        arr = np.full((n_max + 1, n_max + 1), NEG_INF)
        for n, k, lv in entries:
            if not 1 <= k <= n <= n_max:
                raise InvalidModel(f"V-table entry ({n},{k}) out of range")
            arr[n, k] = lv
        return cls(arr)

    @classmethod
    def from_csv(cls, path):
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["n", "k", "log_v"]:
                raise InvalidModel(f"{path}: V-table CSV header must be n,k,log_v")
            try:
                entries = [(int(r["n"]), int(r["k"]), float(r["log_v"])) for r in reader]
            except (TypeError, ValueError) as exc:
                raise InvalidModel(f"{path}: malformed V-table row ({exc})")
        if not entries:
            raise InvalidModel(f"{path}: empty V-table")
        return cls.from_entries(entries)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "k", "log_v"])
            for n in range(1, self.n_max + 1):
                for k in range(1, n + 1):
                    w.writerow([n, k, repr(float(self._log_v[n, k]))])

    def log(self, n, k):
        if n == 0 and k == 0:
            return 0.0
        if n > self.n_max:
            raise ResourceLimit(f"V-table covers n <= {self.n_max}, asked for n={n}")
        if not 1 <= k <= n:
            return NEG_INF
        return float(self._log_v[n, k])

    def value(self, n, k):
        return _exp(self.log(n, k))

    def max_recursion_residual(self, sigma):
        """Largest relative residual of (n - sigma k) V[n+1,k] + V[n+1,k+1] = V[n,k]."""
        # compared in log space so that entries far below the float range still count
        worst = 0.0
        t = self._log_v
        for n in range(1, self.n_max):
            for k in range(1, n + 1):
                lhs = np.logaddexp(math.log(n - sigma * k) + t[n + 1, k], t[n + 1, k + 1])
                rhs = t[n, k]
                if lhs == NEG_INF and rhs == NEG_INF:
                    continue
                if lhs == NEG_INF or rhs == NEG_INF:
                    return math.inf
                worst = max(worst, abs(math.expm1(lhs - rhs)))
        return worst


def py_v_table(sigma, theta, n_max):
    """V-table of the Pitman-Yor(sigma, theta) model."""
    model = PitmanYor(sigma, theta)
    if n_max < 1:
        raise InvalidArgument("n_max must be at least 1")
    arr = np.full((n_max + 1, n_max + 1), NEG_INF)
    for n in range(1, n_max + 1):
        for k in range(1, n + 1):
            arr[n, k] = model.log_v(n, k)
    return VTable(arr, sigma=model.sigma)


@dataclass(eq=False)
class Gibbs(EppfModel):
    sigma: float
    v: VTable
    check: bool = True

    def __post_init__(self):
        self.sigma = float(self.sigma)
        if not self.sigma < 1:
            raise InvalidModel(f"Gibbs-type models need sigma < 1, got {self.sigma}")
        if self.check:
            resid = self.v.max_recursion_residual(self.sigma)
            if resid > RECURSION_RTOL:
                raise InvalidModel(f"V-table violates the Gibbs recursion (max relative residual {resid:.3g})")

    def log_v(self, n, k):
        return self.v.log(n, k)

    def log_eppf(self, sizes):
        sizes = _canonical(sizes)
        if not sizes:
            return 0.0
        lv = self.v.log(sum(sizes), len(sizes))
        if lv == NEG_INF:
            return NEG_INF
        return lv + sum(log_rising(1 - self.sigma, c - 1) for c in sizes)

    def predictive_weights(self, sizes):
        sizes = validate_sizes(sizes)
        if not sizes:
            return [1.0]
        n, k = sum(sizes), len(sizes)
        base = self.v.log(n, k)
        if base == NEG_INF:
            raise InvalidState(f"configuration {sizes} has probability zero")
        old = _exp(self.v.log(n + 1, k) - base)
        new = _exp(self.v.log(n + 1, k + 1) - base)
        return [old * (c - self.sigma) for c in sizes] + [new]


@dataclass(eq=False)
class Custom(EppfModel):
    """Wrap a user function mapping a tuple of block sizes to a probability.

    Symmetry and the addition rule are not assumed; see :func:`selfcheck_custom`.
    """

    evaluator: object
    name: str = "custom"

    def log_eppf(self, sizes):
        sizes = validate_sizes(sizes)
        if not sizes:
            return 0.0
        p = float(self.evaluator(sizes))
        if p < 0 or p > 1 + 1e-12 or math.isnan(p):
            raise InvalidModel(f"custom EPPF returned {p} for {sizes}")
        return math.log(p) if p > 0 else NEG_INF


def eval_eppf(model, sizes):
    return model.eppf(sizes)


def predictive_weights(model, sizes):
    return model.predictive_weights(sizes)


def choose_index(weights, u):
    """Inverse-CDF pick over ``weights`` in order, using uniform ``u`` in [0, 1)."""
    target = u * sum(weights)
    acc = 0.0
    last = 0
    for i, w in enumerate(weights):
        if w > 0:
            last = i
            acc += w
            if target < acc:
                return i
    return last


def seat_customers(model, n, rng):
    """Sequentially seat ``n`` customers; returns the 0-based table of each customer."""
    if n < 1:
        raise InvalidArgument(f"n must be positive, got {n}")
    sizes = []
    tables = []
    for _ in range(n):
        j = choose_index(model.predictive_weights(sizes), rng.random())
        if j == len(sizes):
            sizes.append(1)
        else:
            sizes[j] += 1
        tables.append(j)
    return tables


def sample_latent_partition(model, n, seed=None):
    """Draw the latent partition of [n] by sequential seating (new table weight last)."""
    rng = np.random.default_rng(seed)
    blocks = []
    for i, j in enumerate(seat_customers(model, n, rng), start=1):
        if j == len(blocks):
            blocks.append([i])
        else:
            blocks[j].append(i)
    return Partition(n, tuple(tuple(b) for b in blocks))


LINEAR_ROWS = 100


class StirlingTable:
    """Generalized Stirling numbers S_sigma(n, k), 0 <= k <= n <= n_max, in log space."""

    def __init__(self, sigma, n_max):
        sigma = float(sigma)
        if not sigma < 1:
            raise InvalidArgument(f"sigma must be < 1, got {sigma}")
        self.sigma = sigma
        self.n_max = n_max
        t = np.full((n_max + 1, n_max + 2), NEG_INF)
        t[0, 0] = 0.0
        for n in range(n_max):
            for k in range(1, n + 2):
                t[n + 1, k] = np.logaddexp(t[n, k - 1], math.log(n - sigma * k) + t[n, k]
                                           if k <= n else NEG_INF)
        self._log = t[:, : n_max + 1]
        self._log.setflags(write=False)
        # the same recursion on the linear scale for small n, where it is exact for integer
        # (sigma = 0) or dyadic values and cannot overflow
        rows = min(n_max, LINEAR_ROWS)
        lin = np.zeros((rows + 1, rows + 2))
        lin[0, 0] = 1.0
        for n in range(rows):
            lin[n + 1, 1: n + 2] = lin[n, : n + 1] + (n - sigma * np.arange(1, n + 2)) * lin[n, 1: n + 2]
        self._lin = lin[:, : rows + 1]
        self._lin.setflags(write=False)

    def log(self, n, k):
        if n < 0 or k < 0:
            raise InvalidArgument("Stirling indices must be non-negative")
        if k > n:
            return NEG_INF
        if n > self.n_max:
            raise ResourceLimit(f"Stirling table covers n <= {self.n_max}")
        return float(self._log[n, k])

    def __call__(self, n, k):
        if 0 <= k <= n < self._lin.shape[0]:
            return float(self._lin[n, k])
        return _exp(self.log(n, k))


STIRLING_CAP = 2000


@lru_cache(maxsize=32)
def _stirling_table(sigma, n_max):
    return StirlingTable(sigma, n_max)


def stirling_table(sigma, n_max):
    """Cached table covering at least ``n_max`` rows."""
    if n_max > STIRLING_CAP:
        raise ResourceLimit(f"Stirling tables are capped at n = {STIRLING_CAP}")
    size = 16
    while size < n_max:
        size *= 2
    return _stirling_table(float(sigma), min(max(size, n_max), STIRLING_CAP))


def stirling_sigma(sigma, n, k):
    """S_sigma(n, k) via S(n+1, k) = S(n, k-1) + (n - sigma k) S(n, k)."""
    if n < 0 or k < 0:
        raise InvalidArgument("Stirling indices must be non-negative")
    if k > n:
        return 0.0
    return stirling_table(sigma, n)(n, k)


def log_stirling_sigma(sigma, n, k):
    if n < 0 or k < 0:
        raise InvalidArgument("Stirling indices must be non-negative")
    if k > n:
        return NEG_INF
    return stirling_table(sigma, n).log(n, k)


def selfcheck_custom(model, n_max=6):
    """Check symmetry and the addition rule of any model on all sizes with n <= n_max.

    Returns a dict with the worst absolute deviations found.
    """
    from itertools import permutations

    from .induced import integer_partitions

    worst_sym = 0.0
    worst_add = 0.0
    for n in range(1, n_max + 1):
        for k in range(1, n + 1):
            for parts in integer_partitions(n, k):
                q = model.eppf(parts)
                for perm in set(permutations(parts)):
                    worst_sym = max(worst_sym, abs(model.eppf(perm) - q))
                if n < n_max:
                    total = sum(model.eppf(parts[:i] + (parts[i] + 1,) + parts[i + 1:])
                                for i in range(len(parts)))
                    total += model.eppf(parts + (1,))
                    worst_add = max(worst_add, abs(total - q))
    return {"symmetry": worst_sym, "addition_rule": worst_add}
