"""Base measures with atoms: H = sum_i w_i delta_{x_i} + (1 - a) H_c.

Atom locations never enter the partition law, so a base measure is just
its atom weights plus the diffuse remainder. Draws from the diffuse part
are represented by unique :class:`Fresh` tokens.
"""
import math
from dataclasses import dataclass
from itertools import product
from math import comb

import numpy as np
from scipy.special import zeta

from .errors import InvalidArgument, InvalidState, ResourceLimit
from .partitions import enumerate_partitions

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class Atom:
    index: int

    def __str__(self):
        return f"a{self.index}"


@dataclass(frozen=True)
class Fresh:
    id: int

    def __str__(self):
        return f"f{self.id}"


@dataclass(frozen=True)
class Family:
    kind: str  # "power_law" or "geometric"
    parameter: float  # exponent or ratio
    truncation: int
    total_atom_mass: float

    def raw_weight(self, j):
        """Weight of atom j (1-based) normalized within the discrete part."""
        if self.kind == "power_law":
            return j ** (-self.parameter) / zeta(self.parameter)
        rho = self.parameter
        return (1 - rho) * rho ** (j - 1)

    def alpha(self, x):
        """Number of j with raw_weight(j) >= 1/x, from the closed form."""
        if self.kind == "power_law":
            s = self.parameter
            # j^-s / zeta(s) >= 1/x  <=>  j <= (x / zeta(s))^(1/s)
            bound = (x / zeta(s)) ** (1.0 / s)
            j = math.floor(bound)
            # guard the floor against rounding at exact boundaries
            while j >= 1 and self.raw_weight(j) < 1.0 / x:
                j -= 1
            while self.raw_weight(j + 1) >= 1.0 / x:
                j += 1
            return max(j, 0)
        rho = self.parameter
        if x * (1 - rho) < 1:
            return 0
        j = 1 + math.floor(math.log(x * (1 - rho)) / math.log(1 / rho))
        while j >= 1 and self.raw_weight(j) < 1.0 / x:
            j -= 1
        while self.raw_weight(j + 1) >= 1.0 / x:
            j += 1
        return j


class BaseMeasure:
    """Atom weights plus a diffuse remainder.

    For infinite parametric families the weights are truncated at
    ``family.truncation`` atoms; the omitted ``tail_mass`` is folded into the
    diffuse part and reported as an error bound by exact computations.
    """

    def __init__(self, atom_weights=(), family=None):
        w = np.asarray(atom_weights, dtype=float).reshape(-1)
        if (w <= 0).any() or not np.isfinite(w).all():
            raise InvalidArgument("atom weights must be positive and finite")
        a = float(w.sum())
        if a > 1 + WEIGHT_TOL:
            raise InvalidArgument(f"atom weights sum to {a} > 1")
        self.atom_weights = w
        self.atom_weights.setflags(write=False)
        self.a = min(a, 1.0)
        self.family = family
        self.tail_mass = 0.0
        if family is not None:
            self.tail_mass = max(family.total_atom_mass - a, 0.0)
        self._cum = np.cumsum(w).tolist()
        self._power_sums = {}
        self._aml_cache = {}

    @classmethod
    def diffuse(cls):
        return cls(())

    @classmethod
    def spike_slab(cls, a):
        if not 0 <= a <= 1:
            raise InvalidArgument(f"spike mass must be in [0, 1], got {a}")
        return cls((a,) if a > 0 else ())

    @classmethod
    def finite(cls, weights):
        return cls(tuple(weights))

    @classmethod
    def power_law(cls, exponent, truncation, total_atom_mass=1.0):
        if not exponent > 1:
            raise InvalidArgument("power-law exponent must exceed 1")
        return cls._from_family(Family("power_law", float(exponent), int(truncation), float(total_atom_mass)))

    @classmethod
    def geometric(cls, ratio, truncation, total_atom_mass=1.0):
        if not 0 < ratio < 1:
            raise InvalidArgument("geometric ratio must lie in (0, 1)")
        return cls._from_family(Family("geometric", float(ratio), int(truncation), float(total_atom_mass)))

    @classmethod
    def _from_family(cls, fam):
        if fam.truncation < 1:
            raise InvalidArgument("truncation must be at least 1")
        if not 0 < fam.total_atom_mass <= 1 + WEIGHT_TOL:
            raise InvalidArgument("total atom mass must lie in (0, 1]")
        j = np.arange(1, fam.truncation + 1, dtype=float)
        if fam.kind == "power_law":
            raw = j ** (-fam.parameter) / zeta(fam.parameter)
        else:
            raw = (1 - fam.parameter) * fam.parameter ** (j - 1)
        raw = raw[raw > 0]
        return cls(fam.total_atom_mass * raw, family=fam)

    @property
    def n_atoms(self):
        return len(self.atom_weights)

    @property
    def diffuse_mass(self):
        return max(1.0 - self.a, 0.0)

    def power_sum(self, t):
        """sum_j w_j ** t."""
        v = self._power_sums.get(t)
        if v is None:
            v = float(np.sum(self.atom_weights ** t))
            self._power_sums[t] = v
        return v

    def __repr__(self):
        if self.family is not None:
            f = self.family
            return f"BaseMeasure({f.kind}={f.parameter}, truncation={f.truncation}, a={self.a:.6g})"
        return f"BaseMeasure(atoms={self.atom_weights.tolist()}, diffuse={self.diffuse_mass:.6g})"


@dataclass
class PathState:
    """Caller-owned randomness for dish draws: an rng plus a fresh-token counter."""

    rng: object
    next_fresh: int = 0


def atom_for_uniform(H, u):
    """Map a uniform draw to a 1-based atom index, or None for the diffuse part."""
    if u >= H.a:
        return None
    cum = H._cum
    lo, hi = 0, len(cum) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if u < cum[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo + 1


def sample_dish(H, state):
    idx = atom_for_uniform(H, state.rng.random())
    if idx is None:
        label = Fresh(state.next_fresh)
        state.next_fresh += 1
        return label
    return Atom(idx)


def _mobius_weight(block_len):
    return (-1) ** (block_len - 1) * math.factorial(block_len - 1)


def a_ml(H, m_star, ell):
    """Sum over pairwise-distinct atom indices j_1..j_{r+ell} of
    w_{j_1}^{m*_1} ... w_{j_r}^{m*_r} w_{j_{r+1}} ... w_{j_{r+ell}}.

    Computed by Moebius inversion over coincidence patterns of the r + ell
    positions, each pattern contributing a product of power sums.
    """
    if ell < 0:
        raise InvalidArgument(f"ell must be non-negative, got {ell}")
    m_star = tuple(sorted(int(x) for x in m_star))
    if any(x < 1 for x in m_star):
        raise InvalidArgument("exponents must be positive")
    t = len(m_star) + ell
    if t == 0:
        return 1.0
    if t > H.n_atoms:
        return 0.0
    key = (m_star, ell)
    cached = H._aml_cache.get(key)
    if cached is not None:
        return cached
    exps = m_star + (1,) * ell
    total = 0.0
    for p in enumerate_partitions(t, cap=max(t, 12)):
        term = 1.0
        for block in p.blocks:
            term *= _mobius_weight(len(block)) * H.power_sum(sum(exps[i - 1] for i in block))
        total += term
    if total < 0:
        # round-off only: the true value is a sum of non-negative terms
        total = 0.0
    H._aml_cache[key] = total
    return total


def a_ml_direct(H, m_star, ell, cap=2_000_000):
    """Brute-force A_{m,ell} by enumerating injective index maps."""
    exps = tuple(m_star) + (1,) * ell
    t = len(exps)
    if t == 0:
        return 1.0
    A = H.n_atoms
    if t > A:
        return 0.0
    if math.perm(A, t) > cap:
        raise ResourceLimit("too many injections for direct enumeration")
    w = H.atom_weights.tolist()
    total = 0.0
    for idx in product(range(A), repeat=t):
        if len(set(idx)) < t:
            continue
        term = 1.0
        for j, e in zip(idx, exps):
            term *= w[j] ** e
        total += term
    return total


def h_sharp(H, m):
    """Probability that |m| i.i.d. draws from H, taken in k consecutive groups
    of sizes m_1..m_k, are equal within each group and distinct across groups.
    """
    m = tuple(int(x) for x in m)
    if not m or any(x < 1 for x in m):
        raise InvalidArgument(f"occupancy vector must be non-empty with positive entries, got {m}")
    k = len(m)
    m_star = tuple(x for x in m if x > 1)
    r = len(m_star)
    free = H.diffuse_mass
    total = 0.0
    for ell in range(k - r + 1):
        aml = a_ml(H, m_star, ell)
        if aml == 0.0:
            continue
        total += free ** (k - ell - r) * comb(k - r, ell) * aml
    return min(total, 1.0)


def h_sharp_error_bound(H, m):
    """Bound on |h_sharp| error caused by truncating an infinite atom family."""
    return sum(m) * H.tail_mass


def alpha_of(H, x):
    """Number of atoms whose weight within the discrete part is at least 1/x."""
    if x <= 0:
        raise InvalidArgument("x must be positive")
    if H.family is not None:
        return H.family.alpha(x)
    if H.a == 0:
        raise InvalidState("base measure has no atoms")
    rel = H.atom_weights / H.a
    return int(np.count_nonzero(rel >= 1.0 / x))
