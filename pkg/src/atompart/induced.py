"""Exact law of the partition induced by dish values.

Tables of the latent partition merge whenever their i.i.d. dishes from the
base measure coincide. The probability of an induced partition with block
sizes n = (n_1, ..., n_k) is

    sum over m in M(n) of H#(m) * sum over lambda in Lambda(m) of c(lambda) q~(lambda),

where m_i counts the latent tables inside block i and lambda records how
block i splits into those tables.
"""
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .basemeasure import h_sharp, h_sharp_error_bound
from .eppf import NEG_INF, Gibbs, PitmanYor, log_stirling_sigma
from .errors import InvalidArgument, ResourceLimit, general_cap, oracle_cap
from .partitions import Partition, enumerate_partitions, validate_sizes

NEGATIVE_ROUNDOFF = 1e-14
OCCUPANCY_CAP = 200_000


@dataclass(frozen=True)
class InducedProbability:
    value: float
    error_bound: float = 0.0
    method: str = "general"

    def __float__(self):
        return self.value


def _clamp(x):
    if x < 0:
        if x < -NEGATIVE_ROUNDOFF:
            raise ArithmeticError(f"probability evaluated to {x}")
        return 0.0
    return x


def _sorted_sizes(sizes):
    sizes = validate_sizes(sizes)
    if not sizes:
        raise InvalidArgument("block sizes must be non-empty")
    return tuple(sorted(sizes, reverse=True))


@lru_cache(maxsize=None)
def _integer_partitions(n, k, largest):
    if k == 0:
        return [()] if n == 0 else []
    if n < k or largest < 1:
        return []
    out = []
    for first in range(min(n - k + 1, largest), 0, -1):
        for rest in _integer_partitions(n - first, k - 1, first):
            out.append((first,) + rest)
    return out


def integer_partitions(n, k):
    """Partitions of the integer n into exactly k positive parts, parts non-increasing."""
    return list(_integer_partitions(n, k, n))


def parts_to_multiplicities(parts, n):
    lam = [0] * n
    for p in parts:
        lam[p - 1] += 1
    return tuple(lam)


def multiplicities_to_parts(row):
    parts = []
    for j in range(len(row), 0, -1):
        parts.extend([j] * row[j - 1])
    return tuple(parts)


def enumerate_occupancies(sizes):
    """Every m with 1 <= m_i <= n_i."""
    sizes = validate_sizes(sizes)
    if math.prod(sizes) > OCCUPANCY_CAP:
        raise ResourceLimit(f"|M(n)| = {math.prod(sizes)} exceeds cap {OCCUPANCY_CAP}")
    return product(*(range(1, s + 1) for s in sizes))


def enumerate_profiles(sizes, m):
    """Every lambda in Lambda(m): row i gives the multiplicities (lambda_i1..lambda_in_i)
    of a partition of n_i into exactly m_i parts."""
    sizes = validate_sizes(sizes)
    m = tuple(m)
    if len(m) != len(sizes) or any(not 1 <= mi <= ni for mi, ni in zip(m, sizes)):
        raise InvalidArgument(f"occupancy {m} is not in M({sizes})")
    rows = [[parts_to_multiplicities(p, ni) for p in integer_partitions(ni, mi)]
            for ni, mi in zip(sizes, m)]
    return product(*rows)


@lru_cache(maxsize=None)
def _c_row(row):
    ni = sum(j * lam for j, lam in enumerate(row, start=1))
    denom = 1
    for j, lam in enumerate(row, start=1):
        denom *= math.factorial(lam) * math.factorial(j) ** lam
    return math.factorial(ni) // denom


def c_lambda(profile):
    """Number of ways to split each block into sub-blocks with the given size counts."""
    return math.prod(_c_row(tuple(row)) for row in profile)


def profile_parts(profile):
    """One size list realizing the profile, blocks concatenated."""
    out = ()
    for row in profile:
        out += multiplicities_to_parts(row)
    return out


def q_tilde(model, profile):
    return model.eppf(profile_parts(profile))


def _check_cap(n, cap, what):
    if n > cap:
        raise ResourceLimit(f"{what} is capped at n = {cap}, got n = {n}")


def induced_eppf_general(model, H, sizes):
    """Sum over occupancies and split profiles; works for any EPPF model."""
    sizes = _sorted_sizes(sizes)
    n = sum(sizes)
    _check_cap(n, general_cap(), "exact induced EPPF")
    total = 0.0
    bound = 0.0
    for m in enumerate_occupancies(sizes):
        hs = h_sharp(H, m)
        bound = max(bound, h_sharp_error_bound(H, m))
        if hs == 0.0:
            continue
        inner = 0.0
        for profile in enumerate_profiles(sizes, m):
            q = q_tilde(model, profile)
            if q:
                inner += c_lambda(profile) * q
        total += hs * inner
    return InducedProbability(_clamp(total), bound, "general")


def _gibbs_parts(model):
    if isinstance(model, (PitmanYor, Gibbs)):
        return model.sigma, model.log_v
    raise InvalidArgument(f"{type(model).__name__} is not a Gibbs-type model")


def induced_eppf_gibbs(model, H, sizes):
    """sum_m H#(m) V_{n,|m|} prod_i S_sigma(n_i, m_i)."""
    sigma, log_v = _gibbs_parts(model)
    sizes = _sorted_sizes(sizes)
    n = sum(sizes)
    _check_cap(n, general_cap(), "exact induced EPPF")
    total = 0.0
    bound = 0.0
    for m in enumerate_occupancies(sizes):
        hs = h_sharp(H, m)
        bound = max(bound, h_sharp_error_bound(H, m))
        if hs == 0.0:
            continue
        lv = log_v(n, sum(m))
        if lv == NEG_INF:
            continue
        ls = sum(log_stirling_sigma(sigma, ni, mi) for ni, mi in zip(sizes, m))
        total += hs * math.exp(lv + ls)
    return InducedProbability(_clamp(total), bound, "gibbs")


def _log_rising(x, m):
    return 0.0 if m == 0 else math.lgamma(x + m) - math.lgamma(x)


def induced_eppf_spike_slab(model, a, sizes):
    """Closed form for a single atom of mass ``a`` plus a diffuse slab."""
    if not 0 <= a <= 1:
        raise InvalidArgument(f"spike mass must lie in [0, 1], got {a}")
    sizes = _sorted_sizes(sizes)
    n, k = sum(sizes), len(sizes)
    total = (1 - a) ** k * model.eppf(sizes)
    if a == 0:
        return InducedProbability(_clamp(total), 0.0, "spike_slab")
    outer = 0.0
    if isinstance(model, (PitmanYor, Gibbs)):
        sigma = model.sigma
        for i, ni in enumerate(sizes):
            rest = sum(_log_rising(1 - sigma, c - 1) for j, c in enumerate(sizes) if j != i)
            acc = 0.0
            for r in range(1, ni + 1):
                lv = model.log_v(n, k - 1 + r)
                if lv == NEG_INF:
                    continue
                acc += a ** r * math.exp(lv + log_stirling_sigma(sigma, ni, r))
            outer += math.exp(rest) * acc
    else:
        # q(n_-i) q_n(r | n_-i) = sum over splits of n_i into r parts of c * q(n_-i + parts)
        for i, ni in enumerate(sizes):
            rest = sizes[:i] + sizes[i + 1:]
            acc = 0.0
            for r in range(1, ni + 1):
                joint = 0.0
                for parts in integer_partitions(ni, r):
                    row = parts_to_multiplicities(parts, ni)
                    joint += _c_row(row) * model.eppf(rest + parts)
                acc += a ** r * joint
            outer += acc
    total += (1 - a) ** (k - 1) * outer
    return InducedProbability(_clamp(total), 0.0, "spike_slab")


def joint_atom_probability(model, H, atom_labels):
    """P(xi_1 = x_{i_1}, ..., xi_n = x_{i_n}) for 1-based atom indices."""
    labels = tuple(int(i) for i in atom_labels)
    if not labels:
        raise InvalidArgument("need at least one label")
    if any(not 1 <= i <= H.n_atoms for i in labels):
        raise InvalidArgument(f"labels must be atom indices in 1..{H.n_atoms}")
    w = H.atom_weights
    total = 0.0
    for p in enumerate_partitions(len(labels)):
        prod = 1.0
        for block in p.blocks:
            first = labels[block[0] - 1]
            if any(labels[j - 1] != first for j in block):
                prod = 0.0
                break
            prod *= w[first - 1]
        if prod:
            total += model.eppf(tuple(len(b) for b in p.blocks)) * prod
    return total


ORACLE_MAX_ATOMS = 6


@lru_cache(maxsize=64)
def _oracle_law(model, H, n):
    law = {}
    weights = [H.diffuse_mass] + H.atom_weights.tolist()
    for latent in enumerate_partitions(n):
        q = model.eppf(tuple(len(b) for b in latent.blocks))
        if q == 0.0:
            continue
        K = len(latent.blocks)
        # dish 0 is a fresh diffuse token (never collides); dish j >= 1 is atom j
        for dishes in product(range(len(weights)), repeat=K):
            pr = q
            for d in dishes:
                pr *= weights[d]
            if pr == 0.0:
                continue
            merged = {}
            blocks = []
            for block, d in zip(latent.blocks, dishes):
                if d == 0:
                    blocks.append(list(block))
                elif d in merged:
                    merged[d].extend(block)
                else:
                    merged[d] = list(block)
                    blocks.append(merged[d])
            target = Partition.from_blocks(blocks, n)
            law[target] = law.get(target, 0.0) + pr
    return law


def oracle_law(model, H, n):
    """Full law of the induced partition of [n] by brute force over latent
    partitions and dish assignments."""
    _check_cap(n, oracle_cap(), "brute-force oracle")
    if H.family is not None or H.n_atoms > ORACLE_MAX_ATOMS:
        raise ResourceLimit(f"oracle needs at most {ORACLE_MAX_ATOMS} atoms")
    return _oracle_law(model, H, n)


def oracle_induced_eppf(model, H, target):
    if not isinstance(target, Partition):
        target = Partition.from_blocks(target)
    return oracle_law(model, H, target.n).get(target, 0.0)


METHODS = ("general", "gibbs", "spike_slab", "oracle")


def induced_probability(model, H, partition, method="general"):
    """Dispatch on ``method``; ``partition`` may be a Partition or a size tuple."""
    if isinstance(partition, Partition):
        sizes = tuple(len(b) for b in partition.blocks)
    else:
        sizes = validate_sizes(partition)
        partition = Partition.from_sizes(sizes)
    if method == "general":
        return induced_eppf_general(model, H, sizes)
    if method == "gibbs":
        return induced_eppf_gibbs(model, H, sizes)
    if method == "spike_slab":
        if H.n_atoms > 1:
            raise InvalidArgument("spike-and-slab form needs at most one atom")
        return induced_eppf_spike_slab(model, H.a, sizes)
    if method == "oracle":
        return InducedProbability(oracle_induced_eppf(model, H, partition), 0.0, "oracle")
    raise InvalidArgument(f"unknown method {method!r}; choose from {METHODS}")
