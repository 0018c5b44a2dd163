"""Small-n invariant suites behind the ``selfcheck`` command."""
import math
import time
from dataclasses import dataclass

from .asymptotics import log_checkpoints, simulate_path
from .basemeasure import BaseMeasure, a_ml, a_ml_direct
from .eppf import Custom, Gibbs, PitmanYor, RECURSION_RTOL, py_v_table, selfcheck_custom, stirling_sigma
from .induced import (induced_eppf_general, induced_eppf_gibbs, induced_eppf_spike_slab,
                      integer_partitions, oracle_law, parts_to_multiplicities, _c_row)
from .partitions import block_sizes, enumerate_partitions, restrict

PY_GRID = [(0.0, 1.0), (0.25, 0.5), (0.5, 1.0), (-0.5, 1.5)]
SPIKES = [0.0, 0.3, 0.7, 1.0]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _bell_triangle(n):
    row = [1]
    for _ in range(n - 1):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[-1]


def check_partition_enumeration(n_max=9):
    for n in range(1, n_max + 1):
        count = 0
        for p in enumerate_partitions(n):
            count += 1
            if restrict(p, n) != p:
                return False, f"restriction to n changed a partition of [{n}]"
        if count != _bell_triangle(n):
            return False, f"n={n}: {count} partitions, Bell number is {_bell_triangle(n)}"
    return True, f"counts match Bell numbers for n <= {n_max}"


def _size_lists(n):
    for k in range(1, n + 1):
        yield from integer_partitions(n, k)


def check_addition_rule(models, n_max=7):
    worst = 0.0
    for model in models:
        for n in range(1, n_max):
            for sizes in _size_lists(n):
                q = model.eppf(sizes)
                total = sum(model.eppf(sizes[:i] + (sizes[i] + 1,) + sizes[i + 1:]) for i in range(len(sizes)))
                total += model.eppf(sizes + (1,))
                worst = max(worst, abs(total - q))
    return worst <= 1e-10, f"max |q(n) - sum of one-step extensions| = {worst:.2e}"


def check_normalization(models, n_max=7):
    worst = 0.0
    for model in models:
        for n in range(1, n_max + 1):
            total = sum(model.eppf(block_sizes(p)) for p in enumerate_partitions(n))
            worst = max(worst, abs(total - 1))
    return worst <= 1e-10, f"max |sum over P_n - 1| = {worst:.2e}"


def stirling_lambda_sum(sigma, n, k):
    """Generalized Stirling number from its defining sum over block-size profiles."""
    total = 0.0
    for parts in integer_partitions(n, k):
        row = parts_to_multiplicities(parts, n)
        w = 1.0
        for j, lam in enumerate(row, start=1):
            if lam:
                w *= math.prod(1 - sigma + i for i in range(j - 1)) ** lam
        total += _c_row(row) * w
    return total


def check_stirling(n_max=12, sigmas=(-0.5, 0.0, 0.25, 0.5, 0.9)):
    worst = 0.0
    for s in sigmas:
        for n in range(1, n_max + 1):
            for k in range(1, n + 1):
                ref = stirling_lambda_sum(s, n, k)
                worst = max(worst, abs(stirling_sigma(s, n, k) - ref) / ref)
    return worst <= 1e-9, f"max relative gap recursion vs profile sum = {worst:.2e}"


def check_vtable(model):
    resid = model.v.max_recursion_residual(model.sigma)
    return resid <= RECURSION_RTOL, f"max relative residual {resid:.2e} over n <= {model.v.n_max}"


def check_gibbs_identity(n_max=8):
    worst = 0.0
    for s, t in PY_GRID:
        py = PitmanYor(s, t)
        g = Gibbs(s, py_v_table(s, t, n_max + 1))
        for n in range(1, n_max + 1):
            for sizes in _size_lists(n):
                worst = max(worst, abs(py.eppf(sizes) - g.eppf(sizes)))
    return worst <= 1e-12, f"max |PY - Gibbs(V_PY)| = {worst:.2e}"


def check_a_ml():
    H = BaseMeasure.finite((0.25, 0.2, 0.15, 0.1, 0.05, 0.05))
    worst = 0.0
    for m_star in [(), (2,), (3,), (2, 2), (2, 3), (4,)]:
        for ell in range(0, 5 - len(m_star)):
            worst = max(worst, abs(a_ml(H, m_star, ell) - a_ml_direct(H, m_star, ell)))
    return worst <= 1e-12, f"max |inclusion-exclusion - direct| = {worst:.2e}"


def _induced_measures():
    return [BaseMeasure.spike_slab(a) for a in SPIKES] + [BaseMeasure.finite((0.2, 0.1))]


def check_induced(models, n_max=5):
    worst_agree = 0.0
    worst_norm = 0.0
    for model in models:
        gibbs = isinstance(model, (PitmanYor, Gibbs))
        for H in _induced_measures():
            for n in range(1, n_max + 1):
                law = oracle_law(model, H, n)
                total = 0.0
                cache = {}
                for p in enumerate_partitions(n):
                    key = tuple(sorted(block_sizes(p)))
                    if key not in cache:
                        vals = [induced_eppf_general(model, H, key).value]
                        if gibbs:
                            vals.append(induced_eppf_gibbs(model, H, key).value)
                        if H.n_atoms <= 1:
                            vals.append(induced_eppf_spike_slab(model, H.a, key).value)
                        cache[key] = vals
                    vals = cache[key]
                    total += vals[0]
                    ref = law.get(p, 0.0)
                    worst_agree = max(worst_agree, max(abs(v - ref) for v in vals))
                worst_norm = max(worst_norm, abs(total - 1))
    ok = worst_agree <= 1e-10 and worst_norm <= 1e-9
    return ok, f"max method gap {worst_agree:.2e}, max normalization error {worst_norm:.2e}"


def check_paths(model=None):
    model = model or PitmanYor(0.5, 1.0)
    ck = log_checkpoints(1, 2000)
    bad = 0
    for H in (BaseMeasure.spike_slab(0.3), BaseMeasure.finite((0.3, 0.2)), BaseMeasure.spike_slab(1.0)):
        for i in range(3):
            bad += simulate_path(model, H, ck, 5, (0, i)).identity_violations()
    return bad == 0, f"{bad} checkpoint violations of merged = N + Lambda and block-mass identities"


def run_selfcheck(model=None):
    """Run every suite; with ``model`` given, model-specific checks are added."""
    py_models = [PitmanYor(s, t) for s, t in PY_GRID]
    checks = [
        ("partition_enumeration", check_partition_enumeration, ()),
        ("eppf_addition_rule", check_addition_rule, (py_models,)),
        ("eppf_normalization", check_normalization, (py_models,)),
        ("stirling_recursion", check_stirling, ()),
        ("gibbs_identity", check_gibbs_identity, ()),
        ("a_ml_inclusion_exclusion", check_a_ml, ()),
        ("induced_agreement", check_induced, ([PitmanYor(0.5, 1.0), PitmanYor(-0.5, 1.5)], 6)),
        ("path_identity", check_paths, ()),
    ]
    if model is not None:
        if isinstance(model, Gibbs):
            checks.append(("vtable_recursion", check_vtable, (model,)))
        if isinstance(model, Custom):
            checks.append(("custom_symmetry_addition", _custom, (model,)))
        else:
            checks.append(("model_addition_rule", check_addition_rule, ([model], 6)))
    results = []
    for name, fn, args in checks:
        t0 = time.perf_counter()
        try:
            ok, detail = fn(*args)
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(ok), detail, time.perf_counter() - t0))
        if name == "vtable_recursion" and not ok:
            # the remaining model checks would only repeat this failure
            break
    return results


def _custom(model):
    res = selfcheck_custom(model)
    ok = res["symmetry"] <= 1e-12 and res["addition_rule"] <= 1e-10
    return ok, f"symmetry gap {res['symmetry']:.2e}, addition-rule gap {res['addition_rule']:.2e}"
