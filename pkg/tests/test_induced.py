import math
from itertools import permutations, product

import pytest

from atompart import (BaseMeasure, Custom, Gibbs, Partition, PitmanYor, c_lambda, enumerate_occupancies,
                      enumerate_profiles, induced_eppf_general, induced_eppf_gibbs, induced_eppf_spike_slab,
                      induced_probability, joint_atom_probability, oracle_induced_eppf, oracle_law,
                      py_v_table, q_tilde, stirling_sigma)
from atompart.errors import InvalidArgument, ResourceLimit
from atompart.induced import integer_partitions, profile_parts
from atompart.partitions import block_sizes, enumerate_partitions, restrict

from conftest import PY_GRID, SPIKES, measures

A_SETS = [(0.3,), (0.2, 0.1), (0.3, 0.2, 0.1)]


def mixture_model():
    """Equal mixture of two Pitman-Yor EPPFs: a valid EPPF that is not of Gibbs type."""
    p1, p2 = PitmanYor(0.5, 1.0), PitmanYor(0.0, 3.0)
    return Custom(lambda s: 0.5 * p1.eppf(s) + 0.5 * p2.eppf(s), "mixture")


MIX = mixture_model()


def size_lists(n):
    for k in range(1, n + 1):
        yield from integer_partitions(n, k)


def count_set_splits(n, parts):
    target = tuple(sorted(parts, reverse=True))
    return sum(tuple(sorted(block_sizes(p), reverse=True)) == target for p in enumerate_partitions(n))


def test_occupancies():
    assert list(enumerate_occupancies((1, 1))) == [(1, 1)]
    assert set(enumerate_occupancies((2, 1))) == {(1, 1), (2, 1)}
    assert len(list(enumerate_occupancies((3, 2)))) == 6


def test_profiles():
    assert [profile_parts(p) for p in enumerate_profiles((3,), (2,))] == [(2, 1)]
    assert sorted(profile_parts(p) for p in enumerate_profiles((4,), (2,))) == [(2, 2), (3, 1)]
    profs = list(enumerate_profiles((3, 2, 4), (1, 1, 1)))
    assert len(profs) == 1
    assert [row[-1] for row in profs[0]] == [1, 1, 1]
    for prof in enumerate_profiles((5, 4), (3, 2)):
        for row, ni, mi in zip(prof, (5, 4), (3, 2)):
            assert sum(j * lam for j, lam in enumerate(row, 1)) == ni
            assert sum(row) == mi
    with pytest.raises(InvalidArgument):
        list(enumerate_profiles((2,), (3,)))


def test_c_lambda_examples():
    (p21,) = enumerate_profiles((3,), (2,))
    assert c_lambda(p21) == 3
    (ones,) = enumerate_profiles((3, 2), (1, 1))
    assert c_lambda(ones) == 1
    p22 = [p for p in enumerate_profiles((4,), (2,)) if profile_parts(p) == (2, 2)][0]
    assert c_lambda(p22) == 3


@pytest.mark.parametrize("n", range(1, 8))
def test_c_lambda_counts_set_splits(n):
    for m in range(1, n + 1):
        for prof in enumerate_profiles((n,), (m,)):
            assert c_lambda(prof) == count_set_splits(n, profile_parts(prof))


def test_q_tilde_examples(py_half):
    (p,) = enumerate_profiles((1, 1), (1, 1))
    assert q_tilde(py_half, p) == pytest.approx(0.75, abs=1e-15)
    (p,) = enumerate_profiles((3,), (2,))
    assert q_tilde(py_half, p) == pytest.approx(0.125, abs=1e-15)
    (p,) = enumerate_profiles((2, 2), (2, 2))
    assert q_tilde(py_half, p) == pytest.approx(py_half.eppf((1, 1, 1, 1)), abs=1e-15)


def test_q_tilde_depends_only_on_profile(py_half):
    # two size lists with the same statistics give the same value
    assert py_half.eppf((2, 1, 3, 1)) == py_half.eppf((1, 3, 1, 2))


def test_worked_values(py_half, spike03):
    for method in ("general", "gibbs", "spike_slab", "oracle"):
        assert induced_probability(py_half, spike03, (2,), method).value == pytest.approx(0.3175, abs=1e-12)
        assert induced_probability(py_half, spike03, (1, 1), method).value == pytest.approx(0.6825, abs=1e-12)
    hand = 0.7 * 0.25 + 0.3 * 0.5 * 0.5 + 0.09 * 0.75
    assert hand == pytest.approx(0.3175, abs=1e-15)


@pytest.mark.parametrize("sigma,theta", PY_GRID)
def test_diffuse_reduces_to_eppf(sigma, theta):
    model = PitmanYor(sigma, theta)
    H = BaseMeasure.diffuse()
    for sizes in size_lists(6):
        q = model.eppf(sizes)
        assert induced_eppf_general(model, H, sizes).value == pytest.approx(q, abs=1e-14)
        assert induced_eppf_gibbs(model, H, sizes).value == pytest.approx(q, abs=1e-14)
        assert induced_eppf_spike_slab(model, 0.0, sizes).value == pytest.approx(q, abs=1e-15)
    assert induced_eppf_general(MIX, H, (2, 1)).value == pytest.approx(MIX.eppf((2, 1)), abs=1e-15)


def test_trivial_cases(py_half):
    for H in measures():
        assert induced_eppf_gibbs(py_half, H, (1,)).value == pytest.approx(1.0, abs=1e-15)
    one = BaseMeasure.spike_slab(1.0)
    for n in range(1, 8):
        assert induced_eppf_gibbs(py_half, one, (n,)).value == pytest.approx(1.0, abs=1e-12)
        assert induced_eppf_general(py_half, one, (n,)).value == pytest.approx(1.0, abs=1e-12)
    assert oracle_law(py_half, one, 4) == pytest.approx({Partition.from_sizes((4,)): 1.0})


@pytest.mark.parametrize("sigma,theta", PY_GRID)
def test_single_atom_full_mass_gibbs_identity(sigma, theta):
    model = PitmanYor(sigma, theta)
    for n in range(1, 11):
        total = sum(math.exp(model.log_v(n, r)) * stirling_sigma(sigma, n, r)
                    for r in range(1, n + 1) if model.log_v(n, r) > -math.inf)
        assert total == pytest.approx(1.0, abs=1e-10)
        assert induced_eppf_spike_slab(model, 1.0, (n,)).value == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("atoms", A_SETS, ids=str)
@pytest.mark.parametrize("sigma,theta", PY_GRID)
def test_normalization(sigma, theta, atoms):
    model = PitmanYor(sigma, theta)
    H = BaseMeasure.finite(atoms)
    for n in range(1, 9):
        # sum over P_n grouped by size multiset
        total = 0.0
        for sizes in size_lists(n):
            mult = math.factorial(n) // math.prod(math.factorial(s) for s in sizes)
            mult //= math.prod(math.factorial(sizes.count(v)) for v in set(sizes))
            total += mult * induced_eppf_general(model, H, sizes).value
        assert total == pytest.approx(1.0, abs=1e-9)


def test_normalization_by_enumeration_small(py_half):
    for H in measures():
        for n in range(1, 6):
            total = sum(induced_eppf_general(py_half, H, block_sizes(p)).value for p in enumerate_partitions(n))
            assert total == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("method", ["general", "gibbs", "spike_slab"])
def test_exchangeability_exact(method, py_half):
    H = BaseMeasure.spike_slab(0.3) if method == "spike_slab" else BaseMeasure.finite((0.2, 0.1))
    for sizes in [(3, 1, 2), (2, 2, 1, 1), (4, 1, 2)]:
        vals = {induced_probability(py_half, H, perm, method).value for perm in permutations(sizes)}
        assert len(vals) == 1


@pytest.mark.parametrize("H", measures()[1:], ids=repr)
def test_consistency_under_restriction(H, py_half):
    for n in range(1, 6):
        parent = {}
        for p in enumerate_partitions(n + 1):
            q = restrict(p, n)
            parent[q] = parent.get(q, 0.0) + induced_eppf_general(py_half, H, block_sizes(p)).value
        for q, total in parent.items():
            assert total == pytest.approx(induced_eppf_general(py_half, H, block_sizes(q)).value, abs=1e-9)


@pytest.mark.parametrize("H", measures(), ids=repr)
@pytest.mark.parametrize("sigma,theta", PY_GRID)
def test_quadruple_agreement(sigma, theta, H):
    model = PitmanYor(sigma, theta)
    for n in range(1, 7):
        law = oracle_law(model, H, n)
        seen = {}
        for p in enumerate_partitions(n):
            key = tuple(sorted(block_sizes(p)))
            if key not in seen:
                vals = [induced_eppf_general(model, H, key).value, induced_eppf_gibbs(model, H, key).value]
                if H.n_atoms <= 1:
                    vals.append(induced_eppf_spike_slab(model, H.a, key).value)
                seen[key] = vals
            for v in seen[key]:
                assert v == pytest.approx(law.get(p, 0.0), abs=1e-10)


def test_gibbs_route_with_tabulated_v(spike03):
    g = Gibbs(0.25, py_v_table(0.25, 0.5, 10))
    py = PitmanYor(0.25, 0.5)
    for sizes in size_lists(6):
        assert induced_eppf_gibbs(g, spike03, sizes).value == pytest.approx(
            induced_eppf_general(py, spike03, sizes).value, abs=1e-12)


@pytest.mark.parametrize("a", SPIKES)
def test_custom_model_agreement(a):
    H = BaseMeasure.spike_slab(a)
    for n in range(1, 6):
        law = oracle_law(MIX, H, n)
        for p in enumerate_partitions(n):
            sizes = block_sizes(p)
            ref = law.get(p, 0.0)
            assert induced_eppf_general(MIX, H, sizes).value == pytest.approx(ref, abs=1e-10)
            assert induced_eppf_spike_slab(MIX, a, sizes).value == pytest.approx(ref, abs=1e-10)


def test_gibbs_route_rejects_custom(spike03):
    with pytest.raises(InvalidArgument):
        induced_eppf_gibbs(MIX, spike03, (2, 1))
    with pytest.raises(InvalidArgument):
        induced_eppf_spike_slab(PitmanYor(0.5, 1), 1.5, (2,))
    with pytest.raises(InvalidArgument):
        induced_probability(PitmanYor(0.5, 1), BaseMeasure.finite((0.2, 0.1)), (2,), "spike_slab")
    with pytest.raises(InvalidArgument):
        induced_probability(PitmanYor(0.5, 1), spike03, (2,), "bogus")


@pytest.mark.parametrize("H", measures(), ids=repr)
@pytest.mark.parametrize("sigma,theta", PY_GRID)
def test_merging_only_lowers_all_singletons(sigma, theta, H):
    model = PitmanYor(sigma, theta)
    for n in range(1, 8):
        ones = (1,) * n
        assert induced_eppf_general(model, H, ones).value <= model.eppf(ones) + 1e-15


def test_joint_atom_examples(py_half):
    H = BaseMeasure.finite((0.3, 0.2))
    assert joint_atom_probability(py_half, H, [1]) == pytest.approx(0.3)
    assert joint_atom_probability(py_half, H, [2]) == pytest.approx(0.2)
    assert joint_atom_probability(py_half, H, [1, 1]) == pytest.approx(0.1425, abs=1e-15)
    assert joint_atom_probability(py_half, H, [1, 2]) == pytest.approx(0.75 * 0.06, abs=1e-15)
    with pytest.raises(InvalidArgument):
        joint_atom_probability(py_half, H, [3])


@pytest.mark.parametrize("atoms", [(0.3,), (0.2, 0.1), (0.5, 0.5)], ids=str)
def test_joint_atom_probabilities_close_the_event_decomposition(atoms, py_half):
    """Induced law of an all-atom sample, computed from joint atom probabilities, matches the oracle
    restricted to all-atom outcomes; the diffuse remainder then closes normalization."""
    H = BaseMeasure.finite(atoms)
    A = H.n_atoms
    for n in range(1, 5):
        atom_mass = 0.0
        for labels in product(range(1, A + 1), repeat=n):
            atom_mass += joint_atom_probability(py_half, H, labels)
        # P(all observations are atoms): each table's dish is an atom w.p. a
        expected = sum(py_half.eppf(block_sizes(p)) * H.a ** len(p) for p in enumerate_partitions(n))
        assert atom_mass == pytest.approx(expected, abs=1e-12)
        if H.diffuse_mass == 0:
            assert atom_mass == pytest.approx(1.0, abs=1e-12)


def test_caps_raise_resource_limit(py_half, spike03, monkeypatch):
    with pytest.raises(ResourceLimit):
        induced_eppf_general(py_half, spike03, (6, 5))
    with pytest.raises(ResourceLimit):
        oracle_induced_eppf(py_half, spike03, Partition.from_sizes((4, 4)))
    monkeypatch.setenv("ATOMPART_CAP_N", "4")
    with pytest.raises(ResourceLimit):
        induced_eppf_general(py_half, spike03, (3, 2))
    assert induced_eppf_general(py_half, spike03, (2, 2)).value > 0


def test_truncated_family_reports_error_bound(py_half):
    H = BaseMeasure.geometric(0.5, 8)
    res = induced_eppf_general(py_half, H, (2, 1))
    assert res.error_bound == pytest.approx(3 * H.tail_mass)
    assert res.error_bound > 0
    exact = induced_eppf_general(py_half, BaseMeasure.finite((0.5, 0.5)), (2, 1)).value
    assert 0 <= res.value <= 1 and math.isfinite(exact)
    assert induced_eppf_general(py_half, BaseMeasure.spike_slab(0.3), (2, 1)).error_bound == 0.0
