import math

import pytest
from scipy.stats import chi2

from atompart import BaseMeasure, Custom, PitmanYor, induced_eppf_general, sample_gsss, sample_paths
from atompart.basemeasure import Atom, Fresh
from atompart.errors import InvalidArgument
from atompart.partitions import block_sizes, enumerate_partitions
from atompart.sampling import empirical_law, sample_induced_partition


def test_draw_structure(py_half):
    H = BaseMeasure.finite((0.3, 0.2))
    d = sample_gsss(py_half, H, 50, seed=3)
    assert d.n == 50
    assert len(d.dishes) == len(d.latent)
    assert d.labels == tuple(d.dishes[t] for t in d.tables)
    assert d.diffuse_tables + sum(isinstance(x, Atom) for x in d.dishes) == len(d.latent)
    assert len(d.induced) == d.diffuse_tables + d.distinct_atoms
    # every induced block is a union of latent blocks
    induced_of = {i: b for b in d.induced.blocks for i in b}
    for b in d.latent.blocks:
        assert set(b) <= set(induced_of[b[0]])


def test_determinism(py_half, spike03):
    a = [d.labels for d in sample_paths(py_half, spike03, 20, 30, seed=11)]
    b = [d.labels for d in sample_paths(py_half, spike03, 20, 30, seed=11)]
    c = [d.labels for d in sample_paths(py_half, spike03, 20, 30, seed=12)]
    assert a == b and a != c
    assert sample_induced_partition(py_half, spike03, 20, seed=4) == sample_gsss(py_half, spike03, 20, seed=4).induced


def test_fresh_labels_are_path_local(py_half):
    draws = list(sample_paths(py_half, BaseMeasure.diffuse(), 5, 3, seed=0))
    for d in draws:
        ids = sorted(x.id for x in d.dishes)
        assert ids == list(range(len(d.dishes)))
        assert all(isinstance(x, Fresh) for x in d.dishes)
    with pytest.raises(InvalidArgument):
        list(sample_paths(py_half, BaseMeasure.diffuse(), 5, -1))


def chi_square_against(law, counts, draws):
    stat = 0.0
    cells = 0
    for p, prob in law.items():
        if prob <= 0:
            continue
        e = draws * prob
        stat += (counts.get(p, 0) - e) ** 2 / e
        cells += 1
    return stat, chi2.ppf(0.999, cells - 1)


@pytest.mark.parametrize("model,H", [
    (PitmanYor(0.5, 1.0), BaseMeasure.spike_slab(0.3)),
    (PitmanYor(-0.5, 1.5), BaseMeasure.finite((0.4, 0.2))),
    (PitmanYor(0.0, 2.0), BaseMeasure.spike_slab(1.0)),
])
def test_induced_law_matches_exact_formula(model, H):
    n, draws = 4, 20_000
    counts = empirical_law(sample_paths(model, H, n, draws, seed=7))
    law = {p: induced_eppf_general(model, H, block_sizes(p)).value for p in enumerate_partitions(n)}
    for p, prob in law.items():
        freq = counts.get(p, 0) / draws
        assert abs(freq - prob) <= 4 * math.sqrt(prob * (1 - prob) / draws) + 1e-12
    stat, crit = chi_square_against(law, counts, draws)
    if sum(prob > 0 for prob in law.values()) > 1:
        assert stat < crit


def test_generic_route_latent_law():
    py = PitmanYor(0.25, 0.5)
    model = Custom(py.eppf)
    n, draws = 4, 10_000
    counts = {}
    for d in sample_paths(model, BaseMeasure.diffuse(), n, draws, seed=2):
        counts[d.latent] = counts.get(d.latent, 0) + 1
    law = {p: py.eppf(block_sizes(p)) for p in enumerate_partitions(n)}
    stat, crit = chi_square_against(law, counts, draws)
    assert stat < crit
