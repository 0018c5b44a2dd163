import pytest

from atompart import BaseMeasure, PitmanYor

PY_GRID = [(0.0, 1.0), (0.25, 0.5), (0.5, 1.0), (-0.5, 1.5)]
SPIKES = [0.0, 0.3, 0.7, 1.0]


def bell_triangle(n):
    """Bell number B_n from the Bell triangle."""
    row = [1]
    for _ in range(n - 1):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[-1]


def measures():
    return [BaseMeasure.spike_slab(a) for a in SPIKES] + [BaseMeasure.finite((0.2, 0.1))]


@pytest.fixture
def py_half():
    return PitmanYor(0.5, 1.0)


@pytest.fixture
def spike03():
    return BaseMeasure.spike_slab(0.3)
