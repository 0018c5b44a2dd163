"""Two-level Chinese restaurant sampling of observations with atomic base measures.

Customers are seated by the latent EPPF; each new table draws a dish from
H. Observations are the dishes of their tables, so tables sharing an atom
merge in the induced partition.
"""
from dataclasses import dataclass

import numpy as np

from .basemeasure import Atom, Fresh, PathState, sample_dish
from .eppf import seat_customers
from .errors import InvalidArgument
from .partitions import induced_partition


@dataclass(frozen=True)
class GsssDraw:
    tables: tuple  # 0-based latent table of each customer
    dishes: tuple  # dish label of each table
    labels: tuple  # observed value (dish) of each customer

    @property
    def n(self):
        return len(self.tables)

    @property
    def latent(self):
        return induced_partition(self.tables)

    @property
    def induced(self):
        return induced_partition(self.labels)

    @property
    def diffuse_tables(self):
        return sum(isinstance(d, Fresh) for d in self.dishes)

    @property
    def distinct_atoms(self):
        return len({d.index for d in self.dishes if isinstance(d, Atom)})


def _streams(seed):
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    seat, dish = ss.spawn(2)
    return np.random.default_rng(seat), np.random.default_rng(dish)


def draw_gsss(model, H, n, seat_rng, state):
    tables = seat_customers(model, n, seat_rng)
    n_tables = max(tables) + 1
    dishes = tuple(sample_dish(H, state) for _ in range(n_tables))
    return GsssDraw(tuple(tables), dishes, tuple(dishes[t] for t in tables))


def sample_gsss(model, H, n, seed=None):
    """One draw of (xi_1..xi_n): latent seating plus i.i.d. dishes per table."""
    seat_rng, dish_rng = _streams(seed)
    return draw_gsss(model, H, n, seat_rng, PathState(dish_rng))


def sample_paths(model, H, n, paths, seed=None):
    """Yield ``paths`` independent draws from a single seeded stream pair."""
    if paths < 0:
        raise InvalidArgument("paths must be non-negative")
    seat_rng, dish_rng = _streams(seed)
    for _ in range(paths):
        # fresh ids restart per path so labels are path-local
        yield draw_gsss(model, H, n, seat_rng, PathState(dish_rng))


def sample_induced_partition(model, H, n, seed=None):
    return sample_gsss(model, H, n, seed).induced


def empirical_law(draws):
    """Counts of induced partitions over an iterable of draws."""
    counts = {}
    for d in draws:
        p = d.induced
        counts[p] = counts.get(p, 0) + 1
    return counts
