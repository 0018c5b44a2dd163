"""Set partitions of [n] in canonical (order of appearance) form."""
import json
from dataclasses import dataclass

from .errors import InvalidArgument, ResourceLimit, enumeration_cap


@dataclass(frozen=True)
class Partition:
    """A partition of {1, ..., n}.

    Blocks are tuples of increasing 1-based indices, listed in order of
    their least element. Use :meth:`from_blocks` to canonicalize arbitrary
    input; the constructor only validates.
    """

    n: int
    blocks: tuple

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidArgument(f"n must be a positive integer, got {self.n!r}")
        seen = set()
        prev_min = 0
        for block in self.blocks:
            if len(block) == 0:
                raise InvalidArgument("partition blocks must be non-empty")
            if any(b <= a for a, b in zip(block, block[1:])):
                raise InvalidArgument(f"block {block} is not strictly increasing")
            if block[0] <= prev_min:
                raise InvalidArgument("blocks are not in order of appearance")
            prev_min = block[0]
            for i in block:
                if i in seen:
                    raise InvalidArgument(f"index {i} appears in two blocks")
                seen.add(i)
        if seen != set(range(1, self.n + 1)):
            raise InvalidArgument(f"blocks do not cover 1..{self.n}")

    @classmethod
    def from_blocks(cls, blocks, n=None):
        blocks = [tuple(sorted(int(i) for i in b)) for b in blocks]
        blocks.sort(key=lambda b: b[0] if b else 0)
        if n is None:
            n = sum(len(b) for b in blocks)
        return cls(n, tuple(blocks))

    @classmethod
    def from_sizes(cls, sizes):
        """Partition with consecutive blocks of the given sizes, e.g. (2, 1) -> [[1, 2], [3]]."""
        sizes = validate_sizes(sizes)
        blocks, start = [], 1
        for s in sizes:
            blocks.append(tuple(range(start, start + s)))
            start += s
        return cls(start - 1, tuple(blocks))

    @classmethod
    def from_json(cls, text):
        data = json.loads(text) if isinstance(text, str) else text
        return cls.from_blocks(data)

    def to_json(self):
        return json.dumps([list(b) for b in self.blocks], separators=(",", ":"))

    def to_list(self):
        return [list(b) for b in self.blocks]

    def __len__(self):
        return len(self.blocks)

    def __str__(self):
        return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


def validate_sizes(sizes):
    sizes = tuple(int(s) for s in sizes)
    if any(s < 1 for s in sizes):
        raise InvalidArgument(f"block sizes must be positive, got {sizes}")
    return sizes


def induced_partition(labels):
    """Partition of positions by equality of labels, blocks in order of appearance."""
    labels = list(labels)
    if not labels:
        raise InvalidArgument("cannot induce a partition from an empty label sequence")
    where = {}
    blocks = []
    for i, lab in enumerate(labels, start=1):
        j = where.get(lab)
        if j is None:
            where[lab] = len(blocks)
            blocks.append([i])
        else:
            blocks[j].append(i)
    return Partition(len(labels), tuple(tuple(b) for b in blocks))


def restrict(p, m):
    """Restriction of ``p`` to {1, ..., m}."""
    if not 1 <= m <= p.n:
        raise InvalidArgument(f"restriction size {m} outside 1..{p.n}")
    blocks = []
    for block in p.blocks:
        kept = tuple(i for i in block if i <= m)
        if kept:
            blocks.append(kept)
    # least elements are unchanged by dropping larger indices, so order is preserved
    return Partition(m, tuple(blocks))


def block_sizes(p):
    return tuple(len(b) for b in p.blocks)


def rgs_to_partition(rgs):
    """Convert a 0-based restricted growth string to a Partition."""
    blocks = []
    for i, a in enumerate(rgs, start=1):
        if a == len(blocks):
            blocks.append([i])
        else:
            blocks[a].append(i)
    return Partition(len(rgs), tuple(tuple(b) for b in blocks))


def restricted_growth_strings(n):
    """Yield every restricted growth string a_1 = 0, a_{i+1} <= 1 + max(a_1..a_i) of length n."""
    if n == 0:
        yield ()
        return
    a = [0] * n
    m = [0] * n  # m[i] = max(a[0..i])
    while True:
        yield tuple(a)
        i = n - 1
        while i > 0 and a[i] == m[i - 1] + 1:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        m[i] = max(m[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            m[j] = m[i]


def enumerate_partitions(n, cap=None):
    """Yield every partition of [n] exactly once, in canonical form."""
    if cap is None:
        cap = enumeration_cap()
    if n < 1:
        raise InvalidArgument(f"n must be positive, got {n}")
    if n > cap:
        raise ResourceLimit(f"enumeration of partitions of [{n}] exceeds cap {cap}")
    for rgs in restricted_growth_strings(n):
        yield rgs_to_partition(rgs)
