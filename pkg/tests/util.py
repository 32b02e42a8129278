"""Shared test helpers: seeded generators and tiny independent models."""
from __future__ import annotations

import random

from tdlclab.boolalg import CylinderClopen, TreeShape


def random_clopen(
    rng: random.Random, shape: TreeShape, max_depth: int
) -> CylinderClopen:
    """Random canonical clopen built from a random depth-k address subset."""
    k = rng.randint(1, max_depth)
    atoms = list(shape.sphere(k))
    picked = [a for a in atoms if rng.random() < 0.5]
    return CylinderClopen.from_addresses(shape, picked)


def expand(clopen: CylinderClopen, n: int) -> frozenset:
    """Independent expansion used as the set-model oracle."""
    out = set()
    stack = list(clopen.cover)
    while stack:
        a = stack.pop()
        if len(a) == n:
            out.add(a)
        else:
            stack.extend(a + (c,) for c in clopen.shape.child_letters(a))
    return frozenset(out)
