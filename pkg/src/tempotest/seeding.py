"""Deterministic RNG stream derivation.

Every stochastic routine in the package accepts a ``seed`` argument that may
be an int, a numpy SeedSequence, or None.  Sub-streams (per snapshot, per
bootstrap replicate, per Monte Carlo cell) are derived by extending the
spawn key, so results do not depend on the order in which sub-streams are
consumed.
"""

from __future__ import annotations

import numpy as np

SeedLike = "int | np.random.SeedSequence | None"


def seed_sequence(seed, *path: int) -> np.random.SeedSequence:
    """Return a SeedSequence for ``seed`` extended by integer path elements.

    Identical (seed, path) pairs always give identical streams; distinct
    paths give independent streams.
    """
    for p in path:
        if p < 0:
            raise ValueError("seed path elements must be non-negative")
    if isinstance(seed, np.random.SeedSequence):
        if not path:
            return seed
        return np.random.SeedSequence(
            entropy=seed.entropy,
            spawn_key=tuple(seed.spawn_key) + tuple(int(p) for p in path),
        )
    if seed is None:
        # fresh OS entropy; not reproducible, which is what None means
        return np.random.SeedSequence()
    return np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(p) for p in path))


def make_rng(seed, *path: int) -> np.random.Generator:
    """Generator seeded from :func:`seed_sequence`.

    An existing Generator passes through unchanged (only without a path:
    independent sub-streams cannot be derived from a live generator).
    """
    if isinstance(seed, np.random.Generator):
        if path:
            raise TypeError("cannot derive sub-streams from a Generator; pass an int or SeedSequence")
        return seed
    return np.random.default_rng(seed_sequence(seed, *path))
