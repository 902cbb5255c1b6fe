import numpy as np
import pytest

from grouprank.catalog import mathieu


@pytest.fixture(scope="session")
def m11():
    return mathieu(11)


@pytest.fixture(scope="session")
def m12():
    return mathieu(12)


def bfs_closure_count(group, cap=120_000):
    """Exhaustive closure count by breadth-first multiplication over encoded
    element rows; independent of stabilizer chains."""
    deg = group.degree
    weights = (deg ** np.arange(deg)).astype(np.int64)
    gens = np.stack([g.images for g in group.generators]).astype(np.int64)
    current = np.arange(deg, dtype=np.int64)[None, :]
    keys = np.array([current[0] @ weights])
    frontier = current
    while frontier.shape[0]:
        images = np.concatenate([g[frontier] for g in gens])
        ik = images @ weights
        fresh = ~np.isin(ik, keys)
        images = images[fresh]
        ik = ik[fresh]
        if ik.size:
            ik, first = np.unique(ik, return_index=True)
            images = images[first]
        keys = np.concatenate([keys, ik])
        frontier = images
        if keys.size > cap:
            raise RuntimeError("closure exceeded cap")
    return keys.size


def tuple_orbit_size(group, points):
    """Orbit size of a tuple of 1-based points under the group."""
    gens = [g.images for g in group.generators]
    start = tuple(p - 1 for p in points)
    seen = {start}
    frontier = [start]
    while frontier:
        new = []
        for t in frontier:
            for g in gens:
                img = tuple(int(g[x]) for x in t)
                if img not in seen:
                    seen.add(img)
                    new.append(img)
        frontier = new
    return len(seen)
