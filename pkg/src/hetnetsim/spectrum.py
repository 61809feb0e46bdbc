"""PRB pool, macro-tier hard frequency reuse, femto fragmentation, overlap."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PrbPool:
    """The system-wide set of physical resource blocks."""

    total_prbs: int
    prb_bandwidth_hz: float = 180e3

    def __post_init__(self):
        if self.total_prbs <= 0:
            raise ValueError("total_prbs must be positive")
        if self.prb_bandwidth_hz <= 0:
            raise ValueError("prb_bandwidth_hz must be positive")


@dataclass(frozen=True)
class Fragment:
    """A contiguous block of PRB indices [start, start + length)."""

    start: int
    length: int

    def __post_init__(self):
        if self.start < 0 or self.length <= 0:
            raise ValueError("fragment must be a nonempty range of indices")

    @property
    def stop(self):
        return self.start + self.length

    def indices(self):
        return np.arange(self.start, self.stop)

    def __len__(self):
        return self.length


@dataclass(frozen=True)
class MacroReusePlan:
    """Equal spectrum split across reuse groups plus a site coloring.

    For reuse factor 3 the coloring (row + 2*col) mod 3 on axial hex
    coordinates is proper: lattice neighbors never share a fragment.
    """

    pool: PrbPool
    reuse_factor: int
    fragments: tuple
    site_fragment: np.ndarray  # (n_sites,) fragment index per grid site


@dataclass(frozen=True)
class FemtoFragmentPlan:
    """Equal split of the whole band into fragments femtos draw from."""

    pool: PrbPool
    n_fragments: int
    fragments: tuple


def _split(pool, parts, errmsg):
    if parts <= 0 or pool.total_prbs % parts != 0:
        raise ValueError(errmsg)
    size = pool.total_prbs // parts
    return tuple(Fragment(i * size, size) for i in range(parts))


def build_macro_reuse(pool, grid, reuse_factor=3):
    """Partition the band into ``reuse_factor`` fragments and color the grid.

    Offset rows are converted to axial hex coordinates first; the modular
    coloring is then constant along reuse clusters. It is a proper coloring
    (no two adjacent sites share a fragment) for reuse_factor 3.
    """
    fragments = _split(pool, reuse_factor, "K must divide total_prbs")
    q = grid.col - (grid.row - (grid.row & 1)) // 2
    color = (grid.row + 2 * q) % reuse_factor
    return MacroReusePlan(pool=pool, reuse_factor=int(reuse_factor),
                          fragments=fragments,
                          site_fragment=color.astype(np.int64))


def build_femto_plan(pool, n_fragments):
    fragments = _split(pool, n_fragments, "n_f must divide total_prbs")
    return FemtoFragmentPlan(pool=pool, n_fragments=int(n_fragments),
                             fragments=fragments)


def choose_femto_fragment(plan, rng):
    """Pick one fragment uniformly at random, independently per call."""
    return plan.fragments[int(rng.integers(len(plan.fragments)))]


def choose_femto_fragment_indices(plan, count, rng):
    """Vector form of the uniform fragment choice for ``count`` stations."""
    return rng.integers(0, len(plan.fragments), size=int(count))


def _as_index_set(prbs):
    if isinstance(prbs, Fragment):
        return set(range(prbs.start, prbs.stop))
    return set(int(p) for p in np.asarray(list(prbs)).ravel())


def prb_overlap(a, b):
    """Number of PRB indices two allocations share, |a n b|."""
    return len(_as_index_set(a) & _as_index_set(b))
