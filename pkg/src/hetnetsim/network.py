"""Column-wise container for every base station of one drop realization."""

from dataclasses import dataclass

import numpy as np

TIER_MACRO = 0
TIER_FEMTO = 1


@dataclass(frozen=True)
class Stations:
    """All base stations of a realization, macros first, ids are row indices.

    ``frag_start``/``frag_stop`` hold the PRB range each station may
    transmit on; capacity (max simultaneously served users) equals the
    fragment size for both tiers.
    """

    xy: np.ndarray         # (n, 2) positions in meters
    tier: np.ndarray       # (n,) TIER_MACRO or TIER_FEMTO
    power_w: np.ndarray    # (n,) downlink transmit power over the fragment
    frag_start: np.ndarray  # (n,) first PRB index
    frag_stop: np.ndarray   # (n,) one past the last PRB index
    n_macro: int

    def __len__(self):
        return self.xy.shape[0]

    @property
    def n_femto(self):
        return len(self) - self.n_macro

    @property
    def prb_counts(self):
        return self.frag_stop - self.frag_start

    @property
    def capacities(self):
        return self.prb_counts

    @property
    def power_per_prb_w(self):
        return self.power_w / self.prb_counts

    def femto_ordinal(self, bs_index):
        """Index into per-femto side tables (subscriber lists)."""
        return int(bs_index) - self.n_macro


def build_stations(grid, reuse_plan, femto_xy, femto_fragment_idx, femto_plan,
                   macro_power_w, femto_power_w):
    """Assemble the station table from the grid, plans and femto draws."""
    femto_xy = np.asarray(femto_xy, dtype=float).reshape(-1, 2)
    n_m = len(grid)
    n_f = femto_xy.shape[0]

    xy = np.vstack([grid.xy, femto_xy]) if n_f else grid.xy.copy()
    tier = np.concatenate([np.full(n_m, TIER_MACRO), np.full(n_f, TIER_FEMTO)])
    power = np.concatenate([np.full(n_m, float(macro_power_w)),
                            np.full(n_f, float(femto_power_w))])

    m_frags = reuse_plan.fragments
    f_frags = femto_plan.fragments
    start = np.empty(n_m + n_f, dtype=np.int64)
    stop = np.empty(n_m + n_f, dtype=np.int64)
    for i, c in enumerate(reuse_plan.site_fragment):
        start[i] = m_frags[c].start
        stop[i] = m_frags[c].stop
    for k, c in enumerate(np.asarray(femto_fragment_idx, dtype=np.int64)):
        start[n_m + k] = f_frags[c].start
        stop[n_m + k] = f_frags[c].stop

    return Stations(xy=xy, tier=tier, power_w=power,
                    frag_start=start, frag_stop=stop, n_macro=n_m)
