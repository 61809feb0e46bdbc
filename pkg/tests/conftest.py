"""Shared builders for constructed test instances."""

import numpy as np

from hetnetsim.network import TIER_FEMTO, TIER_MACRO, Stations


def make_stations(macro_xy, femto_xy, macro_frags, femto_frags,
                  macro_power_w=19.952623149688797, femto_power_w=0.1):
    """Build a Stations table from explicit positions and (start, stop)
    fragment pairs; fragments may be a single pair applied to the tier."""
    macro_xy = np.asarray(macro_xy, dtype=float).reshape(-1, 2)
    femto_xy = np.asarray(femto_xy, dtype=float).reshape(-1, 2)
    n_m, n_f = macro_xy.shape[0], femto_xy.shape[0]

    def expand(frags, n):
        frags = np.asarray(frags, dtype=np.int64)
        if frags.ndim == 1:
            frags = np.tile(frags, (n, 1))
        return frags

    mf = expand(macro_frags, n_m) if n_m else np.empty((0, 2), dtype=np.int64)
    ff = expand(femto_frags, n_f) if n_f else np.empty((0, 2), dtype=np.int64)
    frag = np.vstack([mf, ff])
    xy = (np.vstack([macro_xy, femto_xy]) if n_m and n_f
          else (macro_xy if n_m else femto_xy))
    return Stations(
        xy=xy,
        tier=np.concatenate([np.full(n_m, TIER_MACRO),
                             np.full(n_f, TIER_FEMTO)]),
        power_w=np.concatenate([np.full(n_m, float(macro_power_w)),
                                np.full(n_f, float(femto_power_w))]),
        frag_start=frag[:, 0],
        frag_stop=frag[:, 1],
        n_macro=n_m,
    )
