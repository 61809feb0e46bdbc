"""Seeded Monte Carlo drops: realize -> associate -> allocate -> rate curves."""

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .allocation import allocate_prbs
from .association import (TWO_STEP_OFFLOAD, AccessControl, associate,
                          build_subscriber_lists, two_step_offload)
from .config import OCCUPANCY_WHOLE
from .geometry import Area, build_macro_grid, sample_ppp
from .metrics import (EmptyPositiveSetError, aggregate_drops,
                      rate_distribution, rate_distribution_all_users,
                      tier_breakdown)
from .network import TIER_FEMTO, build_stations
from .radio import compute_rates
from .spectrum import (Fragment, PrbPool, build_femto_plan, build_macro_reuse,
                       choose_femto_fragment_indices)

log = logging.getLogger(__name__)

THREADS_ENV_VAR = "SIMCTL_THREADS"

# One independently seeded substream per drop and per randomness layer, so
# any single drop can be reproduced in isolation and results never depend
# on execution order or worker count.
RNG_LAYERS = ("femto", "user", "fragment", "subscriber", "allocation",
              "fading")


def drop_rngs(base_seed, drop_index):
    root = np.random.SeedSequence(entropy=base_seed,
                                  spawn_key=(int(drop_index),))
    children = root.spawn(len(RNG_LAYERS))
    return {name: np.random.default_rng(child)
            for name, child in zip(RNG_LAYERS, children)}


@dataclass
class Realization:
    """Frozen random inputs of one drop before association runs."""

    stations: object
    users_xy: np.ndarray
    subscribers: tuple


@dataclass
class DropStats:
    drop_index: int
    n_users: int
    n_femtos: int
    served_macro: int
    served_femto: int
    denied: int
    n_positive: int

    def as_dict(self):
        return {
            "drop": self.drop_index,
            "n_users": self.n_users,
            "n_femtos": self.n_femtos,
            "served_macro": self.served_macro,
            "served_femto": self.served_femto,
            "denied": self.denied,
            "n_positive": self.n_positive,
        }


@dataclass
class DropResult:
    curve: object  # served-only DistributionCurve, None without samples
    curve_all_users: object  # same thresholds, denominator = all users
    tier_curves: dict
    stats: DropStats


@dataclass
class RunResult:
    config: object
    curve: object
    curve_all_users: object
    tier_curves: dict
    drop_stats: list

    def manifest(self):
        return {
            "config": self.config.echo(),
            "seeding": "per-drop SeedSequence(base_seed, spawn_key=(drop,)) "
                       "split into layers " + ",".join(RNG_LAYERS),
            "drops": [s.as_dict() for s in self.drop_stats],
        }


def realize_drop(cfg, rngs):
    """Sample every random input of one drop from its layer substreams."""
    area = Area(cfg.area_width_m, cfg.area_height_m)
    pool = PrbPool(cfg.total_prbs, cfg.prb_bandwidth_hz)
    grid = build_macro_grid(area, cfg.inter_site_distance_m, cfg.grid_anchor)
    reuse = build_macro_reuse(pool, grid, cfg.K)
    femto_plan = build_femto_plan(pool, cfg.n_f)

    femtos = sample_ppp(area, cfg.lambda_f, rngs["femto"])
    users = sample_ppp(area, cfg.lambda_u, rngs["user"])
    frag_idx = choose_femto_fragment_indices(femto_plan, len(femtos),
                                             rngs["fragment"])
    stations = build_stations(grid, reuse, femtos.points, frag_idx,
                              femto_plan, cfg.macro_power_w, cfg.femto_power_w)
    subscribers = build_subscriber_lists(femtos.points, users.points,
                                         cfg.subscriber_radius_m,
                                         cfg.subscribers_per_femto,
                                         rngs["subscriber"])
    return Realization(stations=stations, users_xy=users.points,
                       subscribers=subscribers)


def evaluate_realization(cfg, real, rng_alloc, rng_fading, drop_index=0):
    """Associate, allocate and rate every user of one frozen realization."""
    stations = real.stations
    strategy = cfg.make_strategy()
    channel = cfg.make_channel()
    access = AccessControl(cfg.access_mode, real.subscribers)
    n_users = real.users_xy.shape[0]

    if strategy.kind == TWO_STEP_OFFLOAD:
        outcome = two_step_offload(real.users_xy, stations, strategy,
                                   access=access)
    else:
        outcome = associate(real.users_xy, stations, strategy, access=access)

    # Fair PRB split per loaded station, walked in station-id order so the
    # allocation substream is consumed deterministically.
    adm_uid = outcome.admitted_uid
    adm_bs = outcome.admitted_bs
    n_served = adm_uid.size
    alpha = np.empty(n_served, dtype=np.int64)
    blk_lo = np.empty(n_served, dtype=np.int64)
    blk_hi = np.empty(n_served, dtype=np.int64)
    extra = np.empty(n_served, dtype=np.int64)
    is_sub = np.zeros(n_served, dtype=bool)

    occ_lo = np.zeros(len(stations), dtype=np.int64)
    occ_hi = np.zeros(len(stations), dtype=np.int64)
    if cfg.occupancy == OCCUPANCY_WHOLE:
        occ_lo = stations.frag_start.copy()
        occ_hi = stations.frag_stop.copy()

    if n_served:
        _, starts, counts = np.unique(adm_bs, return_index=True,
                                      return_counts=True)
        for start, count in zip(starts, counts):
            bs = int(adm_bs[start])
            sl = slice(start, start + count)
            frag = Fragment(int(stations.frag_start[bs]),
                            int(stations.prb_counts[bs]))
            alloc = allocate_prbs(frag, adm_uid[sl], rng_alloc)
            alpha[sl] = alloc.alpha
            blk_lo[sl] = alloc.block_start
            blk_hi[sl] = alloc.block_stop
            extra[sl] = alloc.extra
            occ_lo[bs] = frag.start
            occ_hi[bs] = frag.stop
            if bs >= stations.n_macro:
                subs = access.subs_for(bs - stations.n_macro)
                is_sub[sl] = np.isin(adm_uid[sl], subs)

    rates, _ = compute_rates(real.users_xy[adm_uid], adm_bs, alpha,
                             blk_lo, blk_hi, extra, stations, occ_lo, occ_hi,
                             channel, cfg.prb_bandwidth_hz, rng=rng_fading)
    tier = stations.tier[adm_bs] if n_served else np.empty(0, dtype=np.int64)

    try:
        curve = rate_distribution(rates, cfg.deltas)
        tiers = tier_breakdown(rates, tier, is_sub, cfg.deltas)
        n_positive = curve.n_samples
    except EmptyPositiveSetError:
        log.warning("drop %d produced no positive-rate user; skipping curve",
                    drop_index)
        curve = None
        tiers = {}
        n_positive = 0
    try:
        curve_all = rate_distribution_all_users(rates, n_users, cfg.deltas)
    except EmptyPositiveSetError:
        curve_all = None

    stats = DropStats(
        drop_index=drop_index,
        n_users=n_users,
        n_femtos=stations.n_femto,
        served_macro=int(np.count_nonzero(tier == 0)),
        served_femto=int(np.count_nonzero(tier == TIER_FEMTO)),
        denied=n_users - n_served,
        n_positive=n_positive,
    )
    return DropResult(curve=curve, curve_all_users=curve_all,
                      tier_curves=tiers, stats=stats)


def simulate_drop(cfg, drop_index):
    rngs = drop_rngs(cfg.base_seed, drop_index)
    real = realize_drop(cfg, rngs)
    return evaluate_realization(cfg, real, rngs["allocation"],
                                rngs["fading"], drop_index=drop_index)


def _drop_task(args):
    cfg, drop_index = args
    return drop_index, simulate_drop(cfg, drop_index)


def resolve_threads(threads, n_drops):
    if threads is None:
        env = os.environ.get(THREADS_ENV_VAR)
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, min(int(threads), int(n_drops)))


def run_scenario(cfg, threads=None):
    """Run every drop of a scenario and aggregate the rate curves.

    Drops are independent and own their seed substreams, so the outputs are
    byte-identical for any worker count.
    """
    cfg.validate()
    n = cfg.n_drops
    workers = resolve_threads(threads, n)
    results = [None] * n
    if workers <= 1:
        for i in range(n):
            results[i] = simulate_drop(cfg, i)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for i, res in pool.map(_drop_task, [(cfg, i) for i in range(n)]):
                results[i] = res

    curves = [r.curve for r in results if r.curve is not None]
    curve = aggregate_drops(curves) if curves else None
    all_curves = [r.curve_all_users for r in results
                  if r.curve_all_users is not None]
    curve_all = aggregate_drops(all_curves) if all_curves else None

    tier_curves = {}
    for key in ("macro", "femto", "femto_subscriber", "femto_nonsubscriber"):
        partial = [r.tier_curves.get(key) for r in results
                   if r.tier_curves.get(key) is not None]
        tier_curves[key] = aggregate_drops(partial) if partial else None

    return RunResult(config=cfg, curve=curve, curve_all_users=curve_all,
                     tier_curves=tier_curves,
                     drop_stats=[r.stats for r in results])
