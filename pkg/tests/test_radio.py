import math

import numpy as np
import pytest
from conftest import make_stations

from hetnetsim.radio import (ChannelModel, compute_rates, dbm_to_watts,
                             sample_fading, shannon_rate, sinr)


def test_fading_moments():
    rng = np.random.default_rng(1)
    g = sample_fading(rng, 100_000)
    n = g.size
    assert abs(g.mean() - 1.0) < 3.0 / math.sqrt(n)
    # exponential tail: P(g > 1) = exp(-1)
    p = math.exp(-1.0)
    sigma = math.sqrt(p * (1 - p) / n)
    assert abs(np.mean(g > 1.0) - p) < 3 * sigma


def test_fading_disabled_is_unity():
    assert sample_fading(None, enabled=False) == 1.0
    assert (sample_fading(None, size=10, enabled=False) == 1.0).all()


def test_dbm_conversions():
    assert dbm_to_watts(43.0) == pytest.approx(19.953, rel=1e-3)
    assert dbm_to_watts(20.0) == pytest.approx(0.1, rel=1e-3)
    assert dbm_to_watts(30.0) == pytest.approx(1.0, rel=1e-12)


def _unit_station(power_per_prb, n_prb, xy):
    # station with power_w chosen so power per PRB comes out as requested
    return make_stations([xy], [], (0, n_prb), (0, 1),
                         macro_power_w=power_per_prb * n_prb)


def test_sinr_single_station_snr():
    stations = _unit_station(1e-9, 25, [0.0, 0.0])
    channel = ChannelModel(noise_power_w=1e-12, fading=False)
    got = sinr((1.0, 0.0), 0, {0}, stations, [range(0, 25)],
               np.ones(1), channel)
    assert got == pytest.approx(1000.0, rel=1e-12)


def test_sinr_symmetric_cochannel_pair():
    stations = make_stations([[0.0, 0.0], [10.0, 0.0]], [], (0, 25), (0, 1))
    channel = ChannelModel(noise_power_w=1e-30, fading=False)
    got = sinr((5.0, 0.0), 0, {0}, stations, [{0}, {0}],
               np.ones(2), channel)
    assert got == pytest.approx(1.0, rel=1e-9)


def _per_prb_oracle(user_xy, serving, user_prbs, stations, occupied, gains,
                    channel):
    """Brute force: walk every (station, PRB) pair and add its power."""
    gamma = channel.path_loss_exponent
    num = 0.0
    den = channel.noise_power_w
    for b in range(len(stations)):
        d = max(math.hypot(user_xy[0] - stations.xy[b][0],
                           user_xy[1] - stations.xy[b][1]),
                channel.min_distance_m)
        p_prb = stations.power_w[b] / (stations.frag_stop[b]
                                       - stations.frag_start[b])
        for prb in occupied[b]:
            if prb in user_prbs:
                term = p_prb * gains[b] * d ** (-gamma)
                if b == serving:
                    num += term
                else:
                    den += term
    return num / den


def test_sinr_matches_per_prb_oracle():
    rng = np.random.default_rng(5)
    channel = ChannelModel(noise_power_w=1e-12)
    for _ in range(30):
        n_m = int(rng.integers(1, 3))
        n_f = int(rng.integers(0, 4))
        frags = [(int(s), int(s) + int(l)) for s, l in
                 zip(rng.integers(0, 5, n_m + n_f),
                     rng.integers(1, 6, n_m + n_f))]
        stations = make_stations(rng.uniform(0, 800, (n_m, 2)),
                                 rng.uniform(0, 800, (n_f, 2)),
                                 frags[:n_m], frags[n_m:],
                                 macro_power_w=float(rng.uniform(1, 20)),
                                 femto_power_w=float(rng.uniform(0.01, 0.5)))
        occupied = [set(rng.integers(f[0], f[1],
                                     rng.integers(0, f[1] - f[0] + 1)).tolist())
                    for f in frags]
        serving = int(rng.integers(0, n_m + n_f))
        occupied[serving] = set(range(frags[serving][0], frags[serving][1]))
        k = rng.integers(1, len(occupied[serving]) + 1)
        user_prbs = set(rng.choice(sorted(occupied[serving]), k,
                                   replace=False).tolist())
        gains = rng.standard_exponential(n_m + n_f)
        user = rng.uniform(0, 800, 2)
        got = sinr(user, serving, user_prbs, stations, occupied, gains,
                   channel)
        ref = _per_prb_oracle(user, serving, user_prbs, stations, occupied,
                              gains, channel)
        assert got == pytest.approx(ref, rel=1e-12)


def test_sinr_decreases_with_overlap():
    stations = make_stations([[0.0, 0.0], [300.0, 0.0]], [], (0, 25), (0, 1))
    channel = ChannelModel(fading=False)
    vals = []
    for beta in (1, 2, 3):
        occupied = [set(range(0, 25)), set(range(0, beta))]
        vals.append(sinr((50.0, 0.0), 0, {0, 1, 2}, stations, occupied,
                         np.ones(2), channel))
    assert vals[0] > vals[1] > vals[2]


def test_disjoint_interferer_is_invisible():
    stations = make_stations([[0.0, 0.0], [5.0, 0.0]], [], (0, 25), (0, 1))
    channel = ChannelModel(noise_power_w=1e-12, fading=False)
    alone = sinr((50.0, 0.0), 0, {0, 1}, stations, [set(range(25)), set()],
                 np.ones(2), channel)
    disjoint = sinr((50.0, 0.0), 0, {0, 1}, stations,
                    [set(range(25)), {10, 11}], np.ones(2), channel)
    assert alone == disjoint


def test_rate_examples():
    assert shannon_rate(1, 180e3, 1.0) == pytest.approx(180e3, rel=1e-12)
    assert shannon_rate(3, 180e3, 0.0) == 0.0
    assert shannon_rate(5, 180e3, 3.0) == pytest.approx(1.8e6, rel=1e-12)


def test_rate_monotone():
    rng = np.random.default_rng(9)
    for _ in range(50):
        a = rng.integers(1, 10)
        s = rng.uniform(0, 100)
        assert shannon_rate(a + 1, 180e3, s) >= shannon_rate(a, 180e3, s)
        assert shannon_rate(a, 180e3, s + 1) >= shannon_rate(a, 180e3, s)


def test_vector_kernel_matches_scalar():
    # structured occupancy (contiguous block + optional tail extra) through
    # the vector kernel must equal the generic scalar evaluation
    rng = np.random.default_rng(31)
    n_m, n_f = 2, 6
    frags = [(0, 25), (25, 50)] + \
        [(int(3 * k), int(3 * k + 3)) for k in rng.integers(0, 25, n_f)]
    stations = make_stations(rng.uniform(0, 2000, (n_m, 2)),
                             rng.uniform(0, 2000, (n_f, 2)),
                             frags[:n_m], frags[n_m:])
    n_users = 40
    users = rng.uniform(0, 2000, (n_users, 2))
    serving = rng.integers(0, n_m + n_f, n_users)
    occ_lo = np.array([f[0] for f in frags])
    occ_hi = np.array([f[1] for f in frags])
    blk_lo = np.empty(n_users, dtype=np.int64)
    blk_hi = np.empty(n_users, dtype=np.int64)
    extra = np.full(n_users, -1, dtype=np.int64)
    for i in range(n_users):
        f0, f1 = frags[serving[i]]
        size = int(rng.integers(1, min(3, f1 - f0) + 1))
        start = int(rng.integers(f0, f1 - size + 1))
        blk_lo[i], blk_hi[i] = start, start + size
        if rng.random() < 0.5:
            extra[i] = int(rng.integers(f0, f1))
            if blk_lo[i] <= extra[i] < blk_hi[i]:
                extra[i] = -1
    alpha = (blk_hi - blk_lo) + (extra >= 0)
    gains = rng.standard_exponential((n_users, n_m + n_f))
    channel = ChannelModel()
    rates, sinrs = compute_rates(users, serving, alpha, blk_lo, blk_hi,
                                 extra, stations, occ_lo, occ_hi, channel,
                                 180e3, gains=gains)
    for i in range(n_users):
        prbs = set(range(blk_lo[i], blk_hi[i]))
        if extra[i] >= 0:
            prbs.add(int(extra[i]))
        occupied = [set(range(occ_lo[b], occ_hi[b]))
                    for b in range(n_m + n_f)]
        ref = sinr(users[i], int(serving[i]), prbs, stations, occupied,
                   gains[i], channel)
        assert sinrs[i] == pytest.approx(ref, rel=1e-9)
        assert rates[i] == pytest.approx(
            shannon_rate(len(prbs), 180e3, ref), rel=1e-9)
