"""Channel model: fading, overlap-scoped SINR, and Shannon rate."""

from dataclasses import dataclass

import numpy as np

from .geometry import MIN_LINK_DISTANCE_M, pairwise_distances
from .spectrum import prb_overlap

_CHUNK = 512


@dataclass(frozen=True)
class ChannelModel:
    path_loss_exponent: float = 2.3
    noise_power_w: float = 1e-12
    fading: bool = True
    min_distance_m: float = MIN_LINK_DISTANCE_M

    def __post_init__(self):
        if self.path_loss_exponent <= 0:
            raise ValueError("path_loss_exponent must be positive")
        if self.noise_power_w <= 0:
            raise ValueError("noise_power_w must be positive")


def dbm_to_watts(dbm):
    return 10.0 ** ((dbm - 30.0) / 10.0)


def sample_fading(rng, size=None, enabled=True):
    """Power gain of a unit-variance Rayleigh amplitude: Exponential(1).

    With ``enabled=False`` every gain is exactly 1 (deterministic channel,
    useful for unit tests and closed-form checks).
    """
    if not enabled:
        return 1.0 if size is None else np.ones(size)
    return rng.standard_exponential(size)


def sinr(user_xy, serving, user_prbs, stations, occupied, gains, channel):
    """Downlink SINR of one user with interference scoped by PRB overlap.

    ``occupied`` lists, per station, the PRB indices it actually transmits
    on; a station whose occupied set is disjoint from the user's allocation
    contributes nothing. Per-PRB transmit power is the station power divided
    by its fragment size, so the wanted signal scales with the user's PRB
    count and each interferer with the overlap count. Noise is added once.
    """
    user_prbs = set(int(p) for p in user_prbs)
    alpha = len(user_prbs)
    if alpha == 0:
        raise ValueError("user has no allocated PRBs")
    gamma = channel.path_loss_exponent
    pw_prb = stations.power_per_prb_w
    d = pairwise_distances([user_xy], stations.xy,
                           min_distance=channel.min_distance_m)[0]
    att = d ** (-gamma)
    num = alpha * pw_prb[serving] * gains[serving] * att[serving]
    den = channel.noise_power_w
    for b in range(len(stations)):
        if b == serving:
            continue
        beta = prb_overlap(user_prbs, occupied[b])
        if beta:
            den += beta * pw_prb[b] * gains[b] * att[b]
    return float(num / den)


def shannon_rate(alpha, prb_bandwidth_hz, sinr_value):
    """Achieved rate in bit/s over ``alpha`` PRBs at the given SINR."""
    return alpha * prb_bandwidth_hz * np.log2(1.0 + sinr_value)


def compute_rates(users_xy, serving, alpha, block_start, block_stop, extra,
                  stations, occ_start, occ_stop, channel, prb_bandwidth_hz,
                  rng=None, gains=None):
    """Vectorized SINR and rate for every served user of a drop.

    Per-user allocations are a contiguous block plus at most one extra
    index, and each station's occupied PRBs form one contiguous range
    (empty when silent), so overlap counts reduce to interval arithmetic.
    Fading gains are drawn per (user, station) pair; pass ``gains`` to pin
    them (tests), otherwise they come from ``rng`` in fixed chunk order.
    """
    users_xy = np.asarray(users_xy, dtype=float).reshape(-1, 2)
    n = users_xy.shape[0]
    rates = np.empty(n)
    sinrs = np.empty(n)
    if n == 0:
        return rates, sinrs
    gamma = channel.path_loss_exponent
    pw_prb = stations.power_per_prb_w
    for lo in range(0, n, _CHUNK):
        hi = min(lo + _CHUNK, n)
        m = hi - lo
        d = pairwise_distances(users_xy[lo:hi], stations.xy,
                               min_distance=channel.min_distance_m)
        att = d ** (-gamma)
        if gains is not None:
            g = gains[lo:hi]
        elif channel.fading:
            g = rng.standard_exponential((m, len(stations)))
        else:
            g = np.ones((m, len(stations)))

        # overlap of [block_start, block_stop) with each occupied range,
        # plus one when the extra PRB falls inside it
        beta = np.clip(
            np.minimum(block_stop[lo:hi, None], occ_stop[None, :])
            - np.maximum(block_start[lo:hi, None], occ_start[None, :]),
            0, None).astype(float)
        ex = extra[lo:hi, None]
        beta += ((ex >= 0) & (ex >= occ_start[None, :])
                 & (ex < occ_stop[None, :]))

        rows = np.arange(m)
        cols = serving[lo:hi]
        w = beta * pw_prb[None, :] * g * att
        num = alpha[lo:hi] * pw_prb[cols] * g[rows, cols] * att[rows, cols]
        w[rows, cols] = 0.0
        s = num / (w.sum(axis=1) + channel.noise_power_w)
        sinrs[lo:hi] = s
        rates[lo:hi] = alpha[lo:hi] * prb_bandwidth_hz * np.log2(1.0 + s)
    return rates, sinrs
