"""User-to-station association: weighted-distance rule, capacity-limited
admission, femto access control, and the two-step macro-to-femto offload."""

from dataclasses import dataclass

import numpy as np

from .geometry import MIN_LINK_DISTANCE_M, pairwise_distances
from .network import TIER_MACRO

NEAREST_BS = "nearest_bs"
MAX_RECEIVED_POWER = "max_received_power"
CELL_RANGE_MODIFICATION = "cell_range_modification"
FEMTOCELL_RANGE_EXTENSION = "femtocell_range_extension"
TWO_STEP_OFFLOAD = "two_step_offload"

STRATEGY_KINDS = (
    NEAREST_BS,
    MAX_RECEIVED_POWER,
    CELL_RANGE_MODIFICATION,
    FEMTOCELL_RANGE_EXTENSION,
    TWO_STEP_OFFLOAD,
)

OPEN = "open"
CLOSED = "closed"
HYBRID = "hybrid"
ACCESS_MODES = (OPEN, CLOSED, HYBRID)

# Users are scored against stations in fixed-size blocks to bound memory;
# the block size must stay constant so runs are reproducible bit-for-bit.
_CHUNK = 512


@dataclass(frozen=True)
class Strategy:
    """Association rule: each user targets argmax of weight * distance^-gamma.

    The per-station weight depends only on the tier. Nearest-station and the
    two-step offload rank by plain distance (weight 1 everywhere; a per-tier
    weight cancels inside single-tier contention anyway). Max received power
    weighs by transmit power, and the two biased kinds additionally scale
    one or both tiers to stretch or shrink their effective range.
    """

    kind: str = NEAREST_BS
    bias_macro: float = 1.0
    bias_femto: float = 1.0
    path_loss_exponent: float = 2.3

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown strategy kind: {self.kind!r}")
        if self.bias_macro <= 0 or self.bias_femto <= 0:
            raise ValueError("bias factors must be positive")
        if self.path_loss_exponent <= 0:
            raise ValueError("path_loss_exponent must be positive")

    def tier_weights(self, macro_power_w, femto_power_w):
        """Return (macro weight, femto weight) for this strategy."""
        if self.kind in (NEAREST_BS, TWO_STEP_OFFLOAD):
            return 1.0, 1.0
        if self.kind == MAX_RECEIVED_POWER:
            return float(macro_power_w), float(femto_power_w)
        if self.kind == CELL_RANGE_MODIFICATION:
            return (float(macro_power_w) * self.bias_macro,
                    float(femto_power_w) * self.bias_femto)
        # femtocell range extension: macro unbiased, femto stretched
        return float(macro_power_w), float(femto_power_w) * self.bias_femto


@dataclass(frozen=True)
class AccessControl:
    """Femto-tier admission policy plus the per-femto subscriber lists."""

    mode: str = OPEN
    subscribers: tuple = None  # one array of user ids per femto, or None

    def __post_init__(self):
        if self.mode not in ACCESS_MODES:
            raise ValueError(f"unknown access mode: {self.mode!r}")

    def subs_for(self, femto_ordinal):
        if self.subscribers is None:
            return np.empty(0, dtype=np.int64)
        return self.subscribers[femto_ordinal]


@dataclass
class Outcome:
    """Result of one association round.

    ``serving`` maps each user to its station id, -1 when denied.
    ``requested`` is the station the user last contended at.
    ``admitted_uid``/``admitted_bs`` list the admitted users grouped by
    station in admission order (metric descending, user id as tiebreak).
    """

    serving: np.ndarray
    requested: np.ndarray
    metric: np.ndarray
    admitted_uid: np.ndarray
    admitted_bs: np.ndarray
    n_stations: int

    @property
    def n_admitted(self):
        return int(self.admitted_uid.size)

    def denied_users(self):
        return np.flatnonzero(self.serving < 0)

    def admitted_at(self, bs):
        return self.admitted_uid[self.admitted_bs == bs]

    def denied_at(self, bs):
        return np.flatnonzero((self.requested == bs) & (self.serving < 0))


def association_metric(distance_m, weight, path_loss_exponent):
    """Scalar or vector form of the association score weight * d^-gamma."""
    d = np.maximum(np.asarray(distance_m, dtype=float), MIN_LINK_DISTANCE_M)
    return weight * d ** (-path_loss_exponent)


def station_weights(stations, strategy, macro_power_w=None, femto_power_w=None):
    """Per-station association weights; powers default to the station table."""
    if macro_power_w is None or femto_power_w is None:
        is_m = stations.tier == TIER_MACRO
        macro_power_w = float(stations.power_w[is_m][0]) if is_m.any() else 1.0
        femto_power_w = float(stations.power_w[~is_m][0]) if (~is_m).any() else 1.0
    w_m, w_f = strategy.tier_weights(macro_power_w, femto_power_w)
    return np.where(stations.tier == TIER_MACRO, w_m, w_f)


def best_station(users_xy, stations, weights, path_loss_exponent,
                 station_mask=None):
    """Per-user argmax of the association metric; ties go to the lowest id.

    Returns (station index, metric there); (-1, nan) when no station is
    eligible under ``station_mask``.
    """
    users_xy = np.asarray(users_xy, dtype=float).reshape(-1, 2)
    n = users_xy.shape[0]
    best_idx = np.full(n, -1, dtype=np.int64)
    best_met = np.full(n, np.nan)
    if len(stations) == 0 or n == 0:
        return best_idx, best_met
    cols = (np.flatnonzero(station_mask) if station_mask is not None
            else np.arange(len(stations)))
    if cols.size == 0:
        return best_idx, best_met
    bxy = stations.xy[cols]
    w = np.asarray(weights, dtype=float)[cols]
    for lo in range(0, n, _CHUNK):
        hi = min(lo + _CHUNK, n)
        d = pairwise_distances(users_xy[lo:hi], bxy)
        met = w[None, :] * d ** (-path_loss_exponent)
        j = np.argmax(met, axis=1)  # first maximum = lowest station id
        rows = np.arange(hi - lo)
        best_idx[lo:hi] = cols[j]
        best_met[lo:hi] = met[rows, j]
    return best_idx, best_met


def apply_access_control(requesters, metrics, is_subscriber, mode, capacity):
    """Admit up to ``capacity`` requesters at one femto under an access mode.

    Open: everyone competes on the metric. Closed: only subscribers compete.
    Hybrid: subscribers fill slots first, remaining slots go to the best
    non-subscribers. Returns (admitted ids in admission order, denied ids).
    """
    requesters = np.asarray(requesters, dtype=np.int64)
    metrics = np.asarray(metrics, dtype=float)
    is_sub = np.asarray(is_subscriber, dtype=bool)
    order = np.lexsort((requesters, -metrics))
    if mode == CLOSED:
        order = order[is_sub[order]]
    elif mode == HYBRID:
        order = order[np.argsort(~is_sub[order], kind="stable")]
    elif mode != OPEN:
        raise ValueError(f"unknown access mode: {mode!r}")
    admitted = requesters[order[: int(capacity)]]
    denied = requesters[~np.isin(requesters, admitted)]
    return admitted, denied


def _admit(requested, metric, stations, capacities, access):
    """Capacity-limited admission at each station over the requested targets.

    Users are ranked per station by metric descending (user id breaks ties);
    femto stations additionally apply the access mode. Returns the serving
    array plus the admitted (uid, bs) pairs grouped by station id.
    """
    n_users = requested.shape[0]
    serving = np.full(n_users, -1, dtype=np.int64)
    empty = np.empty(0, dtype=np.int64)
    valid = np.flatnonzero(requested >= 0)
    if valid.size == 0:
        return serving, empty, empty

    order = np.lexsort((valid, -metric[valid], requested[valid]))
    s_uid = valid[order]
    s_req = requested[valid][order]
    s_met = metric[valid][order]
    _, starts, counts = np.unique(s_req, return_index=True, return_counts=True)

    open_mode = (access is None or access.mode == OPEN
                 or (access.mode == HYBRID and access.subscribers is None))
    if open_mode:
        ranks = np.arange(s_req.size) - np.repeat(starts, counts)
        keep = ranks < capacities[s_req]
        adm_uid = s_uid[keep]
        adm_bs = s_req[keep]
        serving[adm_uid] = adm_bs
        return serving, adm_uid, adm_bs

    out_uid = []
    out_bs = []
    for start, count in zip(starts, counts):
        bs = int(s_req[start])
        g_uid = s_uid[start:start + count]
        cap = int(capacities[bs])
        if bs < stations.n_macro:
            adm = g_uid[:cap]
        else:
            subs = access.subs_for(bs - stations.n_macro)
            adm, _ = apply_access_control(
                g_uid, s_met[start:start + count],
                np.isin(g_uid, subs), access.mode, cap)
        serving[adm] = bs
        out_uid.append(adm)
        out_bs.append(np.full(adm.size, bs, dtype=np.int64))
    adm_uid = np.concatenate(out_uid) if out_uid else empty
    adm_bs = np.concatenate(out_bs) if out_bs else empty
    return serving, adm_uid, adm_bs


def associate(users_xy, stations, strategy, capacities=None, access=None,
              station_mask=None):
    """One-shot association: every user contends at its best-metric station.

    Requesters beyond a station's capacity, and non-subscribers at closed
    femtos, are denied (they do not fall back to a second choice here; the
    two-step offload is the scheme that forwards overflow).
    """
    users_xy = np.asarray(users_xy, dtype=float).reshape(-1, 2)
    caps = stations.capacities if capacities is None else np.asarray(capacities)
    weights = station_weights(stations, strategy)
    requested, metric = best_station(users_xy, stations, weights,
                                     strategy.path_loss_exponent,
                                     station_mask=station_mask)
    serving, adm_uid, adm_bs = _admit(requested, metric, stations, caps, access)
    return Outcome(serving=serving, requested=requested, metric=metric,
                   admitted_uid=adm_uid, admitted_bs=adm_bs,
                   n_stations=len(stations))


def two_step_offload(users_xy, stations, strategy, capacities=None,
                     access=None):
    """Proactive macro-to-femto offload at association time.

    Step 1: every user contends at its best macro station; each macro admits
    up to its capacity by metric. Step 2: each overflow user is forwarded to
    its geometrically closest femto and contends there under the same metric
    rule and the femto's access mode; losing again means denial. With no
    femtos in the system, overflow users are denied outright.
    """
    users_xy = np.asarray(users_xy, dtype=float).reshape(-1, 2)
    caps = stations.capacities if capacities is None else np.asarray(capacities)
    weights = station_weights(stations, strategy)
    gamma = strategy.path_loss_exponent

    macro_mask = stations.tier == TIER_MACRO
    requested, metric = best_station(users_xy, stations, weights, gamma,
                                     station_mask=macro_mask)
    serving, adm_uid, adm_bs = _admit(requested, metric, stations, caps, None)

    overflow = np.flatnonzero((serving < 0) & (requested >= 0))
    if overflow.size and stations.n_femto > 0:
        fxy = stations.xy[stations.n_macro:]
        fw = weights[stations.n_macro:]
        req2 = np.full(users_xy.shape[0], -1, dtype=np.int64)
        met2 = np.full(users_xy.shape[0], np.nan)
        for lo in range(0, overflow.size, _CHUNK):
            idx = overflow[lo:lo + _CHUNK]
            d = pairwise_distances(users_xy[idx], fxy)
            j = np.argmin(d, axis=1)  # closest femto, lowest id on ties
            rows = np.arange(idx.size)
            req2[idx] = stations.n_macro + j
            met2[idx] = fw[j] * d[rows, j] ** (-gamma)
        serving2, adm_uid2, adm_bs2 = _admit(req2, met2, stations, caps, access)
        serving[overflow] = serving2[overflow]
        requested[overflow] = req2[overflow]
        metric[overflow] = met2[overflow]
        # femto ids all exceed macro ids, so the grouped order is preserved
        adm_uid = np.concatenate([adm_uid, adm_uid2])
        adm_bs = np.concatenate([adm_bs, adm_bs2])

    return Outcome(serving=serving, requested=requested, metric=metric,
                   admitted_uid=adm_uid, admitted_bs=adm_bs,
                   n_stations=len(stations))


def build_subscriber_lists(femto_xy, users_xy, radius_m, per_femto, rng):
    """Draw each femto's subscribers uniformly among users within radius.

    Returns one sorted array of user ids per femto; fewer than ``per_femto``
    when not enough users are in range.
    """
    femto_xy = np.asarray(femto_xy, dtype=float).reshape(-1, 2)
    users_xy = np.asarray(users_xy, dtype=float).reshape(-1, 2)
    if radius_m <= 0:
        raise ValueError("subscriber radius must be positive")
    lists = []
    if users_xy.shape[0] == 0:
        return tuple(np.empty(0, dtype=np.int64)
                     for _ in range(femto_xy.shape[0]))
    for lo in range(0, femto_xy.shape[0], _CHUNK):
        d = pairwise_distances(femto_xy[lo:lo + _CHUNK], users_xy)
        for row in d:
            in_range = np.flatnonzero(row <= radius_m)
            if in_range.size > per_femto:
                picked = rng.choice(in_range, size=int(per_femto),
                                    replace=False)
                in_range = np.sort(picked)
            lists.append(in_range.astype(np.int64))
    return tuple(lists)
