"""Rate-distribution estimation and cross-drop aggregation."""

from dataclasses import dataclass

import numpy as np

TIER_LABEL_MACRO = "macro"
TIER_LABEL_FEMTO = "femto"


class EmptyPositiveSetError(RuntimeError):
    """No user in the sample set achieved a positive rate."""


class GridMismatchError(ValueError):
    """Curves to aggregate were computed on different threshold grids."""


@dataclass
class DistributionCurve:
    """Fraction of positive-rate users above each threshold.

    ``psi[i]`` estimates the probability that a served user's rate exceeds
    ``deltas[i]``, conditioned on the rate being positive. ``ci_halfwidth``
    is the 95% normal-approximation half-width across drops (zero for a
    single-drop curve) and ``n_samples`` the number of positive-rate
    samples backing the estimate.
    """

    deltas: np.ndarray
    psi: np.ndarray
    ci_halfwidth: np.ndarray
    n_samples: int

    def at(self, delta):
        """psi at one grid threshold (exact match required)."""
        i = int(np.flatnonzero(np.isclose(self.deltas, delta))[0])
        return float(self.psi[i])


def rate_distribution(rates, deltas):
    """Empirical curve over one drop's served-user rates.

    Denied users must not appear in ``rates`` at all; zero-rate samples are
    excluded by the positive-rate conditioning.
    """
    rates = np.asarray(rates, dtype=float)
    deltas = np.asarray(deltas, dtype=float)
    if deltas.ndim != 1 or deltas.size == 0 or np.any(np.diff(deltas) <= 0):
        raise ValueError("deltas must be a strictly ascending vector")
    positive = rates[rates > 0.0]
    if positive.size == 0:
        raise EmptyPositiveSetError("no user achieved a positive rate")
    ordered = np.sort(positive)
    above = positive.size - np.searchsorted(ordered, deltas, side="right")
    psi = above / positive.size
    return DistributionCurve(deltas=deltas, psi=psi,
                             ci_halfwidth=np.zeros_like(psi),
                             n_samples=int(positive.size))


def rate_distribution_all_users(rates, n_users, deltas):
    """Fraction of the whole population above each threshold.

    Unlike the served-only curve, the denominator counts every user of the
    drop, so denied users (who carry no rate sample) drag the curve down.
    This is the view that exposes the cost of admission denials, e.g. under
    closed femto access.
    """
    rates = np.asarray(rates, dtype=float)
    deltas = np.asarray(deltas, dtype=float)
    if deltas.ndim != 1 or deltas.size == 0 or np.any(np.diff(deltas) <= 0):
        raise ValueError("deltas must be a strictly ascending vector")
    if n_users <= 0:
        raise EmptyPositiveSetError("drop has no users")
    if rates.size > n_users:
        raise ValueError("more rate samples than users")
    ordered = np.sort(rates)
    above = rates.size - np.searchsorted(ordered, deltas, side="right")
    psi = above / float(n_users)
    return DistributionCurve(deltas=deltas, psi=psi,
                             ci_halfwidth=np.zeros_like(psi),
                             n_samples=int(n_users))


def aggregate_drops(curves):
    """Mean curve across drops with 95% confidence half-widths."""
    if not curves:
        raise ValueError("no curves to aggregate")
    deltas = curves[0].deltas
    for c in curves[1:]:
        if c.deltas.shape != deltas.shape or not np.array_equal(c.deltas, deltas):
            raise GridMismatchError("curves use different delta grids")
    stack = np.vstack([c.psi for c in curves])
    mean = stack.mean(axis=0)
    if stack.shape[0] > 1:
        ci = 1.96 * stack.std(axis=0, ddof=1) / np.sqrt(stack.shape[0])
    else:
        ci = np.zeros_like(mean)
    return DistributionCurve(deltas=deltas.copy(), psi=mean, ci_halfwidth=ci,
                             n_samples=int(sum(c.n_samples for c in curves)))


def tier_breakdown(rates, tier, is_subscriber, deltas):
    """Per-tier and per-subscriber-class curves over one drop's samples.

    Partition keys: 'macro', 'femto', 'femto_subscriber' and
    'femto_nonsubscriber'. A partition with no positive-rate sample maps to
    None so callers can tell an unused tier from a real curve.
    """
    rates = np.asarray(rates, dtype=float)
    tier = np.asarray(tier)
    is_sub = np.asarray(is_subscriber, dtype=bool)
    femto = tier == 1
    parts = {
        TIER_LABEL_MACRO: ~femto,
        TIER_LABEL_FEMTO: femto,
        "femto_subscriber": femto & is_sub,
        "femto_nonsubscriber": femto & ~is_sub,
    }
    out = {}
    for name, mask in parts.items():
        try:
            out[name] = rate_distribution(rates[mask], deltas)
        except EmptyPositiveSetError:
            out[name] = None
    return out
