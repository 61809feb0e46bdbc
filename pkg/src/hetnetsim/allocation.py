"""Fair split of one station's PRBs among its admitted users."""

from dataclasses import dataclass

import numpy as np


@dataclass
class BsAllocation:
    """Concrete PRB assignment at a single station.

    Users are kept in admission order. Each gets the contiguous block
    [block_start, block_stop) and, when it won a remainder PRB, the single
    index ``extra`` (-1 otherwise) taken from the tail of the fragment.
    """

    users: np.ndarray
    alpha: np.ndarray        # PRBs per user
    block_start: np.ndarray
    block_stop: np.ndarray
    extra: np.ndarray

    def __len__(self):
        return self.users.size

    def indices_for(self, k):
        """All PRB indices of the k-th user as a sorted array."""
        idx = np.arange(self.block_start[k], self.block_stop[k])
        if self.extra[k] >= 0:
            idx = np.append(idx, self.extra[k])
        return idx


def allocate_prbs(fragment, users, rng):
    """Split ``fragment`` evenly over ``users``: floor share each, remainder
    PRBs to users drawn uniformly without replacement.

    Base blocks are laid out contiguously in user order; the remainder PRBs
    come one each from the fragment tail, so every PRB of the fragment is
    used whenever at least one user is admitted. An empty user list returns
    an empty allocation (the station stays silent).
    """
    users = np.asarray(users, dtype=np.int64)
    n = users.size
    if n == 0:
        e = np.empty(0, dtype=np.int64)
        return BsAllocation(users=e, alpha=e.copy(), block_start=e.copy(),
                            block_stop=e.copy(), extra=e.copy())
    if n > fragment.length:
        raise ValueError("more users than PRBs in the fragment")

    base = fragment.length // n
    r = fragment.length - base * n
    alpha = np.full(n, base, dtype=np.int64)
    extra = np.full(n, -1, dtype=np.int64)
    if r:
        lucky = np.sort(rng.choice(n, size=r, replace=False))
        alpha[lucky] += 1
        extra[lucky] = fragment.stop - r + np.arange(r)
    start = fragment.start + np.arange(n, dtype=np.int64) * base
    return BsAllocation(users=users, alpha=alpha, block_start=start,
                        block_stop=start + base, extra=extra)
