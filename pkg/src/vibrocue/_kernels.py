"""Inner loops with a numba path and a pure-numpy path.

Set ``VIBROCUE_NO_NUMBA=1`` to force the numpy implementations. Both paths
return identical results; the flag only changes speed.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover
    njit = None

USE_NUMBA = njit is not None and os.environ.get("VIBROCUE_NO_NUMBA", "").lower() not in ("1", "true", "yes")


def fill_frames_numpy(lo, hi, act, val, n_frames, n_actuators):
    """Write ``val[j]`` into samples ``lo[j]:hi[j]`` of column ``act[j] - 1``."""
    lo = np.clip(lo, 0, n_frames)
    hi = np.clip(hi, lo, n_frames)
    lengths = hi - lo
    out = np.zeros((n_frames, n_actuators))
    if lengths.sum() == 0:
        return out
    owner = np.repeat(np.arange(lo.shape[0]), lengths)
    offsets = np.cumsum(lengths) - lengths
    rows = lo[owner] + np.arange(owner.shape[0]) - offsets[owner]
    out[rows, act[owner] - 1] = val[owner]
    return out


def _fill_frames_loop(lo, hi, act, val, n_frames, n_actuators):
    out = np.zeros((n_frames, n_actuators))
    for j in range(lo.shape[0]):
        a = act[j] - 1
        stop = min(hi[j], n_frames)
        for k in range(max(lo[j], 0), stop):
            out[k, a] = val[j]
    return out


def friedman_tail_numpy(perm_ranks, observed, eps):
    """Count row-permutation combinations whose rank-sum statistic reaches ``observed``.

    ``perm_ranks`` has shape (n, m, k): for each subject, the m = k! orderings
    of that subject's ranks. The statistic is the sum of squared column sums.
    """
    sums = np.zeros((1, perm_ranks.shape[2]))
    for row in perm_ranks:
        sums = (sums[:, None, :] + row[None, :, :]).reshape(-1, row.shape[1])
    stat = (sums**2).sum(axis=1)
    return int(np.count_nonzero(stat >= observed - eps)), stat.shape[0]


def _friedman_tail_loop(perm_ranks, observed, eps):
    n, m, k = perm_ranks.shape
    idx = np.zeros(n, dtype=np.int64)
    sums = np.zeros(k)
    for i in range(n):
        for c in range(k):
            sums[c] += perm_ranks[i, 0, c]
    hits = 0
    total = 0
    while True:
        s = 0.0
        for c in range(k):
            s += sums[c] * sums[c]
        if s >= observed - eps:
            hits += 1
        total += 1
        # mixed-radix increment, updating column sums in place
        i = n - 1
        while i >= 0:
            old = idx[i]
            new = old + 1
            if new == m:
                new = 0
            for c in range(k):
                sums[c] += perm_ranks[i, new, c] - perm_ranks[i, old, c]
            idx[i] = new
            if new != 0:
                break
            i -= 1
        if i < 0:
            break
    return hits, total


if njit is not None:
    fill_frames_numba = njit(cache=True)(_fill_frames_loop)
    friedman_tail_numba = njit(cache=True)(_friedman_tail_loop)
else:  # pragma: no cover
    fill_frames_numba = None
    friedman_tail_numba = None


def fill_frames(lo, hi, act, val, n_frames, n_actuators):
    if USE_NUMBA:
        return fill_frames_numba(lo, hi, act, val, n_frames, n_actuators)
    return fill_frames_numpy(lo, hi, act, val, n_frames, n_actuators)


def friedman_tail(perm_ranks, observed, eps=1e-9):
    if USE_NUMBA:
        return friedman_tail_numba(perm_ranks, observed, eps)
    return friedman_tail_numpy(perm_ranks, observed, eps)
