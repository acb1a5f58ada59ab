"""Pure-numpy kernels, used when the compiled extension is unavailable.

The compiled twin (synthpop._kernels._core) implements the same arithmetic
in the same order, so chain_walk produces bit-identical chains on either
backend for the same RNG stream. Reductions that feed control flow or
probabilities therefore use sequential accumulation (np.cumsum) rather than
numpy's pairwise-summed reductions, which round differently from a plain
C loop.
"""

from __future__ import annotations

import numpy as np

from synthpop.errors import GenerationError

BACKEND = "python"

# Floor applied to selectable-but-currently-zero difference cells, and the
# cap on raw items per chain before the target is declared degenerate.
DELTA_FLOOR = 0.001
MAX_ITEMS_FACTOR = 10


def _seq_sum(vec):
    """Sequential (left-to-right) sum, matching a C accumulation loop."""
    return np.cumsum(vec)[-1] if len(vec) else 0.0


def _row_sums(mat):
    return np.cumsum(mat, axis=1)[:, -1]


def _col_sums(mat):
    return np.cumsum(mat, axis=0)[-1, :]


def compute_delta(start, achieved):
    """Difference matrix between target and achieved start distributions.

    Both inputs are compared as row-normalized shares. Each row is offset to
    be non-negative, zeroed wherever the target is zero, and renormalized to
    sum to one, so cells in [0, 1] measure under-representation.
    """
    start = np.asarray(start, dtype=np.float64)
    achieved = np.asarray(achieved, dtype=np.float64)
    t_rows = _row_sums(start)[:, None]
    a_rows = _row_sums(achieved)[:, None]
    t_norm = np.divide(start, t_rows, out=np.zeros_like(start), where=t_rows > 0)
    a_norm = np.divide(achieved, a_rows, out=np.zeros_like(achieved), where=a_rows > 0)
    delta = t_norm - a_norm
    offset = np.minimum(delta.min(axis=1), 0.0)[:, None]
    delta = delta - offset
    delta[start == 0] = 0.0
    sums = _row_sums(delta)[:, None]
    return np.divide(delta, sums, out=delta, where=sums > 0)


def _pick(cum, last_pos, u):
    """First index with cum > u, clamped to the last positive-weight cell."""
    idx = int(np.searchsorted(cum, u, side="right"))
    return idx if idx <= last_pos else last_pos


def chain_walk(start, end, n_chains, rng):
    """Generate n_chains activity chains matched to target distributions.

    Args:
        start: (A, T) float64 target start-time weights per activity and bin.
        end: (T, A, T) float64 end-time weights keyed by start bin.
        n_chains: number of chains to generate.
        rng: numpy Generator; consumed two draws per generated item.

    Returns:
        (chains, achieved): chains is a list of lists of (activity_index,
        start_bin, end_bin) with 1-based bins; achieved is the (A, T) int64
        matrix of start counts over the collapsed output chains.
    """
    start = np.ascontiguousarray(start, dtype=np.float64)
    end = np.ascontiguousarray(end, dtype=np.float64)
    n_act, n_bins = start.shape
    if end.shape != (n_bins, n_act, n_bins):
        raise ValueError(f"end matrix stack must have shape (T, A, T), got {end.shape}")

    total = _seq_sum(start.ravel())
    if not total > 0:
        raise GenerationError("target start-time matrix has no mass")
    col_mass = _col_sums(start)
    target_share = col_mass / total
    col_has_mass = col_mass > 0
    start_pos = start > 0
    end_cum = np.cumsum(end, axis=2)

    achieved = np.zeros((n_act, n_bins), dtype=np.int64)
    ach_col = np.zeros(n_bins, dtype=np.int64)
    ach_total = 0
    max_items = MAX_ITEMS_FACTOR * n_bins

    chains = []
    for _ in range(n_chains):
        delta = compute_delta(start, achieved)
        # Floor selectable cells and build per-bin sampling CDFs in one shot.
        floored = np.where((delta == 0.0) & start_pos, DELTA_FLOOR, delta)
        col_tot = _col_sums(floored)
        with np.errstate(invalid="ignore", divide="ignore"):
            cum = np.cumsum(floored / col_tot, axis=0)
        pos = floored > 0
        last_act = (n_act - 1) - pos[::-1].argmax(axis=0)

        phi = []
        b = 1  # 1-based time bin
        while b < n_bins:
            bi = b - 1
            if not col_has_mass[bi]:
                b += 1
                continue
            if ach_total > 0 and ach_col[bi] / ach_total >= target_share[bi]:
                b += 1
                continue
            u = rng.random()
            act = _pick(cum[:, bi], int(last_act[bi]), u)

            # End bin from the activity's end-time row, restricted to the
            # remaining bins of the day, via the precomputed running sums.
            row_cum = end_cum[bi, act]
            base = row_cum[bi - 1] if bi > 0 else 0.0
            window_total = row_cum[n_bins - 1] - base
            u = rng.random()
            if window_total > 0:
                threshold = u * window_total + base
                off = int(np.searchsorted(row_cum[bi:], threshold, side="right"))
                b_e = b + off
                if b_e > n_bins:
                    b_e = n_bins
                while b_e > b and end[bi, act, b_e - 1] == 0.0:
                    b_e -= 1
            else:
                n_window = n_bins - b + 1
                k = int(u * n_window)
                if k == n_window:
                    k -= 1
                b_e = b + k
            phi.append((act, b, b_e))
            if len(phi) > max_items:
                raise GenerationError(
                    "chain exceeded %d items; end-time distribution keeps "
                    "activities pinned to one bin" % max_items)
            b = b_e

        if not phi:
            phi = [(0, 1, n_bins)]  # all-day fallback: activity row 0 is Home
        phi = collapse_items(phi)
        chains.append(phi)
        for act, b_s, _ in phi:
            achieved[act, b_s - 1] += 1
            ach_col[b_s - 1] += 1
            ach_total += 1
    return chains, achieved


def collapse_items(items):
    """Merge consecutive runs of the same activity into single items."""
    out = []
    for act, b_s, b_e in items:
        if out and out[-1][0] == act:
            out[-1] = (act, out[-1][1], b_e)
        else:
            out.append((act, b_s, b_e))
    return out


def kde_accumulate(points, weights, targets, bandwidth):
    """Weighted Gaussian kernel sums at each target location.

    density[j] = sum_i w_i * exp(-||targets[j] - points[i]||^2 / (2 h^2)).
    The kernel is unnormalized; callers renormalize over regions anyway.
    """
    points = np.asarray(points, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if bandwidth <= 0:
        raise ValueError("bandwidth must be positive")
    out = np.zeros(len(targets))
    if len(points) == 0:
        return out
    inv = 1.0 / (2.0 * bandwidth * bandwidth)
    chunk = max(1, int(4e6 // max(len(points), 1)))
    for j0 in range(0, len(targets), chunk):
        t = targets[j0:j0 + chunk]
        d2 = ((t[:, None, 0] - points[None, :, 0]) ** 2
              + (t[:, None, 1] - points[None, :, 1]) ** 2)
        out[j0:j0 + chunk] = (weights[None, :] * np.exp(-d2 * inv)).sum(axis=1)
    return out
