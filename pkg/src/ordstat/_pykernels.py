"""Pure-Python selection kernels.

Reference implementation of the elimination recursion; ordstat._ckernels is
the compiled twin and must match these counters and return values exactly.
All three entry points take an already-validated sequence of finite floats
and a 1-based rank. Counter semantics, shared by both backends:

  * recursive_calls  counts every entry into the recursion,
  * base_case_calls  counts rank-1 entries that compute a minimum,
  * memo_hits        counts entries answered from the cache.
"""

import sys

# Memoized kernels here accept any length; the compiled backend caps the
# bitmask width instead (see _ckernels.MEMO_MAX_N).
MEMO_MAX_N = None


def _ensure_depth(rank):
    # Each rank level costs three recursion units (the call, its max()
    # generator, and the C-level iteration); raise the limit, never lower.
    need = 3 * rank + 256
    if sys.getrecursionlimit() < need:
        sys.setrecursionlimit(need)


def select_naive(values, rank):
    """Plain recursion. Returns (value, recursive_calls, base_case_calls)."""
    _ensure_depth(rank)
    counters = [0, 0]

    def go(xs, m):
        counters[0] += 1
        if m == 1:
            counters[1] += 1
            return min(xs)
        hi = len(xs) - m + 2
        return max(go(xs[:j] + xs[j + 1:], m - 1) for j in range(hi))

    value = go(tuple(values), rank)
    return value, counters[0], counters[1]


def select_memo(values, rank):
    """Recursion memoized on the set of surviving original positions.

    The cache key is a bitmask of surviving 0-based positions; distinct
    elimination orders that leave the same survivors share one entry.
    Returns (value, recursive_calls, base_case_calls, memo_hits).
    """
    xs = tuple(values)
    _ensure_depth(rank)
    counters = [0, 0, 0]
    cache = {}

    def go(idx, mask, m):
        counters[0] += 1
        hit = cache.get(mask)
        if hit is not None:
            counters[2] += 1
            return hit
        if m == 1:
            counters[1] += 1
            best = min(xs[i] for i in idx)
        else:
            hi = len(idx) - m + 2
            best = max(
                go(idx[:j] + idx[j + 1:], mask & ~(1 << idx[j]), m - 1)
                for j in range(hi)
            )
        cache[mask] = best
        return best

    n = len(xs)
    value = go(tuple(range(n)), (1 << n) - 1, rank)
    return value, counters[0], counters[1], counters[2]


def select_fullrange(values, rank):
    """Variant that scans every elimination index, not just the first
    N - n + 2. Memoized internally; returns the value only."""
    xs = tuple(values)
    _ensure_depth(rank)
    cache = {}

    def go(idx, mask, m):
        hit = cache.get(mask)
        if hit is not None:
            return hit
        if m == 1:
            best = min(xs[i] for i in idx)
        else:
            best = max(
                go(idx[:j] + idx[j + 1:], mask & ~(1 << idx[j]), m - 1)
                for j in range(len(idx))
            )
        cache[mask] = best
        return best

    n = len(xs)
    return go(tuple(range(n)), (1 << n) - 1, rank)
