"""Compiled inner loops over packed uint64 bit rows.

Bit ``i`` of a packed row lives in word ``i >> 6`` at position ``i & 63``.
"""

import numpy as np
from numba import njit

_ONE = np.uint64(1)


@njit(cache=True)
def gauss_jordan(data, ncols):
    """Reduce ``data`` in place to reduced row echelon form on its first ``ncols`` bits.

    Pivots are chosen column by column (lowest column first) from the lowest-index
    row not yet used as a pivot. Rows are never swapped, so bits past ``ncols``
    act as a tracker of the row operations.

    Returns ``(pivot_row_per_column, row_xor_count)``.
    """
    nrows, nwords = data.shape
    pivots = np.full(ncols, -1, dtype=np.int64)
    used = np.zeros(nrows, dtype=np.bool_)
    ops = 0
    for c in range(ncols):
        w = c >> 6
        bit = _ONE << np.uint64(c & 63)
        piv = -1
        for r in range(nrows):
            if not used[r] and (data[r, w] & bit) != 0:
                piv = r
                break
        if piv < 0:
            continue
        used[piv] = True
        pivots[c] = piv
        for r in range(nrows):
            if r != piv and (data[r, w] & bit) != 0:
                for k in range(nwords):
                    data[r, k] ^= data[piv, k]
                ops += 1
    return pivots, ops


@njit(cache=True, inline="always")
def _msb(x):
    # index of the highest set bit of a nonzero uint64
    n = 0
    if x >= np.uint64(1) << np.uint64(32):
        x >>= np.uint64(32)
        n += 32
    if x >= np.uint64(1) << np.uint64(16):
        x >>= np.uint64(16)
        n += 16
    if x >= np.uint64(1) << np.uint64(8):
        x >>= np.uint64(8)
        n += 8
    if x >= np.uint64(1) << np.uint64(4):
        x >>= np.uint64(4)
        n += 4
    if x >= np.uint64(1) << np.uint64(2):
        x >>= np.uint64(2)
        n += 2
    if x >= np.uint64(1) << np.uint64(1):
        n += 1
    return n


@njit(cache=True)
def _insert(basis, present, v):
    """Reduce ``v`` against an xor basis keyed by highest set bit; store if independent.

    Returns the pivot bit of the stored vector, or -1 if ``v`` was dependent.
    """
    nwords = v.shape[0]
    while True:
        top = -1
        for k in range(nwords - 1, -1, -1):
            if v[k] != 0:
                top = k * 64 + _msb(v[k])
                break
        if top < 0:
            return -1
        if not present[top]:
            basis[top, :] = v
            present[top] = True
            return top
        for k in range(nwords):
            v[k] ^= basis[top, k]


# verdict bits returned by the erasure kernels
X_OK = 1
Z_OK = 2


@njit(cache=True)
def erasure_verdicts(xcols, zcols, patterns, mode):
    """Decide logical recoverability for a batch of erasure patterns.

    ``xcols[q]`` / ``zcols[q]`` pack, for qubit ``q``, the x / z bit of every
    operator in the check system: bit 0 is the Z logical, bit 1 the X logical,
    bit ``j + 2`` generator ``j``. A logical type is lost exactly when some
    combination of erased columns vanishes on every generator bit but not on that
    logical's bit; such combinations are the basis vectors with pivot below 2.

    ``mode`` 0 stops at the first failure of either type, 1 watches only X,
    2 only Z, 3 runs every pattern to completion. Returns a uint8 per pattern
    with ``X_OK`` / ``Z_OK`` set for the types that survive.
    """
    ntrials, a = patterns.shape
    nwords = xcols.shape[1]
    nbits = nwords * 64
    basis = np.zeros((nbits, nwords), dtype=np.uint64)
    present = np.zeros(nbits, dtype=np.bool_)
    stored = np.empty(2 * a + 1, dtype=np.int64)
    v = np.empty(nwords, dtype=np.uint64)
    out = np.empty(ntrials, dtype=np.uint8)
    for t in range(ntrials):
        nstored = 0
        for i in range(a):
            q = patterns[t, i]
            for part in range(2):
                if part == 0:
                    v[:] = xcols[q]
                else:
                    v[:] = zcols[q]
                top = _insert(basis, present, v)
                if top >= 0:
                    stored[nstored] = top
                    nstored += 1
            x_lost = present[1]
            z_lost = present[0] or (present[1] and (basis[1, 0] & _ONE) != 0)
            if mode == 0 and (x_lost or z_lost):
                break
            if mode == 1 and x_lost:
                break
            if mode == 2 and z_lost:
                break
        x_lost = present[1]
        z_lost = present[0] or (present[1] and (basis[1, 0] & _ONE) != 0)
        res = 0
        if not x_lost:
            res |= X_OK
        if not z_lost:
            res |= Z_OK
        out[t] = res
        for i in range(nstored):
            present[stored[i]] = False
    return out


@njit(cache=True)
def fisher_yates_prefixes(raw, n):
    """Turn per-trial raw uint64 draws into uniform weight-``a`` index sets.

    Row ``t`` of ``raw`` holds ``a`` draws; draw ``i`` picks a swap partner in
    ``[i, n)`` by reduction modulo ``n - i`` (bias below ``n / 2**64``).
    """
    ntrials, a = raw.shape
    perm = np.arange(n)
    out = np.empty((ntrials, a), dtype=np.int64)
    for t in range(ntrials):
        for i in range(a):
            span = np.uint64(n - i)
            j = i + np.int64(raw[t, i] % span)
            tmp = perm[i]
            perm[i] = perm[j]
            perm[j] = tmp
        for i in range(a):
            out[t, i] = perm[i]
        # undo the swaps in reverse so perm is the identity again
        for i in range(a - 1, -1, -1):
            span = np.uint64(n - i)
            j = i + np.int64(raw[t, i] % span)
            tmp = perm[i]
            perm[i] = perm[j]
            perm[j] = tmp
    return out


@njit(cache=True)
def all_combinations(n, a, count):
    """All ``count = C(n, a)`` size-``a`` subsets of ``range(n)`` in lexicographic order."""
    out = np.empty((count, a), dtype=np.int64)
    idx = np.arange(a)
    for row in range(count):
        out[row, :] = idx
        i = a - 1
        while i >= 0 and idx[i] == n - a + i:
            i -= 1
        if i < 0:
            break
        idx[i] += 1
        for j in range(i + 1, a):
            idx[j] = idx[j - 1] + 1
    return out


@njit(cache=True)
def greedy_verdicts(partner_tile, boundary_index, table_of_tile, admissible, target, n_boundary, patterns):
    """Greedy region growth for a batch of erasure patterns.

    A tile joins the recovered region once the mask of its slots that are not yet
    known is admissible for its tile kind; a slot is known when it is an unerased
    boundary leg or is contracted with a tile already in the region.
    """
    ntrials, a = patterns.shape
    ntiles, nslots = partner_tile.shape
    erased = np.zeros(n_boundary, dtype=np.bool_)
    in_region = np.zeros(ntiles, dtype=np.bool_)
    out = np.zeros(ntrials, dtype=np.bool_)
    for t in range(ntrials):
        for i in range(a):
            erased[patterns[t, i]] = True
        in_region[:] = False
        changed = True
        while changed and not in_region[target]:
            changed = False
            for tile in range(ntiles - 1, -1, -1):
                if in_region[tile]:
                    continue
                mask = 0
                for s in range(nslots):
                    p = partner_tile[tile, s]
                    if p >= 0:
                        known = in_region[p]
                    else:
                        known = not erased[boundary_index[tile, s]]
                    if not known:
                        mask |= 1 << s
                if admissible[table_of_tile[tile], mask]:
                    in_region[tile] = True
                    changed = True
        out[t] = in_region[target]
        for i in range(a):
            erased[patterns[t, i]] = False
    return out
