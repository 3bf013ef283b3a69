"""Numba kernels for the hot paths: cell enumeration, boundary assembly,
GF(p) column reduction, and a few counting scans.

Everything here works on flat numpy arrays of int64 cell codes.  A cell is
encoded base (2m-1), big-endian over its n coordinates, digit = vertex id - 1
for vertices and digit = m + edge id - 1 for edges; integer order on codes is
then exactly the canonical lexicographic cell order (vertices before edges).
All arithmetic is integer; residues mod p stay below 2^31 so products fit in
int64 with room to spare.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def enumerate_cells(n, base, m, entry_part, num_parts, cap):
    """DFS over all length-n tuples of entry codes, keeping member cells.

    entry_part[c] = index of the family part that entry code c lies entirely
    inside, or -1.  A cell is a member when every part index appears among
    its entries.  Prefixes die as soon as the unmet parts outnumber the
    remaining coordinates.  Emission order is increasing code order.

    Returns (codes, dims, overflowed).
    """
    out_cap = 1024
    out_codes = np.empty(out_cap, dtype=np.int64)
    out_dims = np.empty(out_cap, dtype=np.int8)
    count = 0

    choice = np.full(n, -1, dtype=np.int64)
    pref_code = np.zeros(n + 1, dtype=np.int64)
    pref_met = np.zeros(n + 1, dtype=np.int64)
    pref_unmet = np.zeros(n + 1, dtype=np.int64)
    pref_dim = np.zeros(n + 1, dtype=np.int8)
    pref_unmet[0] = num_parts

    pos = 0
    while pos >= 0:
        c = choice[pos] + 1
        if c >= base:
            choice[pos] = -1
            pos -= 1
            continue
        choice[pos] = c
        met = pref_met[pos]
        unmet = pref_unmet[pos]
        part = entry_part[c]
        if part >= 0 and (met >> part) & 1 == 0:
            met = met | (np.int64(1) << part)
            unmet -= 1
        if unmet > n - pos - 1:
            continue
        code = pref_code[pos] * base + c
        dim = pref_dim[pos] + (1 if c >= m else 0)
        if pos + 1 == n:
            if count == cap:
                return out_codes[:count], out_dims[:count], True
            if count == out_cap:
                out_cap = out_cap * 2
                grown_codes = np.empty(out_cap, dtype=np.int64)
                grown_dims = np.empty(out_cap, dtype=np.int8)
                grown_codes[:count] = out_codes
                grown_dims[:count] = out_dims
                out_codes = grown_codes
                out_dims = grown_dims
            out_codes[count] = code
            out_dims[count] = dim
            count += 1
        else:
            pos += 1
            pref_code[pos] = code
            pref_met[pos] = met
            pref_unmet[pos] = unmet
            pref_dim[pos] = dim
    return out_codes[:count], out_dims[:count], False


@njit(cache=True)
def boundary_entries(codes_d, codes_dm1, n, base, m, tails, heads, d):
    """Signed faces of every d-cell, as CSC data with 2d entries per column.

    tails[c]/heads[c] give the endpoint vertex codes of edge code c.  The
    i-th edge coordinate (1-based, left to right) contributes the head face
    with sign (-1)^(i-1) and the tail face with the opposite sign.  Entries
    within a column come out sorted by row index.

    Returns (rows, signs, ok); ok flips to False if a face is missing from
    codes_dm1 (which would mean the complex is not closed under boundary).
    """
    ncols = codes_d.shape[0]
    nnz = 2 * d * ncols
    rows = np.empty(nnz, dtype=np.int64)
    signs = np.empty(nnz, dtype=np.int8)
    pows = np.empty(n, dtype=np.int64)
    p = np.int64(1)
    for k in range(n - 1, -1, -1):
        pows[k] = p
        p *= base
    digits = np.empty(n, dtype=np.int64)
    face_codes = np.empty(2 * d, dtype=np.int64)
    face_signs = np.empty(2 * d, dtype=np.int8)
    nrows_low = codes_dm1.shape[0]
    ok = True
    for j in range(ncols):
        code = codes_d[j]
        rem = code
        for k in range(n):
            digits[k] = rem // pows[k]
            rem -= digits[k] * pows[k]
        cnt = 0
        i_edge = 0
        for k in range(n):
            dig = digits[k]
            if dig >= m:
                i_edge += 1
                sign = 1 if (i_edge & 1) == 1 else -1
                face_codes[cnt] = code + (heads[dig] - dig) * pows[k]
                face_signs[cnt] = sign
                face_codes[cnt + 1] = code + (tails[dig] - dig) * pows[k]
                face_signs[cnt + 1] = -sign
                cnt += 2
        # map face codes to row indices by binary search
        for t in range(2 * d):
            fc = face_codes[t]
            lo = 0
            hi = nrows_low
            while lo < hi:
                mid = (lo + hi) >> 1
                if codes_dm1[mid] < fc:
                    lo = mid + 1
                else:
                    hi = mid
            if lo >= nrows_low or codes_dm1[lo] != fc:
                ok = False
                lo = 0
            face_codes[t] = lo
        # insertion sort the 2d (row, sign) pairs by row
        for a in range(1, 2 * d):
            r = face_codes[a]
            s = face_signs[a]
            b = a - 1
            while b >= 0 and face_codes[b] > r:
                face_codes[b + 1] = face_codes[b]
                face_signs[b + 1] = face_signs[b]
                b -= 1
            face_codes[b + 1] = r
            face_signs[b + 1] = s
        off = 2 * d * j
        for t in range(2 * d):
            rows[off + t] = face_codes[t]
            signs[off + t] = face_signs[t]
    return rows, signs, ok


@njit(cache=True, inline="always")
def _modinv(a, p):
    # Fermat inverse a^(p-2) mod p; a in [1, p-1], p < 2^31 so products fit int64.
    result = np.int64(1)
    b = a % p
    e = p - 2
    while e > 0:
        if e & 1:
            result = result * b % p
        b = b * b % p
        e >>= 1
    return result


@njit(cache=True)
def reduce_rank(col_ptr, row_idx, vals, nrows, ncols, p, skip_col):
    """Rank over GF(p) by left-to-right column reduction with frozen pivots.

    Standard boundary-reduction scheme: keep a pool of claimed pivot columns
    keyed by their lowest row; repeatedly cancel the current column's lowest
    entry against the pool until it either dies or claims a new pivot.
    Columns flagged in skip_col are skipped entirely (clearing optimization:
    their reduced form is known a priori to be a combination of earlier
    columns).  Deterministic; no row/column exchanges.

    Returns (rank, pivot_of_row) where pivot_of_row[r] >= 0 iff row r is a
    pivot row of the reduced matrix.
    """
    pivot_of_row = np.full(nrows, -1, dtype=np.int64)
    pool_cap = max(4 * row_idx.shape[0] + 64, 1024)
    pool_rows = np.empty(pool_cap, dtype=np.int64)
    pool_vals = np.empty(pool_cap, dtype=np.int64)
    pool_start = np.empty(ncols + 1, dtype=np.int64)
    pool_len = np.empty(ncols + 1, dtype=np.int64)
    pool_used = 0
    npool = 0

    cur_rows = np.empty(nrows, dtype=np.int64)
    cur_vals = np.empty(nrows, dtype=np.int64)
    tmp_rows = np.empty(nrows, dtype=np.int64)
    tmp_vals = np.empty(nrows, dtype=np.int64)

    rank = 0
    for j in range(ncols):
        if skip_col[j]:
            continue
        ln = 0
        for t in range(col_ptr[j], col_ptr[j + 1]):
            v = vals[t] % p
            if v < 0:
                v += p
            if v != 0:
                cur_rows[ln] = row_idx[t]
                cur_vals[ln] = v
                ln += 1
        while ln > 0:
            low = cur_rows[ln - 1]
            owner = pivot_of_row[low]
            if owner < 0:
                # claim pivot: freeze a copy of the current column
                if pool_used + ln > pool_cap:
                    new_cap = pool_cap
                    while new_cap < pool_used + ln:
                        new_cap *= 2
                    nr = np.empty(new_cap, dtype=np.int64)
                    nv = np.empty(new_cap, dtype=np.int64)
                    nr[:pool_used] = pool_rows[:pool_used]
                    nv[:pool_used] = pool_vals[:pool_used]
                    pool_rows = nr
                    pool_vals = nv
                    pool_cap = new_cap
                pool_start[npool] = pool_used
                pool_len[npool] = ln
                for t in range(ln):
                    pool_rows[pool_used + t] = cur_rows[t]
                    pool_vals[pool_used + t] = cur_vals[t]
                pool_used += ln
                pivot_of_row[low] = npool
                npool += 1
                rank += 1
                break
            # cancel the lowest entry against the owning pivot column
            s = pool_start[owner]
            e = s + pool_len[owner]
            piv_low = pool_vals[e - 1]
            factor = cur_vals[ln - 1] * _modinv(piv_low, p) % p
            a = 0
            b = s
            ln2 = 0
            while a < ln and b < e:
                ra = cur_rows[a]
                rb = pool_rows[b]
                if ra < rb:
                    tmp_rows[ln2] = ra
                    tmp_vals[ln2] = cur_vals[a]
                    ln2 += 1
                    a += 1
                elif rb < ra:
                    v = (p - factor * pool_vals[b] % p) % p
                    if v != 0:
                        tmp_rows[ln2] = rb
                        tmp_vals[ln2] = v
                        ln2 += 1
                    b += 1
                else:
                    v = (cur_vals[a] - factor * pool_vals[b]) % p
                    if v < 0:
                        v += p
                    if v != 0:
                        tmp_rows[ln2] = ra
                        tmp_vals[ln2] = v
                        ln2 += 1
                    a += 1
                    b += 1
            while a < ln:
                tmp_rows[ln2] = cur_rows[a]
                tmp_vals[ln2] = cur_vals[a]
                ln2 += 1
                a += 1
            while b < e:
                v = (p - factor * pool_vals[b] % p) % p
                if v != 0:
                    tmp_rows[ln2] = pool_rows[b]
                    tmp_vals[ln2] = v
                    ln2 += 1
                b += 1
            swap_r = cur_rows
            swap_v = cur_vals
            cur_rows = tmp_rows
            cur_vals = tmp_vals
            tmp_rows = swap_r
            tmp_vals = swap_v
            ln = ln2
    return rank, pivot_of_row


@njit(cache=True)
def chain_axiom_holds(ptr_hi, rows_hi, signs_hi, ptr_lo, rows_lo, signs_lo, nrows_lo, scratch):
    """True iff the integer product (lower boundary) @ (upper boundary) is 0."""
    acc = np.zeros(nrows_lo, dtype=np.int64)
    ncols = ptr_hi.shape[0] - 1
    for j in range(ncols):
        nt = 0
        for t in range(ptr_hi[j], ptr_hi[j + 1]):
            r = rows_hi[t]
            s = signs_hi[t]
            for u in range(ptr_lo[r], ptr_lo[r + 1]):
                r2 = rows_lo[u]
                acc[r2] += s * signs_lo[u]
                scratch[nt] = r2
                nt += 1
        bad = False
        for t in range(nt):
            if acc[scratch[t]] != 0:
                bad = True
            acc[scratch[t]] = 0
        if bad:
            return False
    return True


@njit(cache=True)
def last_coordinate_counts(codes, n, base, m):
    """Per-last-entry cell counts, plus (for vertex last entries) how many of
    those cells also contain the same vertex among coordinates 1..n-1."""
    counts = np.zeros(base, dtype=np.int64)
    with_repeat = np.zeros(max(m, 1), dtype=np.int64)
    for i in range(codes.shape[0]):
        code = codes[i]
        last = code % base
        rest = code // base
        counts[last] += 1
        if last < m:
            for _ in range(n - 1):
                dig = rest % base
                rest = rest // base
                if dig == last:
                    with_repeat[last] += 1
                    break
    return counts, with_repeat


@njit(cache=True)
def count_components(n0, edge_rows):
    """Components of the 1-skeleton: union-find over (tail, head) row pairs."""
    parent = np.arange(n0, dtype=np.int64)
    comp = n0
    npairs = edge_rows.shape[0] // 2
    for t in range(npairs):
        a = edge_rows[2 * t]
        b = edge_rows[2 * t + 1]
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a != b:
            if a < b:
                parent[b] = a
            else:
                parent[a] = b
            comp -= 1
    return comp
