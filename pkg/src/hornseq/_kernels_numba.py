"""Numba-compiled kernels for the dense bitmask encoding.

Everything is done on uint64 masks; intermediate per-head segments are at
most 16 bits, so they are safe in int64 locals.  ``cache=True`` persists
compiled artifacts next to the package.
"""

from __future__ import annotations

import numpy as np
from numba import njit

U1 = np.uint64(1)


@njit(cache=True)
def _compose_mask(p, r, n):
    nb = 1 << n
    seg_mask = np.uint64((1 << nb) - 1)
    out = np.uint64(0)
    for h in range(n):
        seg = np.int64((p >> np.uint64(h * nb)) & seg_mask)
        if seg == 0:
            continue
        oseg = 0
        for body in range(nb):
            if not (seg >> body) & 1:
                continue
            if body == 0:
                oseg |= 1
                continue
            ach = 1
            for b in range(n):
                if not (body >> b) & 1:
                    continue
                opts = np.int64((r >> np.uint64(b * nb)) & seg_mask)
                if opts == 0:
                    ach = 0
                    break
                new = 0
                for u in range(nb):
                    if (ach >> u) & 1:
                        for m in range(nb):
                            if (opts >> m) & 1:
                                new |= 1 << (u | m)
                ach = new
            oseg |= ach
        out |= np.uint64(oseg) << np.uint64(h * nb)
    return out


@njit(cache=True)
def compose_table(n):
    nb = 1 << n
    m = 1 << (n * nb)
    table = np.empty((m, m), dtype=np.uint8)
    for p in range(m):
        for r in range(m):
            table[p, r] = _compose_mask(np.uint64(p), np.uint64(r), n)
    return table


@njit(cache=True)
def lm_batch(progs, n):
    nb = 1 << n
    out = np.zeros(progs.shape[0], dtype=np.uint32)
    for i in range(progs.shape[0]):
        p = progs[i]
        interp = 0
        changed = True
        while changed:
            changed = False
            for h in range(n):
                if (interp >> h) & 1:
                    continue
                seg = np.int64((p >> np.uint64(h * nb)) & np.uint64((1 << nb) - 1))
                for body in range(nb):
                    if (seg >> body) & 1 and (body & ~interp) == 0:
                        interp |= 1 << h
                        changed = True
                        break
        out[i] = interp
    return out


@njit(cache=True)
def omega_batch(progs, n, max_hist):
    nb = 1 << n
    out = np.zeros(progs.shape[0], dtype=np.uint32)
    ok = np.ones(progs.shape[0], dtype=np.bool_)
    hist = np.empty(max_hist, dtype=np.uint64)
    umask = np.uint64(0)
    for h in range(n):
        umask |= U1 << np.uint64(h * nb + (1 << h))
    for i in range(progs.shape[0]):
        p = progs[i]
        cur = p
        acc = np.uint64(0)
        count = 0
        good = True
        while True:
            dup = False
            for j in range(count):
                if hist[j] == cur:
                    dup = True
                    break
            if dup:
                break
            if count >= max_hist:
                good = False
                break
            hist[count] = cur
            count += 1
            acc |= cur
            cur = _compose_mask(cur, p, n)
        if not good:
            ok[i] = False
            continue
        plus = _compose_mask(umask | acc, p, n)
        interp = 0
        for h in range(n):
            if (plus >> np.uint64(h * nb)) & U1:
                interp |= 1 << h
        out[i] = interp
    return out, ok


@njit(cache=True)
def nonassoc_scan(table):
    m = table.shape[0]
    for x in range(m):
        for y in range(m):
            xy = table[x, y]
            for z in range(m):
                if table[xy, z] != table[x, table[y, z]]:
                    return x, y, z
    return -1, -1, -1
