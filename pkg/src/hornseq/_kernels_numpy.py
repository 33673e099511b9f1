"""Pure-numpy fallback kernels for the dense bitmask encoding.

Mirrors the numba kernels in ``_kernels_numba``.  Table construction, the
least-model sweep and the associativity scan are vectorized; the power-cycle
kernel falls back to a per-program Python loop, which is exactly the gap the
benchmark measures.
"""

from __future__ import annotations

import numpy as np

from ._maskops import compose_mask_py, omega_mask_py, unit_mask


def _union_product_table(nb: int) -> np.ndarray:
    """UPROD[x, y] = bitset of unions m1|m2 over body masks m1 in x, m2 in y."""
    size = 1 << nb
    table = np.zeros((size, size), dtype=np.uint32)
    for x in range(size):
        for y in range(size):
            acc = 0
            for m1 in range(nb):
                if not (x >> m1) & 1:
                    continue
                for m2 in range(nb):
                    if (y >> m2) & 1:
                        acc |= 1 << (m1 | m2)
            table[x, y] = acc
    return table


def compose_table(n: int) -> np.ndarray:
    """Composition of every ordered pair of programs over n atoms (n <= 2)."""
    nb = 1 << n
    n_slots = n * nb
    m = 1 << n_slots
    ids = np.arange(m, dtype=np.uint32)
    uprod = _union_product_table(nb)
    seg_mask = (1 << nb) - 1
    # bitset of body masks per head atom of the right-hand program
    segs = [(ids >> (h * nb)) & seg_mask for h in range(n)]
    # achievable emitted-body bitsets per abstract rule body, per right program
    emitted = [None] * nb
    emitted[0] = np.full(m, 1, dtype=np.uint32)
    for body in range(1, nb):
        ach = np.full(m, 1, dtype=np.uint32)
        for b in range(n):
            if (body >> b) & 1:
                ach = uprod[ach, segs[b]]
        emitted[body] = ach
    table = np.zeros((m, m), dtype=np.uint8)
    for slot in range(n_slots):
        head, body = divmod(slot, nb)
        rows = ((ids >> slot) & 1).astype(bool)
        table[rows, :] |= (emitted[body] << (head * nb)).astype(np.uint8)
    return table


def lm_batch(progs: np.ndarray, n: int) -> np.ndarray:
    """Least models of bitmask programs by iterating the consequence operator."""
    nb = 1 << n
    interp = np.zeros(progs.shape[0], dtype=np.uint32)
    for _ in range(n + 1):
        nxt = np.zeros_like(interp)
        for h in range(n):
            derived = np.zeros(progs.shape[0], dtype=bool)
            for body in range(nb):
                slot = np.uint64(h * nb + body)
                has_rule = ((progs >> slot) & np.uint64(1)).astype(bool)
                satisfied = (interp & body) == body
                derived |= has_rule & satisfied
            nxt |= derived.astype(np.uint32) << h
        interp = nxt
    return interp


def omega_batch(progs: np.ndarray, n: int) -> np.ndarray:
    """Facts of P^+ per program; per-program loop over the power sequence."""
    out = np.zeros(progs.shape[0], dtype=np.uint32)
    for i in range(progs.shape[0]):
        out[i] = omega_mask_py(int(progs[i]), n)
    return out


def nonassoc_scan(table: np.ndarray):
    """First (x, y, z) index triple with (xy)z != x(yz), or None."""
    left = table[table, :]
    right = table[np.arange(table.shape[0])[:, None, None], table[None, :, :]]
    mismatches = np.argwhere(left != right)
    if mismatches.size == 0:
        return None
    return tuple(int(v) for v in mismatches[0])


__all__ = [
    "compose_table",
    "lm_batch",
    "omega_batch",
    "nonassoc_scan",
    "compose_mask_py",
    "unit_mask",
]
