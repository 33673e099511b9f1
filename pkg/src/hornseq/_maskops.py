"""Reference bit-twiddling on the dense program encoding, in plain Python.

A program over the n-atom alphabet (atoms in sorted order) is an integer:
rule ``head <- body`` occupies bit ``head_index * 2^n + body_mask``, so the
2^n-bit segment for a head is exactly the bitset of its rule bodies.
Arbitrary-precision ints keep these ops valid for any n; the accelerated
kernels cover n <= 4 (masks within 64 bits).
"""

from __future__ import annotations


def unit_mask(n: int) -> int:
    """Mask of the unit program {x <- x}."""
    nb = 1 << n
    out = 0
    for h in range(n):
        out |= 1 << (h * nb + (1 << h))
    return out


def compose_mask_py(p: int, r: int, n: int) -> int:
    """Sequential composition on bitmask programs."""
    nb = 1 << n
    seg_mask = (1 << nb) - 1
    out = 0
    for h in range(n):
        seg = (p >> (h * nb)) & seg_mask
        if not seg:
            continue
        oseg = 0
        for body in range(nb):
            if not (seg >> body) & 1:
                continue
            if body == 0:
                oseg |= 1  # facts pass through
                continue
            ach = 1  # bitset of achievable emitted bodies; starts at {empty}
            for b in range(n):
                if not (body >> b) & 1:
                    continue
                opts = (r >> (b * nb)) & seg_mask
                if not opts:
                    ach = 0
                    break
                new = 0
                for u in range(nb):
                    if (ach >> u) & 1:
                        rest = opts
                        while rest:
                            m = (rest & -rest).bit_length() - 1
                            new |= 1 << (u | m)
                            rest &= rest - 1
                ach = new
            oseg |= ach
        out |= oseg << (h * nb)
    return out


def tp_mask_py(p: int, i: int, n: int) -> int:
    """Immediate-consequence step on an interpretation bitmask."""
    nb = 1 << n
    out = 0
    for h in range(n):
        seg = (p >> (h * nb)) & ((1 << nb) - 1)
        body = 0
        while seg:
            if (seg & 1) and (body & ~i) == 0:
                out |= 1 << h
                break
            seg >>= 1
            body += 1
    return out


def lm_mask_py(p: int, n: int) -> int:
    """Least model bitmask by fixpoint iteration from the empty interpretation."""
    i = 0
    while True:
        nxt = tp_mask_py(p, i, n)
        if nxt == i:
            return i
        i = nxt


def star_mask_py(p: int, n: int) -> int:
    """Union of all powers of p, including the unit."""
    seen = set()
    acc = unit_mask(n)
    cur = p
    while cur not in seen:
        seen.add(cur)
        acc |= cur
        cur = compose_mask_py(cur, p, n)
    return acc


def omega_mask_py(p: int, n: int) -> int:
    """Facts of P^+ = P^* o P, as an interpretation bitmask."""
    nb = 1 << n
    plus = compose_mask_py(star_mask_py(p, n), p, n)
    out = 0
    for h in range(n):
        if (plus >> (h * nb)) & 1:
            out |= 1 << h
    return out
