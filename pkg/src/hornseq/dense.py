"""Dense bitmask encoding of programs over small alphabets.

The exhaustive checks this package leans on (full composition tables at two
atoms, brute-force oracles, bulk least-model sweeps, the associativity scan)
are hot loops over tiny programs.  Encoding a program as an integer — one bit
per possible rule — turns them into bit arithmetic handled by compiled
kernels.

Two kernel backends exist: numba (``@njit``, the default when importable)
and a pure-numpy fallback.  Selection order: explicit argument, then the
``HORNSEQ_BACKEND`` environment variable (``numba`` or ``numpy``), then
auto-detection.  Results are identical; only speed differs.
"""

from __future__ import annotations

import os
from functools import lru_cache

import numpy as np

from . import _kernels_numpy
from ._maskops import (
    compose_mask_py,
    lm_mask_py,
    omega_mask_py,
    star_mask_py,
    tp_mask_py,
    unit_mask,
)
from .errors import AlphabetError, BoundExceededError
from .syntax import Alphabet, Program, Rule

ENV_BACKEND = "HORNSEQ_BACKEND"

#: Largest alphabet whose full pairwise composition table is materialized.
MAX_TABLE_ATOMS = 2

#: Largest alphabet the 64-bit kernels support (n * 2^n <= 64).
MAX_KERNEL_ATOMS = 4

_OMEGA_HISTORY = 4096  # power-cycle history per program before python takeover


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def resolve_backend(backend: str | None = None) -> str:
    """Pick the kernel backend: argument > env var > auto."""
    name = backend or os.environ.get(ENV_BACKEND, "").strip().lower()
    if not name:
        name = "numba" if _numba_available() else "numpy"
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r} (use 'numba' or 'numpy')")
    if name == "numba" and not _numba_available():
        name = "numpy"
    return name


def _kernels(backend: str | None):
    if resolve_backend(backend) == "numba":
        from . import _kernels_numba

        return _kernels_numba
    return _kernels_numpy


class DenseSpace:
    """Encoder/decoder between symbolic programs and bitmasks over an alphabet."""

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self.n = len(alphabet)
        self.nb = 1 << self.n
        self.n_slots = self.n * self.nb
        self.n_programs = 1 << self.n_slots

    # -- encoding ------------------------------------------------------

    def _atom_bit(self, atom) -> int:
        try:
            return 1 << self.alphabet.index(atom)
        except KeyError:
            raise AlphabetError(f"{atom!r} not in {self.alphabet!r}") from None

    def encode_interp(self, atoms) -> int:
        mask = 0
        for a in atoms:
            mask |= self._atom_bit(a)
        return mask

    def decode_interp(self, mask: int) -> frozenset:
        return frozenset(
            a for k, a in enumerate(self.alphabet) if (mask >> k) & 1
        )

    def encode(self, p: Program) -> int:
        mask = 0
        for r in p.rules:
            head = self.alphabet.index(r.head) if r.head in self.alphabet else None
            if head is None:
                raise AlphabetError(f"{r.head!r} not in {self.alphabet!r}")
            mask |= 1 << (head * self.nb + self.encode_interp(r.body))
        return mask

    def decode(self, mask: int) -> Program:
        rules = []
        for h, head in enumerate(self.alphabet):
            seg = (mask >> (h * self.nb)) & ((1 << self.nb) - 1)
            body = 0
            while seg:
                if seg & 1:
                    rules.append(Rule(head, self.decode_interp(body)))
                seg >>= 1
                body += 1
        return Program(rules)

    # -- single-value ops (reference implementations) -------------------

    def unit_mask(self) -> int:
        return unit_mask(self.n)

    def compose(self, pm: int, rm: int) -> int:
        return compose_mask_py(pm, rm, self.n)

    def tp(self, pm: int, im: int) -> int:
        return tp_mask_py(pm, im, self.n)

    def lm(self, pm: int) -> int:
        return lm_mask_py(pm, self.n)

    def star(self, pm: int) -> int:
        return star_mask_py(pm, self.n)

    def omega(self, pm: int) -> int:
        return omega_mask_py(pm, self.n)

    # -- bulk ops ------------------------------------------------------

    def table(self, backend: str | None = None) -> np.ndarray:
        """Full pairwise composition table; only for tiny alphabets."""
        if self.n > MAX_TABLE_ATOMS:
            raise BoundExceededError(
                f"composition table needs |A| <= {MAX_TABLE_ATOMS}, got {self.n}"
            )
        return _table_cached(self.n, resolve_backend(backend))

    def canonical_masks(self) -> np.ndarray:
        """All program masks sorted by canonical program order."""
        if self.n > MAX_TABLE_ATOMS:
            raise BoundExceededError(
                f"exhaustive enumeration needs |A| <= {MAX_TABLE_ATOMS}, got {self.n}"
            )
        return _canonical_masks_cached(self.alphabet)

    def lm_batch(self, progs: np.ndarray, backend: str | None = None) -> np.ndarray:
        self._check_kernel_bound()
        return _kernels(backend).lm_batch(np.asarray(progs, dtype=np.uint64), self.n)

    def omega_batch(self, progs: np.ndarray, backend: str | None = None) -> np.ndarray:
        self._check_kernel_bound()
        progs = np.asarray(progs, dtype=np.uint64)
        kern = _kernels(backend)
        if kern is _kernels_numpy:
            return kern.omega_batch(progs, self.n)
        out, ok = kern.omega_batch(progs, self.n, _OMEGA_HISTORY)
        if not ok.all():
            # long power cycles are delegated to the unbounded python path
            for i in np.nonzero(~ok)[0]:
                out[i] = omega_mask_py(int(progs[i]), self.n)
        return out

    def _check_kernel_bound(self):
        if self.n > MAX_KERNEL_ATOMS:
            raise BoundExceededError(
                f"dense kernels need |A| <= {MAX_KERNEL_ATOMS}, got {self.n}"
            )


def build_compose_table(n: int, backend: str | None = None) -> np.ndarray:
    """Uncached table construction; see :meth:`DenseSpace.table` for the cache."""
    if n > MAX_TABLE_ATOMS:
        raise BoundExceededError(
            f"composition table needs |A| <= {MAX_TABLE_ATOMS}, got {n}"
        )
    if n == 0:
        return np.zeros((1, 1), dtype=np.uint8)
    return _kernels(backend).compose_table(n)


@lru_cache(maxsize=None)
def _table_cached(n: int, backend: str) -> np.ndarray:
    table = build_compose_table(n, backend)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=None)
def _canonical_masks_cached(alphabet: Alphabet) -> np.ndarray:
    from .syntax import all_programs

    space = DenseSpace(alphabet)
    masks = [space.encode(p) for p in all_programs(alphabet)]
    arr = np.asarray(masks, dtype=np.int64)
    arr.setflags(write=False)
    return arr


def nonassoc_scan(table: np.ndarray, backend: str | None = None):
    """First mismatch (x, y, z) of (xy)z vs x(yz) in the given index order."""
    result = _kernels(backend).nonassoc_scan(table)
    if result is None or result[0] < 0:
        return None
    return tuple(int(v) for v in result)
