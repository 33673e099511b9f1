"""Micro-benchmark of the dense kernels: numba vs the pure-numpy fallback.

Run as ``python -m hornseq.bench``.  Each task is executed on both backends
(after a numba warm-up call so JIT compilation is not billed) and the
results are checked for exact agreement.
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from .dense import DenseSpace, build_compose_table, nonassoc_scan, resolve_backend
from .syntax import Alphabet


def _random_masks(space: DenseSpace, count: int, max_rules: int, seed: int) -> np.ndarray:
    rng = random.Random(seed)
    out = np.empty(count, dtype=np.uint64)
    for i in range(count):
        mask = 0
        for _ in range(rng.randint(0, max_rules)):
            mask |= 1 << rng.randrange(space.n_slots)
        out[i] = mask
    return out


def _time(fn, repeat: int):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="python -m hornseq.bench", description=__doc__
    )
    parser.add_argument("--programs", type=int, default=20_000,
                        help="batch size for the 4-atom sweeps")
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    backends = ["numpy"]
    if resolve_backend() == "numba":
        backends.append("numba")
    else:
        print("numba unavailable; benchmarking the numpy fallback only")

    two = DenseSpace(Alphabet(["a", "b"]))
    four = DenseSpace(Alphabet(["a", "b", "c", "d"]))
    batch = _random_masks(four, args.programs, 6, args.seed)

    tasks = {
        "compose table (2 atoms, 65536 pairs)": lambda b: build_compose_table(2, b),
        f"least-model batch (4 atoms, {args.programs} programs)":
            lambda b: four.lm_batch(batch, backend=b),
        f"omega batch (4 atoms, {args.programs} programs)":
            lambda b: four.omega_batch(batch, backend=b),
        "non-associativity scan (16.7M triples)":
            lambda b: nonassoc_scan(two.table(backend=b), backend=b),
    }

    print(f"backends: {', '.join(backends)}   repeat: {args.repeat} (best shown)")
    width = max(len(t) for t in tasks)
    for name, fn in tasks.items():
        times = {}
        results = {}
        for backend in backends:
            fn(backend)  # warm-up: JIT compile / table cache
            times[backend], results[backend] = _time(lambda: fn(backend), args.repeat)
        line = f"{name:<{width}}"
        for backend in backends:
            line += f"  {backend}: {times[backend] * 1e3:10.3f} ms"
        if len(backends) == 2:
            ratio = times["numpy"] / times["numba"] if times["numba"] > 0 else float("inf")
            line += f"  speedup: {ratio:6.1f}x"
            a, b = results["numpy"], results["numba"]
            same = np.array_equal(a, b) if isinstance(a, np.ndarray) else a == b
            line += "  agree" if same else "  MISMATCH"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
