"""Time the compiled kernels against the NumPy fallback.

Run with ``python3 benchmarks/bench_kernels.py``; prints one line per kernel
with the best-of-five wall time of each backend and the speedup.
"""

from __future__ import annotations

import timeit

import numpy as np

from gmrawave import _kernels_py

try:
    from gmrawave import _kernels as compiled
except ImportError:
    compiled = None


def _cases(rng):
    P = rng.standard_normal((20000, 3, 3)) + 1j * rng.standard_normal((20000, 3, 3))
    F = rng.standard_normal((20000, 3, 3)) + 1j * rng.standard_normal((20000, 3, 3))
    cuts = np.sort(rng.uniform(-2, 2, 41))
    lo, hi = cuts[:-1], cuts[1:]
    vals = rng.standard_normal(40) + 0j
    freqs = np.arange(-2000, 2001, dtype=float)
    return {
        "batched_matmul (20000 x 3x3)": lambda m: m.batched_matmul(P, F),
        "exp_integrals (40 pieces, 4001 freqs)": lambda m: m.exp_integrals(lo, hi, vals, freqs),
        "level_energy (40 pieces, zmax 2^14)": lambda m: m.level_energy(lo, hi, vals, 2 ** 14),
    }


def _best(fn, module, repeat=5) -> float:
    return min(timeit.repeat(lambda: fn(module), number=1, repeat=repeat))


def main() -> None:
    rng = np.random.default_rng(0)
    if compiled is None:
        print("compiled extension not built; timing the fallback only")
    for name, fn in _cases(rng).items():
        slow = _best(fn, _kernels_py)
        if compiled is None:
            print(f"{name:<40} python {slow * 1e3:8.2f} ms")
            continue
        a, b = fn(compiled), fn(_kernels_py)
        agree = np.allclose(a, b, rtol=1e-9, atol=1e-9)
        fast = _best(fn, compiled)
        print(f"{name:<40} compiled {fast * 1e3:8.2f} ms  python {slow * 1e3:8.2f} ms  "
              f"speedup {slow / fast:5.1f}x  agree={agree}")


if __name__ == "__main__":
    main()
