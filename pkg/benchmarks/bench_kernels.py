"""Compare the compiled and numpy kernel backends on scan-sized inputs.

Usage: python benchmarks/bench_kernels.py [--n 200000] [--repeat 3]
"""
import argparse
import time

import numpy as np

from remotestate import kernels
from remotestate.creation_map import transfer_tensors
from remotestate.spin_chain import ChainSpec


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=200_000, help="sender states per call")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    rng = np.random.default_rng(0)
    phis = rng.uniform(size=(args.n, 12))
    phi1 = rng.uniform(size=args.n)
    m3 = transfer_tensors(ChainSpec(3), 1.0, np.linspace(0, 4, 8), 1)
    m4 = transfer_tensors(ChainSpec(4), 1.0, [6.4], 2)
    psi2 = kernels.python_backend.su2_first_columns(phi1, 0.0)
    psi4 = kernels.python_backend.su4_first_columns(phis)

    cases = {
        "su2_first_columns": lambda b: b.su2_first_columns(phi1, 0.0),
        "su4_first_columns": lambda b: b.su4_first_columns(phis),
        "receiver_params_grid (3 sites, 8 times)": lambda b: b.receiver_params_grid(psi2, m3),
        "receiver_params_grid (4 sites)": lambda b: b.receiver_params_grid(psi4, m4),
    }
    backends = {"python": kernels.python_backend}
    if kernels.compiled_backend is not None:
        backends["cython"] = kernels.compiled_backend
    else:
        print("compiled backend not built; timing numpy only")

    print(f"n = {args.n}, best of {args.repeat}")
    print(f"{'kernel':42s}" + "".join(f"{k:>12s}" for k in backends) + "     speedup")
    for name, fn in cases.items():
        t = {k: best_of(lambda: fn(b), args.repeat) for k, b in backends.items()}
        speed = f"{t['python'] / t['cython']:10.1f}x" if "cython" in t else ""
        print(f"{name:42s}" + "".join(f"{v:11.4f}s" for v in t.values()) + speed)


if __name__ == "__main__":
    main()
