"""Benchmark the RK4 ramp-propagation kernels: numba @njit vs pure numpy.

Run from the repository root:

    python benchmarks/bench_rk4.py [--steps N] [--repeats R]
"""

import argparse
import time

from ottospin._kernels import (
    rk4_propagate_numba,
    rk4_propagate_numpy,
    stage_coefficients,
)

NU_COLD = 2000.0
NU_HOT = 3600.0
TAU = 200e-6


def time_kernel(kernel, e01, e10, dt, steps, repeats):
    kernel(e01, e10, dt, steps)  # warm-up (JIT compile / cache touch)
    start = time.perf_counter()
    for _ in range(repeats):
        kernel(e01, e10, dt, steps)
    return (time.perf_counter() - start) / repeats


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=4096)
    parser.add_argument("--repeats", type=int, default=20)
    args = parser.parse_args()

    e01, e10, dt = stage_coefficients(NU_COLD, NU_HOT, TAU, args.steps, "expansion")
    print(f"ramp: {NU_COLD:.0f} Hz -> {NU_HOT:.0f} Hz over {TAU*1e6:.0f} us, "
          f"{args.steps} RK4 steps, {args.repeats} repeats")

    numpy_time = time_kernel(rk4_propagate_numpy, e01, e10, dt, args.steps,
                             max(1, args.repeats // 4))
    print(f"numpy kernel:  {numpy_time*1e3:9.3f} ms/propagation")

    if rk4_propagate_numba is None:
        print("numba kernel:  unavailable (not installed or disabled via "
              "OTTOSPIN_NO_NUMBA)")
        return

    numba_time = time_kernel(rk4_propagate_numba, e01, e10, dt, args.steps, args.repeats)
    print(f"numba kernel:  {numba_time*1e3:9.3f} ms/propagation")
    print(f"speedup:       {numpy_time/numba_time:9.1f}x")


if __name__ == "__main__":
    main()
