"""Timing comparison of the compiled and NumPy kernel backends.

Run from the repository root:

    python benchmarks/bench_kernels.py

Covers the three hot paths: batch mode evaluation, paired spectral
assembly, and the two finite-difference steppers.
"""

import time

import numpy as np

from vheat._kernels import available_backends, get_backend


def _time(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def _cases():
    rng = np.random.default_rng(7)
    lam = 8.05e9
    n_side = 2048
    cols = 2 * n_side + 1
    omega_sq = 1.49e6 * (2 * np.pi * np.abs(np.arange(-n_side, n_side + 1))) ** 2
    gamma = np.sqrt((lam * lam - omega_sq).astype(complex))
    regime = np.where(omega_sq == 0, 0, 1).astype(np.uint8)
    t0 = rng.normal(size=cols) + 1j * rng.normal(size=cols)
    s0 = np.zeros(cols, dtype=complex)
    times = np.linspace(0.0, 30.0, 8)
    xs = np.arange(8192) / 8192.0
    ttilde = rng.normal(size=(8, cols)) + 1j * rng.normal(size=(8, cols))

    n_fd = 4096
    temp0 = rng.normal(size=n_fd)
    rate0 = np.zeros(n_fd)
    rec_trap = np.array([0, 3000, 6000], dtype=np.int64)
    rec_expl = np.array([0, 2500, 5000], dtype=np.int64)

    def case(backend):
        return {
            "mode_temperatures (4097 modes x 8 times)":
                lambda: backend.mode_temperatures(lam, omega_sq, gamma, regime, t0, s0, times),
            "assemble_field (4097 modes x 8192 pts x 8 times)":
                lambda: backend.assemble_field(ttilde, xs, 1.0),
            "trapezoidal_run (4096 cells x 6000 steps)":
                lambda: backend.trapezoidal_run(temp0, rate0, 1.0 / n_fd, 5e-3, 1.49e6, 1.61e10, rec_trap),
            "explicit_run (4096 cells x 5000 steps)":
                lambda: backend.explicit_run(temp0, rate0, 1.0 / n_fd, 1e-6, 4e-2, 4e-2, rec_expl),
        }
    return case


def main():
    names = available_backends()
    print(f"backends: {', '.join(names)}")
    case = _cases()
    timings = {name: {} for name in names}
    for name in names:
        backend = get_backend(name)
        for label, fn in case(backend).items():
            timings[name][label] = _time(fn)

    width = max(len(label) for label in next(iter(timings.values())))
    header = f"{'kernel':<{width}}  " + "".join(f"{n:>12}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label in timings[names[0]]:
        row = f"{label:<{width}}  "
        for n in names:
            row += f"{timings[n][label] * 1e3:>10.2f}ms"
        if len(names) == 2:
            row += f"{timings[names[1]][label] / timings[names[0]][label]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
