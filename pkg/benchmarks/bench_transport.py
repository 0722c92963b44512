"""Parallel transport timing: compiled kernel against the numpy fallback.

    python3 benchmarks/bench_transport.py [--repeat 3]
"""
import argparse
import time

import numpy as np

from holonome import build_casimir, build_kz, build_rep, build_root_system
from holonome.transport import available_backends, braid_path_cartan, braid_path_config, parallel_transport

CASES = (
    ("KZ gl2 n=3 (d=8)", lambda: build_kz(build_rep(build_root_system("A", 1, "trace"), "vector", gl=True), 3, 0.1),
     lambda c: braid_path_config(3, 1, forms=c.arrangement)),
    ("KZ sl2 n=5 (d=32)", lambda: build_kz(build_rep(build_root_system("A", 1), "vector"), 5, 0.1),
     lambda c: braid_path_config(5, 2, forms=c.arrangement)),
    ("Casimir sl3 adjoint (d=8)", lambda: build_casimir(build_rep(build_root_system("A", 2), "adjoint"), 0.1),
     lambda c: braid_path_cartan(build_root_system("A", 2), 0)),
    ("Casimir so5 adjoint (d=10)", lambda: build_casimir(build_rep(build_root_system("B", 2), "adjoint"), 0.1),
     lambda c: braid_path_cartan(build_root_system("B", 2), 1)),
)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--tol", type=float, default=1e-10)
    args = ap.parse_args()
    backends = available_backends()
    print(f"backends: {', '.join(backends)}  tol={args.tol:g}")
    print(f"{'case':28s} {'backend':8s} {'time [s]':>9s} {'steps':>7s} {'speedup':>8s}")
    for name, make_conn, make_path in CASES:
        conn = make_conn()
        path = make_path(conn)
        base = None
        mats = {}
        for b in sorted(backends, key=lambda x: x != "python"):
            t, res = best_of(lambda: parallel_transport(conn, path, args.tol, backend=b), args.repeat)
            mats[b] = res.matrix
            base = base or t
            print(f"{name:28s} {b:8s} {t:9.4f} {res.steps:7d} {base / t:8.1f}x")
        if len(mats) == 2:
            diff = float(np.abs(mats["python"] - mats["cython"]).max())
            print(f"{'':28s} max |python - cython| = {diff:.1e}")


if __name__ == "__main__":
    main()
