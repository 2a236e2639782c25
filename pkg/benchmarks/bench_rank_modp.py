"""Compare the numba and numpy elimination backends.

Kernel timings call both backends directly on the same random matrices.  The
end-to-end timing runs a mod-p Koszul computation in subprocesses with and
without ``TANSYZ_DISABLE_NUMBA=1``, since the backend is fixed at import.

    python benchmarks/bench_rank_modp.py [--sizes 100 200 400] [--repeats 3]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from tangent_syzygies import _kernels

P = 2147483629

E2E = """
import time
from tangent_syzygies import _kernels, verify
from tangent_syzygies.syzygy import KoszulSpot, koszul_cohomology_dim
I = verify.minor_ideal(2, 5)
t0 = time.perf_counter()
row = [koszul_cohomology_dim(I, KoszulSpot(p, 2), modp={p}) for p in range(3)]
print(_kernels.HAVE_NUMBA, time.perf_counter() - t0, row)
"""


def random_matrix(n: int, rank_deficit: int, rng) -> np.ndarray:
    a = rng.integers(0, P, size=(n, n), dtype=np.int64)
    for k in range(rank_deficit):
        a[:, n - 1 - k] = (a[:, 0] * (k + 2) + a[:, 1]) % P
    return a


def best_of(fn, repeats: int) -> float:
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_table(sizes, repeats: int) -> list[tuple]:
    rng = np.random.default_rng(0)
    rows = []
    if _kernels.HAVE_NUMBA:
        _kernels.echelon_modp_numba(random_matrix(8, 1, rng), P)  # compile outside the timings
    for n in sizes:
        a = random_matrix(n, n // 10, rng)
        t_np = best_of(lambda: _kernels.echelon_modp_numpy(a.copy(), P), repeats)
        t_nb = best_of(lambda: _kernels.echelon_modp_numba(a.copy(), P), repeats) if _kernels.HAVE_NUMBA else float("nan")
        r = len(_kernels.echelon_modp_numpy(a.copy(), P)[1])
        rows.append((n, r, t_np, t_nb))
    return rows


def end_to_end() -> dict:
    out = {}
    for label, flag in [("numba", "0"), ("numpy", "1")]:
        env = dict(os.environ, TANSYZ_DISABLE_NUMBA=flag)
        res = subprocess.run([sys.executable, "-c", E2E.format(p=P)], env=env, capture_output=True, text=True, check=True)
        have, secs, row = res.stdout.split(maxsplit=2)
        out[label] = (have, float(secs), row.strip())
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 200, 400])
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--skip-e2e", action="store_true")
    args = ap.parse_args(argv)

    print(f"numba available: {_kernels.HAVE_NUMBA}")
    print(f"{'n':>6} {'rank':>6} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for n, r, t_np, t_nb in kernel_table(args.sizes, args.repeats):
        print(f"{n:>6} {r:>6} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>8.1f}")
    if not args.skip_e2e:
        print("\nend to end: 2x5 minors, K_{p,2} mod p, p = 0..2 (cold process, numba time includes compilation)")
        for label, (have, secs, row) in end_to_end().items():
            print(f"  {label:6s} numba={have:5s} {secs:8.3f}s row={row}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
