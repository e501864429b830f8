"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from pstlab import kernels


def cases(rng):
    for n in (16, 64, 256):
        d, e = rng.normal(size=n), rng.uniform(0.1, 2.0, size=n - 1)
        yield f"tql_eigen n={n}", lambda impl, d=d, e=e: impl.tql_eigen(d, e)
    for n, steps in ((16, 10_000), (64, 100_000)):
        w, a = rng.uniform(-1, 1, n), rng.normal(size=n)
        t = np.linspace(0, 100, steps)
        yield f"transfer_amplitudes n={n} steps={steps}", lambda impl, w=w, a=a, t=t: impl.transfer_amplitudes(w, a, t)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    impls = kernels.backends()
    if "cython" not in impls:
        print("compiled kernels unavailable; build with `pip install -e . --no-build-isolation`")
    names = sorted(impls)
    print(f"{'case':<40}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn in cases(np.random.default_rng(0)):
        best = {}
        for name in names:
            number = max(1, int(0.2 / max(timeit.timeit(lambda: fn(impls[name]), number=1), 1e-6)))
            best[name] = min(timeit.repeat(lambda: fn(impls[name]), number=number, repeat=args.repeat)) / number
        row = f"{label:<40}" + "".join(f"{best[n] * 1e3:>10.3f}ms" for n in names)
        if "cython" in best:
            row += f"{best['python'] / best['cython']:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
