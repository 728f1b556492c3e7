"""Compare the compiled jet kernel with the numpy fallback.

    python benchmarks/bench_jetcore.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from superblmp import _jetcore_py

try:
    from superblmp import _jetcore
except ImportError:
    _jetcore = None

SHAPES = [(5, 3, 3), (8, 4, 4)]


def _operands(shape, rng):
    a = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    b = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    b[0, 0, 0] = 2.0
    return np.ascontiguousarray(a), np.ascontiguousarray(b)


def bench(core, shape, repeat):
    rng = np.random.default_rng(0)
    a, b = _operands(shape, rng)
    coefs = rng.normal(size=8).astype(complex)
    h = a.copy()
    h[0, 0, 0] = 0
    out = {}
    for name, fn in (("mul", lambda: core.mul(a, b)), ("div", lambda: core.div(a, b)),
                     ("horner", lambda: core.horner(coefs, h))):
        n, _ = timeit.Timer(fn).autorange()
        best = min(timeit.repeat(fn, number=n, repeat=repeat)) / n
        out[name] = best * 1e6
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    cores = [("python", _jetcore_py)] + ([("cython", _jetcore)] if _jetcore else [])
    if _jetcore is None:
        print("compiled kernel not built; only the fallback is timed")
    print(f"{'shape':>10} {'op':>7} " + " ".join(f"{n + ' us':>12}" for n, _ in cores)
          + ("   speedup" if len(cores) == 2 else ""))
    for shape in SHAPES:
        res = [bench(c, shape, args.repeat) for _, c in cores]
        for op in res[0]:
            row = f"{str(shape):>10} {op:>7} " + " ".join(f"{r[op]:12.2f}" for r in res)
            if len(res) == 2:
                row += f"   {res[0][op] / res[1][op]:7.1f}x"
            print(row)


if __name__ == "__main__":
    main()
