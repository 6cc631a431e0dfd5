"""Time the compiled curvature kernels against their numpy counterparts.

    python3 benchmarks/bench_kernels.py --dims 3 7 11 --repeat 5
"""

import argparse
import timeit

import numpy as np

from cosymconf import kernels


def _cases(n, rng):
    G = rng.normal(size=(n, n, n))
    dG = rng.normal(size=(n, n, n, n))
    mats = [rng.normal(size=(n, n)) for _ in range(6)]
    R = rng.normal(size=(n,) * 4)
    g = rng.normal(size=(n, n))
    return {
        "riemann_from_connection": (G, dG),
        "structured_curvature": tuple(mats),
        "lower_curvature": (R, g),
    }


def best_time(func, args, number, repeat):
    func(*args)  # warm-up (triggers compilation on first call)
    return min(timeit.repeat(lambda: func(*args), number=number, repeat=repeat)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", type=int, nargs="+", default=[3, 7, 11])
    ap.add_argument("--number", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<26}{'n':>4}{'numba [us]':>14}{'numpy [us]':>14}{'speedup':>10}")
    for n in args.dims:
        for name, inputs in _cases(n, rng).items():
            fast = getattr(kernels, f"{name}_numba")
            slow = getattr(kernels, f"{name}_numpy")
            assert np.allclose(fast(*inputs), slow(*inputs))
            t_nb = best_time(fast, inputs, args.number, args.repeat)
            t_np = best_time(slow, inputs, args.number, args.repeat)
            print(f"{name:<26}{n:>4}{t_nb * 1e6:>14.2f}{t_np * 1e6:>14.2f}{t_np / t_nb:>10.2f}")


if __name__ == "__main__":
    main()
