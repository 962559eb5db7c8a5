"""Compare the compiled kernel backend against the pure-Python fallback.

Times the hot functions (spherical-Bessel vector, two-phonon integrands)
in both implementations and checks that they agree bitwise.  Run from a
checkout with the package installed:

    python benchmarks/bench_kernels.py [--number N]
"""
import argparse
import time

from rotocool import angular_weight_matrix
from rotocool._kernels import _fallback

try:
    from rotocool._kernels import _core
except ImportError:
    _core = None


def _time_call(fn, args, number):
    t0 = time.perf_counter()
    for _ in range(number):
        fn(*args)
    return (time.perf_counter() - t0) / number


def _cases():
    a_small = angular_weight_matrix(2, 0, 8)
    a_large = angular_weight_matrix(6, 4, 24)
    return [
        ("bessel lmax=8 x=3.7", "bessel_j_vec", (8, 3.7)),
        ("bessel lmax=40 x=120", "bessel_j_vec", (40, 120.0)),
        ("cross integrand lmax=8", "cross_integrand",
         (0.35, 2.0, 5.0, 0.5, 0.0, 1.0, a_small)),
        ("cross integrand lmax=24", "cross_integrand",
         (0.35, 2.0, 5.0, 0.5, 0.0, 1.0, a_large)),
        ("pair integrand lmax=8", "prec_integrand",
         (0.35, 2.0, 5.0, 0.5, 1.0, a_small)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--number", type=int, default=20000,
                    help="calls per timing loop (default 20000)")
    args = ap.parse_args(argv)

    if _core is None:
        print("compiled backend not available; nothing to compare")
        return 1

    rows = []
    for label, name, call_args in _cases():
        fast = getattr(_core, name)
        slow = getattr(_fallback, name)
        a = fast(*call_args)
        b = slow(*call_args)
        if name == "bessel_j_vec":
            same = (a == b).all()
        else:
            same = a == b
        if not same:
            print("MISMATCH in %s: %r vs %r" % (label, a, b))
            return 1
        n = args.number if "bessel" in name else max(args.number // 10, 100)
        t_fast = _time_call(fast, call_args, n)
        t_slow = _time_call(slow, call_args, n)
        rows.append((label, t_fast, t_slow, t_slow / t_fast))

    width = max(len(r[0]) for r in rows)
    print("%-*s  %12s  %12s  %8s" % (width, "case", "compiled", "fallback",
                                     "speedup"))
    for label, t_fast, t_slow, gain in rows:
        print("%-*s  %10.2f us  %10.2f us  %7.1fx"
              % (width, label, 1e6 * t_fast, 1e6 * t_slow, gain))
    print("all outputs bitwise identical")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
