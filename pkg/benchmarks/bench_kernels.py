"""Compiled vs pure-Python GF(p) kernels.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import random
import timeit

from stabglue import _kernels_py, oracle
from stabglue.linalg import GF

try:
    from stabglue import _gfkernels
except ImportError:
    _gfkernels = None


def rref_case(p, n, seed=0):
    rnd = random.Random(seed)
    rows = [[rnd.randrange(p) for _ in range(n)] for _ in range(n)]
    return lambda impl: impl.rref_mod_p(rows, n, p)


def subobject_case(qname, max_dim):
    # the largest pair problems in the dim <= max_dim universe
    pairs = oracle.pair_universe(qname, GF(2), max_dim)
    probs = sorted((oracle.pair_problem(d) for d in pairs), key=lambda pr: -sum(pr[1]))[:20]
    return lambda impl: [impl.enumerate_subobjects(*pr) for pr in probs]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    cases = [
        ("rref 12x12 mod 2", rref_case(2, 12)),
        ("rref 30x30 mod 3", rref_case(3, 30)),
        ("subobjects A2 dim<=5", subobject_case("A2", 5)),
        ("subobjects K2 dim<=4", subobject_case("K2", 4)),
    ]
    impls = [("python", _kernels_py)] + ([("cython", _gfkernels)] if _gfkernels else [])
    print(f"{'case':26s}" + "".join(f"{n:>12s}" for n, _ in impls) + ("     speedup" if len(impls) > 1 else ""))
    for name, fn in cases:
        ref = fn(_kernels_py)
        times = []
        for _, impl in impls:
            assert fn(impl) == ref, f"{name}: backends disagree"
            times.append(min(timeit.repeat(lambda: fn(impl), number=1, repeat=args.repeat)))
        row = f"{name:26s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times)
        if len(times) > 1:
            row += f"{times[0] / times[1]:11.1f}x"
        print(row)
    if _gfkernels is None:
        print("compiled kernels not built; only the fallback was timed")


if __name__ == "__main__":
    main()
