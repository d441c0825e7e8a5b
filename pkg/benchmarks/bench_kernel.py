"""Compare the compiled word kernel against the pure-Python fallback.

Run as ``python3 benchmarks/bench_kernel.py``.  Exercises the two hot
operations (free reduction, reduced concatenation) on workloads shaped like
the ones the library produces: long nearly-reduced words from automorphism
powers, and heavy-cancellation conjugates.
"""

import random
import time

from freefactor import _reduce_py

try:
    from freefactor import _reduce
except ImportError:
    _reduce = None


def make_workloads(rng: random.Random):
    rank = 5
    # nearly reduced: random letters with occasional backtracking
    noisy = []
    for _ in range(200):
        raw = []
        for _ in range(5000):
            s = rng.randint(1, rank) * rng.choice((1, -1))
            raw.append(s)
            if rng.random() < 0.3 and raw:
                raw.append(-raw[-1])
        noisy.append(raw)
    # heavy cancellation: w u w^-1 concatenations
    pairs = []
    for _ in range(200):
        w = [rng.randint(1, rank) * rng.choice((1, -1)) for _ in range(2000)]
        u = [rng.randint(1, rank) * rng.choice((1, -1)) for _ in range(50)]
        pairs.append((tuple(w), tuple(u + [-x for x in reversed(w)])))
    return noisy, pairs


def bench(module, noisy, pairs):
    t0 = time.perf_counter()
    for raw in noisy:
        module.reduce_word(raw)
    t_reduce = time.perf_counter() - t0
    t0 = time.perf_counter()
    for a, b in pairs:
        module.concat(a, b)
    t_concat = time.perf_counter() - t0
    return t_reduce, t_concat


def main():
    rng = random.Random(12345)
    noisy, pairs = make_workloads(rng)
    results = {}
    for name, module in (("pure-python", _reduce_py), ("compiled", _reduce)):
        if module is None:
            print(f"{name:>12}: not available")
            continue
        tr, tc = bench(module, noisy, pairs)
        results[name] = (tr, tc)
        print(f"{name:>12}: reduce {tr * 1000:7.1f} ms   concat {tc * 1000:7.1f} ms")
    if len(results) == 2:
        (pr, pc), (cr, cc) = results["pure-python"], results["compiled"]
        print(f"{'speedup':>12}: reduce {pr / cr:6.1f}x   concat {pc / cc:6.1f}x")
        # sanity: both kernels agree
        sample = noisy[0]
        assert tuple(_reduce_py.reduce_word(sample)) == tuple(
            _reduce.reduce_word(sample)
        )


if __name__ == "__main__":
    main()
