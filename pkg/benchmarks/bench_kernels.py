"""Compare the compiled and numpy residue-condition kernels.

Run with ``python benchmarks/bench_kernels.py``.  Both backends are timed
on the same inputs and their outputs are checked for equality.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from quditverify import _kernels_py, kernels
from quditverify.states import StateSpec
from quditverify.strategy import family_partition

try:
    from quditverify import _kernels as compiled
except ImportError:
    compiled = None

CASES = [
    ("GHZ n=6 d=2", StateSpec.ghz(6, 2)),
    ("GHZ n=3 d=5", StateSpec.ghz(3, 5)),
    ("GHZ n=4 d=5", StateSpec.ghz(4, 5)),
    ("GHZ n=7 d=3", StateSpec.ghz(7, 3)),
    ("GHZ n=12 d=2", StateSpec.ghz(12, 2)),
]


def bench(repeat: int) -> None:
    backends = [("numpy", _kernels_py)] + ([("cython", compiled)] if compiled is not None else [])
    print(f"selected backend at import: {kernels.BACKEND}")
    print(f"{'case':<16}{'tuples':>8}{'outcomes':>10}" + "".join(f"{name + ' ms':>14}" for name, _ in backends))
    for name, spec in CASES:
        partition = family_partition(spec)
        subsets = [s.tuples for s in partition.subsets]
        results, timings = [], []
        for _, backend in backends:
            results.append(kernels.count_table(subsets, partition.dims, backend=backend))
            seconds = min(timeit.repeat(lambda: kernels.count_table(subsets, partition.dims, backend=backend), number=1, repeat=repeat))
            timings.append(seconds * 1e3)
        if len(results) > 1 and not np.array_equal(results[0], results[1]):
            raise SystemExit(f"backends disagree on {name}")
        tuples = sum(len(s) for s in subsets)
        print(f"{name:<16}{tuples:>8}{partition.dims.total:>10}" + "".join(f"{t:>14.2f}" for t in timings))


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    bench(parser.parse_args().repeat)
