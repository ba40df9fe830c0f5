"""Compare the compiled form kernels against the pure-Python fallback.

Run:  python3 benchmarks/bench_backends.py [--max-disc N]

The same workloads run against both implementations and must produce
identical results; timings are wall-clock totals per workload.
"""

from __future__ import annotations

import argparse
import time

from k0av import _formcore
from k0av._backend import backend_name

try:
    from k0av import _speedups
except ImportError:
    _speedups = None


def _workloads(max_disc: int):
    discs = [d for d in range(-3, -max_disc - 1, -1) if d % 4 in (0, 1)]

    def enumerate_all(mod):
        total = 0
        for d in discs:
            total += len(mod.reduced_forms_disc(d))
        return total

    def reduce_many(mod):
        # unreduce each form by b -> b + 2ak (discriminant preserved), reduce back
        acc = 0
        for d in discs:
            for a, b, c in mod.reduced_forms_disc(d):
                for k in (3, 7, 19):
                    b2 = b + 2 * a * k
                    c2 = (b2 * b2 - d) // (4 * a)
                    r = mod.reduce_triple(a, b2, c2)
                    assert r == (a, b, c)
                    acc ^= r[0] ^ r[1] ^ r[2]
        return acc

    def compose_many(mod):
        acc = 0
        for d in discs:
            forms = mod.reduced_forms_disc(d)
            for f in forms:
                for g in forms[:6]:
                    a, b, c = mod.compose_triples(*f, *g)
                    acc ^= a ^ b ^ c
        return acc

    return [
        ("enumerate reduced forms", enumerate_all),
        ("reduce random triples", reduce_many),
        ("compose class groups", compose_many),
    ]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-disc", type=int, default=2000)
    args = parser.parse_args()

    print(f"active backend: {backend_name()}")
    if _speedups is None:
        print("compiled backend unavailable; nothing to compare")
        return 0

    for name, fn in _workloads(args.max_disc):
        results = {}
        for label, mod in (("pure", _formcore), ("compiled", _speedups)):
            t0 = time.perf_counter()
            results[label] = fn(mod)
            elapsed = time.perf_counter() - t0
            print(f"{name:28} {label:9} {elapsed:8.3f} s")
        if results["pure"] != results["compiled"]:
            print(f"MISMATCH in {name}: {results}")
            return 1
    print("backends agree on all workloads")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
