#!/usr/bin/env python3
"""Compare the compiled (numba) and plain-Python kernel backends.

Each backend runs in its own subprocess because the choice is fixed at
import time by the PLIC_BACKEND environment variable.  Workloads cover
the three hot kernels: the decoding-chain scan, the GF(2) satisfaction
table behind the linear-rate oracle, and the encoder-table scan behind
the general-rate oracle.

Usage::

    python benchmarks/bench_backends.py
"""

import json
import os
import subprocess
import sys
import time


def run_workloads() -> None:
    from plic import exact_general_rate, exact_linear_rate, from_absent, l_star
    from plic._backend import BACKEND
    from plic._kernels import warm_up

    warm_up()  # keep JIT compilation out of the measurements

    chain_instance = from_absent(4, [])  # 20736 choices x 16 states
    oracle_instance = from_absent(5, [{1, 2}, {1, 2, 4}, {1, 3}, {1, 3, 5}])
    general_instance = from_absent(3, [{3}, {1, 3}])

    timings = {}

    started = time.perf_counter()
    result = l_star(chain_instance)
    timings["chain scan: l_star, m=4, nothing absent"] = time.perf_counter() - started
    assert result.value == 0

    started = time.perf_counter()
    result = exact_linear_rate(oracle_instance, 2)
    timings["linear oracle: subspace search, m=5"] = time.perf_counter() - started
    assert result.rate == 4

    started = time.perf_counter()
    result = exact_general_rate(general_instance, 2)
    timings["general oracle: encoder tables, m=3"] = time.perf_counter() - started
    assert result.rate == 2

    print(json.dumps({"backend": BACKEND, "timings": timings}))


def main() -> int:
    results = []
    for requested in ("python", "numba"):
        env = dict(os.environ, PLIC_BACKEND=requested)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--run"],
            env=env,
            capture_output=True,
            text=True,
        )
        if proc.returncode != 0:
            print(f"backend {requested!r} failed:\n{proc.stderr}", file=sys.stderr)
            return 1
        doc = json.loads(proc.stdout)
        if doc["backend"] != requested:
            print(
                f"note: requested {requested!r}, got {doc['backend']!r} "
                "(numba unavailable?)",
                file=sys.stderr,
            )
        results.append(doc)

    names = list(results[0]["timings"])
    width = max(len(name) for name in names)
    header = f"{'workload':<{width}}" + "".join(
        f"{doc['backend']:>12}" for doc in results
    )
    comparable = len(results) == 2 and results[0]["backend"] != results[1]["backend"]
    if comparable:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name in names:
        row = f"{name:<{width}}"
        for doc in results:
            row += f"{doc['timings'][name]:>11.4f}s"
        if comparable:
            plain = results[0]["timings"][name]
            compiled = results[1]["timings"][name]
            row += f"{plain / compiled:>9.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    if "--run" in sys.argv:
        run_workloads()
    else:
        sys.exit(main())
