"""Time the compiled kernels against the plain-numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--json]

The numba timings are taken in this process (after a warm-up call, so
compilation is excluded); the fallback timings come from a child process
started with GHOR_NO_JIT=1.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import subprocess
import sys
import time
from importlib import resources

import numpy as np


def _workloads():
    from ghor import enumerate_cycles, load_quiver, perfect_matchings
    from ghor.cycle_algebra import member_many

    data = resources.files("ghor") / "data"
    octagon = load_quiver(data / "octagon_g2.dq")
    flower = load_quiver(data / "flower_pinched.dq")
    poly5 = load_quiver(data / "poly_5.dq")
    rng = random.Random(1)
    gens = [tuple(rng.randint(0, 3) for _ in range(8)) for _ in range(12)]
    targets = [tuple(rng.randint(0, 12) for _ in range(8)) for _ in range(400)]
    return {
        "perfect_matchings/octagon": lambda: perfect_matchings(octagon),
        "perfect_matchings/flower": lambda: perfect_matchings(flower),
        "cycles/flower L=9": lambda: enumerate_cycles(flower, 9),
        "cycles/poly_5 L=7": lambda: enumerate_cycles(poly5, 7),
        "member_batch/400x12": lambda: member_many(targets, gens),
    }


def measure(repeat: int) -> dict:
    from ghor import _kernels

    out = {"backend": _kernels.backend(), "timings": {}}
    for name, fn in _workloads().items():
        fn()
        ts = []
        for _ in range(repeat):
            t0 = time.perf_counter()
            fn()
            ts.append(time.perf_counter() - t0)
        out["timings"][name] = float(np.median(ts))
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args(argv)
    if args.child:
        print(json.dumps(measure(args.repeat)))
        return 0

    jit = measure(args.repeat)
    env = dict(os.environ, GHOR_NO_JIT="1")
    res = subprocess.run([sys.executable, __file__, "--child", "--repeat", str(args.repeat)],
                         capture_output=True, text=True, env=env, check=True)
    plain = json.loads(res.stdout)
    rows = []
    for name, t in jit["timings"].items():
        p = plain["timings"][name]
        rows.append({"workload": name, jit["backend"]: t, plain["backend"]: p,
                     "speedup": p / t if t else float("inf")})
    if args.json:
        print(json.dumps(rows, indent=2))
        return 0
    print(f"{'workload':28s} {jit['backend']:>12s} {plain['backend']:>12s} {'speedup':>9s}")
    for r in rows:
        print(f"{r['workload']:28s} {r[jit['backend']]:12.5f} {r[plain['backend']]:12.5f} "
              f"{r['speedup']:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
