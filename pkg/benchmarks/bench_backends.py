"""Time the exact and numeric paths under both backend choices.

Each configuration runs in a subprocess because backends are fixed at import.
Usage: python3 benchmarks/bench_backends.py [--order N] [--repeat R]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, sys, time
from qwscreen._polybackend import BACKEND
from qwscreen.numeric import KERNEL_NAME, theta
from qwscreen.solver import solve_boson_fermion
from qwscreen.voa import contract

order, repeat = int(sys.argv[1]), int(sys.argv[2])
t0 = time.perf_counter()
for _ in range(repeat):
    model = solve_boson_fermion(N=order)
    assert model.passes(order)
    for a in model.screens:
        for b in model.screens:
            contract(a, b, model.spec, order).series
exact = (time.perf_counter() - t0) / repeat
t0 = time.perf_counter()
for k in range(2000 * repeat):
    theta(0.7 + 0.001j * k, 0.3 ** 1.6, 80)
numeric = (time.perf_counter() - t0) / repeat
print(json.dumps({"exact_backend": BACKEND.name, "numeric_kernel": KERNEL_NAME,
                  "exact_seconds": exact, "theta_2000_seconds": numeric}))
"""


def run(env_overrides: dict[str, str], order: int, repeat: int) -> dict:
    env = dict(os.environ, **env_overrides)
    out = subprocess.run(
        [sys.executable, "-c", WORKLOAD, str(order), str(repeat)], env=env, capture_output=True, text=True, check=True
    )
    return json.loads(out.stdout)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--order", type=int, default=12)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    rows = [
        run({"QWSCREEN_BACKEND": "flint", "QWSCREEN_NUMERIC": "compiled"}, args.order, args.repeat),
        run({"QWSCREEN_BACKEND": "pure", "QWSCREEN_NUMERIC": "pure"}, args.order, args.repeat),
    ]
    print(f"{'exact backend':14} {'numeric':9} {'sl21-bf solve+check (s)':>24} {'2000 theta (s)':>15}")
    for r in rows:
        print(f"{r['exact_backend']:14} {r['numeric_kernel']:9} {r['exact_seconds']:24.3f} {r['theta_2000_seconds']:15.4f}")
    print(f"speedup exact {rows[1]['exact_seconds'] / rows[0]['exact_seconds']:.1f}x, "
          f"numeric {rows[1]['theta_2000_seconds'] / rows[0]['theta_2000_seconds']:.1f}x")


if __name__ == "__main__":
    main()
