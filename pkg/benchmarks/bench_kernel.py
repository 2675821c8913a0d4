#!/usr/bin/env python3
"""Benchmark the compiled kernel against the pure-Python fallback.

Runs the same three workloads under both backends by re-executing itself
with FORMALDISK_PURE=1, then prints a side-by-side table.  Workloads are
the hot paths of the test suite: truncated polynomial products, the mode
recursion through random composition-identity instances, and a slice of
the extension-cocycle sweep.
"""

import os
import random
import subprocess
import sys
import time
from fractions import Fraction


def bench_poly_mul(repeat=40):
    from formaldisk.jets import JetSeries
    rng = random.Random(11)
    n, order = 3, 8
    jets = []
    for _ in range(8):
        coeffs = {}
        for _ in range(25):
            e = tuple(rng.randint(0, 3) for _ in range(n))
            if sum(e) <= order:
                coeffs[e] = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 7))
        jets.append(JetSeries(n, order, coeffs))
    t0 = time.perf_counter()
    for _ in range(repeat):
        acc = JetSeries.one(n, order)
        for f in jets:
            acc = acc * f
    return time.perf_counter() - t0


def bench_mode_recursion(samples=150):
    from formaldisk.vertex import (TruncationPolicy, VAState, borcherds_check,
                                   clear_mode_cache, enumerate_basis)
    clear_mode_cache()
    rng = random.Random(5)
    pol = TruncationPolicy(14, 10)
    basis = {n: enumerate_basis(n, 3, 2) for n in (1, 2)}

    def rnd_state(n):
        mono = rng.choice(basis[n])
        return VAState(n, pol, {mono: Fraction(rng.randint(-3, 3) or 1)})

    t0 = time.perf_counter()
    for _ in range(samples):
        n = rng.choice([1, 2])
        ok, _, _ = borcherds_check(rnd_state(n), rnd_state(n), rnd_state(n),
                                   rng.randint(-3, 3), rng.randint(-3, 3))
        assert ok
    return time.perf_counter() - t0


def bench_msv_slice():
    from formaldisk.constants import MSV_COCYCLE_SIGN
    from formaldisk.gf import ch2_gf
    from formaldisk.hc import msv_defect, rho_omega2
    from formaldisk.jets import FormalVectorField
    from formaldisk.vertex import (TruncationPolicy, VAState,
                                   clear_mode_cache, enumerate_basis)
    clear_mode_cache()
    n, order = 2, 8
    pol = TruncationPolicy(8, 12)
    x = FormalVectorField.monomial(n, order, (1, 1), 1)
    y = FormalVectorField.monomial(n, order, (2, 1), 2)
    c2 = ch2_gf(x, y)
    states = [VAState(n, pol, {m: Fraction(1)})
              for m in enumerate_basis(n, 3, 3)]
    t0 = time.perf_counter()
    for v in states:
        assert msv_defect(x, y, v) == \
            rho_omega2(c2, v).scale(MSV_COCYCLE_SIGN)
    return time.perf_counter() - t0


def run_all():
    import formaldisk
    rows = [
        ("poly_mul (3 vars, order 8)", bench_poly_mul()),
        ("borcherds recursion (150 samples)", bench_mode_recursion()),
        ("msv sweep slice (590 states)", bench_msv_slice()),
    ]
    return formaldisk.kernel_backend, rows


def main():
    backend, rows = run_all()
    if backend == "pure" or os.environ.get("FORMALDISK_PURE"):
        for name, dt in rows:
            print(f"PURE\t{name}\t{dt:.3f}")
        return
    env = dict(os.environ, FORMALDISK_PURE="1")
    out = subprocess.run([sys.executable, os.path.abspath(__file__)],
                         env=env, capture_output=True, text=True, check=True)
    pure = {}
    for line in out.stdout.splitlines():
        if line.startswith("PURE\t"):
            _, name, dt = line.split("\t")
            pure[name] = float(dt)
    print(f"{'workload':42s} {'compiled':>9s} {'pure':>9s} {'speedup':>8s}")
    for name, dt in rows:
        p = pure.get(name, float('nan'))
        print(f"{name:42s} {dt:9.3f} {p:9.3f} {p / dt:7.2f}x")


if __name__ == "__main__":
    main()
