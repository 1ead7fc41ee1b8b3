"""Time the compiled and pure-Python kernels on the same inputs.

    python benchmarks/bench_kernels.py [--size 151] [--repeat 3]

Each kernel is run on both backends; outputs are compared for equality
before timings are printed.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from recgroup import kernels
from recgroup.endo import validate_endomorphism
from recgroup.entropy import bowen_set
from recgroup.group import FiniteAbelianGroup
from recgroup.uniformity import Entourage


def cases(size: int):
    G = FiniteAbelianGroup([size, size])
    f = validate_endomorphism(G, [[2, 1], [1, 1]])
    E = Entourage.ball(G, 2)
    rep, moduli, strides, proj = G.translation_data()
    scc_args = (f.table, rep, E.offsets(), moduli, strides, proj)
    B = bowen_set(f, 2, Entourage.ball(G, 6))
    off = G.offset_coords(B)
    cand = np.arange(G.order, dtype=np.int64)
    yield "strongly_connected", kernels.strongly_connected, scc_args
    yield "successor_table", kernels.successor_table, scc_args
    yield "greedy_separated", kernels.greedy_separated, (rep, off, moduli, strides, proj, cand, np.empty(0, np.int64))
    yield "greedy_cover", kernels.greedy_cover, (rep, off, moduli, strides, proj, cand)


def best_time(fn, args, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=151, help="group is Z_size x Z_size")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    backends = kernels.available_backends()
    print(f"group Z_{args.size}^2, backends: {', '.join(backends)}")
    print(f"{'kernel':<20}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for name, fn, fargs in cases(args.size):
        times, outs = [], []
        for b in backends:
            prev = kernels.use_backend(b)
            try:
                t, out = best_time(fn, fargs, args.repeat)
            finally:
                kernels.use_backend(prev)
            times.append(t)
            outs.append(out)
        for o in outs[1:]:
            same = all(np.array_equal(a, b) for a, b in zip(o, outs[0])) if isinstance(o, tuple) else np.array_equal(o, outs[0])
            if not same:
                raise SystemExit(f"{name}: backends disagree")
        speed = f"{times[-1] / times[0]:>9.1f}x" if len(times) > 1 else ""
        print(f"{name:<20}" + "".join(f"{t * 1e3:>10.1f}ms" for t in times) + speed)


if __name__ == "__main__":
    main()
