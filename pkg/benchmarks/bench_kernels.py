"""Compare the compiled and pure-Python search kernels on the same workloads.

    python benchmarks/bench_kernels.py [--repeat 3] [--json]
"""

import argparse
import json
import random
import sys
import time

from formaldual import _pykernels
from formaldual.profiles import admissible_profiles
from formaldual.sets import symmetry_multipliers

try:
    from formaldual import _kernels
except ImportError:
    _kernels = None


def workloads():
    """(name, callable(mod)) pairs; each runs one kernel over a fixed input."""
    out = []

    def profile_dfs(n, size, prune=True, theorems=True, limit=None):
        profs = admissible_profiles(n, size, primitive_required=True, theorems=theorems)[:limit]
        targets = [list(p.expand()) for p in profs]
        mult = symmetry_multipliers(n)

        def go(mod):
            nodes = 0
            for t in targets:
                nodes += mod.explore(n, t, size, [0], 10**9, prune, False, 0, mult, 0.0)[2]
            return nodes
        return go

    out.append(("dfs Z/16 |S|=4", profile_dfs(16, 4)))
    out.append(("dfs Z/64 |S|=8", profile_dfs(64, 8)))
    out.append(("dfs Z/81 |S|=9 no gates", profile_dfs(81, 9, theorems=False)))
    out.append(("dfs Z/16 |S|=4 unpruned", profile_dfs(16, 4, prune=False)))
    out.append(("dfs Z/36 |S|=6 unpruned", profile_dfs(36, 6, prune=False, theorems=False, limit=3)))

    rng = random.Random(1)
    sets = [(n, sorted(rng.sample(range(n), n // 4))) for n in (64, 128, 256) for _ in range(20)]

    def weights(mod):
        for n, S in sets:
            mod.weight_counts(n, S)
        return len(sets)

    def canon(mod):
        for n, S in sets:
            mod.canonical_members(n, S, symmetry_multipliers(n, True))
        return len(sets)

    out.append(("weight_counts x60", weights))
    out.append(("canonical_members (units) x60", canon))
    return out


def best_of(fn, mod, repeat):
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(mod)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; only the Python backend is available", file=sys.stderr)
    rows = []
    for name, fn in workloads():
        tp, rp = best_of(fn, _pykernels, args.repeat)
        row = {"workload": name, "python_s": tp, "work": rp}
        if _kernels is not None:
            tc, rc = best_of(fn, _kernels, args.repeat)
            if rc != rp:
                raise SystemExit(f"{name}: backends disagree ({rp} vs {rc})")
            row.update(compiled_s=tc, speedup=tp / tc if tc else float("inf"))
        rows.append(row)
    if args.json:
        print(json.dumps(rows, indent=2))
        return 0
    print(f"{'workload':34s} {'python':>10s} {'compiled':>10s} {'speedup':>8s}")
    for r in rows:
        comp = f"{r['compiled_s'] * 1e3:8.2f}ms" if "compiled_s" in r else "       n/a"
        sp = f"{r['speedup']:7.1f}x" if "speedup" in r else "     n/a"
        print(f"{r['workload']:34s} {r['python_s'] * 1e3:8.2f}ms {comp} {sp}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
