"""Compare the compiled and pure-Python kernels.

Run ``python benchmarks/bench_kernels.py``. Prints per-kernel timings for
both backends and an end-to-end check timed in subprocesses, one per backend.
"""
from __future__ import annotations

import os
import random
import subprocess
import sys
import timeit

from titsgroup import _kernels_py as pure
from titsgroup.root_datum import build_root_datum

try:
    from titsgroup import _kernels as compiled
except ImportError:
    compiled = None

END_TO_END = (
    "import time;"
    "from titsgroup.root_datum import build_root_datum;"
    "from titsgroup.affine_tits import check_reduced_word_independence;"
    "from titsgroup.kernels import BACKEND;"
    "rd=build_root_datum([('C',2)],'sc');t=time.perf_counter();"
    "check_reduced_word_independence(rd,6);"
    "print(BACKEND, round(time.perf_counter()-t,3))"
)


def _cases(seed: int = 0):
    rd = build_root_datum([("E", 6)], "sc")
    rng = random.Random(seed)
    elts = rd.enumerate_weyl(limit=2000)
    pairs = [(rng.choice(elts).perm, rng.choice(elts).perm) for _ in range(200)]
    w = rd.weyl(pairs[0][0])
    w.act_bits(0)
    cols = w._cols2
    return rd, pairs, cols


def bench_module(mod, rd, pairs, cols, number: int = 20) -> dict:
    npos, cb = rd.npos, rd.coroot_bits
    out = {}
    out["compose"] = timeit.timeit(lambda: [mod.compose(u, v) for u, v in pairs], number=number)
    out["invert"] = timeit.timeit(lambda: [mod.invert(u) for u, _ in pairs], number=number)
    out["inversion_count"] = timeit.timeit(
        lambda: [mod.inversion_count(u, npos) for u, _ in pairs], number=number)
    out["cocycle_bits"] = timeit.timeit(
        lambda: [mod.cocycle_bits(u, v, npos, cb) for u, v in pairs], number=number)
    out["act_bits"] = timeit.timeit(
        lambda: [mod.act_bits(cols, b) for b in range(1 << rd.dim)], number=number)
    return out


def end_to_end() -> list:
    rows = []
    for pure_flag in ("0", "1"):
        env = dict(os.environ, TITSGROUP_PURE=pure_flag)
        res = subprocess.run([sys.executable, "-c", END_TO_END], env=env,
                             capture_output=True, text=True, check=True)
        rows.append(res.stdout.strip())
    return rows


def main() -> None:
    rd, pairs, cols = _cases()
    backends = [("python", pure)] + ([("cython", compiled)] if compiled else [])
    results = {name: bench_module(mod, rd, pairs, cols) for name, mod in backends}
    for name, mod in backends[1:]:
        for u, v in pairs:
            assert mod.compose(u, v) == pure.compose(u, v)
            assert mod.cocycle_bits(u, v, rd.npos, rd.coroot_bits) == pure.cocycle_bits(
                u, v, rd.npos, rd.coroot_bits)
    print(f"{'kernel':18}" + "".join(f"{n:>12}" for n, _ in backends))
    for k in results["python"]:
        print(f"{k:18}" + "".join(f"{results[n][k]:12.4f}" for n, _ in backends))
    print("reduced-word check, C2 sc, length <= 6:")
    for row in end_to_end():
        print("  " + row)


if __name__ == "__main__":
    main()
