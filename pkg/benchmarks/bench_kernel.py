"""Compare the compiled and pure-Python enumeration kernels.

    python3 benchmarks/bench_kernel.py [--repeat 3]

Each workload is timed once per available backend with the counterexample
cache cleared, so every run enumerates from scratch.
"""

from __future__ import annotations

import argparse
import timeit

from bsv import kernel
from bsv.formula import Domain, IntRange, _counterexample, compile_formula, is_tautology
from bsv.properties import run_property
from bsv.syntax import parse_formula


def _raw_kernel():
    # 256 * 256 integer assignments, all satisfying: a full sweep
    f = parse_formula("(x < y || x >= y) && (x != 300 -> y <= 255)")
    d = Domain({"x": IntRange(0, 255), "y": IntRange(0, 255)})
    prog = compile_formula(f, d, two_state=False)
    return lambda: kernel.first_false(prog.code, prog.lows, prog.radices)


def _boolean_sweep():
    atoms = [f"a{i}" for i in range(14)]
    f = parse_formula(" || ".join(atoms) + " || " + " && ".join(f"!{a}" for a in atoms))
    d = Domain.booleans(*atoms)
    return lambda: is_tautology(f, d)


def _suite(pid, **options):
    return lambda: run_property(pid, **options)


WORKLOADS = {
    "kernel: 65536 int assignments": _raw_kernel,
    "tautology: 14 boolean atoms": _boolean_sweep,
    "suite: theorem1-oracle": lambda: _suite("theorem1-oracle"),
    "suite: definition6": lambda: _suite("definition6"),
    "suite: theorem3 (200 samples)": lambda: _suite("theorem3", samples=200),
}


def bench(repeat: int) -> list[tuple[str, dict[str, float]]]:
    rows = []
    for name, make in WORKLOADS.items():
        job = make()
        timings = {}
        for backend in kernel.available_backends():
            previous = kernel.use_backend(backend)
            try:

                def once():
                    _counterexample.cache_clear()
                    job()

                timings[backend] = min(timeit.repeat(once, number=1, repeat=repeat))
            finally:
                kernel.use_backend(previous)
        rows.append((name, timings))
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3, help="best-of-N timing")
    args = parser.parse_args()
    backends = kernel.available_backends()
    if "cython" not in backends:
        print("compiled extension not built; timing the Python kernel only")
    print(f"{'workload':<34}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, t in bench(args.repeat):
        line = f"{name:<34}" + "".join(f"{t[b]:>11.4f}s" for b in backends)
        if len(backends) > 1:
            line += f"{t['python'] / t['cython']:>11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
