#!/usr/bin/env python3
"""Benchmark the compiled row kernel against the pure-Python fallback.

Builds a register-style corpus in a temp directory, compiles the
reference spec, then times the full check run once per kernel and the
bare kernel loop on the raw rows. Run:

    python benchmarks/bench_kernel.py [--records 200000]
"""

import argparse
import csv
import tempfile
import time
from pathlib import Path

from dqspec import corpus, engine
from dqspec.kernel import available_kernels
from dqspec.lang import check_spec, parse_spec


def build_corpus(records: int, out: Path):
    plan = corpus.register_plan(records=records, seed=1234, inject=False)
    return corpus.generate(plan, out)


def load_rows(path: Path) -> list[list[str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return rows[1:]


def time_kernel_loop(kernel, rows, prog) -> float:
    eval_fields = kernel.eval_fields
    t0 = time.perf_counter()
    for cells in rows:
        eval_fields(cells, prog)
    return time.perf_counter() - t0


def time_full_run(plan, paths, kernel_module) -> float:
    # engine.eval_fields is bound at import; rebind for the comparison
    saved = engine.eval_fields
    engine.eval_fields = kernel_module.eval_fields
    try:
        t0 = time.perf_counter()
        engine.run(plan, paths)
        return time.perf_counter() - t0
    finally:
        engine.eval_fields = saved


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--records", type=int, default=200_000)
    args = ap.parse_args()

    kernels = available_kernels()
    print(f"kernels available: {', '.join(kernels)}")
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp)
        print(f"generating {args.records} records ...")
        result = build_corpus(args.records, out)
        spec = check_spec(parse_spec(result.spec_path.read_bytes()))
        plan = engine.compile_plan(spec)
        paths = {name: str(p) for name, p in result.dataset_paths.items()}

        # materialize the field program the way the engine does
        from dqspec.engine import _Runtime, _resolve_columns
        from dqspec.ingest import dialect_from_source, open_dataset

        with open_dataset(paths["register"], dialect_from_source(spec.source_map["register"])) as r:
            colmap = _resolve_columns(plan.objects[0], r)
        with open_dataset(paths["regions"], dialect_from_source(spec.source_map["regions"])) as r:
            idx = engine.build_lookup_index(r, "code", "regions")
        rt = _Runtime(plan.objects[0], spec, colmap, {("regions", "code"): idx})
        rows = load_rows(result.dataset_paths["register"])

        loop_times = {}
        run_times = {}
        for name, module in kernels.items():
            loop_times[name] = time_kernel_loop(module, rows, rt.prog)
            run_times[name] = time_full_run(plan, paths, module)

        print(f"\nrows: {len(rows)}, fields per row: {len(rt.prog)}")
        print(f"{'kernel':<10} {'bare loop':>12} {'rows/s':>12} {'full check':>12}")
        for name in kernels:
            lt, ft = loop_times[name], run_times[name]
            print(f"{name:<10} {lt:>10.2f} s {len(rows) / lt:>12,.0f} {ft:>10.2f} s")
        if len(kernels) == 2:
            speedup = loop_times["python"] / loop_times["compiled"]
            overall = run_times["python"] / run_times["compiled"]
            print(f"\ncompiled kernel speedup: {speedup:.2f}x bare loop, {overall:.2f}x full check")


if __name__ == "__main__":
    main()
