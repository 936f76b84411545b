"""Shared test utilities."""

from __future__ import annotations

from pathlib import Path

from dqspec import engine
from dqspec.lang import check_spec, parse_spec


def load_plan(spec_path) -> tuple[engine.CheckPlan, dict[str, str]]:
    """Compile a spec file; data paths resolve relative to the file."""
    spec_path = Path(spec_path)
    ast = parse_spec(spec_path.read_bytes())
    vspec = check_spec(ast)
    base = spec_path.resolve().parent
    paths = {name: str(base / src.path) for name, src in vspec.source_map.items()}
    return engine.compile_plan(vspec), paths


def run_spec(spec_path, jobs: int = 1, sink=None) -> engine.QualityReport:
    plan, paths = load_plan(spec_path)
    return engine.run(plan, paths, jobs=jobs, violation_sink=sink)


def violations_by_rule(violations) -> dict[str, set[int]]:
    out: dict[str, set[int]] = {}
    for v in violations:
        out.setdefault(v.rule_id, set()).add(v.record_ordinal)
    return out


def write_csv(path, rows):
    import csv

    with open(path, "w", encoding="utf-8", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)
    return str(path)
