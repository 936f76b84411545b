"""Compile validated specs into check plans and execute them in one
streaming pass per source.

Execution is two-phase: reference lookup indexes are built first, then
each object's source is streamed once in fixed-size chunks. Chunks are
evaluated by a pure function (optionally on a process pool) and merged
sequentially, so reports and violation order are identical for any
worker count. Uniqueness tracking lives in the sequential merge step.

Violations are ordered by (record ordinal, emitter order) where emitter
order is: structure, then per field its type check followed by its
constraints in declaration order, then record rules in declaration
order.
"""

from __future__ import annotations

import operator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from fractions import Fraction

from .ingest import DataError, DatasetReader, dialect_from_source, open_dataset
from .kernel import eval_fields
from .lang import ast
from .lang.checker import ValidatedSpec
from .values import (
    ASCII_WS,
    C_IN_REF,
    C_MATCHES,
    C_MAX,
    C_MAXLEN,
    C_MIN,
    C_MINLEN,
    C_NOT_NULL,
    ParseFailure,
    T_DATE,
    T_ENUM,
    TYPE_CODE_BY_NAME,
)

CHUNK_RECORDS = 4096  # fixed so partitioning never depends on the worker count

_KERNEL_CODE = {
    "not_null": C_NOT_NULL,
    "matches": C_MATCHES,
    "min": C_MIN,
    "max": C_MAX,
    "minlen": C_MINLEN,
    "maxlen": C_MAXLEN,
    "in_reference": C_IN_REF,
}

_CMP_FNS = {
    "=": operator.eq,
    "!=": operator.ne,
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}


# ------------------------------------------------------------------ data model

@dataclass(frozen=True)
class Violation:
    rule_id: str
    record_ordinal: int
    field: str  # "" for record scope
    raw_value: str
    severity: str
    message: str
    dimension: str


@dataclass(frozen=True)
class EmitterMeta:
    rule_id: str
    field: str
    column: object  # column binding of the field, None for record scope
    kind: str  # structure | type | constraint kinds | rule
    dimension: str
    severity: str
    message: str
    is_evaluator: bool  # True for constraints and record rules


@dataclass(frozen=True)
class LookupIndex:
    source: str
    column: str
    values: frozenset
    rows_scanned: int

    def __contains__(self, item):
        return item in self.values


@dataclass(frozen=True)
class _FieldSpec:
    name: str
    column: object  # str | int | None (None: bind by field name)
    tcode: int
    targ_key: object  # date fmt string, enum value tuple, or None
    type_eidx: int
    constraints: tuple  # (ccode, eidx, arg) with in_reference arg symbolic
    unique_eidx: int | None


@dataclass(frozen=True)
class ObjectPlan:
    name: str
    source: str
    emitters: tuple[EmitterMeta, ...]
    fields: tuple[_FieldSpec, ...]
    rules: tuple[tuple[int, ast.RecordRuleDecl], ...]
    ref_needs: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class CheckPlan:
    spec: ValidatedSpec
    objects: tuple[ObjectPlan, ...]
    thresholds: tuple[ast.ThresholdDecl, ...]

    @property
    def spec_hash(self) -> str:
        return self.spec.spec_hash

    def evaluator_ids(self) -> tuple[str, ...]:
        return tuple(
            m.rule_id for o in self.objects for m in o.emitters if m.is_evaluator
        )

    def ref_needs(self) -> tuple[tuple[str, str], ...]:
        seen: dict[tuple[str, str], None] = {}
        for o in self.objects:
            for need in o.ref_needs:
                seen.setdefault(need, None)
        return tuple(seen)


@dataclass(frozen=True)
class RuleStat:
    rule_id: str
    dimension: str
    severity: str
    count: int
    total: int

    @property
    def rate(self) -> Fraction:
        return Fraction(self.count, self.total) if self.total else Fraction(0)


@dataclass(frozen=True)
class ThresholdVerdict:
    name: str
    target: str
    comparator: str
    limit_pct: Fraction
    measured: Fraction  # rate, not percent
    passed: bool


@dataclass(frozen=True)
class QualityReport:
    spec_hash: str
    sources: tuple[tuple[str, int], ...]
    rules: tuple[RuleStat, ...]
    invalid_count: int
    invalid_total: int
    thresholds: tuple[ThresholdVerdict, ...]
    flagged: tuple[str, int] | None = None
    started_at: str | None = field(default=None, compare=False)
    finished_at: str | None = field(default=None, compare=False)
    schema_version: int = 1

    @property
    def invalid_rate(self) -> Fraction:
        return Fraction(self.invalid_count, self.invalid_total) if self.invalid_total else Fraction(0)

    @property
    def passed(self) -> bool:
        return all(t.passed for t in self.thresholds)

    def rule(self, rule_id: str) -> RuleStat:
        for r in self.rules:
            if r.rule_id == rule_id:
                return r
        raise KeyError(rule_id)


# ----------------------------------------------------------------- compilation

def compile_plan(vspec: ValidatedSpec) -> CheckPlan:
    """Deterministic translation of a validated spec: one emitter per
    structure check, type check, constraint and record rule."""
    objects = []
    for obj in vspec.ast.objects:
        emitters: list[EmitterMeta] = []
        fields: list[_FieldSpec] = []
        emitters.append(
            EmitterMeta(
                rule_id=f"{obj.name}.structure",
                field="",
                column=None,
                kind="structure",
                dimension="validity",
                severity="error",
                message="ragged row (unexpected cell count)",
                is_evaluator=False,
            )
        )
        ref_needs: list[tuple[str, str]] = []
        for f in obj.fields:
            tname = ast.type_name(f.ftype)
            tcode = TYPE_CODE_BY_NAME[tname]
            targ_key: object = None
            if tcode == T_DATE:
                targ_key = f.ftype.fmt
            elif tcode == T_ENUM:
                targ_key = f.ftype.values
            type_eidx = len(emitters)
            emitters.append(
                EmitterMeta(
                    rule_id=f"{obj.name}.{f.name}.type",
                    field=f.name,
                    column=f.column,
                    kind="type",
                    dimension="validity",
                    severity="error",
                    message=_type_message(tcode, f.ftype),
                    is_evaluator=False,
                )
            )
            kcons = []
            unique_eidx = None
            for c in f.constraints:
                eidx = len(emitters)
                emitters.append(
                    EmitterMeta(
                        rule_id=f"{obj.name}.{f.name}.{c.kind}",
                        field=f.name,
                        column=f.column,
                        kind=c.kind,
                        dimension=ast.dimension_for(c.kind, f.ftype),
                        severity=c.severity,
                        message=_constraint_message(c),
                        is_evaluator=True,
                    )
                )
                if c.kind == "unique":
                    unique_eidx = eidx
                    continue
                if c.kind == "in_reference":
                    src, col = c.arg
                    ref_needs.append((src, col))
                    kcons.append((C_IN_REF, eidx, ("__ref__", src, col)))
                elif c.kind == "matches":
                    kcons.append((C_MATCHES, eidx, vspec.patterns[c.arg]))
                elif c.kind in ("min", "max"):
                    kcons.append((_KERNEL_CODE[c.kind], eidx, c.arg.value))
                elif c.kind in ("minlen", "maxlen"):
                    kcons.append((_KERNEL_CODE[c.kind], eidx, c.arg))
                else:  # not_null
                    kcons.append((C_NOT_NULL, eidx, None))
            fields.append(
                _FieldSpec(
                    name=f.name,
                    column=f.column,
                    tcode=tcode,
                    targ_key=targ_key,
                    type_eidx=type_eidx,
                    constraints=tuple(kcons),
                    unique_eidx=unique_eidx,
                )
            )
        rules = []
        for r in obj.rules:
            eidx = len(emitters)
            emitters.append(
                EmitterMeta(
                    rule_id=f"{obj.name}.{r.name}",
                    field="",
                    column=None,
                    kind="rule",
                    dimension="consistency",
                    severity=r.severity,
                    message=f"record rule '{r.name}' not satisfied",
                    is_evaluator=True,
                )
            )
            rules.append((eidx, r))
        objects.append(
            ObjectPlan(
                name=obj.name,
                source=obj.source,
                emitters=tuple(emitters),
                fields=tuple(fields),
                rules=tuple(rules),
                ref_needs=tuple(dict.fromkeys(ref_needs)),
            )
        )
    return CheckPlan(spec=vspec, objects=tuple(objects), thresholds=vspec.ast.thresholds)


def _type_message(tcode: int, ftype) -> str:
    if tcode == T_DATE:
        return f"value is not a date in format {ftype.fmt}"
    if tcode == T_ENUM:
        allowed = ", ".join(ftype.values)
        return f"value is not one of: {allowed}"
    return {1: "value is not a 64-bit integer", 2: "value is not a decimal number"}.get(
        tcode, "value does not parse"
    )


def _constraint_message(c: ast.FieldConstraint) -> str:
    from .values import format_decimal

    if c.kind == "not_null":
        return "null value"
    if c.kind == "matches":
        return f"value does not match pattern '{c.arg}'"
    if c.kind in ("min", "max"):
        lit = c.arg
        if lit.kind == "date":
            shown = lit.value.isoformat()
        elif lit.kind == "decimal":
            shown = format_decimal(lit.value)
        else:
            shown = str(lit.value)
        return ("below minimum " if c.kind == "min" else "above maximum ") + shown
    if c.kind == "minlen":
        return f"shorter than {c.arg} characters"
    if c.kind == "maxlen":
        return f"longer than {c.arg} characters"
    if c.kind == "unique":
        return "duplicate of an earlier record"
    if c.kind == "in_reference":
        src, col = c.arg
        return f"value not found in {src}.{col}"
    raise ValueError(c.kind)


# ------------------------------------------------------------- record closures

def _compile_operand(op, fidx: dict[str, int]):
    if isinstance(op, ast.FieldRef):
        i = fidx[op.name]

        def get(vs, _i=i):
            v = vs[_i]
            if v is None or isinstance(v, ParseFailure):
                return None
            return v

        return get
    val = op.value
    return lambda vs, _v=val: _v


def compile_expr(e, fidx: dict[str, int], patterns: dict):
    """Compile a rule expression to fn(values) -> True | False | None,
    with SQL-style three-valued logic over null operands."""
    if isinstance(e, ast.Cmp):
        lf = _compile_operand(e.lhs, fidx)
        rf = _compile_operand(e.rhs, fidx)
        opf = _CMP_FNS[e.op]

        def cmp_fn(vs):
            a = lf(vs)
            if a is None:
                return None
            b = rf(vs)
            if b is None:
                return None
            return opf(a, b)

        return cmp_fn
    if isinstance(e, ast.NullTest):
        g = _compile_operand(e.operand, fidx)
        if e.negated:
            return lambda vs: g(vs) is not None
        return lambda vs: g(vs) is None
    if isinstance(e, ast.MatchTest):
        g = _compile_operand(e.operand, fidx)
        pat = patterns[e.pattern]

        def match_fn(vs):
            a = g(vs)
            if a is None:
                return None
            return pat.fullmatch(a) is not None

        return match_fn
    if isinstance(e, ast.And):
        fns = [compile_expr(i, fidx, patterns) for i in e.items]

        def and_fn(vs):
            unknown = False
            for fn in fns:
                r = fn(vs)
                if r is False:
                    return False
                if r is None:
                    unknown = True
            return None if unknown else True

        return and_fn
    if isinstance(e, ast.Or):
        fns = [compile_expr(i, fidx, patterns) for i in e.items]

        def or_fn(vs):
            unknown = False
            for fn in fns:
                r = fn(vs)
                if r is True:
                    return True
                if r is None:
                    unknown = True
            return None if unknown else False

        return or_fn
    if isinstance(e, ast.Not):
        fn = compile_expr(e.item, fidx, patterns)

        def not_fn(vs):
            r = fn(vs)
            return None if r is None else not r

        return not_fn
    raise ValueError(f"not an expression node: {e!r}")


# -------------------------------------------------------------- materialization

class _Runtime:
    """Per-process executable form of one ObjectPlan."""

    __slots__ = ("prog", "rule_fns", "unique_slots", "eidx_col", "severities", "metas")

    def __init__(self, oplan: ObjectPlan, vspec: ValidatedSpec, colmap: list[int], indexes):
        from .values import compile_date_format

        prog = []
        unique_slots: list[tuple[int, int]] = []
        eidx_col = [-1] * len(oplan.emitters)
        src = vspec.source_map[oplan.source]
        for fi, fs in enumerate(oplan.fields):
            col = colmap[fi]
            targ = None
            if fs.tcode == T_DATE:
                targ = vspec.date_formats.get(fs.targ_key) or compile_date_format(fs.targ_key)
            elif fs.tcode == T_ENUM:
                targ = frozenset(fs.targ_key)
            cons = []
            for ccode, eidx, arg in fs.constraints:
                if ccode == C_IN_REF:
                    arg = indexes[(arg[1], arg[2])].values
                cons.append((ccode, eidx, arg))
                eidx_col[eidx] = col
            eidx_col[fs.type_eidx] = col
            if fs.unique_eidx is not None:
                unique_slots.append((fi, fs.unique_eidx))
                eidx_col[fs.unique_eidx] = col
            prog.append((col, fs.tcode, targ, src.null_tokens, fs.type_eidx, tuple(cons)))
        fidx = {fs.name: i for i, fs in enumerate(oplan.fields)}
        self.prog = tuple(prog)
        self.rule_fns = tuple(
            (eidx, compile_expr(r.expr, fidx, vspec.patterns)) for eidx, r in oplan.rules
        )
        self.unique_slots = tuple(unique_slots)
        self.eidx_col = eidx_col
        self.severities = [m.severity for m in oplan.emitters]
        self.metas = oplan.emitters


def _resolve_columns(oplan: ObjectPlan, reader: DatasetReader) -> list[int]:
    return [
        reader.resolve(fs.column if fs.column is not None else fs.name)
        for fs in oplan.fields
    ]


def _eval_chunk(chunk, rt: _Runtime):
    """Pure per-chunk evaluation; identical inline and on worker processes."""
    out = []
    prog = rt.prog
    rule_fns = rt.rule_fns
    unique_slots = rt.unique_slots
    eidx_col = rt.eidx_col
    for ordinal, cells in chunk:
        if cells is None:
            out.append((ordinal, None, None))
            continue
        values, kviols = eval_fields(cells, prog)
        viols = [(eidx, cells[eidx_col[eidx]]) for eidx in kviols]
        for eidx, fn in rule_fns:
            if fn(values) is not True:
                viols.append((eidx, ""))
        if unique_slots:
            uvals = tuple(
                (
                    None
                    if values[fi] is None or isinstance(values[fi], ParseFailure)
                    else values[fi],
                    cells[eidx_col[eidx]],
                )
                for fi, eidx in unique_slots
            )
        else:
            uvals = ()
        out.append((ordinal, viols, uvals))
    return out


# worker-process state for parallel evaluation
_WORKER_RT: _Runtime | None = None


def _worker_init(plan: CheckPlan, obj_index: int, colmap: list[int], indexes):
    global _WORKER_RT
    _WORKER_RT = _Runtime(plan.objects[obj_index], plan.spec, colmap, indexes)


def _worker_eval(chunk):
    return _eval_chunk(chunk, _WORKER_RT)


def _chunks(reader):
    buf = []
    for ordinal, cells, ragged in reader:
        buf.append((ordinal, None if ragged else cells))
        if len(buf) >= CHUNK_RECORDS:
            yield buf
            buf = []
    if buf:
        yield buf


# ------------------------------------------------------------------- execution

def build_lookup_index(reader: DatasetReader, column: str | int, source_name: str = "") -> LookupIndex:
    """Distinct non-null trimmed values of one column; nulls and ragged
    rows are skipped."""
    col = reader.resolve(column)
    null_tokens = reader.dialect.null_tokens
    strip = str.strip
    values = set()
    rows = 0
    for _ordinal, cells, ragged in reader:
        rows += 1
        if ragged:
            continue
        t = strip(cells[col], ASCII_WS)
        if t in null_tokens:
            continue
        values.add(t)
    return LookupIndex(
        source=source_name,
        column=column if isinstance(column, str) else str(column),
        values=frozenset(values),
        rows_scanned=rows,
    )


def evaluate_record(instance, plan: CheckPlan, indexes=None, object_name: str | None = None, trackers=None):
    """Evaluate one projected record; returns violations in emitter order.

    Uniqueness needs cross-record state: pass the same `trackers` dict
    across calls in record order to get duplicate attribution.
    """
    oplan = _object_plan(plan, object_name)
    cells = [instance.values[fs.name][0] for fs in oplan.fields]
    colmap = list(range(len(oplan.fields)))
    rt = _Runtime(oplan, plan.spec, colmap, indexes or {})
    recs = _eval_chunk([(instance.record_ordinal, cells)], rt)
    merged = _merge_record(recs[0], rt, trackers if trackers is not None else {})
    return [_lift(rt, eidx, raw, instance.record_ordinal) for eidx, raw in merged]


def _object_plan(plan: CheckPlan, object_name: str | None) -> ObjectPlan:
    if object_name is None:
        return plan.objects[0]
    for o in plan.objects:
        if o.name == object_name:
            return o
    raise KeyError(object_name)


def _merge_record(rec, rt: _Runtime, trackers):
    """Resolve uniqueness for one evaluated record and return its violation
    list sorted by emitter index. rec is (ordinal, viols, uvals)."""
    ordinal, viols, uvals = rec
    if viols is None:
        return [(0, "")]
    if rt.unique_slots:
        added = False
        for j, (_fi, eidx) in enumerate(rt.unique_slots):
            v, raw = uvals[j]
            if v is None:
                continue
            tracker = trackers.setdefault(eidx, {})
            first = tracker.setdefault(v, ordinal)
            if first != ordinal:
                viols.append((eidx, raw))
                added = True
        if added:
            viols.sort(key=lambda t: t[0])
    return viols


def _lift(rt: _Runtime, eidx: int, raw: str, ordinal: int) -> Violation:
    m = rt.metas[eidx]
    return Violation(
        rule_id=m.rule_id,
        record_ordinal=ordinal,
        field=m.field,
        raw_value=raw,
        severity=m.severity,
        message=m.message,
        dimension=m.dimension,
    )


def finalize_aggregates(
    rule_counts: dict[str, tuple[int, int]],
    invalid_count: int,
    invalid_total: int,
    thresholds,
) -> tuple[ThresholdVerdict, ...]:
    """Threshold verdicts from final counters. Rates are exact rationals;
    an empty denominator counts as rate zero (and therefore passes)."""
    out = []
    for th in thresholds:
        limit_pct = Fraction(th.limit_pct)
        if th.target == ast.INVALID_RECORDS_TARGET:
            num, den = invalid_count, invalid_total
        else:
            num, den = rule_counts[th.target]
        measured = Fraction(num, den) if den else Fraction(0)
        limit_rate = limit_pct / 100
        passed = measured <= limit_rate if th.comparator == "<=" else measured < limit_rate
        out.append(
            ThresholdVerdict(
                name=th.name,
                target=th.target,
                comparator=th.comparator,
                limit_pct=limit_pct,
                measured=measured,
                passed=passed,
            )
        )
    return tuple(out)


def run(
    plan: CheckPlan,
    data_paths: dict[str, str],
    jobs: int = 1,
    violation_sink=None,
) -> QualityReport:
    """Execute the plan: build lookup indexes, stream every object's
    source once, emit violations in deterministic order and assemble the
    report. `data_paths` maps every needed source name to a CSV path."""
    started = datetime.now(timezone.utc).isoformat(timespec="seconds")
    vspec = plan.spec

    def path_of(source_name: str) -> str:
        try:
            return data_paths[source_name]
        except KeyError:
            raise DataError(f"no data path bound for source '{source_name}'") from None

    # phase 1: reference indexes
    indexes: dict[tuple[str, str], LookupIndex] = {}
    source_rows: dict[str, int] = {}
    for src_name, column in plan.ref_needs():
        src = vspec.source_map[src_name]
        with open_dataset(path_of(src_name), dialect_from_source(src)) as reader:
            idx = build_lookup_index(reader, column, src_name)
        indexes[(src_name, column)] = idx
        source_rows[src_name] = idx.rows_scanned

    # phase 2: stream objects
    all_counts: dict[str, tuple[int, int]] = {}
    rule_stats: list[RuleStat] = []
    invalid_count = 0
    invalid_total = 0
    for oi, oplan in enumerate(plan.objects):
        src = vspec.source_map[oplan.source]
        with open_dataset(path_of(oplan.source), dialect_from_source(src)) as reader:
            colmap = _resolve_columns(oplan, reader)
            rt = _Runtime(oplan, vspec, colmap, indexes)
            counts = [0] * len(oplan.emitters)
            obj_invalid = 0
            trackers: dict = {}
            if jobs <= 1:
                results = (_eval_chunk(chunk, rt) for chunk in _chunks(reader))
                obj_invalid = _merge_all(results, rt, trackers, counts, violation_sink)
            else:
                with ProcessPoolExecutor(
                    max_workers=jobs,
                    initializer=_worker_init,
                    initargs=(plan, oi, colmap, indexes),
                ) as pool:
                    results = pool.map(_worker_eval, _chunks(reader), chunksize=1)
                    obj_invalid = _merge_all(results, rt, trackers, counts, violation_sink)
            total = reader.data_rows_read
        source_rows[oplan.source] = total
        invalid_count += obj_invalid
        invalid_total += total
        for eidx, meta in enumerate(oplan.emitters):
            all_counts[meta.rule_id] = (counts[eidx], total)
            rule_stats.append(
                RuleStat(
                    rule_id=meta.rule_id,
                    dimension=meta.dimension,
                    severity=meta.severity,
                    count=counts[eidx],
                    total=total,
                )
            )

    verdicts = finalize_aggregates(all_counts, invalid_count, invalid_total, plan.thresholds)
    sources = tuple(
        (s.name, source_rows[s.name]) for s in vspec.ast.sources if s.name in source_rows
    )
    return QualityReport(
        spec_hash=vspec.spec_hash,
        sources=sources,
        rules=tuple(rule_stats),
        invalid_count=invalid_count,
        invalid_total=invalid_total,
        thresholds=verdicts,
        flagged=None,
        started_at=started,
        finished_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )


def _merge_all(results, rt: _Runtime, trackers, counts, sink) -> int:
    """Sequential merge: uniqueness resolution, counting, ordered emission."""
    severities = rt.severities
    invalid = 0
    for recs in results:
        for rec in recs:
            merged = _merge_record(rec, rt, trackers)
            if not merged:
                continue
            ordinal = rec[0]
            has_error = False
            for eidx, raw in merged:
                counts[eidx] += 1
                if severities[eidx] == "error":
                    has_error = True
                if sink is not None:
                    sink(_lift(rt, eidx, raw, ordinal))
            if has_error:
                invalid += 1
    return invalid


def with_flagged(report: QualityReport, path: str, written: int) -> QualityReport:
    return replace(report, flagged=(path, written))
