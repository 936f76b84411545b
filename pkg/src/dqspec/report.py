"""Report rendering (text and canonical JSON) and the flagged-record
protocol listing every violating record for revision.

JSON output is canonical: fixed key order, counts as integers, rates as
exact numerator/denominator pairs plus a 10-place decimal string. Wall
clock timestamps stay out of the JSON document so equal quality
outcomes render byte-identically; the text report shows them.
"""

from __future__ import annotations

import csv
import json
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction

from .engine import QualityReport, RuleStat, ThresholdVerdict, Violation

SCHEMA_VERSION = 1

FLAGGED_HEADER = ["record", "rule_id", "field", "raw_value", "severity", "message"]


def rate_decimal(num: int, den: int, places: int = 10) -> str:
    """Exact-to-`places` decimal string of num/den, round half even."""
    if den == 0:
        num, den = 0, 1
    with localcontext() as ctx:
        ctx.prec = 50
        q = (Decimal(num) / Decimal(den)).quantize(
            Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN
        )
    return format(q, "f")


def percent_text(rate: Fraction, digits: int = 4) -> str:
    """Percentage with `digits` significant digits, e.g. '5.163%'."""
    if rate == 0:
        return "0.000%"
    with localcontext() as ctx:
        ctx.prec = digits
        q = Decimal(rate.numerator * 100) / Decimal(rate.denominator)
    return format(q, "f") + "%"


def _frac_str(f: Fraction) -> str:
    """Exact decimal text of a fraction whose denominator is a power of
    ten times small factors (threshold limits); falls back to num/den."""
    num, den = f.numerator, f.denominator
    with localcontext() as ctx:
        ctx.prec = 40
        try:
            d = Decimal(num) / Decimal(den)
        except Exception:
            return f"{num}/{den}"
    if Fraction(d) != f:
        return f"{num}/{den}"
    return format(d.normalize(), "f")


# ------------------------------------------------------------------- text form

def render_text(report: QualityReport) -> str:
    out = []
    out.append("data quality report")
    out.append(f"spec sha256: {report.spec_hash}")
    if report.started_at:
        out.append(f"started: {report.started_at}  finished: {report.finished_at}")
    out.append("")
    out.append("sources")
    if not report.sources:
        out.append("  (none)")
    for name, records in report.sources:
        out.append(f"  {name}: {records} records")
    out.append("")
    out.append("rules")
    width = max([len(r.rule_id) for r in report.rules] or [4])
    dimw = max([len(r.dimension) for r in report.rules] or [9])
    for r in report.rules:
        out.append(
            f"  {r.rule_id:<{width}}  {r.dimension:<{dimw}}  {r.severity:<7}  "
            f"{r.count:>8}  {percent_text(r.rate):>10}"
        )
    out.append("")
    out.append(
        f"invalid records: {report.invalid_count} of {report.invalid_total}"
        f" ({percent_text(report.invalid_rate)})"
    )
    if report.thresholds:
        out.append("")
        out.append("thresholds")
        for t in report.thresholds:
            out.append(
                f"  {t.name}: {t.target} {t.comparator} {_frac_str(t.limit_pct)}%"
                f"  measured {percent_text(t.measured)}  "
                + ("PASS" if t.passed else "FAIL")
            )
    if report.flagged is not None:
        path, written = report.flagged
        out.append("")
        out.append(f"flagged records: {written} rows in {path}")
    out.append("")
    out.append("verdict: " + ("PASS" if report.passed else "FAIL"))
    return "\n".join(out) + "\n"


# ------------------------------------------------------------------- json form

def render_json(report: QualityReport) -> bytes:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "spec_hash": report.spec_hash,
        "sources": [{"name": n, "records": r} for n, r in report.sources],
        "rules": [
            {
                "rule_id": r.rule_id,
                "dimension": r.dimension,
                "severity": r.severity,
                "count": r.count,
                "rate_num": r.count,
                "rate_den": r.total,
                "rate": rate_decimal(r.count, r.total),
            }
            for r in report.rules
        ],
        "invalid_records": {
            "count": report.invalid_count,
            "total": report.invalid_total,
            "rate_num": report.invalid_count,
            "rate_den": report.invalid_total,
            "rate": rate_decimal(report.invalid_count, report.invalid_total),
        },
        "thresholds": [
            {
                "name": t.name,
                "target": t.target,
                "comparator": t.comparator,
                "limit_pct_num": t.limit_pct.numerator,
                "limit_pct_den": t.limit_pct.denominator,
                "measured_num": t.measured.numerator,
                "measured_den": t.measured.denominator,
                "measured": rate_decimal(t.measured.numerator, t.measured.denominator),
                "passed": t.passed,
            }
            for t in report.thresholds
        ],
        "flagged": (
            None
            if report.flagged is None
            else {"path": report.flagged[0], "written": report.flagged[1]}
        ),
        "verdict": "pass" if report.passed else "fail",
    }
    return (json.dumps(doc, indent=2, ensure_ascii=True) + "\n").encode("utf-8")


def parse_report(data: bytes | str) -> QualityReport:
    """Rebuild a QualityReport from canonical JSON (timestamps are not
    part of the document and come back as None)."""
    doc = json.loads(data)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported report schema: {doc.get('schema_version')!r}")
    rules = tuple(
        RuleStat(
            rule_id=r["rule_id"],
            dimension=r["dimension"],
            severity=r["severity"],
            count=r["count"],
            total=r["rate_den"],
        )
        for r in doc["rules"]
    )
    thresholds = tuple(
        ThresholdVerdict(
            name=t["name"],
            target=t["target"],
            comparator=t["comparator"],
            limit_pct=Fraction(t["limit_pct_num"], t["limit_pct_den"]),
            measured=Fraction(t["measured_num"], t["measured_den"]),
            passed=t["passed"],
        )
        for t in doc["thresholds"]
    )
    flagged = doc.get("flagged")
    return QualityReport(
        spec_hash=doc["spec_hash"],
        sources=tuple((s["name"], s["records"]) for s in doc["sources"]),
        rules=rules,
        invalid_count=doc["invalid_records"]["count"],
        invalid_total=doc["invalid_records"]["total"],
        thresholds=thresholds,
        flagged=None if flagged is None else (flagged["path"], flagged["written"]),
    )


# ------------------------------------------------------------ flagged protocol

class FlaggedWriter:
    """CSV sink for the flagged-record protocol.

    Violations must arrive in (record ordinal, emitter order); rows past
    the per-rule cap are suppressed and summarized by one truncation
    marker row per rule at close."""

    def __init__(self, sink, max_per_rule: int | None = None):
        self._own = isinstance(sink, (str, bytes))
        self._fh = open(sink, "w", encoding="utf-8", newline="") if self._own else sink
        self._writer = csv.writer(self._fh, lineterminator="\n")
        self._writer.writerow(FLAGGED_HEADER)
        self._cap = max_per_rule
        self._seen: dict[str, int] = {}
        self.written = 0
        self._closed = False

    def write(self, v: Violation) -> bool:
        n = self._seen.get(v.rule_id, 0) + 1
        self._seen[v.rule_id] = n
        if self._cap is not None and n > self._cap:
            return False
        self._writer.writerow(
            [v.record_ordinal, v.rule_id, v.field, v.raw_value, v.severity, v.message]
        )
        self.written += 1
        return True

    def close(self) -> int:
        if self._closed:
            return self.written
        self._closed = True
        if self._cap is not None:
            for rule_id in sorted(self._seen):
                omitted = self._seen[rule_id] - self._cap
                if omitted > 0:
                    self._writer.writerow(
                        ["", rule_id, "", "", "info", f"truncated: {omitted} more violations"]
                    )
        if self._own:
            self._fh.close()
        return self.written

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False


def write_flagged(violations, sink, max_per_rule: int | None = None) -> int:
    """Write a violation stream to a CSV protocol; returns rows written
    (truncation marker rows not included)."""
    w = FlaggedWriter(sink, max_per_rule=max_per_rule)
    for v in violations:
        w.write(v)
    return w.close()


def read_flagged(path: str) -> list[dict]:
    """Read a protocol file back; raw values round-trip exactly."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))
