"""Typed cell values and the parsing rules shared by both row kernels.

A parsed cell is one of:
    None                 null (raw cell matched a null token after trimming)
    str                  text or enum member (trimmed)
    int                  integer, checked against the signed 64-bit range
    decimal.Decimal      exact scaled decimal
    datetime.date        proleptic Gregorian calendar date
    ParseFailure         raw text does not belong to the declared type

Trimming strips ASCII whitespace only; null-token matching and parsing
see the trimmed text, while violations report the raw untrimmed cell.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date
from decimal import Decimal

ASCII_WS = " \t\r\n\f\v"

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

# int() must not see underscores, unicode digits or stray whitespace,
# so both kernels validate the grammar before converting.
INT_RE = re.compile(r"[+-]?[0-9]+")
DEC_RE = re.compile(r"[+-]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)")

# field type codes used by compiled field programs
T_TEXT = 0
T_INTEGER = 1
T_DECIMAL = 2
T_DATE = 3
T_ENUM = 4

# stateless constraint codes (unique is stateful and lives in the engine)
C_NOT_NULL = 1
C_MATCHES = 2
C_MIN = 3
C_MAX = 4
C_MINLEN = 5
C_MAXLEN = 6
C_IN_REF = 7

TYPE_CODE_BY_NAME = {
    "text": T_TEXT,
    "integer": T_INTEGER,
    "decimal": T_DECIMAL,
    "date": T_DATE,
    "enum": T_ENUM,
}


class ParseFailure:
    """A cell whose raw text does not parse as the declared field type."""

    __slots__ = ("raw", "reason")

    def __init__(self, raw: str, reason: str):
        self.raw = raw
        self.reason = reason

    def __repr__(self):
        return f"ParseFailure({self.raw!r}, {self.reason!r})"

    def __eq__(self, other):
        return (
            isinstance(other, ParseFailure)
            and other.raw == self.raw
            and other.reason == self.reason
        )

    def __hash__(self):
        return hash((self.raw, self.reason))


# Row kernels report failed parses with this shared sentinel; the raw
# cell and reason are recovered from context where a full ParseFailure
# is needed (see ingest.parse_value).
PARSE_FAILED = ParseFailure("", "<sentinel>")


@dataclass(frozen=True)
class DateFormat:
    """Compiled date format: YYYY, MM, DD tokens plus literal separators."""

    spec: str
    length: int
    y_off: int
    m_off: int
    d_off: int
    literals: tuple[tuple[int, str], ...]


ISO_FORMAT_SPEC = "YYYY-MM-DD"


def compile_date_format(spec: str) -> DateFormat:
    """Compile a format string; raises ValueError if malformed.

    Each of YYYY, MM and DD must appear exactly once; every other
    character is a literal separator.
    """
    y_off = m_off = d_off = -1
    literals = []
    i = 0
    pos = 0
    while i < len(spec):
        if spec.startswith("YYYY", i):
            if y_off >= 0:
                raise ValueError("YYYY given twice in date format")
            y_off = pos
            i += 4
            pos += 4
        elif spec.startswith("MM", i):
            if m_off >= 0:
                raise ValueError("MM given twice in date format")
            m_off = pos
            i += 2
            pos += 2
        elif spec.startswith("DD", i):
            if d_off >= 0:
                raise ValueError("DD given twice in date format")
            d_off = pos
            i += 2
            pos += 2
        elif spec[i] in "YMD":
            raise ValueError(f"stray {spec[i]!r} in date format {spec!r}")
        else:
            literals.append((pos, spec[i]))
            i += 1
            pos += 1
    if y_off < 0 or m_off < 0 or d_off < 0:
        raise ValueError(f"date format {spec!r} must contain YYYY, MM and DD")
    return DateFormat(spec, pos, y_off, m_off, d_off, tuple(literals))


ISO_FORMAT = compile_date_format(ISO_FORMAT_SPEC)

_DAYS_IN_MONTH = (0, 31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)


def days_in_month(y: int, m: int) -> int:
    if m == 2 and (y % 4 == 0 and (y % 100 != 0 or y % 400 == 0)):
        return 29
    return _DAYS_IN_MONTH[m]


def parse_date_text(t: str, df: DateFormat) -> date | None:
    """Parse trimmed text against a compiled format; None on mismatch."""
    if len(t) != df.length:
        return None
    for off, ch in df.literals:
        if t[off] != ch:
            return None
    ys = t[df.y_off : df.y_off + 4]
    ms = t[df.m_off : df.m_off + 2]
    ds = t[df.d_off : df.d_off + 2]
    if not (ys.isascii() and ys.isdigit() and ms.isascii() and ms.isdigit() and ds.isascii() and ds.isdigit()):
        return None
    y, m, d = int(ys), int(ms), int(ds)
    if y < 1 or m < 1 or m > 12 or d < 1 or d > days_in_month(y, m):
        return None
    return date(y, m, d)


def type_failure_reason(tcode: int, targ) -> str:
    if tcode == T_INTEGER:
        return "not a 64-bit integer"
    if tcode == T_DECIMAL:
        return "not a decimal number"
    if tcode == T_DATE:
        return f"not a date in format {targ.spec}"
    if tcode == T_ENUM:
        return "not one of the enumerated values"
    raise AssertionError(f"type code {tcode} cannot fail")


def parse_cell(raw: str, tcode: int, targ, null_tokens: tuple[str, ...]):
    """Reference single-cell parser; the row kernels mirror it exactly."""
    t = raw.strip(ASCII_WS)
    if t in null_tokens:
        return None
    if tcode == T_TEXT:
        return t
    if tcode == T_INTEGER:
        if INT_RE.fullmatch(t) is None:
            return ParseFailure(raw, type_failure_reason(tcode, targ))
        v = int(t)
        if v < INT64_MIN or v > INT64_MAX:
            return ParseFailure(raw, "integer out of 64-bit range")
        return v
    if tcode == T_DECIMAL:
        if DEC_RE.fullmatch(t) is None:
            return ParseFailure(raw, type_failure_reason(tcode, targ))
        return Decimal(t)
    if tcode == T_DATE:
        d = parse_date_text(t, targ)
        if d is None:
            return ParseFailure(raw, type_failure_reason(tcode, targ))
        return d
    if tcode == T_ENUM:
        if t in targ:
            return t
        return ParseFailure(raw, type_failure_reason(tcode, targ))
    raise ValueError(f"unknown type code {tcode}")


def format_decimal(d: Decimal) -> str:
    """Plain (never scientific) exact notation; round-trips via Decimal()."""
    return format(d, "f")
