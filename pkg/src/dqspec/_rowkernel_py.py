"""Pure-Python row kernel.

Evaluates one record's field program: typed parsing plus all stateless
field constraints. The compiled kernel in _rowkernel_c.pyx mirrors this
behavior exactly; differential tests keep the two in lockstep.

A field program is a tuple of per-field entries:

    (col, tcode, targ, null_tokens, type_eidx, constraints)

where constraints is a tuple of (ccode, eidx, arg). eval_fields returns
(values, violations): values holds one parsed value per program entry
(None for null, PARSE_FAILED sentinel for parse failures) and
violations holds emitter indexes in program order.
"""

from __future__ import annotations

from decimal import Decimal

from .values import (
    ASCII_WS,
    C_IN_REF,
    C_MATCHES,
    C_MAX,
    C_MAXLEN,
    C_MIN,
    C_MINLEN,
    C_NOT_NULL,
    DEC_RE,
    INT64_MAX,
    INT64_MIN,
    INT_RE,
    PARSE_FAILED,
    T_DATE,
    T_DECIMAL,
    T_ENUM,
    T_INTEGER,
    T_TEXT,
    parse_date_text,
)

KERNEL_NAME = "python"


def eval_fields(cells, prog):
    values = []
    viols = []
    for col, tcode, targ, null_tokens, type_eidx, constraints in prog:
        raw = cells[col]
        t = raw.strip(ASCII_WS)
        if t in null_tokens:
            values.append(None)
            for ccode, eidx, _arg in constraints:
                if ccode == C_NOT_NULL:
                    viols.append(eidx)
            continue
        if tcode == T_TEXT:
            v = t
        elif tcode == T_INTEGER:
            if INT_RE.fullmatch(t) is None:
                values.append(PARSE_FAILED)
                viols.append(type_eidx)
                continue
            v = int(t)
            if v < INT64_MIN or v > INT64_MAX:
                values.append(PARSE_FAILED)
                viols.append(type_eidx)
                continue
        elif tcode == T_DATE:
            v = parse_date_text(t, targ)
            if v is None:
                values.append(PARSE_FAILED)
                viols.append(type_eidx)
                continue
        elif tcode == T_DECIMAL:
            if DEC_RE.fullmatch(t) is None:
                values.append(PARSE_FAILED)
                viols.append(type_eidx)
                continue
            v = Decimal(t)
        elif tcode == T_ENUM:
            if t not in targ:
                values.append(PARSE_FAILED)
                viols.append(type_eidx)
                continue
            v = t
        else:
            raise ValueError(f"unknown type code {tcode}")
        values.append(v)
        for ccode, eidx, arg in constraints:
            if ccode == C_MATCHES:
                if arg.fullmatch(t) is None:
                    viols.append(eidx)
            elif ccode == C_MIN:
                if v < arg:
                    viols.append(eidx)
            elif ccode == C_MAX:
                if v > arg:
                    viols.append(eidx)
            elif ccode == C_MINLEN:
                if len(t) < arg:
                    viols.append(eidx)
            elif ccode == C_MAXLEN:
                if len(t) > arg:
                    viols.append(eidx)
            elif ccode == C_IN_REF:
                if t not in arg:
                    viols.append(eidx)
            # C_NOT_NULL holds: the value is present
    return values, viols
