# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled row kernel; mirrors _rowkernel_py.eval_fields exactly.

Integer and date parsing run as C scans over the trimmed text; decimal
validation shares the module-level regex with the pure kernel so both
accept exactly the same grammar.
"""

from datetime import date as _date
from decimal import Decimal as _Decimal

from dqspec.values import DEC_RE, PARSE_FAILED

KERNEL_NAME = "compiled"

cdef object _dec_fullmatch = DEC_RE.fullmatch
cdef object _parse_failed = PARSE_FAILED

DEF T_TEXT = 0
DEF T_INTEGER = 1
DEF T_DECIMAL = 2
DEF T_DATE = 3
DEF T_ENUM = 4

DEF C_NOT_NULL = 1
DEF C_MATCHES = 2
DEF C_MIN = 3
DEF C_MAX = 4
DEF C_MINLEN = 5
DEF C_MAXLEN = 6
DEF C_IN_REF = 7

cdef int _DAYS_IN_MONTH[13]
_DAYS_IN_MONTH[:] = [0, 31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31]


cdef inline bint _is_ascii_ws(Py_UCS4 ch):
    return ch == 0x20 or ch == 0x09 or ch == 0x0D or ch == 0x0A or ch == 0x0C or ch == 0x0B


cdef unicode _trim(unicode s):
    cdef Py_ssize_t n = len(s)
    cdef Py_ssize_t a = 0
    cdef Py_ssize_t b = n
    while a < b and _is_ascii_ws(s[a]):
        a += 1
    while b > a and _is_ascii_ws(s[b - 1]):
        b -= 1
    if a == 0 and b == n:
        return s
    return s[a:b]


cdef object _parse_int(unicode t):
    """Signed 64-bit integer with the [+-]?[0-9]+ grammar; None on failure."""
    cdef Py_ssize_t n = len(t)
    cdef Py_ssize_t i = 0
    cdef bint neg = False
    cdef unsigned long long acc = 0
    cdef Py_UCS4 ch
    if n == 0:
        return None
    ch = t[0]
    if ch == u'+' or ch == u'-':
        neg = ch == u'-'
        i = 1
        if n == 1:
            return None
    while i < n:
        ch = t[i]
        if ch < u'0' or ch > u'9':
            return None
        if acc > 922337203685477580ULL:
            return None
        acc = acc * 10 + (<unsigned long long> ch - 48)
        i += 1
    if neg:
        if acc > 9223372036854775808ULL:
            return None
        if acc == 9223372036854775808ULL:
            return -9223372036854775807 - 1
        return -(<long long> acc)
    if acc > 9223372036854775807ULL:
        return None
    return <long long> acc


cdef inline int _two_digits(unicode t, Py_ssize_t off):
    cdef Py_UCS4 a = t[off]
    cdef Py_UCS4 b = t[off + 1]
    if a < u'0' or a > u'9' or b < u'0' or b > u'9':
        return -1
    return (<int> a - 48) * 10 + (<int> b - 48)


cdef object _parse_date(unicode t, object df):
    cdef Py_ssize_t n = len(t)
    cdef int length = df.length
    cdef int y_off = df.y_off
    cdef int m_off = df.m_off
    cdef int d_off = df.d_off
    cdef int y, m, d, hi, lo, dim
    cdef Py_ssize_t off
    if n != length:
        return None
    for off, ch in df.literals:
        if t[off] != ch:
            return None
    hi = _two_digits(t, y_off)
    lo = _two_digits(t, y_off + 2)
    if hi < 0 or lo < 0:
        return None
    y = hi * 100 + lo
    m = _two_digits(t, m_off)
    d = _two_digits(t, d_off)
    if y < 1 or m < 1 or m > 12 or d < 1:
        return None
    dim = _DAYS_IN_MONTH[m]
    if m == 2 and (y % 4 == 0 and (y % 100 != 0 or y % 400 == 0)):
        dim = 29
    if d > dim:
        return None
    return _date(y, m, d)


def eval_fields(list cells, tuple prog):
    cdef list values = []
    cdef list viols = []
    cdef tuple fentry, constraints, centry
    cdef Py_ssize_t fi, ci, ncons
    cdef int tcode, ccode
    cdef object targ, raw, v, arg
    cdef unicode t
    for fi in range(len(prog)):
        fentry = <tuple> prog[fi]
        raw = cells[<Py_ssize_t> fentry[0]]
        tcode = <int> fentry[1]
        targ = fentry[2]
        t = _trim(<unicode> raw)
        if t in <tuple> fentry[3]:
            values.append(None)
            constraints = <tuple> fentry[5]
            for ci in range(len(constraints)):
                centry = <tuple> constraints[ci]
                if <int> centry[0] == C_NOT_NULL:
                    viols.append(centry[1])
            continue
        if tcode == T_TEXT:
            v = t
        elif tcode == T_INTEGER:
            v = _parse_int(t)
            if v is None:
                values.append(_parse_failed)
                viols.append(fentry[4])
                continue
        elif tcode == T_DATE:
            v = _parse_date(t, targ)
            if v is None:
                values.append(_parse_failed)
                viols.append(fentry[4])
                continue
        elif tcode == T_DECIMAL:
            if _dec_fullmatch(t) is None:
                values.append(_parse_failed)
                viols.append(fentry[4])
                continue
            v = _Decimal(t)
        elif tcode == T_ENUM:
            if t not in targ:
                values.append(_parse_failed)
                viols.append(fentry[4])
                continue
            v = t
        else:
            raise ValueError(f"unknown type code {tcode}")
        values.append(v)
        constraints = <tuple> fentry[5]
        ncons = len(constraints)
        for ci in range(ncons):
            centry = <tuple> constraints[ci]
            ccode = <int> centry[0]
            arg = centry[2]
            if ccode == C_MATCHES:
                if arg.fullmatch(t) is None:
                    viols.append(centry[1])
            elif ccode == C_MIN:
                if v < arg:
                    viols.append(centry[1])
            elif ccode == C_MAX:
                if v > arg:
                    viols.append(centry[1])
            elif ccode == C_MINLEN:
                if len(t) < <Py_ssize_t> arg:
                    viols.append(centry[1])
            elif ccode == C_MAXLEN:
                if len(t) > <Py_ssize_t> arg:
                    viols.append(centry[1])
            elif ccode == C_IN_REF:
                if t not in arg:
                    viols.append(centry[1])
    return values, viols
