"""JSON forms of cuspidal divisors and exponent vectors.

Divisor:  {"level": N, "entries": [{"c": int, "a": int, "mult": "p/q"}, ...]}
Vector:   {"level": N, "entries": [{"m": int, "k": int, "e": int}, ...]}
"""

import json
from fractions import Fraction

from .curve import CuspidalDivisor, level_new, make_cusp
from .eta import ExponentVector, EtaLabel, h_of


class SchemaError(ValueError):
    pass


def _int(obj, key):
    v = obj.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"field {key!r} must be an integer, got {v!r}")
    return v


def _entries(obj):
    if not isinstance(obj, dict):
        raise SchemaError("expected a JSON object")
    entries = obj.get("entries")
    if not isinstance(entries, list) or not all(isinstance(e, dict) for e in entries):
        raise SchemaError("field 'entries' must be a list of objects")
    return _int(obj, "level"), entries


def divisor_to_json(D):
    entries = [{"c": x.c, "a": x.a, "mult": str(v)} for x, v in sorted(D.coefficients.items())]
    return {"level": D.level.N, "entries": entries}


def divisor_from_json(obj):
    N, entries = _entries(obj)
    level = level_new(N)
    coeffs = {}
    for e in entries:
        try:
            mult = Fraction(str(e.get("mult")))
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad multiplicity {e.get('mult')!r}") from exc
        try:
            x = make_cusp(level, _int(e, "c"), _int(e, "a"))
        except ValueError as exc:
            raise SchemaError(str(exc)) from exc
        coeffs[x] = coeffs.get(x, 0) + mult
    return CuspidalDivisor(level, coeffs)


def vector_to_json(v):
    entries = [{"m": lab.m, "k": lab.k, "e": e} for lab, e in v.items()]
    return {"level": v.level.N, "entries": entries}


def vector_from_json(obj):
    """Parse an exponent vector; k must already lie in 0 <= k < h(m)."""
    N, entries = _entries(obj)
    level = level_new(N)
    out = {}
    for e in entries:
        m, k, x = _int(e, "m"), _int(e, "k"), _int(e, "e")
        try:
            h = h_of(level, m)
        except ValueError as exc:
            raise SchemaError(str(exc)) from exc
        if not 0 <= k < h:
            raise SchemaError(f"label ({m},{k}) needs 0 <= k < h({m}) = {h}")
        lab = EtaLabel(m, k, h)
        out[lab] = out.get(lab, 0) + x
    return ExponentVector(level, out)


def dumps(obj):
    return json.dumps(obj, sort_keys=True)


def load_file(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: malformed JSON ({exc})") from exc
