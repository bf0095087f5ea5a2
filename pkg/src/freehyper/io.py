"""Canonical text forms for rationals, matrices, sequences and reports."""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

import numpy as np

from .partitions import SetPartition


def fraction_str(x) -> str:
    """``"p/q"`` in lowest terms with positive denominator (integers as ``"p/1"``)."""
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return fraction_str(obj)
    if isinstance(obj, complex):
        return [round(obj.real, 12), round(obj.imag, 12)]
    if isinstance(obj, SetPartition):
        return str(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, canonical rationals."""
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def matrix_to_rows(mat) -> list[list[str]]:
    """Rows of ``"p/q"`` strings from an ``ExactMatrix``."""
    d = mat.denominator
    return [[fraction_str(Fraction(int(x), d)) for x in row] for row in mat.numerators]


def matrix_to_csv(mat) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["partition"] + [str(p) for p in mat.family.members])
    for p, row in zip(mat.family.members, matrix_to_rows(mat)):
        w.writerow([str(p)] + row)
    return buf.getvalue()


def matrix_to_json(mat) -> str:
    return dumps({
        "kind": mat.family.kind.value,
        "k": mat.family.k,
        "m": mat.m,
        "index": [str(p) for p in mat.family.members],
        "rgs": [p.rgs_string() for p in mat.family.members],
        "entries": matrix_to_rows(mat),
    })


def matrix_from_json(text: str) -> list[list[Fraction]]:
    data = json.loads(text)
    return [[Fraction(x) for x in row] for row in data["entries"]]


def sequence_to_json(seq) -> str:
    return dumps([fraction_str(v) for v in seq])


def table_to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fraction_str(v) if isinstance(v, Fraction) else v for v in r])
    return buf.getvalue()


def cocycle_to_csv(cocycle) -> str:
    """Integer exponent table ``e`` with ``sigma(g, h) = w^e``; rows/cols ``(i,j)`` in ``i*n+j`` order."""
    from .twist import group_elements

    els = group_elements(cocycle.n)
    table = cocycle.exponent_table()
    header = ["g\\h"] + [f"({g.i},{g.j})" for g in els]
    rows = [[f"({g.i},{g.j})"] + [int(x) for x in table[a]] for a, g in enumerate(els)]
    return table_to_csv(header, rows)
