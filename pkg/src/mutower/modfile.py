"""Module-description (JSON) and tower (CSV) file formats.

A module file is a JSON object

    {"ring": {"p": 3, "e": 1, "f": 1},
     "group": {"kind": "abelian", "r": 1},
     "gens": 2, "rels": 2,
     "matrix": [[[{"c": ["3"], "e": [0]}], []], ...]}

where matrix[i][j] is the list of terms of the (i, j) entry, each term being
the exact O-coefficient vector c (arbitrary-precision integers as decimal
strings) and the generator-exponent tuple e.  A tower file is a CSV with
header ``n,m,ord``.
"""

from __future__ import annotations

import csv
import json
from typing import Dict, Tuple

from .chainring import RingBase
from .compare import TowerSeries
from .errors import InvalidInput
from .groupring import ABELIAN, METACYCLIC, GroupRingPoly, GroupSpec, _norm_terms
from .lambda_mod import Presentation


def presentation_to_dict(P: Presentation) -> dict:
    return {
        "ring": {"p": P.base.p, "e": P.base.e, "f": P.base.f},
        "group": {"kind": P.spec.kind, "r": P.spec.r},
        "gens": P.gens,
        "rels": P.rels,
        "matrix": [
            [
                [
                    {"c": [str(c) for c in coeffs], "e": list(exps)}
                    for coeffs, exps in entry.terms
                ]
                for entry in row
            ]
            for row in P.matrix
        ],
    }


def _as_int(v) -> int:
    if isinstance(v, bool):
        raise InvalidInput(f"expected an integer, got {v!r}")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v, 10)
        except ValueError as exc:
            raise InvalidInput(f"bad integer literal {v!r}") from exc
    raise InvalidInput(f"expected an integer, got {v!r}")


def presentation_from_dict(d: dict) -> Presentation:
    try:
        ring = d["ring"]
        group = d["group"]
        gens = _as_int(d["gens"])
        rels = _as_int(d["rels"])
        matrix = d["matrix"]
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"module file missing field: {exc}") from exc
    base = RingBase(_as_int(ring["p"]), _as_int(ring["e"]), _as_int(ring["f"]))
    kind = group.get("kind")
    if kind == ABELIAN:
        spec = GroupSpec.abelian(base.p, _as_int(group["r"]))
    elif kind == METACYCLIC:
        spec = GroupSpec.metacyclic(base.p)
        if "r" in group and _as_int(group["r"]) != 2:
            raise InvalidInput("metacyclic preset has r = 2")
    else:
        raise InvalidInput(f"unknown group kind {kind!r}")
    if len(matrix) != rels:
        raise InvalidInput(f"matrix has {len(matrix)} rows, expected rels = {rels}")
    rows = []
    for i, row in enumerate(matrix):
        if len(row) != gens:
            raise InvalidInput(f"matrix row {i} has {len(row)} entries, expected {gens}")
        out_row = []
        for j, entry in enumerate(row):
            terms = []
            for t in entry:
                try:
                    c = tuple(_as_int(x) for x in t["c"])
                    e = tuple(_as_int(x) for x in t["e"])
                except (KeyError, TypeError) as exc:
                    raise InvalidInput(f"bad term at matrix[{i}][{j}]: {exc}") from exc
                terms.append((c, e))
            out_row.append(_norm_terms(terms) if terms else GroupRingPoly(()))
        rows.append(tuple(out_row))
    return Presentation(spec, base, gens, rels, tuple(rows))


def save_presentation(P: Presentation, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(presentation_to_dict(P), fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_presentation(path: str) -> Presentation:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidInput(
                f"{path}: JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc
    return presentation_from_dict(data)


def load_tower_csv(path: str, p: int, r: int, label: str = "") -> TowerSeries:
    data: Dict[Tuple[int, int], int] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InvalidInput(f"{path}: empty tower file") from None
        if [h.strip() for h in header] != ["n", "m", "ord"]:
            raise InvalidInput(f"{path}: expected header 'n,m,ord', got {header!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 3:
                raise InvalidInput(f"{path}: line {lineno}: expected 3 fields")
            try:
                n, m, o = (int(c.strip(), 10) for c in row)
            except ValueError as exc:
                raise InvalidInput(f"{path}: line {lineno}: {exc}") from exc
            if (n, m) in data:
                raise InvalidInput(f"{path}: line {lineno}: duplicate grid point ({n}, {m})")
            data[(n, m)] = o
    return TowerSeries(r=r, p=p, data=data, label=label or path)


def save_tower_csv(series: TowerSeries, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "m", "ord"])
        for (n, m) in sorted(series.data):
            writer.writerow([n, m, series.data[(n, m)]])
