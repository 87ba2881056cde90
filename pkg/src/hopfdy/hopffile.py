"""JSON interchange format for Hopf algebras and sparse tensors.

A Hopf file looks like

    {
      "format_version": 1,
      "dim": 2,
      "basis_labels": ["1", "g"],
      "mult":    [[i, j, k, "p/q"], ...],   # coeff of e_k in e_i e_j
      "comult":  [[i, j, k, "p/q"], ...],   # coeff of e_j ox e_k in Delta(e_i)
      "unit":    [[i, "p/q"], ...],
      "counit":  [[i, "p/q"], ...],
      "antipode": [[i, j, "p/q"], ...]      # coeff of e_i in S(e_j)
    }

Rationals travel as exact "p/q" strings.  Sparse tensor elements serialize
as [[indices...], "p/q"] pairs sorted lexicographically.  Loading verifies
every Hopf axiom and rejects the file with the violation report otherwise.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .algcore import Algebra
from .exactlin import SparseMatrix, TensorElement, fr
from .hopfcore import HopfAlgebra, verify_hopf

FORMAT_VERSION = 1


class HopfFileError(Exception):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report or []


def rational_str(x: Fraction) -> str:
    x = fr(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def tensor_to_json(u: TensorElement) -> list:
    return [[list(k), rational_str(v)] for k, v in sorted(u.coeffs.items())]


def tensor_from_json(ambient, degree: int, data) -> TensorElement:
    coeffs = {}
    for idx, val in data:
        coeffs[tuple(idx)] = fr(val)
    return TensorElement(ambient, degree, coeffs)


def vector_to_json(v: dict) -> list:
    return [[i, rational_str(c)] for i, c in sorted(v.items())]


def matrix_to_json(M: SparseMatrix) -> list:
    return [[r, c, rational_str(v)] for (r, c), v in sorted(M.entries.items())]


def hopf_to_json(H: HopfAlgebra) -> dict:
    mult = []
    for (i, j), vec in sorted(H.algebra.mult.items()):
        for k, v in sorted(vec.items()):
            mult.append([i, j, k, rational_str(v)])
    comult = []
    for i, de in enumerate(H.comult):
        for (j, k), v in sorted(de.coeffs.items()):
            comult.append([i, j, k, rational_str(v)])
    return {
        "format_version": FORMAT_VERSION,
        "dim": H.dim,
        "basis_labels": list(H.algebra.labels),
        "mult": mult,
        "comult": comult,
        "unit": vector_to_json(H.algebra.unit),
        "counit": vector_to_json(H.counit_row()),
        "antipode": matrix_to_json(H.antipode),
    }


def hopf_from_json(data: dict, name="file") -> HopfAlgebra:
    try:
        if data.get("format_version") != FORMAT_VERSION:
            raise HopfFileError("unsupported format_version %r"
                                % data.get("format_version"))
        dim = int(data["dim"])
        labels = data.get("basis_labels") or ["e%d" % i for i in range(dim)]
        mult: dict = {}
        for i, j, k, v in data["mult"]:
            mult.setdefault((i, j), {})[k] = fr(v)
        unit = {int(i): fr(v) for i, v in data["unit"]}
        A = Algebra(dim, labels, mult, unit, name=name)
        comult_entries = [dict() for _ in range(dim)]
        for i, j, k, v in data["comult"]:
            comult_entries[i][(j, k)] = fr(v)
        comult = [TensorElement(A, 2, c) for c in comult_entries]
        counit_map = {int(i): fr(v) for i, v in data["counit"]}
        counit = [counit_map.get(i, Fraction(0)) for i in range(dim)]
        antipode = SparseMatrix(dim, dim, {(r, c): fr(v)
                                           for r, c, v in data["antipode"]})
    except HopfFileError:
        raise
    except Exception as exc:
        raise HopfFileError("unparseable Hopf file: %s" % exc)
    H = HopfAlgebra(A, comult, counit, antipode, name=name)
    report = verify_hopf(H)
    if report:
        raise HopfFileError("file does not define a Hopf algebra", report)
    return H


def load_hopf(path: str) -> HopfAlgebra:
    with open(path) as f:
        data = json.load(f)
    return hopf_from_json(data, name=path)


def save_hopf(H: HopfAlgebra, path: str):
    with open(path, "w") as f:
        json.dump(hopf_to_json(H), f, indent=1, sort_keys=True)
        f.write("\n")
