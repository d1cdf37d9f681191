"""JSON and CSV formats for symbols, matrices, inner functions and reports.

Complex numbers are always written as ``[re, im]`` pairs.
"""
from __future__ import annotations

import csv
import io as _io
import json

import numpy as np

from .operators import H2Window, L2Window, ModelBasis, OperatorMatrix, SymbolPair
from .trigpoly import TrigPoly


class FormatError(ValueError):
    """A file does not follow the expected schema."""


def _cpair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _complex(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise FormatError("expected [re, im], got %r" % (v,))
    return complex(float(v[0]), float(v[1]))


# -- symbols ---------------------------------------------------------------------

def symbol_to_dict(p: TrigPoly) -> dict:
    blocks = [[[_cpair(x) for x in row] for row in blk] for blk in p.coeffs]
    return {"block_dim": p.block_dim, "lo": p.lo, "coeffs": blocks}


def symbol_from_dict(obj: dict) -> TrigPoly:
    try:
        lo = int(obj["lo"])
        raw = obj["coeffs"]
    except (KeyError, TypeError) as exc:
        raise FormatError("symbol needs 'lo' and 'coeffs'") from exc
    if not isinstance(raw, list) or not raw:
        raise FormatError("symbol 'coeffs' must be a non-empty list")
    d = int(obj.get("block_dim", 1))
    if "block_dim" not in obj:
        return TrigPoly(lo, [_complex(c) for c in raw])
    blocks = []
    for blk in raw:
        arr = np.array([[_complex(x) for x in row] for row in blk])
        if arr.shape != (d, d):
            raise FormatError("block of shape %s, expected (%d, %d)" % (arr.shape, d, d))
        blocks.append(arr)
    return TrigPoly(lo, np.stack(blocks))


# -- matrices --------------------------------------------------------------------

def matrix_to_dict(A: OperatorMatrix) -> dict:
    b = A.basis
    out = {"basis": {H2Window: "H2", L2Window: "L2", ModelBasis: "Ktheta"}[type(b)]}
    if isinstance(b, H2Window):
        out["N"] = b.N
    elif isinstance(b, L2Window):
        out["M"] = b.M
    else:
        out["dim"] = b.dim
        out["convention"] = b.convention
        if b.theta is not None:
            out["theta"] = symbol_to_dict(b.theta)
    out["block_dim"] = A.block_dim
    out["rows"] = [[_cpair(x) for x in row] for row in A.data]
    return out


def matrix_from_dict(obj: dict) -> OperatorMatrix:
    try:
        kind = obj["basis"]
        rows = obj["rows"]
    except (KeyError, TypeError) as exc:
        raise FormatError("matrix needs 'basis' and 'rows'") from exc
    d = int(obj.get("block_dim", 1))
    try:
        if kind == "H2":
            basis = H2Window(int(obj["N"]))
        elif kind == "L2":
            basis = L2Window(int(obj["M"]))
        elif kind == "Ktheta":
            theta = symbol_from_dict(obj["theta"]) if "theta" in obj else None
            basis = ModelBasis(int(obj["dim"]), theta, obj.get("convention", ModelBasis.convention))
        else:
            raise FormatError("unknown basis %r" % (kind,))
    except KeyError as exc:
        raise FormatError("basis %r needs size field %s" % (kind, exc)) from exc
    data = np.array([[_complex(x) for x in row] for row in rows], dtype=complex)
    try:
        return OperatorMatrix(data, basis, d)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def matrix_to_csv(A: OperatorMatrix) -> str:
    """One line per row, real and imaginary parts interleaved."""
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in A.data:
        w.writerow([repr(float(v)) for z in row for v in (z.real, z.imag)])
    return buf.getvalue()


def matrix_from_csv(text: str, basis, block_dim: int = 1) -> OperatorMatrix:
    rows = [r for r in csv.reader(_io.StringIO(text)) if r]
    vals = np.array(rows, dtype=float)
    return OperatorMatrix(vals[:, 0::2] + 1j * vals[:, 1::2], basis, block_dim)


# -- inner functions -------------------------------------------------------------

def blaschke_to_dict(spec) -> dict:
    return {"zeros": [_cpair(a) for a in spec.zeros], "const": _cpair(spec.const)}


def theta_from_dict(obj: dict):
    """A ``BlaschkeSpec`` (``{"zeros": ..., "const": ...}``) or an analytic symbol."""
    from .modelspace import BlaschkeSpec

    if "zeros" in obj:
        try:
            return BlaschkeSpec(tuple(_complex(a) for a in obj["zeros"]), _complex(obj.get("const", 1.0)))
        except ValueError as exc:
            raise FormatError(str(exc)) from exc
    return symbol_from_dict(obj)


# -- reports ---------------------------------------------------------------------

def _plain(v):
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, (np.integer, int)):
        return int(v)
    if isinstance(v, (np.floating, float)):
        return float(v)
    return v


def report_to_dict(rep) -> dict:
    rec = None
    if rep.recovered is not None:
        rec = {"phi": symbol_to_dict(rep.recovered.phi), "psi": symbol_to_dict(rep.recovered.psi)}
    out = {
        "verdict": bool(rep.verdict),
        "residual": float(rep.residual),
        "guard": int(rep.guard),
        "recovered": rec,
        "gauge_note": rep.gauge_note,
        "details": {k: _plain(v) for k, v in rep.details.items()},
    }
    if rep.symbols:
        out["symbols"] = {k: symbol_to_dict(v) for k, v in rep.symbols.items()}
    return out


def report_from_dict(obj: dict):
    from .report import ClassReport

    rec = obj.get("recovered")
    pair = None
    if rec is not None:
        pair = SymbolPair(symbol_from_dict(rec["phi"]), symbol_from_dict(rec["psi"]))
    syms = {k: symbol_from_dict(v) for k, v in obj.get("symbols", {}).items()}
    return ClassReport(bool(obj["verdict"]), float(obj["residual"]), int(obj.get("guard", 0)), pair,
                       obj.get("gauge_note", ""), dict(obj.get("details", {})), syms)


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError("%s: %s" % (path, exc)) from exc


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=1)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text
