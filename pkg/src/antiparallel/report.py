"""
Input documents and report serialization for the command-line front end.

A vector-set document is UTF-8 JSON holding exactly one of

* ``"vectors"``: list of ``[x, y, z]`` triples, or
* ``"angles"``: list of ``[theta, phi]`` pairs in radians,

plus optional ``"labels"`` (strings) and ``"priors"`` (reals). Unknown keys
are ignored, which lets a JSON report be fed back in as a document.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from .bloch import BlochVector, GreatCircle, NoFit
from .errors import AntiparallelError
from .protrans import (
    AsymmetryReport,
    Impossible,
    Probabilistic,
    PsdInfeasible,
    RankObstruction,
    USDResult,
)
from .states import Exact, Infeasible

log = logging.getLogger(__name__)

UNIT_WARN_TOL = 1e-6


class DocumentError(Exception):
    """The input could not be read or parsed (exit code 2)."""


class ValidationError(AntiparallelError):
    """The input parsed but violates the document rules (exit code 3)."""


@dataclass
class VectorSet:
    vectors: list[BlochVector]
    labels: Optional[list[str]] = None
    priors: Optional[list[float]] = None

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"n{i + 1}"


def _rows(raw: Any, width: int, key: str) -> np.ndarray:
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"{key!r} must be a list of numeric {width}-lists") from exc
    if arr.ndim != 2 or arr.shape[1] != width or arr.shape[0] == 0:
        raise DocumentError(f"{key!r} must be a non-empty list of {width}-lists")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{key!r} contains non-finite numbers")
    return arr


def parse_document(doc: Any) -> VectorSet:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    has_v, has_a = "vectors" in doc, "angles" in doc
    if has_v == has_a:
        raise DocumentError("document needs exactly one of 'vectors' or 'angles'")

    if has_v:
        arr = _rows(doc["vectors"], 3, "vectors")
    else:
        ang = _rows(doc["angles"], 2, "angles")
        th, ph = ang[:, 0], ang[:, 1]
        arr = np.column_stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])

    vectors = []
    for i, v in enumerate(arr):
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            raise ValidationError(f"vector {i} is zero")
        if abs(norm - 1.0) > UNIT_WARN_TOL:
            log.warning("vector %d has norm %.10g; normalizing", i, norm)
        # leave near-unit input bit-identical so emitted reports re-load exactly
        if abs(norm - 1.0) > 1e-12:
            v = v / norm
        vectors.append(BlochVector.from_array(v))

    labels = doc.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels):
            raise DocumentError("'labels' must be a list of strings")
        if len(labels) != len(vectors):
            raise ValidationError(f"{len(labels)} labels for {len(vectors)} vectors")

    priors = doc.get("priors")
    if priors is not None:
        try:
            priors = [float(p) for p in priors]
        except (TypeError, ValueError) as exc:
            raise DocumentError("'priors' must be a list of numbers") from exc
        if len(priors) != len(vectors):
            raise ValidationError(f"{len(priors)} priors for {len(vectors)} vectors")
    return VectorSet(vectors, labels, priors)


def load_document(path: Union[str, Path]) -> VectorSet:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON ({exc})") from exc
    return parse_document(doc)


def circle_dict(circle: Union[GreatCircle, NoFit]) -> dict:
    if isinstance(circle, GreatCircle):
        return {"fit": True, "normal": circle.normal.as_array().tolist()}
    return {"fit": False, "residual": circle.residual}


def verdict_dict(result) -> dict:
    if isinstance(result, Exact):
        return {"verdict": "exact", "phases": list(result.phases)}
    if isinstance(result, Infeasible):
        return {
            "verdict": "infeasible",
            "pair": list(result.pair),
            "kind": result.kind,
            "residual": result.residual,
        }
    if isinstance(result, Probabilistic):
        return {
            "verdict": "probabilistic",
            "gamma": result.gamma,
            "phases": list(result.phases),
            "certificate": result.certificate,
        }
    if isinstance(result, Impossible):
        reason = result.reason
        if isinstance(reason, RankObstruction):
            return {
                "verdict": "impossible",
                "reason": "rank_obstruction",
                "rank_in": reason.rank_in,
                "rank_out": reason.rank_out,
            }
        assert isinstance(reason, PsdInfeasible)
        return {"verdict": "impossible", "reason": "psd_infeasible"}
    raise TypeError(f"not a verdict: {result!r}")


def usd_dict(result: USDResult) -> dict:
    return {"value": result.value, "gammas": list(result.gammas)}


def report_dict(report: AsymmetryReport, labels: Optional[list[str]] = None) -> dict:
    out = {
        "vectors": [v.as_array().tolist() for v in report.vectors],
        "tol": report.tol,
        "circle": circle_dict(report.circle),
        "dims": {"parallel": report.dims[0], "antiparallel": report.dims[1]},
        "exact_pa": verdict_dict(report.exact_pa),
        "exact_ap": verdict_dict(report.exact_ap),
        "protrans_pa": verdict_dict(report.protrans_pa),
        "protrans_ap": verdict_dict(report.protrans_ap),
        "usd_parallel": usd_dict(report.usd_parallel),
        "usd_antiparallel": usd_dict(report.usd_antiparallel),
    }
    if labels:
        out["labels"] = list(labels)
    return out


def fmt(x: float) -> str:
    """Ten significant digits."""
    return f"{x:.10g}"


def fmt_complex(z: complex) -> str:
    re, im = float(np.real(z)), float(np.imag(z))
    re = 0.0 if abs(re) < 1e-15 else re
    im = 0.0 if abs(im) < 1e-15 else im
    if im == 0.0:
        return fmt(re)
    if re == 0.0:
        return f"{fmt(im)}j"
    return f"{fmt(re)}{'+' if im >= 0 else '-'}{fmt(abs(im))}j"


def format_matrix(m: np.ndarray) -> str:
    cells = [[fmt_complex(z) for z in row] for row in np.asarray(m)]
    width = max(len(c) for row in cells for c in row)
    return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)


def verdict_text(result) -> str:
    d = verdict_dict(result)
    v = d["verdict"]
    if v == "exact":
        return "exact (phases " + ", ".join(fmt(p) for p in d["phases"]) + ")"
    if v == "infeasible":
        i, j = d["pair"]
        return f"infeasible ({d['kind']} mismatch at pair ({i}, {j}), residual {fmt(d['residual'])})"
    if v == "probabilistic":
        return f"probabilistic (gamma* = {fmt(d['gamma'])}, certificate {fmt(d['certificate'])})"
    if d["reason"] == "rank_obstruction":
        return f"impossible (rank obstruction: span {d['rank_in']} -> {d['rank_out']})"
    return "impossible (no positive gamma is PSD-feasible)"


def report_text(report: AsymmetryReport) -> str:
    if isinstance(report.circle, GreatCircle):
        circ = "yes, normal (" + ", ".join(fmt(c) for c in report.circle.normal.as_array()) + ")"
    else:
        circ = f"no (residual {fmt(report.circle.residual)})"
    lines = [
        f"vectors:               {len(report.vectors)}",
        f"great circle:          {circ}",
        f"span dims (P, A):      ({report.dims[0]}, {report.dims[1]})",
        f"exact P->A:            {verdict_text(report.exact_pa)}",
        f"exact A->P:            {verdict_text(report.exact_ap)}",
        f"probabilistic P->A:    {verdict_text(report.protrans_pa)}",
        f"probabilistic A->P:    {verdict_text(report.protrans_ap)}",
        f"USD success, parallel: {fmt(report.usd_parallel.value)}",
        f"USD success, anti:     {fmt(report.usd_antiparallel.value)}",
    ]
    return "\n".join(lines)
