"""Versioned JSON instance and report files.

Floats are written with Python's shortest round-trip ``repr`` and keys are
sorted, so ``dumps(loads(text)) == text`` holds byte for byte.
"""

from __future__ import annotations

import hashlib
import json
import math
from typing import Any, Dict, Optional, Tuple

import numpy as np

from .constructions import (
    AnnulusFamily,
    AnnulusReportParams,
    AnnulusStabParams,
    PointSet,
    SlabFamily,
    SlabReportParams,
    SlabStabParams,
)
from .geometry import Rect
from .poly import Interval

SCHEMA_VERSION = 1
INSTANCE_SCHEMA = "rangelb.instance"
REPORT_SCHEMA = "rangelb.report"


class FormatError(ValueError):
    pass


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, allow_nan=False) + "\n"


def digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


def _rect(r: Rect):
    return [r.lo.x, r.lo.y, r.hi.x, r.hi.y]


def _unrect(v) -> Rect:
    return Rect.from_bounds(*[float(x) for x in v])


# ---------------------------------------------------------------------------
# params


_PARAM_TYPES = {
    "slab-report": SlabReportParams,
    "slab-stab": SlabStabParams,
    "annulus-report": AnnulusReportParams,
    "annulus-stab": AnnulusStabParams,
}


def params_to_dict(params) -> Dict:
    return params.echo()


def params_from_dict(kind: str, d: Dict):
    if kind == "slab-report":
        return SlabReportParams(
            n=d["n"], delta=d["delta"], q=d["q"], c=d["c"], log_base=d["log_base"],
            w_override=d["w_override"],
            d_override=None if d["d_override"] is None else tuple(d["d_override"]),
        )
    if kind == "slab-stab":
        return SlabStabParams(
            n=d["n"], delta=d["delta"], q=d["q"], c1=d["c1"], c2=d["c2"],
            w_override=d["w_override"],
            d_override=None if d["d_override"] is None else tuple(d["d_override"]),
        )
    if kind == "annulus-report":
        return AnnulusReportParams(
            n=d["n"], q=d["q"], c_prime=d["c_prime"], log_base=d["log_base"],
            w_override=d["w_override"], T_override=d["T_override"],
        )
    if kind == "annulus-stab":
        return AnnulusStabParams(n=d["n"], q=d["q"], w_override=d["w_override"],
                                 T_override=d["T_override"])
    raise FormatError(f"unknown instance kind {kind!r}")


# ---------------------------------------------------------------------------
# instances


def instance_to_dict(family, points: Optional[PointSet], seed: Optional[int]) -> Dict:
    params = family.params
    if isinstance(family, SlabFamily):
        ranges = {
            "type": "slabs",
            "w": family.w,
            "coeffs": family.coeffs.tolist(),
            "indices": family.indices.tolist(),
            "lead_scales": list(family.lead_scales),
            "domain": [family.domain.lo, family.domain.hi],
            "square": _rect(family.square),
        }
    elif isinstance(family, AnnulusFamily):
        ranges = {
            "type": "annuli",
            "w": family.w,
            "centers": np.stack([family.cx, family.cy], axis=1).tolist(),
            "r": family.r.tolist(),
            "grid": family.grid.tolist(),
            "ring": family.ring.tolist(),
            "square": _rect(family.point_square),
        }
    else:
        raise FormatError(f"cannot serialise {type(family).__name__}")
    out = {
        "schema": INSTANCE_SCHEMA,
        "schema_version": SCHEMA_VERSION,
        "kind": family.kind,
        "seed": seed,
        "params": params_to_dict(params),
        "provenance": params.provenance(),
        "family_size": len(family),
        "ranges": ranges,
        "points": None,
    }
    if points is not None:
        out["points"] = {
            "seed": points.seed,
            "square": _rect(points.square),
            "xy": np.stack([points.xs, points.ys], axis=1).tolist(),
        }
    return out


def instance_from_dict(d: Dict) -> Tuple[Any, Optional[PointSet], Dict]:
    try:
        if d.get("schema") != INSTANCE_SCHEMA:
            raise FormatError("not an instance file")
        if d.get("schema_version") != SCHEMA_VERSION:
            raise FormatError(f"unsupported schema version {d.get('schema_version')}")
        kind = d["kind"]
        params = params_from_dict(kind, d["params"])
        rg = d["ranges"]
        if rg["type"] == "slabs":
            coeffs = np.array(rg["coeffs"], dtype=float)
            family = SlabFamily(
                kind=kind,
                coeffs=coeffs.reshape(len(rg["coeffs"]), -1),
                w=float(rg["w"]),
                indices=np.array(rg["indices"], dtype=np.int64).reshape(len(rg["coeffs"]), -1),
                lead_scales=tuple(float(v) for v in rg["lead_scales"]),
                domain=Interval(float(rg["domain"][0]), float(rg["domain"][1])),
                square=_unrect(rg["square"]),
                params=params,
            )
        elif rg["type"] == "annuli":
            centers = np.array(rg["centers"], dtype=float).reshape(-1, 2)
            family = AnnulusFamily(
                kind=kind,
                cx=centers[:, 0].copy(),
                cy=centers[:, 1].copy(),
                r=np.array(rg["r"], dtype=float),
                w=float(rg["w"]),
                grid=np.array(rg["grid"], dtype=np.int64).reshape(-1, 2),
                ring=np.array(rg["ring"], dtype=np.int64),
                point_square=_unrect(rg["square"]),
                params=params,
            )
        else:
            raise FormatError(f"unknown range type {rg['type']!r}")
        if len(family) != d["family_size"]:
            raise FormatError("family_size does not match the stored ranges")
        points = None
        if d.get("points") is not None:
            p = d["points"]
            xy = np.array(p["xy"], dtype=float).reshape(-1, 2)
            points = PointSet(xy[:, 0].copy(), xy[:, 1].copy(), p["seed"], _unrect(p["square"]))
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, FormatError):
            raise
        raise FormatError(f"malformed instance: {e}") from e
    return family, points, d


def write_instance(path: str, family, points: Optional[PointSet], seed: Optional[int]) -> str:
    text = dumps(instance_to_dict(family, points, seed))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text


def read_instance(path: str):
    """Return ``(family, points, raw_dict, text)``."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise FormatError(f"cannot read instance: {e}") from e
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"instance is not valid JSON: {e}") from e
    family, points, raw = instance_from_dict(d)
    return family, points, raw, text


# ---------------------------------------------------------------------------
# reports


def _clean(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, np.generic):
        return _clean(v.item())
    return v


def report_to_dict(kind: str, instance_text: Optional[str], settings: Dict, payload: Dict,
                   implied: Dict, provenance: Dict, timings: Optional[Dict] = None) -> Dict:
    out = {
        "schema": REPORT_SCHEMA,
        "schema_version": SCHEMA_VERSION,
        "report_kind": kind,
        "instance_digest": None if instance_text is None else digest(instance_text),
        "settings": settings,
        "report": payload,
        "implied_bounds": implied,
        "provenance": provenance,
    }
    if timings is not None:
        out["timings"] = timings
    return _clean(out)


def write_report(path: str, report: Dict) -> str:
    text = dumps(report)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text
