"""Instance model: loading, normalization, validation, containment pruning.

An instance couples a separating line, a point set and a region set
(disks or lower half-planes) under one of four variant tags:

* ``unit-disk``        - congruent disks, centers on/below the line
* ``line-constrained`` - disks centered on the line, any radii; points
                         may lie below the line and are reflected up
* ``line-separable``   - disks below the line; accepted from files only
                         and checked pairwise for the single-crossing
                         property of their upper boundaries
* ``lower-halfplane``  - lower half-planes, line below all points

Instances are stored column-wise (numpy arrays) so that large generated
inputs never materialize per-point objects; ``point(i)`` / ``region(i)``
build geometry objects on demand.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .geom import COORD_LIMIT, Disk, HalfPlane, Point, Region, _circle_crossings_above

VARIANTS = ("unit-disk", "line-constrained", "line-separable", "lower-halfplane")


class InstanceError(ValueError):
    """Base class for malformed or inadmissible instances."""


class SchemaError(InstanceError):
    """The file/JSON payload does not match the instance schema."""


class MixedRadiiError(InstanceError):
    pass


class PointBelowLineError(InstanceError):
    pass


class CenterAboveLineError(InstanceError):
    pass


@dataclass
class Instance:
    variant: str
    line_y: float
    points: np.ndarray       # (n, 2) float64
    disks: Optional[np.ndarray] = None       # (m, 3): cx, cy, r
    halfplanes: Optional[np.ndarray] = None  # (m, 2): a, b

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def m(self) -> int:
        if self.halfplanes is not None:
            return len(self.halfplanes)
        return 0 if self.disks is None else len(self.disks)

    @property
    def is_halfplane(self) -> bool:
        return self.halfplanes is not None

    def point(self, i: int) -> Point:
        return Point(float(self.points[i, 0]), float(self.points[i, 1]), i)

    def region(self, i: int) -> Region:
        if self.is_halfplane:
            a, b = self.halfplanes[i]
            return HalfPlane(float(a), float(b), i)
        cx, cy, r = self.disks[i]
        return Disk(float(cx), float(cy), float(r), i)

    def regions(self) -> List[Region]:
        return [self.region(i) for i in range(self.m)]


def _as_matrix(obj, name: str, width: int) -> np.ndarray:
    if not isinstance(obj, list):
        raise SchemaError(f"'{name}' must be an array")
    out = np.empty((len(obj), width), dtype=np.float64)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != width:
            raise SchemaError(f"'{name}[{i}]' must be an array of {width} numbers")
        for j, v in enumerate(row):
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise SchemaError(f"'{name}[{i}][{j}]' is not a number")
            out[i, j] = float(v)
    if out.size and not np.all(np.isfinite(out)):
        raise SchemaError(f"'{name}' contains non-finite values")
    if out.size and np.max(np.abs(out)) > COORD_LIMIT:
        raise SchemaError(f"'{name}' exceeds the coordinate bound {COORD_LIMIT:g}")
    return out


def loads_instance(text: str) -> Instance:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise SchemaError("top-level value must be an object")
    variant = payload.get("variant")
    if variant not in VARIANTS:
        raise SchemaError(f"'variant' must be one of {VARIANTS}")
    line_y = payload.get("line_y", 0.0)
    if not isinstance(line_y, (int, float)) or isinstance(line_y, bool) or not math.isfinite(line_y):
        raise SchemaError("'line_y' must be a finite number")
    if abs(line_y) > COORD_LIMIT:
        raise SchemaError(f"'line_y' exceeds the coordinate bound {COORD_LIMIT:g}")
    points = _as_matrix(payload.get("points", []), "points", 2)
    if variant == "lower-halfplane":
        if "disks" in payload:
            raise SchemaError("'disks' is not allowed in the lower-halfplane variant")
        halfplanes = _as_matrix(payload.get("halfplanes", []), "halfplanes", 2)
        return Instance(variant, float(line_y), points, halfplanes=halfplanes)
    if "halfplanes" in payload:
        raise SchemaError("'halfplanes' is only allowed in the lower-halfplane variant")
    disks = _as_matrix(payload.get("disks", []), "disks", 3)
    if len(disks) and np.min(disks[:, 2]) <= 0.0:
        raise SchemaError("disk radii must be positive")
    return Instance(variant, float(line_y), points, disks=disks)


def load_instance(path) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_instance(fh.read())


def dumps_instance(inst: Instance) -> str:
    payload = {
        "variant": inst.variant,
        "line_y": inst.line_y,
        "points": [[float(x), float(y)] for x, y in inst.points],
    }
    if inst.is_halfplane:
        payload["halfplanes"] = [[float(a), float(b)] for a, b in inst.halfplanes]
    else:
        payload["disks"] = [[float(cx), float(cy), float(r)] for cx, cy, r in inst.disks]
    return json.dumps(payload)


def dump_instance(inst: Instance, path) -> None:
    atomic_write(path, dumps_instance(inst))


def atomic_write(path, text: str) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def normalize(raw: Instance) -> Instance:
    """Shift the separating line to y=0 and resolve below-line points.

    In the line-constrained variant a point below the line is replaced
    by its mirror image across the line (coverage by line-centered disks
    is symmetric, so optima are preserved).  In every other variant a
    below-line point is an error, as is a disk center above the line or
    unequal radii in the unit-disk variant.
    """
    pts = raw.points.copy()
    if len(pts):
        pts[:, 1] -= raw.line_y
    if raw.variant == "line-constrained":
        pts[:, 1] = np.abs(pts[:, 1])
    elif len(pts) and np.min(pts[:, 1]) < 0.0:
        worst = int(np.argmin(pts[:, 1]))
        raise PointBelowLineError(
            f"point {worst} lies below the separating line in variant '{raw.variant}'"
        )
    if raw.is_halfplane:
        hp = raw.halfplanes.copy()
        if len(hp):
            hp[:, 1] -= raw.line_y
        return Instance(raw.variant, 0.0, pts, halfplanes=hp)
    disks = raw.disks.copy()
    if len(disks):
        disks[:, 1] -= raw.line_y
        if np.max(disks[:, 1]) > 0.0:
            worst = int(np.argmax(disks[:, 1]))
            raise CenterAboveLineError(f"disk {worst} is centered above the separating line")
        if raw.variant == "line-constrained" and np.any(disks[:, 1] != 0.0):
            worst = int(np.argmax(np.abs(disks[:, 1])))
            raise CenterAboveLineError(
                f"disk {worst} is not centered on the line in the line-constrained variant"
            )
        if raw.variant == "unit-disk":
            radii = disks[:, 2]
            if np.min(radii) != np.max(radii):
                raise MixedRadiiError(
                    f"unit-disk variant requires one radius, got "
                    f"[{np.min(radii)}, {np.max(radii)}]"
                )
    return Instance(raw.variant, 0.0, pts, disks=disks)


@dataclass
class ValidationReport:
    findings: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.findings


def validate(inst: Instance) -> ValidationReport:
    """Check separation and family admissibility of a normalized instance.

    For the line-separable variant the single-crossing condition is
    verified for every disk pair (quadratic, acceptable because this
    variant is only read from explicit files and never generated large).
    Findings are reported, not raised.
    """
    rep = ValidationReport()
    if inst.line_y != 0.0:
        rep.findings.append("instance is not normalized (line_y != 0)")
    if inst.n and np.min(inst.points[:, 1]) < 0.0:
        rep.findings.append("a point lies below the separating line")
    if inst.variant == "lower-halfplane":
        if not inst.is_halfplane:
            rep.findings.append("lower-halfplane variant without half-planes")
        return rep
    if inst.is_halfplane:
        rep.findings.append(f"variant '{inst.variant}' cannot carry half-planes")
        return rep
    m = inst.m
    if m and np.max(inst.disks[:, 1]) > 0.0:
        rep.findings.append("a disk center lies above the separating line")
    if inst.variant == "unit-disk" and m:
        if np.min(inst.disks[:, 2]) != np.max(inst.disks[:, 2]):
            rep.findings.append("unit-disk variant with mixed radii")
    if inst.variant == "line-constrained" and m:
        if np.any(inst.disks[:, 1] != 0.0):
            rep.findings.append("line-constrained variant with an off-line center")
    if inst.variant == "line-separable":
        for i in range(m):
            si = inst.region(i)
            for j in range(i + 1, m):
                sj = inst.region(j)
                if (si.cx, si.cy, si.r) == (sj.cx, sj.cy, sj.r):
                    continue
                if len(_circle_crossings_above(si, sj)) > 1:
                    rep.findings.append(
                        f"disks {i} and {j} cross twice above the line "
                        "(single-intersection condition violated)"
                    )
    return rep


@dataclass
class SortedInstance:
    """Regions surviving containment pruning, in canonical order.

    Disk families sort by leftmost extent; the non-containment property
    then makes rightmost extents increase as well (asserted by tests).
    Half-planes sort by ascending slope, which is the same order in the
    limit view of a half-plane as a disk of unbounded radius.  ``orig``
    maps sorted position to input id; ``dropped`` lists removed ids.
    """

    variant: str
    family: str                      # "disk" | "halfplane"
    cols: np.ndarray                 # sorted region columns, as in Instance
    orig: np.ndarray                 # (m,) int64
    dropped: List[int]
    lx: np.ndarray                   # extent endpoints (halfplane: +-inf)
    rx: np.ndarray

    @property
    def m(self) -> int:
        return len(self.cols)

    @property
    def radius(self) -> float:
        if self.family != "disk" or not self.m:
            raise InstanceError("radius is only defined for nonempty disk families")
        return float(self.cols[0, 2])

    def region(self, k: int) -> Region:
        if self.family == "halfplane":
            a, b = self.cols[k]
            return HalfPlane(float(a), float(b), int(self.orig[k]))
        cx, cy, r = self.cols[k]
        return Disk(float(cx), float(cy), float(r), int(self.orig[k]))


def prune_contained(inst: Instance) -> SortedInstance:
    """Drop every region contained in another and sort canonically.

    A dropped region is redundant: each point it covers is covered by
    its container.  Vacuous regions (empty above-line part) are dropped
    outright.  Among identical regions the lowest input id survives.
    """
    if inst.is_halfplane:
        return _prune_halfplanes(inst)
    return _prune_disks(inst)


def _prune_disks(inst: Instance) -> SortedInstance:
    m = inst.m
    dropped: List[int] = []
    if m == 0:
        empty = np.empty((0,), dtype=np.float64)
        return SortedInstance(inst.variant, "disk", inst.disks.copy(), np.empty(0, np.int64),
                              dropped, empty, empty.copy())
    cx, cy, r = inst.disks[:, 0], inst.disks[:, 1], inst.disks[:, 2]
    d = r * r - cy * cy
    vac = d < 0.0
    h = np.sqrt(np.maximum(d, 0.0))
    lx = cx - h
    rx = cx + h
    ids = np.arange(m)
    live = ids[~vac]
    dropped.extend(int(i) for i in ids[vac])
    order = live[np.lexsort((live, -rx[live], lx[live]))]
    kept: List[int] = []
    best_rx = -math.inf
    for i in order:
        if rx[i] <= best_rx:
            dropped.append(int(i))
            continue
        kept.append(int(i))
        best_rx = rx[i]
    kept_arr = np.asarray(kept, dtype=np.int64)
    dropped.sort()
    return SortedInstance(inst.variant, "disk", inst.disks[kept_arr].copy(),
                          kept_arr, dropped, lx[kept_arr], rx[kept_arr])


def _prune_halfplanes(inst: Instance) -> SortedInstance:
    m = inst.m
    dropped: List[int] = []
    a, b = (inst.halfplanes[:, 0], inst.halfplanes[:, 1]) if m else (np.empty(0), np.empty(0))
    ids = np.arange(m)
    vac = (a == 0.0) & (b < 0.0)
    live = ids[~vac]
    dropped.extend(int(i) for i in ids[vac])
    order = live[np.lexsort((live, -b[live], a[live]))]
    kept: List[int] = []
    last_slope = None
    for i in order:
        if last_slope is not None and a[i] == last_slope:
            dropped.append(int(i))   # same slope, intercept <= the kept one
            continue
        kept.append(int(i))
        last_slope = a[i]
    kept_arr = np.asarray(kept, dtype=np.int64)
    dropped.sort()
    lx = np.where(a[kept_arr] > 0.0, -b[kept_arr] / np.where(a[kept_arr] != 0.0, a[kept_arr], 1.0), -math.inf)
    rx = np.where(a[kept_arr] < 0.0, -b[kept_arr] / np.where(a[kept_arr] != 0.0, a[kept_arr], 1.0), math.inf)
    return SortedInstance(inst.variant, "halfplane", inst.halfplanes[kept_arr].copy(),
                          kept_arr, dropped, lx, rx)


def sorted_points(inst: Instance) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Points in (x, input id) order: xs, ys, orig ids."""
    if inst.n == 0:
        e = np.empty(0, dtype=np.float64)
        return e, e.copy(), np.empty(0, dtype=np.int64)
    order = np.lexsort((np.arange(inst.n), inst.points[:, 0]))
    return (inst.points[order, 0].copy(), inst.points[order, 1].copy(), order.astype(np.int64))
