"""Exact text formats: regions, half-spaces, frames, axis points, descriptors.

Everything serializes rationals as ``p/q`` strings (plain ``p`` for
integers), so files round-trip with no precision loss. Readers accept
non-canonical region input and canonicalize; writers emit canonical form
with deterministic key order.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from .fixing import (
    HalfSpaceDescriptor,
    RegionDescriptor,
    parse_combination,
    print_combination,
)
from .geometry import (
    GeometryError,
    HalfSpace,
    Hyperplane,
    Vector,
    format_rational,
    rat,
)
from .predicates import FrameWitness, LineInPlane, check_frame
from .regions import Region, region_from_halfspaces
from .vonstaudt import AxisPoint, ConstructionWitness


class FormatError(ValueError):
    """A file or document does not follow the exact text format."""


def _require(document: dict, key: str):
    if key not in document:
        raise FormatError(f"missing field {key!r}")
    return document[key]


def rational_to_text(q: Fraction) -> str:
    return format_rational(q)


def rational_from_text(text: str) -> Fraction:
    try:
        return rat(text)
    except GeometryError as exc:
        raise FormatError(str(exc)) from None


def vector_to_json(v: Vector) -> list[str]:
    return [rational_to_text(c) for c in v.coords]


def vector_from_json(data) -> Vector:
    if not isinstance(data, list) or not data:
        raise FormatError("a vector is a nonempty list of rational strings")
    return Vector(tuple(rational_from_text(c) for c in data))


def plane_to_json(plane: Hyperplane) -> dict:
    return {
        "normal": vector_to_json(plane.normal),
        "offset": rational_to_text(plane.offset),
    }


def plane_from_json(data) -> Hyperplane:
    try:
        return Hyperplane(
            vector_from_json(_require(data, "normal")),
            rational_from_text(_require(data, "offset")),
        )
    except GeometryError as exc:
        raise FormatError(str(exc)) from None


def halfspace_to_json(hs: HalfSpace) -> dict:
    return {
        "normal": vector_to_json(hs.plane.normal),
        "offset": rational_to_text(hs.plane.offset),
        "side": "+" if hs.side == 1 else "-",
    }


def halfspace_from_json(data) -> HalfSpace:
    side = _require(data, "side")
    if side not in ("+", "-"):
        raise FormatError(f"side must be '+' or '-', got {side!r}")
    plane = plane_from_json(data)
    return HalfSpace(plane, 1 if side == "+" else -1)


def region_to_json(region: Region) -> dict:
    return {
        "dim": region.dim,
        "cells": [
            [
                halfspace_to_json(hs)
                for hs in sorted(cell.constraints, key=HalfSpace.sort_key)
            ]
            for cell in region.convex_cells()
        ],
    }


def region_from_json(data) -> Region:
    dim = _require(data, "dim")
    if not isinstance(dim, int) or dim < 1:
        raise FormatError("dim must be a positive integer")
    cells_data = _require(data, "cells")
    if not isinstance(cells_data, list):
        raise FormatError("cells must be a list of constraint lists")
    cells = [[halfspace_from_json(hs) for hs in cell] for cell in cells_data]
    try:
        return region_from_halfspaces(dim, cells)
    except GeometryError as exc:
        raise FormatError(str(exc)) from None


def line_to_json(line: LineInPlane) -> dict:
    return {
        "reference": plane_to_json(line.reference),
        "cutter": plane_to_json(line.cutter),
    }


def line_from_json(data) -> LineInPlane:
    try:
        return LineInPlane(
            plane_from_json(_require(data, "reference")),
            plane_from_json(_require(data, "cutter")),
        )
    except GeometryError as exc:
        raise FormatError(str(exc)) from None


def frame_to_json(frame: FrameWitness) -> dict:
    return {
        "halfspaces": [halfspace_to_json(h) for h in frame.halfspaces],
        "origin": vector_to_json(frame.origin),
        "axes": [line_to_json(line) for line in frame.axes],
        "units": [vector_to_json(u) for u in frame.units],
    }


def frame_from_json(data) -> FrameWitness:
    """Rebuild and re-validate a frame from its four half-spaces."""
    halves = [halfspace_from_json(h) for h in _require(data, "halfspaces")]
    if len(halves) != 4:
        raise FormatError("a frame needs exactly four half-spaces")
    witness = check_frame(*halves)
    if witness is None:
        raise FormatError("the four half-spaces do not form a coordinate frame")
    return witness


def axis_point_to_json(point: AxisPoint) -> dict:
    return {
        "axis": point.axis,
        "value": rational_to_text(point.value),
        "marker": line_to_json(point.marker),
    }


def witness_to_json(witness: ConstructionWitness) -> dict:
    return {
        "kind": witness.kind,
        "lines": [[name, line_to_json(line)] for name, line in witness.lines],
        "points": [[name, vector_to_json(point)] for name, point in witness.points],
    }


def witness_from_json(data) -> ConstructionWitness:
    kind = _require(data, "kind")
    if kind not in ("add", "multiply"):
        raise FormatError(f"unknown construction kind {kind!r}")
    lines = tuple(
        (name, line_from_json(line)) for name, line in _require(data, "lines")
    )
    points = tuple(
        (name, vector_from_json(point)) for name, point in _require(data, "points")
    )
    return ConstructionWitness(kind, lines, points)


def certificate_to_json(witnesses) -> list:
    return [witness_to_json(w) for w in witnesses]


def certificate_from_json(data) -> list:
    return [witness_from_json(w) for w in data]


def halfspace_descriptor_to_json(d: HalfSpaceDescriptor) -> dict:
    return {
        "normal": [rational_to_text(c) for c in d.normal],
        "offset": rational_to_text(d.offset),
        "side": "+" if d.side == 1 else "-",
        "intercepts": [
            None if t is None else rational_to_text(t) for t in d.intercepts
        ],
        "through_origin": d.through_origin,
    }


def halfspace_descriptor_from_json(data) -> HalfSpaceDescriptor:
    side = _require(data, "side")
    if side not in ("+", "-"):
        raise FormatError(f"side must be '+' or '-', got {side!r}")
    normal = tuple(rational_from_text(c) for c in _require(data, "normal"))
    if len(normal) != 3:
        raise FormatError("descriptor normals have three coordinates")
    offset = rational_from_text(_require(data, "offset"))
    intercepts = tuple(
        None if t is None else rational_from_text(t)
        for t in _require(data, "intercepts")
    )
    if len(intercepts) != 3:
        raise FormatError("descriptors carry three axis intercepts")
    return HalfSpaceDescriptor(
        normal,
        offset,
        1 if side == "+" else -1,
        intercepts,
        bool(_require(data, "through_origin")),
    )


def region_descriptor_to_json(d: RegionDescriptor) -> dict:
    return {
        "dim": d.dim,
        "halfspaces": [halfspace_descriptor_to_json(h) for h in d.halfspaces],
        "combination": print_combination(d.combination),
    }


def region_descriptor_from_json(data) -> RegionDescriptor:
    dim = _require(data, "dim")
    halves = tuple(
        halfspace_descriptor_from_json(h) for h in _require(data, "halfspaces")
    )
    try:
        combination = parse_combination(_require(data, "combination"))
    except GeometryError as exc:
        raise FormatError(str(exc)) from None
    return RegionDescriptor(dim, halves, combination)


# --- files -------------------------------------------------------------------


def dump_json(document, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(to_text(document))


def to_text(document) -> str:
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def load_json(path):
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from None


def load_region(path) -> Region:
    return region_from_json(load_json(path))


def load_halfspace(path) -> HalfSpace:
    """A half-space from its own format or from a one-half-space region."""
    data = load_json(path)
    if isinstance(data, dict) and "side" in data:
        return halfspace_from_json(data)
    region = region_from_json(data)
    from .regions import bounding_halfspace

    half = bounding_halfspace(region)
    if half is None:
        raise FormatError(f"{path}: region is not a half-space")
    return half


def load_frame(path) -> FrameWitness:
    return frame_from_json(load_json(path))


def load_region_descriptor(path) -> RegionDescriptor:
    return region_descriptor_from_json(load_json(path))
