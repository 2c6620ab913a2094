"""File formats: tree JSON, point CSV, label CSV, and run configs.

Radii are serialized as decimal strings with 17 significant digits, which
round-trips IEEE doubles exactly and keeps the emitted bytes stable across
runs.  The tree schema carries a ``major.minor`` version; readers refuse
files from a different major version.
"""

from __future__ import annotations

import json
from typing import Union

import numpy as np

from .geometry import PointSet
from .pruning import PrunedTree
from .tree import ClusterTree, MergeEvent

SCHEMA_VERSION = "1.0"

__all__ = [
    "DataError",
    "SCHEMA_VERSION",
    "format_radius",
    "tree_to_dict",
    "tree_from_dict",
    "write_tree_json",
    "read_tree_json",
    "read_points_csv",
    "write_labels_csv",
    "read_config",
]


class DataError(Exception):
    """Malformed or inconsistent input data (as opposed to bad parameters)."""


def format_radius(r: float) -> str:
    """Decimal form of a radius with enough digits to round-trip exactly."""
    return format(float(r), ".17g")


def tree_to_dict(tree: Union[ClusterTree, PrunedTree], d: int) -> dict:
    """Schema dict for a tree; ``d`` is the ambient dimension of the points."""
    if isinstance(tree, PrunedTree):
        tree = tree.index
    prov = dict(tree.provenance)
    events = []
    for e in tree.events:
        if e.kind == "birth":
            events.append({"r": format_radius(e.radius), "kind": "birth",
                           "point": e.point})
        else:
            events.append({"r": format_radius(e.radius), "kind": "merge",
                           "components": list(e.components)})
    return {
        "version": SCHEMA_VERSION,
        "n": tree.n,
        "d": int(d),
        "k": prov.get("k"),
        "alpha": prov.get("alpha"),
        "rule": prov.get("estimator"),
        "events": events,
        "provenance": prov,
    }


def tree_from_dict(obj: dict) -> tuple[ClusterTree, dict]:
    """Rebuild a tree from its schema dict; returns (tree, metadata)."""
    if not isinstance(obj, dict):
        raise DataError("tree document is not a JSON object")
    version = obj.get("version")
    if not isinstance(version, str) or "." not in version:
        raise DataError(f"missing or malformed schema version: {version!r}")
    major = version.split(".", 1)[0]
    ours = SCHEMA_VERSION.split(".", 1)[0]
    if major != ours:
        raise DataError(
            f"unsupported schema major version {version} (reader speaks {SCHEMA_VERSION})")
    for key in ("n", "events"):
        if key not in obj:
            raise DataError(f"tree document lacks required key {key!r}")
    events = []
    for pos, entry in enumerate(obj["events"]):
        try:
            r = float(entry["r"])
            kind = entry["kind"]
            if kind == "birth":
                events.append(MergeEvent.birth(r, entry["point"]))
            elif kind == "merge":
                a, b = entry["components"]
                events.append(MergeEvent.merge(r, a, b))
            else:
                raise DataError(f"event {pos}: unknown kind {kind!r}")
        except DataError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"event {pos}: {exc}") from exc
    try:
        tree = ClusterTree(n=obj["n"], events=events,
                           provenance=obj.get("provenance", {}))
    except (TypeError, ValueError) as exc:
        raise DataError(f"inconsistent tree document: {exc}") from exc
    meta = {key: obj.get(key) for key in ("version", "n", "d", "k", "alpha", "rule")}
    return tree, meta


def write_tree_json(tree: Union[ClusterTree, PrunedTree], d: int, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(tree_to_dict(tree, d), fh, indent=2)
        fh.write("\n")


def read_tree_json(path) -> tuple[ClusterTree, dict]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: not valid JSON: {exc}") from exc
    return tree_from_dict(obj)


def read_points_csv(path) -> PointSet:
    """Load an n x d numeric CSV; a non-numeric first row is taken as a header.

    Comma separated, decimal points only.  Malformed or ragged rows raise a
    DataError naming the 1-based line.
    """
    rows = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            cells = [c.strip() for c in line.split(",")]
            try:
                values = [float(c) for c in cells]
            except ValueError:
                if lineno == 1:
                    continue  # header row
                raise DataError(f"{path}: line {lineno}: non-numeric value") from None
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise DataError(
                    f"{path}: line {lineno}: expected {width} columns, got {len(values)}")
            rows.append(values)
    if not rows:
        raise DataError(f"{path}: no data rows")
    try:
        return PointSet(np.array(rows, dtype=np.float64))
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from exc


def write_labels_csv(path, labels) -> None:
    """One row per input point: its index and component id, or "unborn"."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("point,label\n")
        for i, lab in enumerate(labels):
            fh.write(f"{i},{'unborn' if lab < 0 else int(lab)}\n")


def read_config(path) -> dict:
    """JSON config whose keys mirror the CLI flags."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise DataError(f"{path}: config must be a JSON object")
    return obj
