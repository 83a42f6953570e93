"""Readers for the CSV/JSON files the experiment CLI writes.

Every CSV starts with ``# key=value`` metadata lines followed by a
header row; readers return (metadata, columns).  Inputs that should
describe the same run are cross-checked on (n, k, b).
"""

from __future__ import annotations

import csv
import json
from pathlib import Path


class MissingInput(FileNotFoundError):
    """A referenced input file does not exist."""


class MetadataMismatch(ValueError):
    """Input files disagree on (n, k, b)."""


def read_table(path) -> tuple[dict, dict[str, list[float]]]:
    path = Path(path)
    if not path.exists():
        raise MissingInput(str(path))
    meta: dict = {}
    rows = []
    with open(path, newline="") as fh:
        data_lines = []
        for line in fh:
            if line.startswith("# "):
                key, val = line[2:].rstrip("\n").split("=", 1)
                meta[key] = val
            else:
                data_lines.append(line)
        reader = csv.reader(data_lines)
        header = next(reader)
        rows = list(reader)
    cols: dict[str, list[float]] = {name: [] for name in header}
    for row in rows:
        for name, val in zip(header, row):
            try:
                cols[name].append(float(val))
            except ValueError:
                cols[name].append(val)
    return meta, cols


def read_sidecar(path) -> dict:
    path = Path(path)
    if not path.exists():
        raise MissingInput(str(path))
    with open(path) as fh:
        return json.load(fh)


def check_consistent(metas: list[dict], keys=("n", "k", "b")) -> dict:
    """All metadata blocks must agree on the run identity keys."""
    if not metas:
        raise MissingInput("no inputs given")
    first = metas[0]
    for other in metas[1:]:
        for key in keys:
            if key in first and key in other and first[key] != other[key]:
                raise MetadataMismatch(
                    f"{key}={first[key]} vs {key}={other[key]}")
    return first
