"""Plain-text serialization: headerless numeric CSV, edge lists, key=value files."""

import csv
import math
import os

import numpy as np

from .errors import ParseError


def write_matrix_csv(path, M):
    M = np.atleast_2d(np.asarray(M, dtype=float))
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        for row in M:
            w.writerow([repr(float(v)) for v in row])


def read_matrix_csv(path):
    """Read a headerless numeric CSV into a 2-D float array.

    Rows and columns in error messages are 1-based, as a spreadsheet would show them.
    """
    rows = []
    width = None
    with open(path, newline="") as f:
        for r, raw in enumerate(csv.reader(f), start=1):
            if not raw or all(not cell.strip() for cell in raw):
                continue
            vals = []
            for c, cell in enumerate(raw, start=1):
                try:
                    v = float(cell)
                except ValueError:
                    raise ParseError(path, r, c, f"non-numeric value {cell!r}") from None
                if not math.isfinite(v):
                    raise ParseError(path, r, c, f"non-finite value {cell!r}")
                vals.append(v)
            if width is None:
                width = len(vals)
            elif len(vals) != width:
                raise ParseError(path, r, len(vals), f"expected {width} columns, got {len(vals)}")
            rows.append(vals)
    if not rows:
        raise ParseError(path, 1, 1, "empty file")
    return np.array(rows, dtype=float)


def write_edge_list(path, W):
    W = np.asarray(W, dtype=float)
    with open(path, "w") as f:
        for i, j in zip(*np.nonzero(W)):
            f.write(f"{i},{j},{float(W[i, j])!r}\n")


def read_edge_list(path, d):
    W = np.zeros((d, d))
    with open(path) as f:
        for r, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ParseError(path, r, len(parts), "expected i,j,w")
            try:
                i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError:
                raise ParseError(path, r, 1, f"cannot parse {line!r}") from None
            if not (0 <= i < d and 0 <= j < d):
                raise ParseError(path, r, 1, f"node index out of range for d={d}")
            W[i, j] = w
    return W


def _fmt(v):
    if v is None:
        return "na"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "na" if math.isnan(v) else repr(v)
    if isinstance(v, (list, tuple)):
        return ",".join(_fmt(x) for x in v)
    return str(v)


def write_keyvalue(path, items):
    with open(path, "w") as f:
        for k, v in items.items():
            f.write(f"{k}={_fmt(v)}\n")


def read_keyvalue(path):
    out = {}
    with open(path) as f:
        for line in f:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            k, _, v = line.partition("=")
            out[k.strip()] = v.strip()
    return out


def ensure_dir(path):
    os.makedirs(path, exist_ok=True)
    return path
