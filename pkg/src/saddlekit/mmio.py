"""Matrix Market block I/O and machine-readable experiment reports.

The reader accepts real coordinate or array files with the general or
symmetric qualifier (symmetric storage is expanded to full); the writer
always emits coordinate/general with 17 significant digits so a write/read
round trip is value-exact.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .sparse import SparseMatrix

_HEADER = "%%MatrixMarket"


class MatrixMarketError(ValueError):
    pass


def read_matrix_market(path) -> SparseMatrix:
    with open(path) as fh:
        header = fh.readline().split()
        if (len(header) < 4 or header[0] != _HEADER
                or header[1].lower() != "matrix"):
            raise MatrixMarketError(f"{path}: malformed Matrix Market header")
        layout = header[2].lower()
        qualifiers = [q.lower() for q in header[3:]]
        if layout not in ("coordinate", "array"):
            raise MatrixMarketError(f"{path}: unsupported layout {layout!r}")
        field_kind = qualifiers[0] if qualifiers else "real"
        if field_kind not in ("real", "integer"):
            raise MatrixMarketError(f"{path}: only real matrices supported, "
                                    f"got {field_kind!r}")
        symmetry = qualifiers[1] if len(qualifiers) > 1 else "general"
        if symmetry not in ("general", "symmetric"):
            raise MatrixMarketError(f"{path}: unsupported symmetry "
                                    f"{symmetry!r}")

        lines = (ln for ln in fh if ln.strip() and not ln.startswith("%"))
        try:
            sizes = next(lines).split()
        except StopIteration:
            raise MatrixMarketError(f"{path}: missing size line") from None

        if layout == "coordinate":
            if len(sizes) != 3:
                raise MatrixMarketError(f"{path}: bad coordinate size line")
            nrows, ncols, nnz = (int(t) for t in sizes)
            entries = []
            for _ in range(nnz):
                try:
                    tok = next(lines).split()
                except StopIteration:
                    raise MatrixMarketError(
                        f"{path}: fewer entries than declared") from None
                i, j, v = int(tok[0]) - 1, int(tok[1]) - 1, float(tok[2])
                if not (0 <= i < nrows and 0 <= j < ncols):
                    raise MatrixMarketError(f"{path}: index out of bounds")
                entries.append((i, j, v))
                if symmetry == "symmetric" and i != j:
                    entries.append((j, i, v))
            return SparseMatrix.from_triplets(nrows, ncols, entries)

        # array layout: column-major dense listing
        if len(sizes) != 2:
            raise MatrixMarketError(f"{path}: bad array size line")
        nrows, ncols = (int(t) for t in sizes)
        if symmetry == "symmetric":
            dense = np.zeros((nrows, ncols))
            for j in range(ncols):
                for i in range(j, nrows):
                    v = float(next(lines))
                    dense[i, j] = v
                    dense[j, i] = v
        else:
            vals = np.array([float(next(lines))
                             for _ in range(nrows * ncols)])
            dense = vals.reshape((ncols, nrows)).T
        return SparseMatrix.from_dense(dense)


def write_matrix_market(M: SparseMatrix, path):
    """Coordinate format, 1-based indices, 17 significant digits, always
    tagged general."""
    coo = M.to_scipy().tocoo()
    with open(path, "w") as fh:
        fh.write(f"{_HEADER} matrix coordinate real general\n")
        fh.write(f"{M.nrows} {M.ncols} {coo.nnz}\n")
        for i, j, v in zip(coo.row, coo.col, coo.data):
            fh.write(f"{i + 1} {j + 1} {v:.17g}\n")


# -- experiment reports ---------------------------------------------------


@dataclass(frozen=True)
class ReportRecord:
    process: str
    problem: str
    size: int
    it: int
    res: float
    wall_seconds: float
    params: dict = field(default_factory=dict)
    converged: bool = True


def format_res(res: float) -> str:
    """Scientific notation with a 4-digit mantissa fraction, e.g.
    8.2852e-07."""
    return f"{res:.4e}"


def _params_str(params: dict) -> str:
    return ";".join(f"{k}={v}" for k, v in sorted(params.items()))


CSV_COLUMNS = ["process", "problem", "size", "it", "res", "wall_seconds",
               "params"]


def write_report(records, fmt, path):
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_COLUMNS)
            for r in records:
                w.writerow([r.process, r.problem, r.size, r.it,
                            format_res(r.res), f"{r.wall_seconds:.3f}",
                            _params_str(r.params)])
    elif fmt == "json":
        payload = [{
            "process": r.process, "problem": r.problem, "size": r.size,
            "it": r.it, "res": format_res(r.res),
            "wall_seconds": round(r.wall_seconds, 3),
            "params": {k: (float(v) if isinstance(v, (int, float, np.floating))
                           else str(v)) for k, v in r.params.items()},
            "converged": r.converged,
        } for r in records]
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
