"""Matrix Market I/O and the experiment-report writers."""

import csv
import json

import numpy as np
import pytest

from saddlekit.mmio import (CSV_COLUMNS, MatrixMarketError, ReportRecord,
                            format_res, read_matrix_market, write_matrix_market,
                            write_report)
from saddlekit.sparse import SparseMatrix


def test_write_read_round_trip(tmp_path, rng):
    D = rng.standard_normal((5, 7))
    D[np.abs(D) < 0.5] = 0.0
    path = tmp_path / "m.mtx"
    write_matrix_market(SparseMatrix.from_dense(D), path)
    back = read_matrix_market(path)
    # 17 significant digits make the round trip value-exact
    assert np.array_equal(back.to_dense(), D)


def test_read_symmetric_coordinate(tmp_path):
    path = tmp_path / "s.mtx"
    path.write_text("%%MatrixMarket matrix coordinate real symmetric\n"
                    "3 3 3\n"
                    "1 1 2.0\n"
                    "2 1 -1.0\n"
                    "3 3 4.5\n")
    M = read_matrix_market(path).to_dense()
    expect = np.array([[2.0, -1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 4.5]])
    assert np.array_equal(M, expect)


def test_read_array_layout(tmp_path):
    path = tmp_path / "a.mtx"
    # column-major listing of [[1, 3], [2, 4]]
    path.write_text("%%MatrixMarket matrix array real general\n"
                    "2 2\n1\n2\n3\n4\n")
    assert np.array_equal(read_matrix_market(path).to_dense(),
                          np.array([[1.0, 3.0], [2.0, 4.0]]))


def test_read_array_symmetric(tmp_path):
    path = tmp_path / "as.mtx"
    # lower triangle of [[1, 2], [2, 5]]
    path.write_text("%%MatrixMarket matrix array real symmetric\n"
                    "2 2\n1\n2\n5\n")
    assert np.array_equal(read_matrix_market(path).to_dense(),
                          np.array([[1.0, 2.0], [2.0, 5.0]]))


def test_read_skips_comments_and_blanks(tmp_path):
    path = tmp_path / "c.mtx"
    path.write_text("%%MatrixMarket matrix coordinate real general\n"
                    "% a comment\n\n"
                    "2 2 1\n"
                    "% another\n"
                    "2 2 7.0\n")
    M = read_matrix_market(path).to_dense()
    assert M[1, 1] == 7.0 and M.sum() == 7.0


@pytest.mark.parametrize("header, body", [
    ("nonsense", "1 1 1\n1 1 1.0\n"),
    ("%%MatrixMarket matrix coordinate complex general", "1 1 1\n1 1 1 0\n"),
    ("%%MatrixMarket matrix coordinate real hermitian", "1 1 1\n1 1 1.0\n"),
    ("%%MatrixMarket matrix elemental real general", "1 1 1\n1 1 1.0\n"),
])
def test_read_rejects_bad_headers(tmp_path, header, body):
    path = tmp_path / "bad.mtx"
    path.write_text(header + "\n" + body)
    with pytest.raises(MatrixMarketError):
        read_matrix_market(path)


def test_read_rejects_out_of_bounds_and_truncation(tmp_path):
    path = tmp_path / "oob.mtx"
    path.write_text("%%MatrixMarket matrix coordinate real general\n"
                    "2 2 1\n3 1 1.0\n")
    with pytest.raises(MatrixMarketError):
        read_matrix_market(path)
    path.write_text("%%MatrixMarket matrix coordinate real general\n"
                    "2 2 2\n1 1 1.0\n")
    with pytest.raises(MatrixMarketError):
        read_matrix_market(path)


def test_format_res():
    assert format_res(8.28515512e-07) == "8.2852e-07"
    assert format_res(1.0) == "1.0000e+00"


def records():
    return [
        ReportRecord("pess", "generated-l4", 64, 3, 8.2852e-07, 0.012,
                     {"s": 12, "case": "I"}),
        ReportRecord("none", "generated-l4", 64, 120, 9.9e-07, 0.5),
    ]


def test_write_report_csv(tmp_path):
    path = tmp_path / "r.csv"
    write_report(records(), "csv", path)
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == CSV_COLUMNS
    assert rows[1][0] == "pess"
    assert rows[1][4] == "8.2852e-07"
    assert rows[1][6] == "case=I;s=12"
    assert len(rows) == 3


def test_write_report_json(tmp_path):
    path = tmp_path / "r.json"
    write_report(records(), "json", path)
    payload = json.loads(path.read_text())
    assert len(payload) == 2
    assert payload[0]["it"] == 3
    assert payload[0]["res"] == "8.2852e-07"
    assert payload[0]["params"]["s"] == 12
    assert payload[0]["converged"] is True


def test_write_report_unknown_format(tmp_path):
    with pytest.raises(ValueError):
        write_report(records(), "xml", tmp_path / "r.xml")
