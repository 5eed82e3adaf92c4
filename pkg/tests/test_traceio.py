"""Test dualhawkes.traceio."""

import json
import pathlib

import numpy as np
import pytest

from dualhawkes.estimate import FitReport
from dualhawkes.exceptions import MalformedFile, MissingFile
from dualhawkes.model import (
    EpochTrace, ItemCatalog, ModelParams, SessionRecord,
)
from dualhawkes.traceio import (
    fmt, read_catalog, read_params, read_report, read_trace, write_catalog,
    write_params, write_report, write_trace,
)


def params() -> ModelParams:
    """Two-dimensional user."""
    return ModelParams(0.3, 4.0, 1.0, [0.6, 0.0], [0.0, 0.8])


@pytest.mark.parametrize("value,expected", [
    (0.1, "0.10000000000000001"),
    (1.0, "1"),
    (3, "3"),
])
def test_fmt(value: float, expected: str) -> None:
    """Floats are written with 17 significant digits."""
    assert fmt(value) == expected


def test_trace_file(tmp_path: pathlib.Path) -> None:
    """Trace survives a write and read, header included."""
    epoch = EpochTrace(
        (SessionRecord(0.1, (0, 2)), SessionRecord(1 / 3, (1,))), 2.5,
    )
    path = tmp_path / "epoch.jsonl"
    write_trace(path, epoch, index=3, seed=42)
    copy, header = read_trace(path)
    assert copy == epoch
    assert header == {"horizon": 2.5, "epoch": 3, "seed": 42}
    assert path.read_text().splitlines()[1] == \
        '{"t": 0.10000000000000001, "items": [0, 2]}'


@pytest.mark.parametrize("lines,line,reason", [
    ([], 1, "missing header"),
    (['{"epoch": 0}'], 1, "no horizon"),
    (['{"horizon": 2}', '{"t": 1, "items": [0]', ], 2, "invalid JSON"),
    (['{"horizon": 2}', '{"t": 1}'], 2, "missing field"),
    (['{"horizon": 2}', '{"t": 1, "items": []}'], 2, "empty session"),
    (['{"horizon": 2}', '{"t": 1, "items": [0]}', '',
      '{"t": 0.5, "items": [0]}'], 4, "doesn't increase"),
    (['{"horizon": 0.5}', '{"t": 1, "items": [0]}'], 1, "after horizon"),
    (['[1, 2]'], 1, "JSON object"),
])
def test_malformed_trace(tmp_path: pathlib.Path,
                         lines: list,
                         line: int,
                         reason: str) -> None:
    """Errors name the offending line."""
    path = tmp_path / "bad.jsonl"
    path.write_text("\n".join(lines))
    with pytest.raises(MalformedFile) as info:
        read_trace(path)
    assert info.value.line == line
    assert reason in info.value.reason
    assert str(info.value).startswith(f"{path}:{line}: ")


def test_missing_trace(tmp_path: pathlib.Path) -> None:
    """Missing files are reported as such."""
    with pytest.raises(MissingFile) as info:
        read_trace(tmp_path / "nothing.jsonl")
    assert "trace file not found" in str(info.value)


def test_catalog_file(tmp_path: pathlib.Path) -> None:
    """Catalog is written with a "d m" header."""
    rows = np.random.default_rng(0).standard_normal((4, 3))
    catalog = ItemCatalog.normalized(rows)
    path = tmp_path / "catalog.txt"
    write_catalog(path, catalog)
    assert path.read_text().splitlines()[0] == "3 4"
    assert np.array_equal(read_catalog(path).vectors, catalog.vectors)


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("two 1\n1 0\n", 1),
    ("2 1\n1 0 0\n", 2),
    ("2 1\n1 x\n", 2),
    ("2 1\n1 1\n", 2),
    ("2 2\n1 0\n", 2),
])
def test_malformed_catalog(tmp_path: pathlib.Path,
                           text: str,
                           line: int) -> None:
    """Bad headers, rows and counts are rejected."""
    path = tmp_path / "catalog.txt"
    path.write_text(text)
    with pytest.raises(MalformedFile) as info:
        read_catalog(path)
    assert info.value.line == line


def test_params_file(tmp_path: pathlib.Path) -> None:
    """Params are stored as plain JSON."""
    path = tmp_path / "truth.json"
    write_params(path, params())
    data = json.loads(path.read_text())
    assert data == {"mu": 0.3, "beta1": 4.0, "beta2": 1.0,
                    "u1": [0.6, 0.0], "u2": [0.0, 0.8]}
    assert read_params(path).to_dict() == data


def test_read_params_from_report(tmp_path: pathlib.Path) -> None:
    """Fit reports can stand in for params files."""
    path = tmp_path / "report.json"
    report = FitReport(params(), (-2.0, -1.0), 2, -1.0,
                       frozenset({"non-convergence"}))
    write_report(path, report)
    assert read_params(path).to_dict() == params().to_dict()
    copy = read_report(path)
    assert copy.flags == {"non-convergence"}
    assert copy.trajectory == (-2.0, -1.0)


def test_report_file_keys(tmp_path: pathlib.Path) -> None:
    """Report files carry the documented keys."""
    path = tmp_path / "report.json"
    write_report(path, FitReport(params(), (-2.0, -1.0), 2, -1.0,
                                 frozenset({"early-stop"}), {"mu": 0.5},
                                 (-1.5,)))
    data = json.loads(path.read_text())
    assert set(data) == {"params", "steps_taken", "final_log_likelihood",
                         "flags", "errors", "trajectory", "checkpoints"}
    assert data["flags"] == ["early-stop"]
    assert data["checkpoints"] == [-1.5]
    assert data["params"] == params().to_dict()


@pytest.mark.parametrize("text", [
    '{"mu": 0.3}',
    '{"mu": -1, "beta1": 1, "beta2": 1, "u1": [0], "u2": [0]}',
    '{"mu": 0.3, "beta1": 1, "beta2": 1, "u1": [2], "u2": [0]}',
])
def test_invalid_params(tmp_path: pathlib.Path, text: str) -> None:
    """Invalid parameter files are malformed."""
    path = tmp_path / "params.json"
    path.write_text(text)
    with pytest.raises(MalformedFile):
        read_params(path)


def test_invalid_report(tmp_path: pathlib.Path) -> None:
    """JSON syntax errors carry the line number."""
    path = tmp_path / "report.json"
    path.write_text('{\n  "params": \n}\n')
    with pytest.raises(MalformedFile) as info:
        read_report(path)
    assert info.value.line == 3
