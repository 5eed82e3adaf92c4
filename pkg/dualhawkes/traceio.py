"""Trace, catalog and report files.

Trace files are line-delimited JSON: a header line
{"horizon": T, "epoch": index, "seed": seed} followed by one
{"t": time, "items": [...]} line per session. Catalog files are plain text:
a "d m" header and one row of d space-separated decimals per item. Floats
are written with 17 significant digits.
"""

import json
import pathlib
import typing as t

import numpy as np

from .exceptions import ContractViolation, MalformedFile, MissingFile
from .estimate import FitReport
from .model import EpochTrace, ItemCatalog, ModelParams, SessionRecord

PathLike = t.Union[str, pathlib.Path]


def fmt(value: float) -> str:
    """Format float with 17 significant digits."""
    return format(float(value), ".17g")


def _lines(path: PathLike, what: str) -> t.List[str]:
    try:
        return pathlib.Path(path).read_text().splitlines()
    except FileNotFoundError as exc:
        raise MissingFile(path, what) from exc


def write_trace(path: PathLike,
                epoch: EpochTrace,
                index: int = 0,
                seed: t.Optional[int] = None,
                ) -> None:
    """Write epoch to a trace file."""
    seed_text = "null" if seed is None else str(int(seed))
    lines = [
        f'{{"horizon": {fmt(epoch.horizon)}, "epoch": {int(index)}, '
        f'"seed": {seed_text}}}'
    ]
    for session in epoch.sessions:
        items = ", ".join(str(i) for i in session.items)
        lines.append(f'{{"t": {fmt(session.t)}, "items": [{items}]}}')
    pathlib.Path(path).write_text("\n".join(lines) + "\n")


def _record(path: PathLike, number: int, line: str) -> t.Dict[str, t.Any]:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedFile(path, number, f"invalid JSON: {exc.msg}") from exc
    if not isinstance(record, dict):
        raise MalformedFile(path, number, "expected a JSON object")
    return record


def read_trace(path: PathLike) -> t.Tuple[EpochTrace, t.Dict[str, t.Any]]:
    """Read trace file, return (epoch, header)."""
    lines = _lines(path, "trace file")
    if not lines:
        raise MalformedFile(path, 1, "missing header line")
    header = _record(path, 1, lines[0])
    if "horizon" not in header:
        raise MalformedFile(path, 1, "header has no horizon")

    sessions = []
    for number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        record = _record(path, number, line)
        try:
            sessions.append(SessionRecord(record["t"], record["items"]))
        except KeyError as exc:
            raise MalformedFile(path, number, f"missing field {exc}") from exc
        except (ContractViolation, TypeError, ValueError) as exc:
            raise MalformedFile(path, number, str(exc)) from exc
        if len(sessions) > 1 and sessions[-1].t <= sessions[-2].t:
            raise MalformedFile(path, number, "time doesn't increase")
    try:
        epoch = EpochTrace(tuple(sessions), header["horizon"])
    except (ContractViolation, TypeError, ValueError) as exc:
        raise MalformedFile(path, 1, str(exc)) from exc
    return epoch, header


def write_catalog(path: PathLike, catalog: ItemCatalog) -> None:
    """Write catalog matrix with a "d m" header."""
    lines = [f"{catalog.dim} {catalog.count}"]
    lines.extend(" ".join(fmt(x) for x in row) for row in catalog.vectors)
    pathlib.Path(path).write_text("\n".join(lines) + "\n")


def read_catalog(path: PathLike) -> ItemCatalog:
    """Read catalog file written by write_catalog."""
    lines = _lines(path, "catalog")
    try:
        dim, count = (int(x) for x in lines[0].split())
    except (IndexError, ValueError) as exc:
        raise MalformedFile(path, 1, "expected header 'd m'") from exc

    rows = []
    for number, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            row = [float(x) for x in line.split()]
        except ValueError as exc:
            raise MalformedFile(path, number, str(exc)) from exc
        if len(row) != dim:
            raise MalformedFile(path, number,
                                f"expected {dim} values, got {len(row)}")
        norm = float(np.linalg.norm(row))
        if abs(norm - 1) > 1e-9:
            raise MalformedFile(path, number, f"row norm is {norm}, not 1")
        rows.append(row)
    if len(rows) != count:
        raise MalformedFile(path, len(lines),
                            f"expected {count} rows, got {len(rows)}")
    return ItemCatalog(np.array(rows))


def write_json(path: PathLike, data: t.Any) -> None:
    """Write JSON document."""
    pathlib.Path(path).write_text(json.dumps(data, indent=2) + "\n")


def read_json(path: PathLike, what: str = "file") -> t.Any:
    """Read JSON document."""
    text = "\n".join(_lines(path, what))
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedFile(path, exc.lineno, exc.msg) from exc


def write_params(path: PathLike, params: ModelParams) -> None:
    """Write ModelParams as JSON."""
    write_json(path, params.to_dict())


def read_params(path: PathLike) -> ModelParams:
    """Read ModelParams from a params file or from a FitReport."""
    data = read_json(path, "parameter file")
    if isinstance(data, dict) and "params" in data:
        data = data["params"]
    try:
        return ModelParams.from_dict(data)
    except (ContractViolation, TypeError, ValueError) as exc:
        raise MalformedFile(path, 1, str(exc)) from exc


def write_report(path: PathLike, report: FitReport) -> None:
    """Write FitReport as JSON."""
    write_json(path, report.to_dict())


def read_report(path: PathLike) -> FitReport:
    """Read FitReport written by write_report."""
    data = read_json(path, "report")
    try:
        return FitReport.from_dict(data)
    except (ContractViolation, KeyError, TypeError, ValueError) as exc:
        raise MalformedFile(path, 1, f"invalid report: {exc}") from exc
