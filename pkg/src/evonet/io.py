"""CSV and manifest formats used by the command line."""

from __future__ import annotations

import csv
import json
import platform
from dataclasses import asdict, dataclass, field
from importlib import metadata
from pathlib import Path
from typing import Any

import numpy as np

from .distribution import DegreeDistribution
from .errors import CsvParseError


def tool_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_column_csv(path: str | Path, column: str, values: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"k,{column}\n")
        for k, v in enumerate(values):
            fh.write(f"{k},{fmt(v)}\n")


def write_distribution(path: str | Path, P: DegreeDistribution) -> None:
    write_column_csv(path, "p", P.p)


def write_curve(path: str | Path, k: np.ndarray, p: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("k,p\n")
        for ki, pi in zip(k, p):
            fh.write(f"{int(ki)},{fmt(pi)}\n")


def read_distribution(path: str | Path, column: str = "p") -> DegreeDistribution:
    """Parse a ``k,<column>`` CSV; degrees absent from the file get probability 0."""
    rows: dict[int, float] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise CsvParseError(path, 1, "empty file")
        if [h.strip() for h in header] != ["k", column]:
            raise CsvParseError(path, 1, f"expected header 'k,{column}', got {','.join(header)!r}")
        last = -1
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 2:
                raise CsvParseError(path, line, f"expected 2 fields, got {len(row)}")
            try:
                k = int(row[0])
            except ValueError:
                raise CsvParseError(path, line, f"degree {row[0]!r} is not an integer") from None
            try:
                v = float(row[1])
            except ValueError:
                raise CsvParseError(path, line, f"value {row[1]!r} is not a number") from None
            if k < 0 or k <= last:
                raise CsvParseError(path, line, f"degrees must be nonnegative and strictly ascending, got {k}")
            if not np.isfinite(v) or v < 0:
                raise CsvParseError(path, line, f"value must be finite and nonnegative, got {row[1]!r}")
            rows[k] = v
            last = k
    if not rows:
        raise CsvParseError(path, 2, "no data rows")
    p = np.zeros(max(rows) + 1)
    for k, v in rows.items():
        p[k] = v
    return DegreeDistribution(p, {"source": str(path)})


@dataclass
class RunManifest:
    command: str
    params: dict[str, Any]
    seeds: list[int] = field(default_factory=list)
    S: int | None = None
    t: int | None = None
    version: str = field(default_factory=tool_version)
    wall_time: float = 0.0
    outputs: list[str] = field(default_factory=list)
    results: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> str:
        body = asdict(self)
        body["python"] = platform.python_version()
        return json.dumps(body, indent=2, default=_jsonable) + "\n"

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")


def _jsonable(x):
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, Path):
        return str(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def manifest_path(out: str | Path) -> Path:
    out = Path(out)
    return out.with_name(out.name + ".manifest.json")


def sibling(out: str | Path, suffix: str) -> Path:
    """``runs/fig2.csv`` + ``_t500`` -> ``runs/fig2_t500.csv``."""
    out = Path(out)
    return out.with_name(f"{out.stem}{suffix}{out.suffix or '.csv'}")
