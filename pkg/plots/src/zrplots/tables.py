"""Parsing of sweep tables and wave dumps produced by the zrdelay CLI.

Tables are CSV with a ``#``-prefixed preamble of ``key: value`` lines (the
first line names the producer and version).  Only schema version 1 is
accepted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

SUPPORTED_SCHEMA = 1


class TableError(ValueError):
    """Table fails the schema or one of its invariants."""


def _convert(token: str):
    if token == "true":
        return True
    if token == "false":
        return False
    try:
        return float(token)
    except ValueError:
        return token


@dataclass
class SweepTable:
    """Parsed rows of one CLI output table."""

    path: Path
    preamble: dict[str, str] = field(default_factory=dict)
    columns: tuple[str, ...] = ()
    rows: list[dict] = field(default_factory=list)

    @classmethod
    def load(cls, path: str | Path) -> "SweepTable":
        path = Path(path)
        preamble: dict[str, str] = {}
        producer = ""
        columns: tuple[str, ...] = ()
        rows: list[dict] = []
        for raw in path.read_text().splitlines():
            if raw.startswith("#"):
                body = raw.lstrip("#").strip()
                if ":" in body:
                    key, value = (s.strip() for s in body.split(":", 1))
                    preamble[key] = value
                elif not producer:
                    producer = body
                continue
            if not raw.strip():
                continue
            if not columns:
                columns = tuple(raw.strip().split(","))
                continue
            tokens = raw.strip().split(",")
            if len(tokens) != len(columns):
                raise TableError(
                    f"{path.name}: row has {len(tokens)} fields, expected "
                    f"{len(columns)} ({', '.join(columns)})")
            rows.append(dict(zip(columns, (_convert(t) for t in tokens))))
        if producer:
            preamble.setdefault("producer", producer)
        table = cls(path=path, preamble=preamble, columns=columns, rows=rows)
        table._check()
        return table

    def _check(self) -> None:
        schema = self.preamble.get("schema")
        if schema is None or int(float(schema)) != SUPPORTED_SCHEMA:
            raise TableError(
                f"{self.path.name}: unsupported schema {schema!r} "
                f"(supported: {SUPPORTED_SCHEMA})")
        if not self.columns:
            raise TableError(f"{self.path.name}: no header row")
        if "dx" in self.columns and "status" in self.columns:
            for law, rows in self.grouped("dispersion").items():
                widths = [r["dx"] for r in rows]
                if any(b < a for a, b in zip(widths, widths[1:])):
                    raise TableError(
                        f"{self.path.name}: dx not monotone within "
                        f"dispersion group {law!r}")

    def require(self, *names: str) -> None:
        missing = [n for n in names if n not in self.columns]
        if missing:
            raise TableError(
                f"{self.path.name}: missing column(s) {', '.join(missing)}; "
                f"present: {', '.join(self.columns)}")

    def ok_rows(self) -> list[dict]:
        if "status" not in self.columns:
            return list(self.rows)
        return [r for r in self.rows if r.get("status") == "ok"]

    def grouped(self, key: str) -> dict[str, list[dict]]:
        groups: dict[str, list[dict]] = {}
        for row in self.ok_rows():
            groups.setdefault(str(row.get(key, "")), []).append(row)
        return groups

    def column(self, name: str, rows: list[dict] | None = None) -> np.ndarray:
        self.require(name)
        source = self.ok_rows() if rows is None else rows
        return np.asarray([r[name] for r in source], dtype=float)

    @property
    def scenario(self) -> str:
        return self.preamble.get("scenario", "")

    def is_wave_dump(self) -> bool:
        return self.preamble.get("dump", "").startswith("waves")
