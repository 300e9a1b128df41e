"""Per-generation run records and their CSV form."""
from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass

import numpy as np

BASE_COLUMNS = ("generation", "fes", "best_f", "best_psi_max", "epsilon", "diversity",
                "epidemic_fired", "pruning_event")
_INT_COLUMNS = {"generation", "fes", "epidemic_fired", "pruning_event"}


def island_column(k: int) -> str:
    return f"island_{k}_best_f"


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


@dataclass
class Record:
    generation: int
    fes: int
    best_f: float
    best_psi_max: float
    epsilon: float
    diversity: float
    epidemic_fired: int
    pruning_event: int
    island_best_f: tuple

    def row(self) -> list:
        return [self.generation, self.fes, self.best_f, self.best_psi_max, self.epsilon,
                self.diversity, self.epidemic_fired, self.pruning_event, *self.island_best_f]


class RunHistory:
    """One record per generation.

    ``epidemic_fired`` counts islands that had an epidemic in that generation;
    ``pruning_event`` is the event index, -1 when none occurred.
    """

    def __init__(self, n_islands: int = 1):
        self.n_islands = n_islands
        self.records: list[Record] = []

    @property
    def columns(self) -> list[str]:
        return list(BASE_COLUMNS) + [island_column(k) for k in range(self.n_islands)]

    def append(self, record: Record) -> None:
        if len(record.island_best_f) != self.n_islands:
            raise ValueError("one best_f per island expected")
        if self.records and record.fes <= self.records[-1].fes:
            raise ValueError("FES must increase strictly between records")
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    def __getitem__(self, i) -> Record:
        return self.records[i]

    @property
    def final(self) -> Record:
        return self.records[-1]

    def column(self, name: str) -> np.ndarray:
        if name.startswith("island_"):
            k = int(name.split("_")[1])
            return np.array([r.island_best_f[k] for r in self.records])
        return np.array([getattr(r, name) for r in self.records])

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.records:
            w.writerow([_fmt(v) for v in r.row()])
        text = buf.getvalue()
        if path is not None:
            with open(os.fspath(path), "w", newline="") as fh:
                fh.write(text)
        return text

    @classmethod
    def from_csv(cls, path) -> "RunHistory":
        with open(os.fspath(path), newline="") as fh:
            rows = list(csv.reader(fh))
        header, body = rows[0], rows[1:]
        if tuple(header[:len(BASE_COLUMNS)]) != BASE_COLUMNS:
            raise ValueError(f"{path}: not a run history (header {header[:3]}...)")
        hist = cls(len(header) - len(BASE_COLUMNS))
        for row in body:
            vals = [int(v) if name in _INT_COLUMNS else float(v)
                    for name, v in zip(BASE_COLUMNS, row)]
            hist.records.append(Record(*vals, tuple(float(v) for v in row[len(BASE_COLUMNS):])))
        return hist

