"""The fixed results-CSV schema: UTF-8, LF endings, full-precision floats."""

from dataclasses import dataclass
from pathlib import Path
from typing import List, Set, Tuple

from ..errors import ConfigError

HEADER = "agent,N,K,n_group,seed,train_steps,eval_steps,mean_rate,std_rate,wall_time_s"


@dataclass(frozen=True)
class RunRecord:
    agent: str
    n: int
    k: int
    n_group: int
    seed: int
    train_steps: int
    eval_steps: int
    mean_rate: float
    std_rate: float
    wall_time_s: float

    def key(self) -> Tuple:
        """Identity of a sweep cell (everything but the measured outcomes)."""
        return (self.agent, self.n, self.k, self.n_group, self.seed,
                self.train_steps, self.eval_steps)


def format_row(rec: RunRecord) -> str:
    return ",".join([rec.agent, str(rec.n), str(rec.k), str(rec.n_group),
                     str(rec.seed), str(rec.train_steps), str(rec.eval_steps),
                     repr(rec.mean_rate), repr(rec.std_rate),
                     repr(rec.wall_time_s)])


def append_row(path, rec: RunRecord) -> None:
    """One row per completed run; the header is written on first use."""
    path = Path(path)
    line = format_row(rec) + "\n"
    if not path.exists() or path.stat().st_size == 0:
        line = HEADER + "\n" + line
    with open(path, "a", encoding="utf-8", newline="\n") as fh:
        fh.write(line)
        fh.flush()


def parse_row(line: str, lineno: int) -> RunRecord:
    parts = line.rstrip("\n").split(",")
    if len(parts) != 10:
        raise ConfigError(f"row {lineno}: expected 10 fields, got {len(parts)}")
    try:
        return RunRecord(agent=parts[0], n=int(parts[1]), k=int(parts[2]),
                         n_group=int(parts[3]), seed=int(parts[4]),
                         train_steps=int(parts[5]), eval_steps=int(parts[6]),
                         mean_rate=float(parts[7]), std_rate=float(parts[8]),
                         wall_time_s=float(parts[9]))
    except ValueError as exc:
        raise ConfigError(f"row {lineno}: {exc}") from exc


def read_records(path) -> List[RunRecord]:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        return []
    if lines[0] != HEADER:
        raise ConfigError(f"row 1: bad header {lines[0]!r}")
    return [parse_row(line, i + 2) for i, line in enumerate(lines[1:]) if line]


def existing_keys(path) -> Set[Tuple]:
    path = Path(path)
    if not path.exists():
        return set()
    return {rec.key() for rec in read_records(path)}
