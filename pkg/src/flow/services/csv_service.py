import csv
import io
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from src.flow.model import TrajectoryRecord
from src.utils.files import atomic_write_text
from src.utils.logger import logger

log = logger(__name__)

MISSING = "nan"


def _num(value: Optional[float]) -> str:
    if value is None:
        return MISSING
    return f"{value:.15g}"


def _pair(value: Optional[complex]) -> List[str]:
    if value is None:
        return [MISSING, MISSING]
    return [_num(value.real), _num(value.imag)]


def header(arity: int, driven_index: int) -> List[str]:
    """Column names; coordinates and drift columns are numbered from 1."""
    columns = ["step", "r"]
    for prefix in ("x", "y"):
        for i in range(1, arity + 1):
            columns += [f"{prefix}{i}_re", f"{prefix}{i}_im"]
    columns += ["u_re", "u_im", "gamma_re", "gamma_im"]
    columns += [f"drift_{j + 1}" for j in range(arity) if j != driven_index]
    columns += ["res_u", "res_gamma"]
    return columns


def row(record: TrajectoryRecord, driven_index: int) -> List[str]:
    values = [str(record.step), _num(record.r)]
    for vector in (record.x, record.y):
        for c in vector:
            values += _pair(c)
    values += _pair(record.u) + _pair(record.gamma)
    values += [
        _num(record.conserved_drift.get(j))
        for j in range(len(record.x))
        if j != driven_index
    ]
    residuals = record.rate_residuals
    values += [MISSING, MISSING] if residuals is None else [_num(v) for v in residuals]
    return values


def render_csv(records: Sequence[TrajectoryRecord], driven_index: int) -> str:
    if not records:
        raise ValueError("no records to write")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header(len(records[0].x), driven_index))
    for record in records:
        writer.writerow(row(record, driven_index))
    return buffer.getvalue()


def write_csv(
    records: Sequence[TrajectoryRecord], path: str | Path, driven_index: int
) -> Path:
    """Write the trajectory atomically; returns the final path."""
    target = atomic_write_text(path, render_csv(records, driven_index))
    log.info(f"Wrote {len(records)} records to {target}")
    return target


def read_csv(path: str | Path) -> List[Dict[str, float]]:
    """Parse a trajectory file back into one float mapping per row."""
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        return [{key: float(value) for key, value in line.items()} for line in reader]
