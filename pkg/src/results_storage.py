"""
Result storage: error tables as CSV and run manifests as JSON.
"""
import csv
import json
import logging
import os
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional

from src.elastic.errors import InvalidArgumentError, ScatteringError

logger = logging.getLogger(__name__)

CSV_HEADER = ("example", "N", "statistic", "error")
FORMATS = ("csv", "json")

# 10 significant digits
_ERROR_FORMAT = "%.9e"


@dataclass(frozen=True)
class ErrorRow:
    """Mean squared deviation of one field statistic for one example and refinement."""

    example: str
    N: int
    statistic: str
    error: float

    def __post_init__(self):
        if not self.error >= 0:
            raise InvalidArgumentError(f"Error values must be >= 0, got {self.error}")


def _ensure_directory(path: str):
    """Ensure the directory for the output file exists."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)


def format_error(value: float) -> str:
    return _ERROR_FORMAT % value


def emit_results(
    rows: List[ErrorRow],
    fmt: str,
    path: str,
    config: Optional[Dict[str, Any]] = None,
    runtime_seconds: Optional[Dict[int, float]] = None,
    extra: Optional[Dict[str, Any]] = None,
) -> str:
    """
    Write error rows as CSV or as a JSON manifest.

    The manifest holds {"config", "results", "runtime_seconds"} plus any extra
    sections. Runtimes are omitted when not given, which keeps repeated runs
    byte-identical.

    Args:
        rows: Error rows in output order
        fmt: "csv" or "json"
        path: Output file path
        config: Run configuration dictionary (manifest only)
        runtime_seconds: Wall time per N (manifest only)
        extra: Additional manifest sections, e.g. solve reports

    Returns:
        The path written

    Raises:
        ScatteringError: if the file cannot be written
    """
    if fmt not in FORMATS:
        raise InvalidArgumentError(f"Unknown output format '{fmt}', expected one of {FORMATS}")
    try:
        _ensure_directory(path)
        if fmt == "csv":
            with open(path, "w", encoding="utf-8", newline="") as f:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(CSV_HEADER)
                for row in rows:
                    writer.writerow([row.example, row.N, row.statistic, format_error(row.error)])
        else:
            manifest: Dict[str, Any] = {
                "config": config or {},
                "results": [
                    {**asdict(row), "error": float(format_error(row.error))} for row in rows
                ],
            }
            if runtime_seconds is not None:
                manifest["runtime_seconds"] = {str(n): t for n, t in sorted(runtime_seconds.items())}
            if extra:
                manifest.update(extra)
            with open(path, "w", encoding="utf-8") as f:
                json.dump(manifest, f, indent=2, sort_keys=True)
                f.write("\n")
    except OSError as e:
        logger.error(f"Error writing results to {path}: {e}")
        raise ScatteringError(f"Cannot write results to {path}: {e}") from e

    logger.info(f"Wrote {len(rows)} result rows to {path}")
    return path


def read_results_csv(path: str) -> List[ErrorRow]:
    """
    Read error rows written by emit_results(fmt="csv").

    Args:
        path: CSV file path

    Returns:
        List of ErrorRow
    """
    rows = []
    try:
        with open(path, "r", encoding="utf-8", newline="") as f:
            reader = csv.reader(f)
            header = next(reader, None)
            if tuple(header or ()) != CSV_HEADER:
                raise ScatteringError(f"Unexpected CSV header in {path}: {header}")
            for record in reader:
                if not record:
                    continue
                example, n, statistic, error = record
                rows.append(ErrorRow(example=example, N=int(n), statistic=statistic, error=float(error)))
    except OSError as e:
        logger.error(f"Error reading results from {path}: {e}")
        raise ScatteringError(f"Cannot read results from {path}: {e}") from e
    return rows


def read_manifest(path: str) -> Dict[str, Any]:
    """Load a JSON manifest written by emit_results(fmt="json")."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"Error reading manifest {path}: {e}")
        raise ScatteringError(f"Cannot read manifest {path}: {e}") from e
