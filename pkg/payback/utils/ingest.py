"""Cash flow and discount table ingestion.

CSV files hold one ``time,value`` pair per line, parsed with pandas as
strings; the first line may be a header when it holds no number. The
UTF-8 byte order mark is dropped. JSON files follow
:class:`payback.schemas.project_file.ProjectFile`.
Numbers are read as exact rationals, never through float.
"""

import io
import json
import re
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Tuple

import pandas as pd
import structlog
from pydantic import ValidationError

from payback.exceptions import IngestError, InvalidEventError
from payback.schemas.project_file import ProjectFile
from payback.utils.logging import log_ingest_event
from payback.utils.rational import to_rational

logger = structlog.get_logger(__name__)

RawPairs = List[Tuple[Fraction, Fraction]]


_CSV_COLUMNS = ["time", "value", "extra"]


def _read_text(path: Path) -> str:
    if not path.exists():
        raise IngestError("file does not exist", str(path))
    if not path.is_file():
        raise IngestError("path is not a file", str(path))
    try:
        return path.read_text(encoding="utf-8-sig")
    except (OSError, UnicodeDecodeError) as e:
        raise IngestError(f"cannot read file: {e}", str(path)) from e


def _read_frame(path: Path, text: str) -> pd.DataFrame:
    """All cells as strings, one row per line; comments are blanked so line numbers hold."""
    uncommented = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    try:
        return pd.read_csv(
            io.StringIO(uncommented),
            header=None,
            names=_CSV_COLUMNS,
            dtype=str,
            skip_blank_lines=False,
            keep_default_na=False,
            na_filter=False,
        )
    except pd.errors.EmptyDataError:
        return pd.DataFrame(columns=_CSV_COLUMNS)
    except pd.errors.ParserError as e:
        match = re.search(r"line (\d+)", str(e))
        raise IngestError(f"malformed CSV: {e}", str(path), int(match.group(1)) if match else None) from e


def _cell(value) -> str:
    return "" if pd.isna(value) else str(value).strip()


def _maybe_rational(text: str) -> Optional[Fraction]:
    try:
        return to_rational(text)
    except InvalidEventError:
        return None


def _parse_pairs_csv(path: Path, text: str, value_name: str) -> RawPairs:
    """Rational pairs from CSV; blank lines and ``#`` comments are skipped.

    The first data line is a header only when neither of its cells is a number.
    """
    pairs: RawPairs = []
    first_row = True
    rows = _read_frame(path, text).itertuples(index=False, name=None)
    for line_no, row in enumerate(rows, start=1):
        cells = [_cell(value) for value in row]
        if not any(cells):
            continue
        is_first, first_row = first_row, False
        field_count = 3 if cells[2] else 2 if cells[1] else 1
        if field_count != 2:
            raise IngestError(f"expected 'time,{value_name}', got {field_count} fields", str(path), line_no)
        if is_first and _maybe_rational(cells[0]) is None and _maybe_rational(cells[1]) is None:
            continue
        try:
            time, value = to_rational(cells[0]), to_rational(cells[1])
        except InvalidEventError as e:
            raise IngestError(str(e), str(path), line_no) from e
        if time < 0:
            raise IngestError(f"negative time {time}", str(path), line_no)
        pairs.append((time, value))
    return pairs


def _parse_events_json(path: Path, text: str) -> Tuple[Optional[str], RawPairs]:
    try:
        document = json.loads(text, parse_float=Fraction, parse_int=Fraction)
    except json.JSONDecodeError as e:
        raise IngestError(f"invalid JSON: {e.msg}", str(path), e.lineno) from e
    try:
        project_file = ProjectFile.model_validate(document)
    except ValidationError as e:
        raise IngestError(f"invalid project document: {e.errors()[0]['msg']}", str(path)) from e
    raw = project_file.raw_events()
    for time, _ in raw:
        if time < 0:
            raise IngestError(f"negative time {time}", str(path))
    return project_file.name, raw


def parse_events(path) -> Tuple[str, RawPairs]:
    """Read a cash flow file; returns the project name and the raw events.

    The name defaults to the file stem.
    """
    path = Path(path)
    text = _read_text(path)
    source_format = "json" if path.suffix.lower() == ".json" or text.lstrip().startswith("{") else "csv"
    try:
        if source_format == "json":
            name, raw = _parse_events_json(path, text)
        else:
            name, raw = None, _parse_pairs_csv(path, text, "amount")
    except IngestError as e:
        log_ingest_event(logger, str(path), source_format, 0, error=str(e))
        raise
    log_ingest_event(logger, str(path), source_format, len(raw))
    return name or path.stem, raw


def parse_discount_table(path) -> RawPairs:
    """Read a ``time,factor`` CSV discount table."""
    path = Path(path)
    try:
        pairs = _parse_pairs_csv(path, _read_text(path), "factor")
    except IngestError as e:
        log_ingest_event(logger, str(path), "discount-table", 0, error=str(e))
        raise
    log_ingest_event(logger, str(path), "discount-table", len(pairs))
    return pairs
