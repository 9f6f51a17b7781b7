"""Copyright (c) 2022 VIKTOR B.V.

Permission is hereby granted, free of charge, to any person obtaining a copy of this software and associated
documentation files (the "Software"), to deal in the Software without restriction, including without limitation the
rights to use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of the Software, and to permit
persons to whom the Software is furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in all copies or substantial portions of the
Software.

VIKTOR B.V. PROVIDES THIS SOFTWARE ON AN "AS IS" BASIS, WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED, INCLUDING BUT
NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT
SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF
CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
SOFTWARE.
"""
import csv
import json
import logging
import os
from pathlib import Path
from typing import Iterable
from typing import Optional
from typing import Sequence

import numpy as np

from .constants import CSV_LINE_TERMINATOR
from .constants import FLOAT_FORMAT
from .constants import OUTPUT_DIR_ENV
from ..amplitudes.model import plain_value
from ..errors import ValidationError

logger = logging.getLogger(__name__)


def format_value(value) -> str:
    """Returns the CSV cell of a value: floats at 17 significant digits, flags as 0/1."""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), FLOAT_FORMAT)
    return str(value)


def resolve_output_path(path, outdir: Optional[str] = None) -> Path:
    """Places a relative output path under --outdir, or else under the output directory from the environment."""
    path = Path(path)
    if not path.is_absolute():
        base = outdir or os.environ.get(OUTPUT_DIR_ENV)
        if base:
            path = Path(base) / path
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as mkdir_error:
        raise ValidationError(f"Cannot create output directory {path.parent}: {mkdir_error}") from mkdir_error
    return path


def emit_csv(rows: Iterable[dict], schema: Sequence[str], path: Path) -> Path:
    """Writes the rows in the fixed column order of the schema."""
    rows = list(rows)
    for index, row in enumerate(rows):
        missing = [column for column in schema if column not in row]
        if missing:
            raise ValidationError(f"Row {index} lacks the columns {missing}")
    try:
        with open(path, "w", newline="", encoding="utf-8") as csv_file:
            writer = csv.writer(csv_file, lineterminator=CSV_LINE_TERMINATOR)
            writer.writerow(schema)
            for row in rows:
                writer.writerow([format_value(row[column]) for column in schema])
    except OSError as write_error:
        raise ValidationError(f"Cannot write CSV to {path}: {write_error}") from write_error
    logger.info("Wrote %d rows to %s", len(rows), path)
    return path


def json_text(report: dict) -> str:
    return json.dumps(plain_value(report), indent=2, sort_keys=True) + "\n"


def emit_json(report: dict, path: Optional[Path] = None) -> str:
    """Writes the JSON report to path, or returns it for stdout when path is None."""
    text = json_text(report)
    if path is not None:
        try:
            Path(path).write_text(text, encoding="utf-8")
        except OSError as write_error:
            raise ValidationError(f"Cannot write JSON to {path}: {write_error}") from write_error
        logger.info("Wrote JSON report to %s", path)
    return text
