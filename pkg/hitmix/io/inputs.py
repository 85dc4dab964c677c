from pathlib import Path
from typing import Iterable, Iterator

import pandas as pd

from hitmix.errors import GraphFormatError


def numbered_lines(stream: Iterable[str | bytes]) -> Iterator[tuple[int, str]]:
    """Yield (line number, text) pairs; byte lines are decoded one at a time as UTF-8."""
    lines = iter(stream)
    line_number = 0
    while True:
        try:
            line = next(lines)
        except StopIteration:
            return
        except UnicodeDecodeError as e:
            raise GraphFormatError(f"not valid UTF-8 ({e.reason})", line_number + 1)
        line_number += 1
        if isinstance(line, bytes):
            try:
                line = line.decode("utf-8")
            except UnicodeDecodeError as e:
                raise GraphFormatError(f"not valid UTF-8 ({e.reason})", line_number)
        yield line_number, line


def read_label_table(path: Path) -> pd.Series:
    """vertex_id -> label from a TSV with at least those two columns."""
    try:
        frame = pd.read_csv(path, sep="\t", comment="#", dtype={"vertex_id": "int64"})
        missing = {"vertex_id", "label"} - set(frame.columns)
        if missing:
            raise GraphFormatError(f"{path} lacks columns {sorted(missing)}")
        labels = frame["label"].astype("int64")
    except (ValueError, pd.errors.ParserError) as e:
        raise GraphFormatError(f"{path} is not a vertex_id/label table: {e}")
    if frame["vertex_id"].duplicated().any():
        raise GraphFormatError(f"{path} lists a vertex more than once")
    return labels.set_axis(frame["vertex_id"])
