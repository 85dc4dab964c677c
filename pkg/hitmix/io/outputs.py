import json
import logging
import os
import tempfile
from pathlib import Path

import pandas as pd

# Set up logging
logger = logging.getLogger(__name__)


def write_text_atomic(path: Path, text: str) -> Path:
    """Write via a temporary file in the target directory, then rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    logger.info(f"Wrote {path}")
    return path


def write_table(frame: pd.DataFrame, path: Path, sep: str = "\t") -> Path:
    return write_text_atomic(path, frame.to_csv(sep=sep, index=False, lineterminator="\n"))


def write_json(payload: dict, path: Path) -> Path:
    return write_text_atomic(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")

