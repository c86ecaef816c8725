# Output helpers for the CLI: JSON documents from report models and CSV tables,
# written atomically (temp file in the target directory, then os.replace).
from __future__ import annotations

import csv
import io
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Iterable, Optional, Sequence

from pydantic import BaseModel

logger = logging.getLogger("qgkernel.reporting")


def atomic_write(path: str | Path, text: str) -> Path:
    """Write text so readers see either the old file or the complete new one."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=str(target.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except Exception:
        # Leave no partial temp file behind
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    logger.info("report.written path=%s bytes=%d", target, len(text))
    return target


def report_json(report: BaseModel, config: Optional[BaseModel] = None) -> str:
    if config is not None:
        report = report.model_copy(update={"config": config.model_dump(mode="json")})
    return json.dumps(report.model_dump(mode="json", by_alias=True), indent=2, sort_keys=True) + "\n"


def emit(text: str, out: Optional[str]) -> Optional[Path]:
    """Write to `out` when given; the caller echoes to stdout otherwise."""
    if out:
        return atomic_write(out, text)
    return None


def csv_text(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()
