"""Structured warning stream shared by filters and aggregators.

Each entry is {op, doc_id, reason}; the log serializes to JSON Lines so
pipeline runs leave an auditable trail of every dropped or flagged record.
"""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path

logger = logging.getLogger("framekey")
_LEVELS = {"debug": logging.DEBUG, "info": logging.INFO, "warning": logging.WARNING}


def configure_logging():
    """Set verbosity from FRAMEKEY_LOG (debug|info|warning; default warning)."""
    level = _LEVELS.get(os.environ.get("FRAMEKEY_LOG", "warning").lower(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


class WarningLog:
    def __init__(self):
        self.entries: list[dict] = []

    def warn(self, op: str, doc_id: str, reason: str):
        entry = {"op": op, "doc_id": doc_id, "reason": reason}
        self.entries.append(entry)
        logger.debug("%s: %s (%s)", op, reason, doc_id)

    def __len__(self) -> int:
        return len(self.entries)

    def write(self, path: str | Path):
        with open(path, "w", encoding="utf-8") as fh:
            for entry in self.entries:
                fh.write(json.dumps(entry, ensure_ascii=False) + "\n")
