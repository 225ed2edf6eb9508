"""Report envelopes and atomic file output.

Every JSON report carries ``"schema": 1``, the tool name and version, the input
(source description and SHA-256 of the canonical edge list), the seed and the
tolerances in effect, so a run can be reproduced from its report alone.
"""

import json
import logging
import math
from pathlib import Path
from typing import Any

from sphrep.core.graph import Graph

__all__ = ["SCHEMA_VERSION", "dumps", "envelope", "input_block", "write_json", "write_text"]


logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
TOOL_NAME = "sphrep"


def input_block(source: str, graph: Graph) -> dict[str, Any]:
    return {"source": source, "n": graph.n, "m": graph.m, "sha256": graph.fingerprint}


def envelope(
    command: str,
    *,
    version: str,
    seed: int | None,
    tolerances: dict[str, float],
    inputs: dict[str, Any] | None = None,
    **body: Any,
) -> dict[str, Any]:
    """Wrap a command result in the versioned report header."""
    return {
        "schema": SCHEMA_VERSION,
        "tool": {"name": TOOL_NAME, "version": version},
        "command": command,
        "input": inputs,
        "seed": seed,
        "tolerances": tolerances,
        **body,
    }


def _finite(value: Any) -> Any:
    """Replace non-finite floats (girth of a forest, ...) with None for strict JSON."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {key: _finite(item) for key, item in value.items()}
    if isinstance(value, list | tuple):
        return [_finite(item) for item in value]
    return value


def dumps(report: dict[str, Any]) -> str:
    return json.dumps(_finite(report), indent=2, allow_nan=False) + "\n"


def write_text(path: Path, text: str) -> None:
    """Write ``text`` through a sibling temp file renamed into place.

    A crash mid-write leaves the previous file (or nothing), never a truncated
    one.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.parent / (path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    tmp.replace(path)
    logger.debug("Wrote %s (%d bytes)", path, len(text))


def write_json(path: Path, report: dict[str, Any]) -> None:
    write_text(path, dumps(report))
