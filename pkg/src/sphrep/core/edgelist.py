"""Edge-list text format.

Line 1 holds ``n m``; each of the following ``m`` lines holds ``u v``
(0-indexed, whitespace-separated). Blank lines and lines starting with ``#``
are ignored anywhere in the file.
"""

from pathlib import Path

from sphrep.core.exceptions import GraphParseError, OutOfRangeError, SelfLoopError
from sphrep.core.graph import Graph, build_graph

__all__ = ["format_edge_list", "parse_edge_list", "read_edge_list"]


def _int_pair(line: str, lineno: int) -> tuple[int, int]:
    parts = line.split()
    if len(parts) != 2:
        msg = f"Line {lineno}: expected two integers, got {line!r}"
        raise GraphParseError(msg)
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        msg = f"Line {lineno}: expected two integers, got {line!r}"
        raise GraphParseError(msg) from None


def parse_edge_list(text: str) -> Graph:
    """Parse edge-list text into a graph.

    Raises:
        GraphParseError: Malformed header or edge lines, a wrong edge count, or
            an edge that is out of range or a self-loop.
    """
    lines = [
        (lineno, stripped)
        for lineno, raw in enumerate(text.splitlines(), start=1)
        if (stripped := raw.strip()) and not stripped.startswith("#")
    ]
    if not lines:
        msg = "Empty edge list: expected a header line 'n m'"
        raise GraphParseError(msg)

    header_lineno, header = lines[0]
    n, m = _int_pair(header, header_lineno)
    if n < 0 or m < 0:
        msg = f"Line {header_lineno}: n and m must be non-negative"
        raise GraphParseError(msg)
    body = lines[1:]
    if len(body) != m:
        msg = f"Header declares {m} edges but {len(body)} edge lines follow"
        raise GraphParseError(msg)

    edges = [_int_pair(line, lineno) for lineno, line in body]
    try:
        return build_graph(n, edges)
    except (OutOfRangeError, SelfLoopError) as e:
        raise GraphParseError(str(e)) from e


def read_edge_list(path: Path) -> Graph:
    """Read an edge-list file, mapping I/O and encoding errors to GraphParseError."""
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as e:
        msg = f"Edge-list file not found: {path}"
        raise GraphParseError(msg) from e
    except (OSError, UnicodeDecodeError) as e:
        msg = f"Cannot read edge-list file {path}: {e}"
        raise GraphParseError(msg) from e
    return parse_edge_list(text)


def format_edge_list(graph: Graph) -> str:
    """Canonical edge-list text (sorted edges, ``u < v``)."""
    lines = [f"{graph.n} {graph.m}", *(f"{u} {v}" for u, v in graph.edges)]
    return "\n".join(lines) + "\n"
