"""SVG 1.1 rendering of two-dimensional representations."""

from dataclasses import dataclass
from xml.etree import ElementTree as ET  # noqa: N817, S405  # builds documents only, never parses

import numpy as np

from sphrep.core.exceptions import DimensionMismatchError, WrongDimensionError
from sphrep.core.graph import Graph
from sphrep.core.representation import RepresentationMatrix

__all__ = ["MARGIN", "VERTEX_RADIUS", "VIEWPORT", "RenderStyle", "render_svg"]


VIEWPORT = 800
VERTEX_RADIUS = 6
MARGIN = 0.05

SVG_NAMESPACE = "http://www.w3.org/2000/svg"


@dataclass(frozen=True)
class RenderStyle:
    """Colours and strokes; geometry constants are not styleable."""

    background: str = "#ffffff"
    edge_colour: str = "#4d4d4d"
    edge_width: float = 1.0
    vertex_fill: str = "#1f77b4"
    vertex_outline: str = "#ffffff"
    labels: bool = False
    label_size: int = 10


def _fmt(value: float) -> str:
    return f"{round(value, 3) + 0.0:.3f}"


def _viewport_coordinates(rep: RepresentationMatrix) -> tuple[list[float], list[float]]:
    """Uniformly scale columns into the viewport, y axis pointing up."""
    xs, ys = rep.data[0], rep.data[1]
    if rep.cols == 0:
        return [], []
    span = float(max(np.ptp(xs), np.ptp(ys)))
    inner = VIEWPORT * (1 - 2 * MARGIN)
    scale = inner / span if span > 0 else 0.0
    mid_x = (float(xs.max()) + float(xs.min())) / 2
    mid_y = (float(ys.max()) + float(ys.min())) / 2
    centre = VIEWPORT / 2
    px = [centre + scale * (float(x) - mid_x) for x in xs]
    py = [centre - scale * (float(y) - mid_y) for y in ys]
    return px, py


def render_svg(
    graph: Graph, rep: RepresentationMatrix, style: RenderStyle | None = None
) -> str:
    """Draw one line per edge under one circle per vertex.

    Coordinates are printed with three decimals, so identical inputs give
    identical bytes. Coincident vertices are drawn on top of each other.

    Raises:
        WrongDimensionError: ``rep`` does not have exactly two rows.
        DimensionMismatchError: Column count differs from the vertex count.
    """
    style = style or RenderStyle()
    if rep.rank != 2:
        msg = f"SVG rendering needs exactly 2 rows, got {rep.rank}"
        raise WrongDimensionError(msg)
    if rep.cols != graph.n:
        msg = f"Representation has {rep.cols} columns but the graph has {graph.n} vertices"
        raise DimensionMismatchError(msg)

    px, py = _viewport_coordinates(rep)
    size = str(VIEWPORT)
    root = ET.Element(
        "svg",
        {
            "xmlns": SVG_NAMESPACE,
            "version": "1.1",
            "width": size,
            "height": size,
            "viewBox": f"0 0 {size} {size}",
        },
    )
    ET.SubElement(root, "rect", {"width": size, "height": size, "fill": style.background})

    edges = ET.SubElement(
        root,
        "g",
        {"stroke": style.edge_colour, "stroke-width": _fmt(style.edge_width), "id": "edges"},
    )
    for u, v in graph.edges:
        ET.SubElement(
            edges,
            "line",
            {"x1": _fmt(px[u]), "y1": _fmt(py[u]), "x2": _fmt(px[v]), "y2": _fmt(py[v])},
        )

    vertices = ET.SubElement(
        root, "g", {"fill": style.vertex_fill, "stroke": style.vertex_outline, "id": "vertices"}
    )
    for v in range(graph.n):
        ET.SubElement(
            vertices,
            "circle",
            {"cx": _fmt(px[v]), "cy": _fmt(py[v]), "r": str(VERTEX_RADIUS)},
        )

    if style.labels:
        labels = ET.SubElement(
            root, "g", {"font-size": str(style.label_size), "font-family": "sans-serif"}
        )
        for v in range(graph.n):
            text = ET.SubElement(
                labels,
                "text",
                {"x": _fmt(px[v] + VERTEX_RADIUS + 2), "y": _fmt(py[v] - VERTEX_RADIUS)},
            )
            text.text = str(v)

    ET.indent(root)
    body = ET.tostring(root, encoding="unicode")
    return f'<?xml version="1.0" encoding="UTF-8"?>\n{body}\n'
