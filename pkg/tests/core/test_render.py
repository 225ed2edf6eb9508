"""Tests for SVG rendering."""

import numpy as np
import pytest
from defusedxml import ElementTree

from sphrep.core.exceptions import DimensionMismatchError, WrongDimensionError
from sphrep.core.generators import cycle, petersen
from sphrep.core.render import MARGIN, VIEWPORT, RenderStyle, render_svg
from sphrep.core.representation import RepresentationMatrix, spectral_drawing

SVG = "{http://www.w3.org/2000/svg}"


def parse(svg: str):
    return ElementTree.fromstring(svg.encode())


class TestRenderSvg:
    def test_one_line_per_edge_and_one_circle_per_vertex(self):
        graph = petersen()
        root = parse(render_svg(graph, spectral_drawing(graph, 2)))
        assert root.tag == f"{SVG}svg"
        assert root.get("viewBox") == f"0 0 {VIEWPORT} {VIEWPORT}"
        assert len(root.findall(f".//{SVG}line")) == 15
        assert len(root.findall(f".//{SVG}circle")) == 10

    def test_coordinates_fill_the_viewport_inside_the_margin(self):
        graph = cycle(8)
        angles = 2 * np.pi * np.arange(8) / 8
        rep = RepresentationMatrix(np.vstack([np.cos(angles), np.sin(angles)]))
        circles = parse(render_svg(graph, rep)).findall(f".//{SVG}circle")
        xs = [float(c.get("cx")) for c in circles]
        ys = [float(c.get("cy")) for c in circles]
        assert min(xs) == pytest.approx(VIEWPORT * MARGIN)
        assert max(xs) == pytest.approx(VIEWPORT * (1 - MARGIN))
        # y grows downwards in SVG, so vertex 2 (top of the circle) has the smallest cy
        assert ys[2] == min(ys)

    def test_output_is_deterministic(self):
        graph = petersen()
        rep = spectral_drawing(graph, 2)
        assert render_svg(graph, rep) == render_svg(graph, rep)

    def test_xml_declaration(self):
        graph = cycle(3)
        rep = RepresentationMatrix(np.array([[0.0, 1.0, 0.5], [0.0, 0.0, 1.0]]))
        assert render_svg(graph, rep).startswith('<?xml version="1.0" encoding="UTF-8"?>\n<svg')

    def test_coincident_vertices_sit_at_the_centre(self):
        graph = cycle(3)
        rep = RepresentationMatrix(np.zeros((2, 3)))
        circles = parse(render_svg(graph, rep)).findall(f".//{SVG}circle")
        assert {c.get("cx") for c in circles} == {f"{VIEWPORT / 2:.3f}"}

    def test_labels(self):
        graph = cycle(4)
        rep = RepresentationMatrix(np.array([[1.0, 0.0, -1.0, 0.0], [0.0, 1.0, 0.0, -1.0]]))
        root = parse(render_svg(graph, rep, RenderStyle(labels=True, edge_colour="#ff0000")))
        assert [t.text for t in root.findall(f".//{SVG}text")] == ["0", "1", "2", "3"]
        edges = root.find(f"{SVG}g[@id='edges']")
        assert edges is not None
        assert edges.get("stroke") == "#ff0000"

    def test_needs_two_rows(self):
        with pytest.raises(WrongDimensionError):
            render_svg(cycle(3), RepresentationMatrix(np.zeros((3, 3))))

    def test_column_count(self):
        with pytest.raises(DimensionMismatchError):
            render_svg(cycle(4), RepresentationMatrix(np.zeros((2, 3))))
