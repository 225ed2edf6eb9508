"""Tests for the edge-list text format."""

import pytest

from sphrep.core.edgelist import format_edge_list, parse_edge_list, read_edge_list
from sphrep.core.exceptions import GraphParseError
from sphrep.core.generators import petersen


class TestParse:
    def test_comments_and_blank_lines(self):
        graph = parse_edge_list("# triangle\n3 3\n\n0 1\n1 2\n# closing edge\n2 0\n")
        assert graph.edges == ((0, 1), (0, 2), (1, 2))

    def test_canonical_text_parses_back(self):
        graph = petersen()
        assert parse_edge_list(format_edge_list(graph)) == graph

    def test_format(self):
        assert format_edge_list(parse_edge_list("3 2\n2 1\n1 0\n")) == "3 2\n0 1\n1 2\n"

    @pytest.mark.parametrize(
        ("text", "match"),
        [
            ("", "Empty edge list"),
            ("3\n", "expected two integers"),
            ("3 x\n", "expected two integers"),
            ("3 2\n0 1\n", "declares 2 edges but 1"),
            ("3 1\n0 1 2\n", "Line 2"),
            ("3 1\n0 5\n", "out of range"),
            ("3 1\n1 1\n", "Self-loop"),
            ("-1 0\n", "non-negative"),
        ],
    )
    def test_malformed(self, text, match):
        with pytest.raises(GraphParseError, match=match):
            parse_edge_list(text)


class TestRead:
    def test_read_file(self, tmp_path):
        source = tmp_path / "graph.txt"
        source.write_text("2 1\n0 1\n", encoding="utf-8")
        assert read_edge_list(source).m == 1

    def test_missing_file(self, tmp_path):
        with pytest.raises(GraphParseError, match="not found"):
            read_edge_list(tmp_path / "absent.txt")

    def test_undecodable_file(self, tmp_path):
        source = tmp_path / "graph.bin"
        source.write_bytes(b"\xff\xfe\x00")
        with pytest.raises(GraphParseError, match="Cannot read"):
            read_edge_list(source)
