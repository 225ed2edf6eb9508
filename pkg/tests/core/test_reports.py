"""Tests for report envelopes and atomic output."""

import json
import math

from sphrep.core.generators import petersen
from sphrep.core.reports import (
    SCHEMA_VERSION,
    dumps,
    envelope,
    input_block,
    write_json,
    write_text,
)


class TestEnvelope:
    def test_header_fields(self):
        graph = petersen()
        report = envelope(
            "bound",
            version="0.1.0",
            seed=3,
            tolerances={"sandwich": 1e-6},
            inputs=input_block("gen:petersen", graph),
            upper_bound=5.0,
        )
        assert report["schema"] == SCHEMA_VERSION == 1
        assert report["tool"] == {"name": "sphrep", "version": "0.1.0"}
        assert report["command"] == "bound"
        assert report["input"]["sha256"] == graph.fingerprint
        assert (report["input"]["n"], report["input"]["m"]) == (10, 15)
        assert report["upper_bound"] == 5.0

    def test_non_finite_values_become_null(self):
        text = dumps({"girth": math.inf, "nested": [{"x": math.nan}], "pair": (1.0, 2.0)})
        assert json.loads(text) == {"girth": None, "nested": [{"x": None}], "pair": [1.0, 2.0]}


class TestAtomicWrite:
    def test_write_json(self, tmp_path):
        target = tmp_path / "out" / "report.json"
        write_json(target, {"schema": 1})
        assert json.loads(target.read_text(encoding="utf-8")) == {"schema": 1}
        assert not (target.parent / "report.json.tmp").exists()

    def test_replaces_existing_file(self, tmp_path):
        target = tmp_path / "drawing.svg"
        target.write_text("old", encoding="utf-8")
        write_text(target, "new")
        assert target.read_text(encoding="utf-8") == "new"
