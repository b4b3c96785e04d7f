"""Tests for ASCII, PPM and PNG rendering of windows."""

import base64
import json

import numpy as np
import pytest

from configurations.periodic import indicator_lattice
from services.render_service import RenderService, image_rows
from utils.config_loader import ConfigLoader
from utils.exceptions import DimensionMismatchError
from utils.regions import Box


class TestImageRows:
    def test_top_row_is_largest_y(self):
        values = np.array([[0, 2], [1, 3]], dtype=object)
        assert image_rows(values).tolist() == [[2, 3], [0, 1]]

    def test_line_becomes_single_row(self):
        assert image_rows(np.array([4, 5, 6])).shape == (1, 3)

    def test_three_dimensions_rejected(self):
        with pytest.raises(DimensionMismatchError):
            image_rows(np.zeros((2, 2, 2)))


class TestAscii:
    def setup_method(self):
        self.service = RenderService()

    def test_single_point(self):
        c = indicator_lattice([(3, 0), (0, 5)], [(1, 2)])
        text = self.service.ascii(c.window(Box((0, 0), (2, 2))))
        assert text == ".#.\n...\n..."

    def test_glyphs_outside_legend(self):
        assert self.service.glyph(2) == "2"
        assert self.service.glyph(17) == "1"
        assert self.service.glyph(-1) == "f"
        assert "hex digit" in self.service.legend_text()


class TestImages:
    def setup_method(self):
        self.service = RenderService()
        self.values = np.array([[0, 2], [1, 3]], dtype=object)

    def test_ppm_bytes(self):
        data, mapping = self.service.ppm(self.values)
        header = b"P6\n2 2\n255\n"
        assert data.startswith(header)
        body = data[len(header):]
        assert body == bytes([170] * 3 + [255] * 3 + [0] * 3 + [85] * 3)
        assert mapping["min"] == 0
        assert mapping["max"] == 3

    def test_constant_window_is_black(self):
        data, _ = self.service.ppm(np.full((2, 3), 7, dtype=object))
        assert data.endswith(bytes(18))

    def test_write_ppm_sidecar(self, tmp_path):
        box = Box((0, 0), (1, 1))
        sidecar = self.service.write_ppm(self.values, box, tmp_path / "w.ppm")
        assert (tmp_path / "w.ppm").exists()
        meta = json.loads(sidecar.read_text())
        assert meta["box"] == {"lo": [0, 0], "hi": [1, 1]}
        assert meta["maxval"] == 255

    def test_png(self, tmp_path):
        encoded = self.service.png(self.values, Box((0, 0), (1, 1)), tmp_path / "w.png")
        assert base64.b64decode(encoded).startswith(b"\x89PNG")
        assert (tmp_path / "w.png").read_bytes()[:4] == b"\x89PNG"


def test_ppm_range_validated(tmp_path):
    config_file = tmp_path / "config.yaml"
    config_file.write_text("render:\n  ppm_max_value: 300\n")
    with pytest.raises(Exception, match="RenderService Initialization"):
        RenderService(ConfigLoader(str(config_file)))
