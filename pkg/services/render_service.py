"""Window rendering: ASCII grids, PPM images and PNG plots."""

import base64
import io
import json
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import matplotlib

matplotlib.use("Agg")  # Non-interactive backend for CLI and server use
import matplotlib.pyplot as plt
import numpy as np

from logger.logging import get_logger
from utils.config_loader import ConfigLoader
from utils.exceptions import DimensionMismatchError, PreconditionError
from utils.regions import Box

logger = get_logger(__name__)

HEX_DIGITS = "0123456789abcdef"


def image_rows(values: np.ndarray) -> np.ndarray:
    """Window as a picture: top row is the largest y, columns run along x."""
    if values.ndim == 1:
        return values[np.newaxis, :]
    if values.ndim == 2:
        return values.T[::-1]
    raise DimensionMismatchError(2, values.ndim, "rendered window")


class RenderService:
    """Turns configuration windows into text and images."""

    def __init__(self, config_loader: Optional[ConfigLoader] = None):
        try:
            self.config = config_loader or ConfigLoader()
            legend = self.config.get("render.legend", {0: ".", 1: "#"}) or {}
            self.legend = {int(k): str(v) for k, v in legend.items()}
            self.ppm_max_value = int(self.config.get("render.ppm_max_value", 255))
            self.png_dpi = int(self.config.get("render.png_dpi", 100))
            if not 0 < self.ppm_max_value < 256:
                raise PreconditionError("ppm_max_value must be in 1..255 for 8-bit output")
            logger.info("RenderService initialized")

        except Exception as e:
            error_msg = f"Error in RenderService Initialization -> {str(e)}"
            logger.error(error_msg)
            raise Exception(error_msg)

    def glyph(self, value: int) -> str:
        value = int(value)
        if value in self.legend:
            return self.legend[value]
        return HEX_DIGITS[value % 16]

    def legend_text(self) -> str:
        known = ", ".join(f"{g} = {v}" for v, g in sorted(self.legend.items()))
        return f"legend: {known}, other = hex digit of value mod 16"

    def ascii(self, values: np.ndarray) -> str:
        """One text line per image row."""
        rows = image_rows(values)
        return "\n".join("".join(self.glyph(v) for v in row) for row in rows)

    def ppm(self, values: np.ndarray) -> Tuple[bytes, Dict[str, Any]]:
        """Binary P6 grayscale image and the value-to-gray mapping.

        Gray levels are floor((v - min) * maxval / (max - min)); a constant
        window maps to 0.
        """
        rows = image_rows(values)
        flat = [int(v) for v in rows.flat]
        lo, hi = min(flat), max(flat)
        maxval = self.ppm_max_value
        span = hi - lo
        grays = [((v - lo) * maxval // span) if span else 0 for v in flat]
        gray = np.array(grays, dtype=np.uint8).reshape(rows.shape)
        pixels = np.repeat(gray[:, :, np.newaxis], 3, axis=2)
        height, width = gray.shape
        header = f"P6\n{width} {height}\n{maxval}\n".encode("ascii")
        mapping = {"min": lo, "max": hi, "maxval": maxval, "mapping": "affine_floor"}
        return header + pixels.tobytes(), mapping

    def write_ppm(self, values: np.ndarray, box: Box, path: Union[str, Path]) -> Path:
        """Write the image and a sidecar JSON with the mapping and the box."""
        path = Path(path)
        data, mapping = self.ppm(values)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
        sidecar = path.with_suffix(".json")
        sidecar.write_text(json.dumps({**mapping, "box": box.to_model().model_dump()}, indent=2))
        logger.info(f"Wrote {path} and {sidecar}")
        return sidecar

    def png(
        self, values: np.ndarray, box: Box, path: Optional[Union[str, Path]] = None, title: str = ""
    ) -> str:
        """Render with matplotlib; returns base64 PNG and writes it when path is given."""
        rows = image_rows(values).astype(float)
        try:
            fig, ax = plt.subplots(figsize=(6, 6))
            ax.imshow(rows, cmap="gray_r", interpolation="nearest")
            ax.set_title(title or f"window {box.to_text()}", fontsize=11)
            ax.set_xticks([])
            ax.set_yticks([])
            buf = io.BytesIO()
            fig.savefig(buf, format="png", dpi=self.png_dpi, bbox_inches="tight")
            plt.close(fig)
        except Exception as e:
            plt.close("all")
            raise PreconditionError(f"cannot render PNG -> {str(e)}")
        data = buf.getvalue()
        if path is not None:
            Path(path).parent.mkdir(parents=True, exist_ok=True)
            Path(path).write_bytes(data)
            logger.info(f"Wrote {path}")
        return base64.b64encode(data).decode("utf-8")
