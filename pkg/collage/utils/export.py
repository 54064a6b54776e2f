import os
import re
from typing import List

import numpy as np
from PIL import Image

from corpus.utils.atomic import atomic_open, write_text
from ..lib.geometry import Picture, Point, Polygon
from ..lib.raster import UNIT_VIEWPORT, RasterMask, Viewport

SVG_SIZE = 512
PATH_PATTERN = re.compile(r'<path d="([^"]*)"')


def _path_data(poly: Polygon) -> str:
    head, *rest = poly.vertices
    return f"M {head.x!r} {head.y!r} " + " ".join(f"L {v.x!r} {v.y!r}" for v in rest) + " Z"


def _svg(layers: List[tuple], viewport: Viewport, size: int) -> str:
    scale = size / max(viewport.width, viewport.height)
    width, height = round(viewport.width * scale), round(viewport.height * scale)
    # y grows upwards in picture space
    transform = f"matrix({scale!r} 0 0 {-scale!r} {-viewport.xmin * scale!r} {viewport.ymax * scale!r})"
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
    ]
    for pic, style in layers:
        lines.append(f'  <g transform="{transform}" {style} fill-rule="evenodd">')
        lines.extend(f'    <path d="{_path_data(poly)}"/>' for poly in pic.polygons)
        lines.append("  </g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def export_svg(pic: Picture, path: str | os.PathLike, viewport: Viewport = UNIT_VIEWPORT, size: int = SVG_SIZE):
    """Writes one even-odd filled path per polygon.

    Raises:
        OSError: The file cannot be written.
    """
    write_text(path, _svg([(pic, 'fill="black"')], viewport, size))


def export_overlay_svg(target: Picture, approx: Picture, path: str | os.PathLike, viewport: Viewport = UNIT_VIEWPORT,
                       size: int = SVG_SIZE):
    """Target in black with the approximation in translucent grey on top."""
    write_text(path, _svg([(target, 'fill="black"'), (approx, 'fill="grey" fill-opacity="0.6"')], viewport, size))


def read_svg_polygons(text: str) -> Picture:
    """Reads back the path subset written by export_svg."""
    polygons = []
    for data in PATH_PATTERN.findall(text):
        numbers = [float(token) for token in data.replace("M", " ").replace("L", " ").replace("Z", " ").split()]
        polygons.append(Polygon(tuple(Point(numbers[i], numbers[i + 1]) for i in range(0, len(numbers), 2))))
    return Picture(tuple(polygons))


def export_png_mask(mask: RasterMask, path: str | os.PathLike):
    """Writes the mask as a 1-bit PNG with the top image row at the largest y."""
    pixels = np.flipud(mask.bits).astype(np.uint8) * 255
    image = Image.fromarray(pixels).convert("1")
    with atomic_open(path, "wb") as handle:
        image.save(handle, format="PNG")
