from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Tuple

import numpy as np

from .geometry import Picture, Polygon

AREA_EPSILON = 1e-15


class Viewport(NamedTuple):
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin


UNIT_VIEWPORT = Viewport(0.0, 0.0, 1.0, 1.0)


@dataclass(frozen=True)
class RasterMask:
    """A width×height bit grid over a viewport. Row 0 is the bottom row (smallest y)."""
    viewport: Viewport
    width: int
    height: int
    bits: np.ndarray

    __hash__ = None

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"Raster size must be positive, got {self.width}x{self.height}")
        if self.bits.shape != (self.height, self.width):
            raise ValueError(f"Bit grid has shape {self.bits.shape}, expected {(self.height, self.width)}")

    @property
    def pixel_area(self) -> float:
        return (self.viewport.width / self.width) * (self.viewport.height / self.height)

    def count(self) -> int:
        return int(self.bits.sum())

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, RasterMask) and self.viewport == other.viewport and self.width == other.width
                and self.height == other.height and bool(np.array_equal(self.bits, other.bits)))


def pixel_centers(viewport: Viewport, width: int, height: int) -> Tuple[np.ndarray, np.ndarray]:
    """Center coordinates as two (height, width) arrays."""
    xs = viewport.xmin + viewport.width * (np.arange(width) + 0.5) / width
    ys = viewport.ymin + viewport.height * (np.arange(height) + 0.5) / height
    return np.meshgrid(xs, ys)


def _inside(poly: Polygon, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    # even-odd crossing count of a ray towards +x; edges are half-open in y
    inside = np.zeros(x.shape, dtype=bool)
    for (x0, y0), (x1, y1) in poly.edges():
        if y0 == y1:
            continue
        crosses = (y0 > y) != (y1 > y)
        x_cross = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
        inside ^= crosses & (x < x_cross)
    return inside


def rasterize(pic: Picture, viewport: Viewport = UNIT_VIEWPORT, width: int = 128, height: int | None = None) -> RasterMask:
    """Sets a bit iff its pixel center lies in some polygon of `pic` under the even-odd rule.

    Zero-area polygons contribute nothing.
    """
    height = width if height is None else height
    if width < 1 or height < 1:
        raise ValueError(f"Raster size must be positive, got {width}x{height}")
    x, y = pixel_centers(viewport, width, height)
    bits = np.zeros((height, width), dtype=bool)
    for poly in pic.polygons:
        if abs(poly.area()) <= AREA_EPSILON:
            continue
        bits |= _inside(poly, x, y)
    return RasterMask(viewport, width, height, bits)


def _segment_distance(x: np.ndarray, y: np.ndarray, a, b) -> np.ndarray:
    ax, ay = a
    dx, dy = b[0] - ax, b[1] - ay
    length2 = dx * dx + dy * dy
    if length2 == 0.0:
        return np.hypot(x - ax, y - ay)
    t = np.clip(((x - ax) * dx + (y - ay) * dy) / length2, 0.0, 1.0)
    return np.hypot(x - (ax + t * dx), y - (ay + t * dy))


def coverage(pic: Picture, viewport: Viewport = UNIT_VIEWPORT, width: int = 128, height: int | None = None) -> np.ndarray:
    """Anti-aliased coverage in [0, 1]: clip(½ − signed distance / pitch).

    The signed distance to the union is negative inside. It varies continuously with
    the vertices, which gives the finite-difference fitter a usable slope between
    pixel flips.

    Returns:
        np.ndarray: A (height, width) float array.
    """
    height = width if height is None else height
    x, y = pixel_centers(viewport, width, height)
    pitch = max(viewport.width / width, viewport.height / height)
    signed = np.full(x.shape, np.inf)
    for poly in pic.polygons:
        if abs(poly.area()) <= AREA_EPSILON:
            continue
        distance = np.full(x.shape, np.inf)
        for a, b in poly.edges():
            distance = np.minimum(distance, _segment_distance(x, y, a, b))
        signed = np.minimum(signed, np.where(_inside(poly, x, y), -distance, distance))
    return np.clip(0.5 - signed / pitch, 0.0, 1.0)


@lru_cache(maxsize=256)
def cached_rasterize(pic: Picture, viewport: Viewport, width: int, height: int) -> RasterMask:
    return rasterize(pic, viewport, width, height)


@lru_cache(maxsize=256)
def cached_coverage(pic: Picture, viewport: Viewport, width: int, height: int) -> np.ndarray:
    result = coverage(pic, viewport, width, height)
    result.setflags(write=False)
    return result
