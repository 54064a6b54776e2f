import numpy as np

from algebra.utils.errors import EmptyPicture
from shared import const
from .geometry import Picture
from .raster import UNIT_VIEWPORT, RasterMask, Viewport, cached_coverage, cached_rasterize, pixel_centers

CHUNK = 4096


def mask_sym_diff(a: RasterMask, b: RasterMask) -> float:
    if (a.viewport, a.width, a.height) != (b.viewport, b.width, b.height):
        raise ValueError("Masks must share viewport and size.")
    return float(np.count_nonzero(a.bits ^ b.bits)) * a.pixel_area


def sym_diff_area(a: Picture, b: Picture, viewport: Viewport = UNIT_VIEWPORT, resolution: int = const.RASTER_RESOLUTION,
                  smooth: bool = False) -> float:
    """Area covered by exactly one picture, on a resolution×resolution raster.

    With `smooth` the anti-aliased coverages are compared instead, Σ|cov_a − cov_b|
    times the pixel area.
    """
    if smooth:
        cov_a = cached_coverage(a, viewport, resolution, resolution)
        cov_b = cached_coverage(b, viewport, resolution, resolution)
        pixel_area = (viewport.width / resolution) * (viewport.height / resolution)
        return float(np.abs(cov_a - cov_b).sum()) * pixel_area
    return mask_sym_diff(cached_rasterize(a, viewport, resolution, resolution),
                         cached_rasterize(b, viewport, resolution, resolution))


def _boundary(bits: np.ndarray) -> np.ndarray:
    """Set pixels with a clear 4-neighbour or on the raster edge."""
    padded = np.pad(bits, 1, constant_values=False)
    interior = padded[:-2, 1:-1] & padded[2:, 1:-1] & padded[1:-1, :-2] & padded[1:-1, 2:]
    return bits & ~interior


def _directed(source: RasterMask, target: RasterMask, x: np.ndarray, y: np.ndarray) -> float:
    # pixels of source inside target are at distance 0; the rest are nearest to target's boundary
    outside = source.bits & ~target.bits
    if not outside.any():
        return 0.0
    px, py = x[outside], y[outside]
    edge = _boundary(target.bits)
    qx, qy = x[edge], y[edge]
    best = 0.0
    for start in range(0, len(px), CHUNK):
        dx = px[start:start + CHUNK, None] - qx[None, :]
        dy = py[start:start + CHUNK, None] - qy[None, :]
        best = max(best, float(np.sqrt(dx * dx + dy * dy).min(axis=1).max()))
    return best


def hausdorff_distance(a: Picture, b: Picture, viewport: Viewport = UNIT_VIEWPORT,
                       resolution: int = const.RASTER_RESOLUTION) -> float:
    """Discrete Hausdorff distance between the centers of set pixels.

    Raises:
        EmptyPicture: Either picture covers no pixel.
    """
    mask_a = cached_rasterize(a, viewport, resolution, resolution)
    mask_b = cached_rasterize(b, viewport, resolution, resolution)
    if not mask_a.bits.any() or not mask_b.bits.any():
        raise EmptyPicture("Hausdorff distance is undefined for an empty picture")
    x, y = pixel_centers(viewport, resolution, resolution)
    return max(_directed(mask_a, mask_b, x, y), _directed(mask_b, mask_a, x, y))
