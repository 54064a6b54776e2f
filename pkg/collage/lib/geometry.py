import math
from dataclasses import dataclass
from typing import Iterable, List, NamedTuple, Sequence, Tuple

import numpy as np

from algebra.utils.errors import ArityMismatch


class Point(NamedTuple):
    x: float
    y: float


def _orientation(p: Point, q: Point, r: Point) -> float:
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)


def _on_segment(p: Point, q: Point, r: Point) -> bool:
    return min(p.x, q.x) <= r.x <= max(p.x, q.x) and min(p.y, q.y) <= r.y <= max(p.y, q.y)


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Closed segments ab and cd share at least one point."""
    d1, d2 = _orientation(c, d, a), _orientation(c, d, b)
    d3, d4 = _orientation(a, b, c), _orientation(a, b, d)
    if ((d1 > 0 > d2) or (d1 < 0 < d2)) and ((d3 > 0 > d4) or (d3 < 0 < d4)):
        return True
    return ((d1 == 0 and _on_segment(c, d, a)) or (d2 == 0 and _on_segment(c, d, b))
            or (d3 == 0 and _on_segment(a, b, c)) or (d4 == 0 and _on_segment(a, b, d)))


@dataclass(frozen=True)
class Polygon:
    """A closed polygon given by its vertices; the last vertex connects back to the first.

    Affine images may be degenerate, so only vertex count and finiteness are enforced
    here. `polygon` and picture files additionally check simplicity.
    """
    vertices: Tuple[Point, ...]

    def __post_init__(self):
        vertices = tuple(Point(float(x), float(y)) for x, y in self.vertices)
        if len(vertices) < 3:
            raise ValueError(f"A polygon needs at least 3 vertices, got {len(vertices)}")
        if not all(math.isfinite(c) for v in vertices for c in v):
            raise ValueError("Polygon vertices must be finite.")
        object.__setattr__(self, "vertices", vertices)

    def edges(self) -> List[Tuple[Point, Point]]:
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def area(self) -> float:
        """Signed shoelace area; positive for counter-clockwise vertex order."""
        return 0.5 * sum(a.x * b.y - b.x * a.y for a, b in self.edges())

    def is_simple(self) -> bool:
        edges = self.edges()
        n = len(edges)
        for i in range(n):
            for j in range(i + 1, n):
                # adjacent edges share a vertex
                if j == i + 1 or (i == 0 and j == n - 1):
                    continue
                if segments_intersect(*edges[i], *edges[j]):
                    return False
        return True

    def array(self) -> np.ndarray:
        return np.array(self.vertices, dtype=float)


def polygon(*coordinates: float) -> Polygon:
    """Builds a simple polygon from flat coordinates x1, y1, x2, y2, ...

    Raises:
        ValueError: Odd coordinate count, fewer than 3 vertices, or self-intersection.
    """
    if len(coordinates) % 2:
        raise ValueError(f"Expected x/y pairs, got {len(coordinates)} numbers")
    result = Polygon(tuple(Point(coordinates[i], coordinates[i + 1]) for i in range(0, len(coordinates), 2)))
    if not result.is_simple():
        raise ValueError(f"Polygon {list(result.vertices)} is not simple")
    return result


@dataclass(frozen=True)
class Picture:
    """A union of filled polygons; may be empty."""
    polygons: Tuple[Polygon, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "polygons", tuple(self.polygons))

    def is_empty(self) -> bool:
        return not self.polygons

    def bounds(self) -> Tuple[float, float, float, float] | None:
        if not self.polygons:
            return None
        points = np.concatenate([p.array() for p in self.polygons])
        return (float(points[:, 0].min()), float(points[:, 1].min()), float(points[:, 0].max()), float(points[:, 1].max()))

    def __len__(self) -> int:
        return len(self.polygons)


class AffineTransform(NamedTuple):
    """x ↦ Mx + b with M = [[m11, m12], [m21, m22]] and b = (b1, b2)."""
    m11: float
    m12: float
    m21: float
    m22: float
    b1: float
    b2: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    @property
    def offset(self) -> np.ndarray:
        return np.array([self.b1, self.b2])


IDENTITY = AffineTransform(1.0, 0.0, 0.0, 1.0, 0.0, 0.0)


def scale_translate(scale: float, dx: float = 0.0, dy: float = 0.0) -> AffineTransform:
    return AffineTransform(scale, 0.0, 0.0, scale, dx, dy)


@dataclass(frozen=True)
class CollageOp:
    """⟨f₁⋯f_k⟩: argument i is mapped by f_i and the results are united."""
    transforms: Tuple[AffineTransform, ...]

    def __post_init__(self):
        transforms = tuple(AffineTransform(*map(float, t)) for t in self.transforms)
        if not transforms:
            raise ValueError("A collage operation needs at least one transform.")
        if not all(math.isfinite(c) for t in transforms for c in t):
            raise ValueError("Transform coefficients must be finite.")
        object.__setattr__(self, "transforms", transforms)

    @property
    def arity(self) -> int:
        return len(self.transforms)

    def parameters(self) -> np.ndarray:
        """Flat vector of 6k coefficients, per transform (m11, m12, m21, m22, b1, b2)."""
        return np.array([c for t in self.transforms for c in t], dtype=float)

    @classmethod
    def from_parameters(cls, params: Sequence[float]) -> "CollageOp":
        params = [float(p) for p in params]
        if not params or len(params) % 6:
            raise ValueError(f"Parameter vectors hold 6 values per transform, got {len(params)}")
        return cls(tuple(AffineTransform(*params[i:i + 6]) for i in range(0, len(params), 6)))


def affine_apply(t: AffineTransform, p: Point) -> Point:
    return Point(t.m11 * p.x + t.m12 * p.y + t.b1, t.m21 * p.x + t.m22 * p.y + t.b2)


def compose(t: AffineTransform, s: AffineTransform) -> AffineTransform:
    """t∘s, i.e. apply s first."""
    return AffineTransform(
        t.m11 * s.m11 + t.m12 * s.m21, t.m11 * s.m12 + t.m12 * s.m22,
        t.m21 * s.m11 + t.m22 * s.m21, t.m21 * s.m12 + t.m22 * s.m22,
        t.m11 * s.b1 + t.m12 * s.b2 + t.b1, t.m21 * s.b1 + t.m22 * s.b2 + t.b2,
    )


def transform_picture(t: AffineTransform, pic: Picture) -> Picture:
    return Picture(tuple(Polygon(tuple(affine_apply(t, v) for v in poly.vertices)) for poly in pic.polygons))


def collage_apply(op: CollageOp, pictures: Sequence[Picture]) -> Picture:
    """F(C₁,…,C_k) = f₁(C₁) ∪ … ∪ f_k(C_k), as the concatenation of mapped polygons.

    Raises:
        ArityMismatch: The number of pictures differs from the number of transforms.
    """
    if len(pictures) != op.arity:
        raise ArityMismatch(f"Collage operation takes {op.arity} pictures, got {len(pictures)}")
    polygons: List[Polygon] = []
    for t, pic in zip(op.transforms, pictures):
        polygons.extend(transform_picture(t, pic).polygons)
    return Picture(tuple(polygons))


def union(pictures: Iterable[Picture]) -> Picture:
    return Picture(tuple(poly for pic in pictures for poly in pic.polygons))


UNIT_SQUARE = Picture((polygon(0, 0, 1, 0, 1, 1, 0, 1),))
UNIT_TRIANGLE = Picture((polygon(0, 0, 1, 0, 0, 1),))
EMPTY = Picture()
