import os

from algebra.utils.errors import CorpusSyntaxError
from collage.lib.geometry import Picture, Point, Polygon
from ..utils.atomic import write_text


def parse_picture(text: str) -> Picture:
    """Reads one `poly x1 y1 x2 y2 …` line per polygon; `#` starts a comment.

    Raises:
        CorpusSyntaxError: Unknown keyword, bad coordinates, too few vertices or self-intersection.
    """
    polygons = []
    for number, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split("#", 1)[0].split()
        if not fields:
            continue
        if fields[0] != "poly":
            raise CorpusSyntaxError(f"Expected 'poly', found '{fields[0]}'", number, raw.index(fields[0]) + 1)
        try:
            coordinates = [float(token) for token in fields[1:]]
        except ValueError as e:
            raise CorpusSyntaxError(f"Bad coordinate: {e}", number) from e
        if len(coordinates) % 2:
            raise CorpusSyntaxError(f"Expected x/y pairs, got {len(coordinates)} numbers", number)
        try:
            poly = Polygon(tuple(Point(coordinates[i], coordinates[i + 1]) for i in range(0, len(coordinates), 2)))
        except ValueError as e:
            raise CorpusSyntaxError(str(e), number) from e
        if not poly.is_simple():
            raise CorpusSyntaxError("Polygon is not simple", number)
        polygons.append(poly)
    return Picture(tuple(polygons))


def format_picture(pic: Picture) -> str:
    return "".join("poly " + " ".join(f"{v.x!r} {v.y!r}" for v in poly.vertices) + "\n" for poly in pic.polygons)


def read_picture(path: str | os.PathLike) -> Picture:
    with open(path, encoding="utf-8") as handle:
        return parse_picture(handle.read())


def write_picture(pic: Picture, path: str | os.PathLike):
    write_text(path, format_picture(pic))
