"""
Exact rational geometry of patches: lines clipped by a simple polygon.

A patch file is line-oriented UTF-8 text::

    # comment
    line a b c                  # the line a*x + b*y = c
    boundary x1 y1 x2 y2 ...    # counterclockwise simple polygon

Numbers are integers or ``p/q`` rationals.  Validation rejects every
degenerate configuration instead of perturbing it: a polygon vertex on a
line, two lines crossing on the boundary, duplicate lines, or a line that
misses the polygon.
"""

from __future__ import annotations

import math
import re
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .bipermutation import Bipermutation

__all__ = [
    "PatchError",
    "PatchSyntaxError",
    "PatchValidationError",
    "LineEq",
    "PolygonBoundary",
    "PatchSpec",
    "BoundaryPoint",
    "SegmentRecord",
    "parse_rational",
    "parse_patch",
    "load_patch",
    "format_patch",
    "make_patch",
    "signed_area",
    "polygon_area",
    "segments_of_patch",
    "bipermutation_of_patch",
    "multicrossing_census",
    "segment_crossings",
    "point_in_polygon",
]

Point = tuple  # (Fraction, Fraction)


class PatchError(ValueError):
    pass


class PatchSyntaxError(PatchError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class PatchValidationError(PatchError):
    pass


_RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?\Z")


def parse_rational(token: str) -> Fraction:
    if not _RATIONAL.match(token):
        raise ValueError(f"not a rational number: {token!r}")
    value = Fraction(token)
    return value


def _fmt(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class LineEq:
    """The line ``a*x + b*y = c`` with coprime integer coefficients, leading one positive."""

    a: Fraction
    b: Fraction
    c: Fraction

    @classmethod
    def normalized(cls, a, b, c) -> "LineEq":
        a, b, c = Fraction(a), Fraction(b), Fraction(c)
        if a == 0 and b == 0:
            raise PatchValidationError("line has a = b = 0")
        scale = math.lcm(a.denominator, b.denominator, c.denominator)
        ia, ib, ic = (int(v * scale) for v in (a, b, c))
        g = math.gcd(math.gcd(ia, ib), ic)
        if (ia if ia else ib) < 0:
            g = -g
        return cls(Fraction(ia // g), Fraction(ib // g), Fraction(ic // g))

    def value(self, p: Point) -> Fraction:
        return self.a * p[0] + self.b * p[1] - self.c

    def contains(self, p: Point) -> bool:
        return self.value(p) == 0

    def direction(self) -> Point:
        return (self.b, -self.a)

    def intersection(self, other: "LineEq") -> Point | None:
        det = self.a * other.b - self.b * other.a
        if det == 0:
            return None
        x = (self.c * other.b - self.b * other.c) / det
        y = (self.a * other.c - self.c * other.a) / det
        return (x, y)

    def __str__(self):
        return f"line {_fmt(self.a)} {_fmt(self.b)} {_fmt(self.c)}"


@dataclass(frozen=True)
class PolygonBoundary:
    vertices: tuple

    def __len__(self):
        return len(self.vertices)

    def edges(self):
        v = self.vertices
        n = len(v)
        for i in range(n):
            yield v[i], v[(i + 1) % n]


@dataclass(frozen=True)
class PatchSpec:
    lines: tuple
    boundary: PolygonBoundary


@dataclass(frozen=True)
class BoundaryPoint:
    """A point on edge ``edge`` (from vertex ``edge`` to the next) at parameter ``t`` in (0, 1)."""

    edge: int
    t: Fraction
    x: Fraction
    y: Fraction

    @property
    def key(self):
        return (self.edge, self.t)


@dataclass(frozen=True)
class SegmentRecord:
    label: int
    line_index: int
    endpoints: tuple  # two BoundaryPoints, in boundary order


def _cross(o: Point, p: Point, q: Point) -> Fraction:
    return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])


def _on_segment(p: Point, a: Point, b: Point) -> bool:
    if _cross(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def _segments_meet(p1: Point, p2: Point, q1: Point, q2: Point) -> bool:
    d1 = _cross(q1, q2, p1)
    d2 = _cross(q1, q2, p2)
    d3 = _cross(p1, p2, q1)
    d4 = _cross(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and d1 != 0 and d2 != 0 and ((d3 > 0) != (d4 > 0)) and d3 != 0 and d4 != 0:
        return True
    return (
        _on_segment(p1, q1, q2)
        or _on_segment(p2, q1, q2)
        or _on_segment(q1, p1, p2)
        or _on_segment(q2, p1, p2)
    )


def signed_area(vertices) -> Fraction:
    """Shoelace area; positive for counterclockwise order."""
    n = len(vertices)
    s = Fraction(0)
    for i in range(n):
        x0, y0 = vertices[i]
        x1, y1 = vertices[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return s / 2


def polygon_area(boundary: PolygonBoundary) -> Fraction:
    return signed_area(boundary.vertices)


def on_boundary(boundary: PolygonBoundary, p: Point) -> bool:
    return any(_on_segment(p, a, b) for a, b in boundary.edges())


def point_in_polygon(boundary: PolygonBoundary, p: Point) -> bool:
    """Strict interior test (even-odd rule); boundary points count as outside."""
    if on_boundary(boundary, p):
        return False
    x, y = p
    inside = False
    for (x0, y0), (x1, y1) in boundary.edges():
        if (y0 > y) != (y1 > y):
            xi = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
            if xi > x:
                inside = not inside
    return inside


def _validate_boundary(vertices: tuple) -> None:
    n = len(vertices)
    if n < 3:
        raise PatchValidationError("boundary needs at least 3 vertices")
    if len(set(vertices)) != n:
        raise PatchValidationError("boundary repeats a vertex")
    edges = [(vertices[i], vertices[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        a, b = edges[i]
        c = edges[(i + 1) % n][1]
        back = (b[0] - a[0]) * (c[0] - b[0]) + (b[1] - a[1]) * (c[1] - b[1]) < 0
        if _cross(a, b, c) == 0 and back:
            raise PatchValidationError(f"boundary folds back on itself at vertex {(i + 1) % n}")
    for i, j in combinations(range(n), 2):
        if j == i + 1 or (i == 0 and j == n - 1):
            continue
        if _segments_meet(*edges[i], *edges[j]):
            raise PatchValidationError(f"boundary is not simple: edges {i} and {j} intersect")
    if signed_area(vertices) <= 0:
        raise PatchValidationError("boundary must be counterclockwise (positive area)")


def make_patch(lines, vertices) -> PatchSpec:
    """Validate and build a patch from line triples and boundary points."""
    eqs = []
    seen = {}
    for k, ln in enumerate(lines, 1):
        eq = ln if isinstance(ln, LineEq) else LineEq.normalized(*ln)
        if eq in seen:
            raise PatchValidationError(f"lines {seen[eq]} and {k} are the same line")
        seen[eq] = k
        eqs.append(eq)
    if not eqs:
        raise PatchValidationError("patch has no lines")
    verts = tuple((Fraction(x), Fraction(y)) for x, y in vertices)
    _validate_boundary(verts)
    boundary = PolygonBoundary(verts)
    for k, eq in enumerate(eqs, 1):
        for vi, v in enumerate(verts):
            if eq.contains(v):
                raise PatchValidationError(f"boundary vertex {vi} lies on line {k}")
    for (i, e1), (j, e2) in combinations(enumerate(eqs, 1), 2):
        p = e1.intersection(e2)
        if p is not None and on_boundary(boundary, p):
            raise PatchValidationError(f"crossing on boundary between lines {i} and {j}")
    patch = PatchSpec(tuple(eqs), boundary)
    for k, eq in enumerate(eqs, 1):
        if not _edge_hits(patch, eq):
            raise PatchValidationError(f"line {k} does not meet the boundary")
    return patch


def parse_patch(text: str) -> PatchSpec:
    lines = []
    boundary = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", raw)]
        keyword, kcol = tokens[0]
        values = []
        for tok, col in tokens[1:]:
            if tok.startswith("#"):
                break
            try:
                values.append(parse_rational(tok))
            except (ValueError, ZeroDivisionError):
                raise PatchSyntaxError(f"bad number {tok!r}", lineno, col) from None
        if keyword == "line":
            if len(values) != 3:
                raise PatchSyntaxError(f"'line' takes 3 numbers, got {len(values)}", lineno, kcol)
            lines.append(tuple(values))
        elif keyword == "boundary":
            if boundary is not None:
                raise PatchSyntaxError("second 'boundary' statement", lineno, kcol)
            if len(values) % 2:
                raise PatchSyntaxError("'boundary' needs an even number of coordinates", lineno, kcol)
            boundary = [(values[i], values[i + 1]) for i in range(0, len(values), 2)]
        else:
            raise PatchSyntaxError(f"unknown statement {keyword!r}", lineno, kcol)
    if boundary is None:
        raise PatchSyntaxError("missing 'boundary' statement", max(1, len(text.splitlines())), 1)
    if not lines:
        raise PatchSyntaxError("no 'line' statements", max(1, len(text.splitlines())), 1)
    return make_patch(lines, boundary)


def load_patch(path) -> PatchSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_patch(fh.read())


def format_patch(patch: PatchSpec, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {c}" for c in comment.splitlines())
    out.extend(str(eq) for eq in patch.lines)
    coords = " ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in patch.boundary.vertices)
    out.append(f"boundary {coords}")
    return "\n".join(out) + "\n"


def _edge_hits(patch: PatchSpec, eq: LineEq) -> list[BoundaryPoint]:
    hits = []
    for e, (p, q) in enumerate(patch.boundary.edges()):
        fp, fq = eq.value(p), eq.value(q)
        if (fp > 0) != (fq > 0):
            t = fp / (fp - fq)
            hits.append(BoundaryPoint(e, t, p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return hits


def _components(patch: PatchSpec) -> list[tuple[int, BoundaryPoint, BoundaryPoint]]:
    """Maximal pieces of each line inside the polygon, as (line index, end, end)."""
    out = []
    for k, eq in enumerate(patch.lines):
        dx, dy = eq.direction()
        hits = sorted(_edge_hits(patch, eq), key=lambda h: h.x * dx + h.y * dy)
        for i in range(0, len(hits), 2):
            out.append((k, hits[i], hits[i + 1]))
    return out


def segments_of_patch(patch: PatchSpec) -> list[SegmentRecord]:
    """Segments labeled 1, 2, ... by first endpoint met walking the boundary from vertex 0."""
    comps = _components(patch)
    ends = []
    for ci, (_, p, q) in enumerate(comps):
        ends.append((p.key, ci))
        ends.append((q.key, ci))
    ends.sort()
    labels: dict = {}
    for _, ci in ends:
        if ci not in labels:
            labels[ci] = len(labels) + 1
    records = []
    for ci, (k, p, q) in enumerate(comps):
        first, second = sorted((p, q), key=lambda h: h.key)
        records.append(SegmentRecord(labels[ci], k, (first, second)))
    records.sort(key=lambda r: r.label)
    return records


def _boundary_sequence(records: list[SegmentRecord]) -> list[tuple]:
    ends = []
    for r in records:
        for h in r.endpoints:
            ends.append((h.key, r.label))
    ends.sort()
    return ends


def bipermutation_of_patch(patch: PatchSpec, segments: list[SegmentRecord] | None = None) -> Bipermutation:
    records = segments if segments is not None else segments_of_patch(patch)
    return Bipermutation(tuple(label for _, label in _boundary_sequence(records)))


def _interior_crossings(patch: PatchSpec) -> dict:
    """Interior crossing point -> set of line indices through it."""
    points: dict = defaultdict(set)
    for (i, e1), (j, e2) in combinations(enumerate(patch.lines), 2):
        p = e1.intersection(e2)
        if p is not None and point_in_polygon(patch.boundary, p):
            points[p].update((i, j))
    return points


def multicrossing_census(patch: PatchSpec) -> dict[int, int]:
    """Number of interior points where exactly d lines meet, keyed by d."""
    census: dict = defaultdict(int)
    for lines in _interior_crossings(patch).values():
        census[len(lines)] += 1
    return dict(sorted(census.items()))


def segment_crossings(patch: PatchSpec, segments: list[SegmentRecord] | None = None) -> set:
    """Label pairs whose supporting lines cross inside the patch, within both segments."""
    records = segments if segments is not None else segments_of_patch(patch)
    by_line = defaultdict(list)
    for r in records:
        by_line[r.line_index].append(r)

    def owner(k, p):
        dx, dy = patch.lines[k].direction()
        s = p[0] * dx + p[1] * dy
        for r in by_line[k]:
            s0, s1 = sorted(h.x * dx + h.y * dy for h in r.endpoints)
            if s0 < s < s1:
                return r.label
        return None

    out = set()
    for p, lines in _interior_crossings(patch).items():
        for i, j in combinations(sorted(lines), 2):
            a, b = owner(i, p), owner(j, p)
            if a is not None and b is not None:
                out.add(frozenset((a, b)))
    return out
