"""
Independent checks: canonical patch families and a brute-force counter.

``reduced_word_classes(n)`` counts commutation classes of reduced words of
the longest permutation, which equals the number of simple arrangements
of ``n`` pseudolines (OEIS A006245).  It shares no code with the
bipermutation counter, so agreement between the two is a real check.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .bipermutation import Bipermutation, count_reroutings, gen_complete_sequence, MemoTable
from .geometry import (
    PatchSpec,
    PatchValidationError,
    bipermutation_of_patch,
    make_patch,
    segments_of_patch,
    signed_area,
)
from .lgv import lgv_count

__all__ = [
    "ReducedWordClassCount",
    "gen_complete",
    "gen_grid3",
    "gen_square4",
    "gen_hexagon6",
    "gen_fig5",
    "FIG5_BIPERMUTATION",
    "FIG5_RELABEL",
    "random_patch",
    "reduced_words",
    "reduced_word_classes",
    "CrosscheckCase",
    "CrosscheckReport",
    "crosscheck",
]


@dataclass(frozen=True)
class ReducedWordClassCount:
    n: int
    classes: int
    words: int


def gen_complete(n: int) -> Bipermutation:
    return Bipermutation(gen_complete_sequence(n))


def gen_grid3(side: int) -> PatchSpec:
    """Square patch with ``side**2`` triple crossings of three bundles.

    Vertical lines ``x = i + 1/2`` and horizontal lines ``y = j + 1/2``
    (``0 <= i, j < side``) meet the ``2*side - 1`` diagonals ``x - y = c``
    exactly at the grid points.  The square is shifted right by 1/4 so no
    diagonal passes through a corner.
    """
    if side < 1:
        raise ValueError("side must be >= 1")
    half = Fraction(1, 2)
    lines = [(1, 0, i + half) for i in range(side)]
    lines += [(0, 1, j + half) for j in range(side)]
    lines += [(1, -1, c) for c in range(-(side - 1), side)]
    q = Fraction(1, 4)
    box = [(q, 0), (side + q, 0), (side + q, side), (q, side)]
    return make_patch(lines, box)


def gen_square4(size: int = 8, u_offset=Fraction(1, 4), v_offset=Fraction(1, 2)) -> PatchSpec:
    """Four-bundle square patch: lines ``x = i``, ``y = j``, ``x + y = k``, ``x - y = k``.

    The boundary is the square ``u_offset < x + y < u_offset + size``,
    ``v_offset < x - y < v_offset + size``, whose sides run along the two
    diagonal bundles.  With the default offsets it holds ``size**2 / 2``
    crossings of order 4; its area in lattice units is ``size**2 / 2``.
    """
    u0, v0 = Fraction(u_offset), Fraction(v_offset)
    u1, v1 = u0 + size, v0 + size

    def pt(u, v):
        return ((u + v) / 2, (u - v) / 2)

    corners = [pt(u0, v0), pt(u0, v1), pt(u1, v1), pt(u1, v0)]
    if signed_area(corners) < 0:
        corners.reverse()
    xs = [c[0] for c in corners]
    ys = [c[1] for c in corners]
    lines = []
    for i in range(_ceil(min(xs)), _floor(max(xs)) + 1):
        lines.append((1, 0, i))
    for j in range(_ceil(min(ys)), _floor(max(ys)) + 1):
        lines.append((0, 1, j))
    for k in range(_ceil(u0), _floor(u1) + 1):
        if u0 < k < u1:
            lines.append((1, 1, k))
    for k in range(_ceil(v0), _floor(v1) + 1):
        if v0 < k < v1:
            lines.append((1, -1, k))
    lines = [ln for ln in lines if _meets(ln, corners)]
    return make_patch(lines, corners)


def gen_hexagon6(shift=(Fraction(1, 97), Fraction(1, 53))) -> PatchSpec:
    """Six-bundle hexagonal patch in affine triangular-lattice coordinates.

    Bundles ``x = i``, ``y = j``, ``x + y = k`` meet at lattice points;
    ``x - y = k``, ``x + 2y = k``, ``2x + y = k`` also meet there and again,
    three at a time, at the centers of the lattice triangles.  The boundary
    is the Voronoi hexagon of the index-7 sublattice (area 7 lattice units),
    translated by ``shift`` so nothing degenerate touches it.
    """
    sx, sy = (Fraction(s) for s in shift)
    v = (Fraction(1, 3), Fraction(4, 3))
    corners = []
    for _ in range(6):
        corners.append((v[0] + sx, v[1] + sy))
        v = (-v[1], v[0] + v[1])
    xs = [c[0] for c in corners]
    ys = [c[1] for c in corners]
    lo = _floor(min(min(xs), min(ys))) * 3 - 3
    hi = _ceil(max(max(xs), max(ys))) * 3 + 3
    lines = []
    for a, b in ((1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1)):
        for k in range(lo, hi + 1):
            if _meets((a, b, k), corners):
                lines.append((a, b, k))
    return make_patch(lines, corners)


# Segment 1 is cut by 3, 4 and 7; 3 and 7 are parallel, 4 crosses both.
FIG5_BIPERMUTATION = (1, 4, 2, 5, 2, 6, 3, 7, 6, 5, 1, 4, 7, 3)


def gen_fig5() -> PatchSpec:
    """Seven-segment patch whose bipermutation is a relabeling of :data:`FIG5_BIPERMUTATION`.

    Boundary labels come out as ``1 2 3 4 3 5 6 7 5 4 1 2 7 6``; the map
    ``{1: 1, 2: 4, 3: 2, 4: 5, 5: 6, 6: 3, 7: 7}`` turns it into the
    reference sequence.
    """
    lines = [
        (2, 2, Fraction(59, 4)),
        (3, 1, Fraction(19, 4)),
        (1, -2, Fraction(-7, 4)),
        (2, 0, Fraction(5, 4)),
        (2, -3, Fraction(-39, 4)),
        (1, 3, Fraction(85, 4)),
        (3, -2, Fraction(79, 4)),
    ]
    box = [(0, 0), (8, 0), (8, 6), (0, 6)]
    return make_patch(lines, box)


FIG5_RELABEL = {1: 1, 2: 4, 3: 2, 4: 5, 5: 6, 6: 3, 7: 7}


def _floor(q) -> int:
    return Fraction(q).__floor__()


def _ceil(q) -> int:
    return Fraction(q).__ceil__()


def _meets(line, corners) -> bool:
    a, b, c = line
    vals = [a * x + b * y - c for x, y in corners]
    return min(vals) < 0 < max(vals)


def random_patch(rng: random.Random, max_segments: int = 10, nonconvex: bool = True) -> PatchSpec:
    """A random valid patch with at most ``max_segments`` segments.

    The boundary is a star-shaped polygon around the origin, so lines may
    cut it into several segments.
    """
    while True:
        nv = rng.randint(3, 8)
        angles = sorted(rng.sample(range(360), nv))
        verts = []
        for ang in angles:
            r = rng.randint(4, 10) if nonconvex else 8
            # rational points near the circle of radius r, CCW by angle
            verts.append(_polar(r, ang))
        n_lines = rng.randint(1, max_segments)
        lines = []
        for _ in range(n_lines):
            p = (Fraction(rng.randint(-60, 60), 8), Fraction(rng.randint(-60, 60), 8))
            q = (Fraction(rng.randint(-60, 60), 8), Fraction(rng.randint(-60, 60), 8))
            if p == q:
                continue
            a, b = q[1] - p[1], p[0] - q[0]
            lines.append((a, b, a * p[0] + b * p[1]))
        try:
            patch = make_patch(lines, verts)
        except PatchValidationError:
            continue
        if len(segments_of_patch(patch)) <= max_segments:
            return patch


def _polar(r: int, degrees: int) -> tuple:
    c, s = math.cos(math.radians(degrees)), math.sin(math.radians(degrees))
    return (Fraction(round(r * c * 16), 16), Fraction(round(r * s * 16), 16))


def reduced_words(n: int):
    """Yield every reduced word of the longest permutation of ``n`` elements.

    Letters are ``i`` for the adjacent transposition ``(i, i+1)``, 0-based.
    """
    perm = list(range(n - 1, -1, -1))
    word: list = []
    length = n * (n - 1) // 2

    def rec():
        if len(word) == length:
            yield tuple(word)
            return
        for i in range(n - 1):
            if perm[i] > perm[i + 1]:
                perm[i], perm[i + 1] = perm[i + 1], perm[i]
                word.append(i)
                yield from rec()
                word.pop()
                perm[i], perm[i + 1] = perm[i + 1], perm[i]

    yield from rec()


def reduced_word_classes(n: int) -> ReducedWordClassCount:
    """Connected components of reduced words under commuting moves ``s_i s_j = s_j s_i``, ``|i - j| >= 2``."""
    if not 2 <= n <= 6:
        raise ValueError("reduced_word_classes supports 2 <= n <= 6")
    words = set(reduced_words(n))
    unseen = set(words)
    classes = 0
    while unseen:
        start = unseen.pop()
        classes += 1
        stack = [start]
        while stack:
            w = stack.pop()
            for k in range(len(w) - 1):
                if abs(w[k] - w[k + 1]) >= 2:
                    nb = w[:k] + (w[k + 1], w[k]) + w[k + 2:]
                    if nb in unseen:
                        unseen.remove(nb)
                        stack.append(nb)
    return ReducedWordClassCount(n, classes, len(words))


@dataclass(frozen=True)
class CrosscheckCase:
    name: str
    expected: int
    actual: int

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


@dataclass
class CrosscheckReport:
    cases: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.cases)

    def lines(self) -> list[str]:
        out = []
        for c in self.cases:
            tag = "PASS" if c.ok else "FAIL"
            out.append(f"{tag}  {c.name}: expected={c.expected} actual={c.actual}")
        return out


def crosscheck(l_max: int = 2, n_max: int = 4, memo: MemoTable | None = None) -> CrosscheckReport:
    """LGV vs DP on grid patches and reduced words vs DP on complete patches."""
    memo = memo if memo is not None else MemoTable()
    report = CrosscheckReport()
    for side in range(1, l_max + 1):
        dp = count_reroutings(bipermutation_of_patch(gen_grid3(side)), memo)
        report.cases.append(CrosscheckCase(f"grid3({side}): lgv vs dp", lgv_count(side), dp))
    for n in range(2, n_max + 1):
        brute = reduced_word_classes(n).classes
        dp = count_reroutings(gen_complete(n), memo)
        report.cases.append(CrosscheckCase(f"complete({n}): reduced words vs dp", brute, dp))
    return report
