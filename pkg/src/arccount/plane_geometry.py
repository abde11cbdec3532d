"""The affine plane AG(2, q): points, lines, collinearity, incidence tables.

Points are indexed x.index * q + y.index, so the q^2 point indices are a
fixed total order.  Lines come in two families: y = s*x + c with id
s.index * q + c.index (slope-major, then intercept), and the verticals
x = c with id q^2 + c.index.  That gives exactly q^2 + q lines, each with
q points, each point on q + 1 lines, and a unique line through any two
distinct points.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .finite_field import FieldElement, FieldSpec, field_for_order


@dataclass(frozen=True)
class Point:
    """A point (x, y) of AG(2, q)."""

    x: FieldElement
    y: FieldElement

    @property
    def index(self) -> int:
        return self.x.index * self.x.spec.q + self.y.index

    def __repr__(self) -> str:
        return f"Point({self.x.index}, {self.y.index})"


@dataclass(frozen=True)
class Line:
    """A line in slope-intercept canonical form.

    ``slope is None`` marks a vertical line x = offset; otherwise the line
    is y = slope*x + offset.  ``line_id`` is the dense id used by the
    incidence tables.
    """

    line_id: int
    slope: FieldElement | None
    offset: FieldElement

    @property
    def is_vertical(self) -> bool:
        return self.slope is None


def _check_same_field(*points: Point) -> FieldSpec:
    spec = points[0].x.spec
    for pt in points:
        if pt.x.spec != spec or pt.y.spec != spec:
            raise ValueError("points from different fields")
    return spec


def collinear(a: Point, b: Point, c: Point) -> bool:
    """True iff the three points lie on a common line.

    Computed as the vanishing of det [[bx-ax, by-ay], [cx-ax, cy-ay]];
    repeated points therefore count as collinear.
    """
    spec = _check_same_field(a, b, c)
    bax = spec.sub_i(b.x.index, a.x.index)
    bay = spec.sub_i(b.y.index, a.y.index)
    cax = spec.sub_i(c.x.index, a.x.index)
    cay = spec.sub_i(c.y.index, a.y.index)
    return spec.sub_i(spec.mul_i(bax, cay), spec.mul_i(bay, cax)) == 0


class PlaneIndex:
    """Precomputed incidence structure of AG(2, q).

    Immutable after construction; all queries are pure.  Line membership
    is stored as one q^2-bit integer per line (bit i = point index i), the
    representation every counting loop downstream intersects against.
    """

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        q = spec.q
        self.q = q
        self.n_points = q * q
        self.n_lines = q * q + q
        points_on_line = [0] * self.n_lines
        for s in range(q):
            for c in range(q):
                lid = s * q + c
                bits = 0
                for x in range(q):
                    y = spec.add_i(spec.mul_i(s, x), c)
                    bits |= 1 << (x * q + y)
                points_on_line[lid] = bits
        for c in range(q):
            lid = q * q + c
            bits = 0
            for y in range(q):
                bits |= 1 << (c * q + y)
            points_on_line[lid] = bits
        self.points_on_line = points_on_line

        through: list[list[int]] = [[] for _ in range(self.n_points)]
        for lid, bits in enumerate(points_on_line):
            while bits:
                low = bits & -bits
                through[low.bit_length() - 1].append(lid)
                bits ^= low
        self.lines_through_point = [tuple(ls) for ls in through]

    # -- point and line codecs ----------------------------------------------

    def point(self, index: int) -> Point:
        if not 0 <= index < self.n_points:
            raise ValueError(f"point index {index} out of range")
        q = self.q
        return Point(self.spec.element(index // q), self.spec.element(index % q))

    def point_index(self, x_index: int, y_index: int) -> int:
        return x_index * self.q + y_index

    def line(self, line_id: int) -> Line:
        q = self.q
        if not 0 <= line_id < self.n_lines:
            raise ValueError(f"line id {line_id} out of range")
        if line_id < q * q:
            return Line(line_id, self.spec.element(line_id // q), self.spec.element(line_id % q))
        return Line(line_id, None, self.spec.element(line_id - q * q))

    # -- incidence queries ---------------------------------------------------

    def line_of_pair(self, i: int, j: int) -> int:
        """Line id of the unique line through two distinct point indices.

        Computed arithmetically in O(1); a q^4-entry table would buy
        nothing at these orders.
        """
        if i == j:
            raise ValueError("line_of_pair needs two distinct points")
        spec, q = self.spec, self.q
        x1, y1 = divmod(i, q)
        x2, y2 = divmod(j, q)
        if x1 == x2:
            return q * q + x1
        s = spec.mul_i(spec.sub_i(y2, y1), spec.inv_i(spec.sub_i(x2, x1)))
        c = spec.sub_i(y1, spec.mul_i(s, x1))
        return s * q + c


def line_through(a: Point, b: Point) -> Line:
    """The unique line through two distinct points."""
    spec = _check_same_field(a, b)
    if a.x.index == b.x.index and a.y.index == b.y.index:
        raise ValueError("line_through needs two distinct points")
    q = spec.q
    if a.x.index == b.x.index:
        return Line(q * q + a.x.index, None, a.x)
    s = (b.y - a.y) * (b.x - a.x).inv()
    c = a.y - s * a.x
    return Line(s.index * q + c.index, s, c)


def build_plane_index(spec: FieldSpec) -> PlaneIndex:
    """Build the incidence tables for AG(2, q)."""
    return PlaneIndex(spec)


@lru_cache(maxsize=None)
def plane_for_order(q: int) -> PlaneIndex:
    return build_plane_index(field_for_order(q))


def incidence_report(plane: PlaneIndex) -> dict:
    """Exhaustive check of the incidence axioms, as a flat dict.

    Verifies: q^2 + q lines, q points per line, q + 1 lines per point, and
    a unique common line for every point pair (cross-checked against
    line_of_pair).
    """
    q = plane.q
    per_line_ok = all(bits.bit_count() == q for bits in plane.points_on_line)
    per_point_ok = all(len(ls) == q + 1 for ls in plane.lines_through_point)
    through_sets = [frozenset(ls) for ls in plane.lines_through_point]
    pair_ok = True
    for i in range(plane.n_points):
        for j in range(i + 1, plane.n_points):
            common = through_sets[i] & through_sets[j]
            if len(common) != 1 or plane.line_of_pair(i, j) not in common:
                pair_ok = False
                break
        if not pair_ok:
            break
    incidences = sum(bits.bit_count() for bits in plane.points_on_line)
    axioms_ok = (
        plane.n_lines == q * q + q
        and per_line_ok
        and per_point_ok
        and pair_ok
        and incidences == q * (q * q + q)
    )
    return {
        "q": q,
        "points": plane.n_points,
        "lines": plane.n_lines,
        "points_per_line_ok": per_line_ok,
        "lines_per_point_ok": per_point_ok,
        "unique_line_per_pair": pair_ok,
        "incidences": incidences,
        "axioms_ok": axioms_ok,
    }
