"""
Newton polygons of truncated series over Z_q.

The polygon is the lower convex hull of the points (k, v(c_k)), computed with
Andrew's monotone chain. Coefficients that are zero at the working precision
are left out and make the polygon provisional.
"""
from collections.abc import Sequence
from fractions import Fraction
from logging import getLogger
from typing import NamedTuple

from algebra.errors import ZeroSeries
from algebra.series import Series
from algebra.zq import ZqElement

LOGGER = getLogger("algebra.newton")

__all__ = (
    "NewtonPolygon",
    "Segment",
    "newton_polygon",
)


class Segment(NamedTuple):
    slope: Fraction
    length: int


class NewtonPolygon(NamedTuple):
    vertices: tuple[tuple[int, int], ...]
    """(degree, valuation) pairs, strictly increasing in degree."""
    provisional: bool
    """True if some coefficient was indistinguishable from zero."""
    length: int = 0
    """Number of coefficients the hull was taken over."""

    @property
    def segments(self) -> tuple[Segment, ...]:
        return tuple(
            Segment(Fraction(v1 - v0, k1 - k0), k1 - k0)
            for (k0, v0), (k1, v1) in zip(self.vertices, self.vertices[1:])
        )

    @property
    def settled(self) -> bool:
        """
        True if no coefficient below precision can move the hull. Vanishing
        coefficients strictly between the end vertices lie above it, since
        every vertex has valuation below N; only those outside that range count.
        """
        if not self.provisional:
            return True
        return self.vertices[0][0] == 0 and self.vertices[-1][0] == self.length - 1

    def slope_multiset(self) -> dict[Fraction, int]:
        """Total horizontal length per slope."""
        multiset: dict[Fraction, int] = {}
        for segment in self.segments:
            multiset[segment.slope] = multiset.get(segment.slope, 0) + segment.length
        return multiset

    def __str__(self) -> str:
        flag = " (provisional)" if self.provisional else ""
        return f"Newton polygon with vertices {list(self.vertices)}{flag}"


def _lower_hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    hull: list[tuple[int, int]] = []
    for point in points:
        # Pop while the last turn is not strictly convex from below
        while len(hull) >= 2:
            (k0, v0), (k1, v1) = hull[-2], hull[-1]
            if (v1 - v0) * (point[0] - k1) >= (point[1] - v1) * (k1 - k0):
                hull.pop()
            else:
                break
        hull.append(point)
    return hull


def newton_polygon(f: Series|Sequence[ZqElement]) -> NewtonPolygon:
    """
    Lower convex hull of {(k, v(c_k))} over the coefficients that are
    nonzero at precision N. Raises ZeroSeries if there are none.
    """
    coefficients = f.coeffs if isinstance(f, Series) else tuple(f)
    points = []
    skipped = False
    for k, c in enumerate(coefficients):
        if c.is_zero():
            skipped = True
            continue
        points.append((k, c.valuation()))
    if not points:
        raise ZeroSeries("The Newton polygon of the zero series is undefined")
    hull = _lower_hull(points)
    polygon = NewtonPolygon(tuple(hull), skipped, len(coefficients))
    if skipped:
        LOGGER.debug("%s, settled: %s", polygon, polygon.settled)
    return polygon
