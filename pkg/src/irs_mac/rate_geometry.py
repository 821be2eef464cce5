"""2-D rate-region geometry.

A rate region is the set of simultaneously achievable (R1, R2) pairs. For a
fixed channel it is a pentagon cut out by two individual-rate caps and one
sum-rate cap; time sharing between configurations turns unions of pentagons
into their convex hull. Everything here works on the dominant (upper-right)
boundary chain, traced from (0, max R2) down to (max R1, 0).
"""

import math
from dataclasses import dataclass

# Cross products below this magnitude are treated as collinear when building
# boundary chains (rates are O(1..50) bps/Hz, so this is far below rate scale).
COLLINEAR_EPS = 1e-9

# Slack used for boundary membership tests, relative to the boundary height.
_INSIDE_REL_EPS = 1e-12


@dataclass(frozen=True)
class RatePair:
    """One achievable rate point in bps/Hz per user."""

    r1: float
    r2: float

    def __post_init__(self):
        if not (math.isfinite(self.r1) and math.isfinite(self.r2)):
            raise ValueError(f"rate pair must be finite, got ({self.r1}, {self.r2})")
        if self.r1 < 0.0 or self.r2 < 0.0:
            raise ValueError(f"rate pair must be nonnegative, got ({self.r1}, {self.r2})")

    def as_tuple(self) -> tuple[float, float]:
        return (self.r1, self.r2)


@dataclass(frozen=True)
class Pentagon:
    """Rate caps of a two-user MAC with fixed channel gains.

    cap1/cap2 limit the individual rates, cap_sum the sum rate. cap_sum may
    exceed cap1 + cap2; the excess is simply inactive.
    """

    cap1: float
    cap2: float
    cap_sum: float

    def __post_init__(self):
        for name in ("cap1", "cap2", "cap_sum"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0.0:
                raise ValueError(f"{name} must be finite and >= 0, got {v}")

    def effective_sum(self) -> float:
        """Sum cap actually binding on the region."""
        return min(self.cap_sum, self.cap1 + self.cap2)


@dataclass(frozen=True)
class RateRegion:
    """Convex, axis-anchored rate region given by its dominant boundary chain.

    ``vertices`` runs from the R2-axis intercept (0, r2_max) to the R1-axis
    intercept (r1_max, 0) with r1 non-decreasing, r2 non-increasing, and
    strictly convex turns. The origin is implicitly part of the region.
    """

    vertices: tuple[RatePair, ...]

    @property
    def r1_max(self) -> float:
        return max(v.r1 for v in self.vertices)

    @property
    def r2_max(self) -> float:
        return max(v.r2 for v in self.vertices)

    def validate(self) -> None:
        """Raise ValueError if the boundary chain invariants are violated."""
        vs = self.vertices
        if not vs:
            raise ValueError("region must have at least one vertex")
        if len(vs) == 1:
            return
        if vs[0].r1 != 0.0:
            raise ValueError("boundary chain must start on the R2 axis")
        if vs[-1].r2 != 0.0:
            raise ValueError("boundary chain must end on the R1 axis")
        for a, b in zip(vs, vs[1:]):
            if b.r1 < a.r1 or b.r2 > a.r2:
                raise ValueError(f"chain not monotone between {a} and {b}")
            if b.r1 == a.r1 and b.r2 == a.r2:
                raise ValueError(f"duplicate vertex {a}")
        for o, a, b in zip(vs, vs[1:], vs[2:]):
            if _cross(o.as_tuple(), a.as_tuple(), b.as_tuple()) >= -COLLINEAR_EPS:
                raise ValueError(f"chain not strictly convex at {a}")


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _dominant_hull(points) -> tuple[RatePair, ...]:
    """Upper-right hull chain of a point cloud, anchored to both axes."""
    pts = [(float(x), float(y)) for x, y in points]
    if not pts:
        raise ValueError("cannot build a region from no points")
    for x, y in pts:
        if not (math.isfinite(x) and math.isfinite(y)) or x < 0.0 or y < 0.0:
            raise ValueError(f"invalid region point ({x}, {y})")
    r1_max = max(x for x, _ in pts)
    r2_max = max(y for _, y in pts)
    if r1_max <= 0.0 and r2_max <= 0.0:
        return (RatePair(0.0, 0.0),)
    pts.append((0.0, r2_max))
    pts.append((r1_max, 0.0))
    pts = sorted(set(pts), key=lambda p: (p[0], -p[1]))
    hull: list[tuple[float, float]] = []
    for p in pts:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) >= -COLLINEAR_EPS:
            hull.pop()
        hull.append(p)
    if len(hull) > 1 and hull[0] == (0.0, 0.0):
        hull = hull[1:]
    if len(hull) > 1 and hull[-1] == (0.0, 0.0):
        hull = hull[:-1]
    return tuple(RatePair(x, y) for x, y in hull)


def mac_pentagon(gain1: float, gain2: float, p1: float, p2: float,
                 noise_power: float) -> Pentagon:
    """MAC rate caps for effective channel amplitude gains and transmit powers.

    cap_k = log2(1 + P_k gain_k^2 / noise), and the sum cap pools both users'
    received powers inside a single log.
    """
    s1 = p1 * gain1 * gain1 / noise_power
    s2 = p2 * gain2 * gain2 / noise_power
    return Pentagon(math.log2(1.0 + s1), math.log2(1.0 + s2), math.log2(1.0 + s1 + s2))


def pentagon_region(p: Pentagon) -> RateRegion:
    """Region {R1 <= cap1, R2 <= cap2, R1 + R2 <= effective sum cap}."""
    rs = p.effective_sum()
    r1e = min(p.cap1, rs)
    r2e = min(p.cap2, rs)
    corners = [(r1e, rs - r1e), (rs - r2e, r2e)]
    return RateRegion(_dominant_hull(corners))


def convex_hull_union(regions, extra_points=()) -> RateRegion:
    """Convex hull of a union of regions and loose points (time sharing)."""
    pts = [v.as_tuple() for r in regions for v in r.vertices]
    pts.extend(p.as_tuple() if isinstance(p, RatePair) else (p[0], p[1])
               for p in extra_points)
    if not pts:
        raise ValueError("convex_hull_union needs at least one region or point")
    return RateRegion(_dominant_hull(pts))


def _boundary_height(vertices, x: float) -> float:
    """Height of the dominant boundary above r1 = x (x <= r1_max)."""
    if x <= vertices[0].r1:
        return vertices[0].r2
    for a, b in zip(vertices, vertices[1:]):
        if x <= b.r1:
            if b.r1 == a.r1:
                return a.r2
            t = (x - a.r1) / (b.r1 - a.r1)
            return a.r2 + t * (b.r2 - a.r2)
    return vertices[-1].r2


def _point_inside(region: RateRegion, x: float, y: float) -> bool:
    if x <= 0.0 and y <= 0.0:
        return True
    x = max(x, 0.0)
    y = max(y, 0.0)
    vs = region.vertices
    r1_max = max(v.r1 for v in vs)
    if x > r1_max:
        return False
    h = _boundary_height(vs, x)
    return y <= h + _INSIDE_REL_EPS * (1.0 + abs(h))


def contains(outer: RateRegion, inner: RateRegion, tol: float = 0.0) -> bool:
    """True iff every vertex of ``inner`` lies in ``outer`` grown by ``tol``
    in each coordinate."""
    if tol < 0.0:
        raise ValueError(f"tolerance must be >= 0, got {tol}")
    return all(_point_inside(outer, v.r1 - tol, v.r2 - tol) for v in inner.vertices)


def region_area(region: RateRegion) -> float:
    """Shoelace area of the region, axis edges included."""
    poly = [(0.0, 0.0)] + [v.as_tuple() for v in region.vertices]
    area = 0.0
    n = len(poly)
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        area += x0 * y1 - x1 * y0
    return abs(area) / 2.0


def _segment_distance(p, a, b) -> float:
    px, py = p
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    seg2 = dx * dx + dy * dy
    if seg2 == 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / seg2
    t = min(1.0, max(0.0, t))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def _point_region_distance(region: RateRegion, p: RatePair) -> float:
    if _point_inside(region, p.r1, p.r2):
        return 0.0
    poly = [(0.0, 0.0)] + [v.as_tuple() for v in region.vertices] + [(0.0, 0.0)]
    q = p.as_tuple()
    return min(_segment_distance(q, a, b) for a, b in zip(poly, poly[1:]))


def hausdorff_distance(a: RateRegion, b: RateRegion) -> float:
    """Hausdorff distance between two regions (as point sets).

    Both regions are convex, so the supremum of the distance-to-other-region
    is attained at a boundary vertex.
    """
    da = max(_point_region_distance(b, v) for v in a.vertices)
    db = max(_point_region_distance(a, v) for v in b.vertices)
    return max(da, db)
