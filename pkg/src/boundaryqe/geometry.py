"""Planar billiard domains as closed, positively oriented boundary curves.

Three analytic shapes are supported (disk, rectangle, stadium).  Each is
represented as a chain of line/circular-arc segments with an arclength
parameterization, an explicit corner set, and closed-form point membership.
The curve is traversed counterclockwise with the interior on the left, so
the outward unit normal is the tangent rotated by -90 degrees.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CornerError, InvalidSpecError

CLOSURE_RTOL = 1e-12  # endpoint mismatch tolerance, relative to total length
CORNER_SNAP = 1e-12   # |s - corner| below this (relative to L) counts as "at the corner"


@dataclass(frozen=True)
class DomainSpec:
    """Parameters of one of the three supported shapes.

    kind="disk":      radius > 0
    kind="rectangle": half-sides a, b > 0 (sides 2a x 2b)
    kind="stadium":   straight half-length a > 0, cap radius r > 0
    origin shifts the centroid away from (0, 0).
    """

    kind: str
    radius: float | None = None
    a: float | None = None
    b: float | None = None
    r: float | None = None
    origin: tuple[float, float] = (0.0, 0.0)

    def validate(self):
        if self.kind == "disk":
            if self.radius is None or not self.radius > 0:
                raise InvalidSpecError(f"disk needs radius > 0, got {self.radius}")
        elif self.kind == "rectangle":
            if self.a is None or self.b is None or not (self.a > 0 and self.b > 0):
                raise InvalidSpecError(f"rectangle needs half-sides a, b > 0, got a={self.a} b={self.b}")
        elif self.kind == "stadium":
            if self.a is None or self.r is None or not (self.a > 0 and self.r > 0):
                raise InvalidSpecError(f"stadium needs a > 0 and r > 0, got a={self.a} r={self.r}")
        else:
            raise InvalidSpecError(f"unknown domain kind {self.kind!r}")

    def canonical_dict(self):
        d = {"kind": self.kind, "origin": [float(self.origin[0]), float(self.origin[1])]}
        for name in ("radius", "a", "b", "r"):
            v = getattr(self, name)
            if v is not None:
                d[name] = float(v)
        return d

    def content_hash(self):
        """Stable hash of the spec; keys cache files."""
        blob = json.dumps(self.canonical_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(frozen=True)
class ArcSegment:
    """One C-infinity boundary piece: a line or a CCW circular arc."""

    kind: str                      # "line" | "arc"
    p0: tuple[float, float]
    p1: tuple[float, float]
    length: float
    center: tuple[float, float] | None = None
    radius: float | None = None
    ang0: float | None = None      # arc start angle; sweep is CCW by ang1 > ang0
    ang1: float | None = None

    def point(self, u):
        """Point at arclength u in [0, length] along the segment."""
        if self.kind == "line":
            f = u / self.length
            return (self.p0[0] + f * (self.p1[0] - self.p0[0]),
                    self.p0[1] + f * (self.p1[1] - self.p0[1]))
        th = self.ang0 + u / self.radius
        return (self.center[0] + self.radius * math.cos(th),
                self.center[1] + self.radius * math.sin(th))

    def frame(self, u):
        """(point, unit tangent, outward normal, signed curvature) at arclength u."""
        if self.kind == "line":
            tx = (self.p1[0] - self.p0[0]) / self.length
            ty = (self.p1[1] - self.p0[1]) / self.length
            p = self.point(u)
            return p, (tx, ty), (ty, -tx), 0.0
        th = self.ang0 + u / self.radius
        c, s = math.cos(th), math.sin(th)
        p = (self.center[0] + self.radius * c, self.center[1] + self.radius * s)
        # CCW arc: tangent = d(point)/du, outward normal = radial direction
        return p, (-s, c), (c, s), 1.0 / self.radius


Frame = tuple  # (point, tangent, normal, curvature); kept as a plain tuple


@dataclass(frozen=True)
class BoundaryCurve:
    """Closed positively oriented piecewise-smooth boundary with corner set."""

    spec: DomainSpec
    segments: tuple[ArcSegment, ...]
    length: float
    corners: tuple[float, ...]          # arclength positions where the tangent jumps
    area: float
    inradius: float
    seg_starts: tuple[float, ...] = field(repr=False, default=())

    @property
    def centroid(self):
        return self.spec.origin

    def domain_hash(self):
        return self.spec.content_hash()

    def wrap(self, s):
        return np.mod(s, self.length)

    def arclength_grid(self, M):
        """Uniform shifted grid (i + 1/2) L/M; never lands on a corner."""
        s = (np.arange(M) + 0.5) * (self.length / M)
        if self.corners:
            d = np.abs(s[:, None] - np.asarray(self.corners)[None, :])
            d = np.minimum(d, self.length - d)
            if d.min() < CORNER_SNAP * self.length:
                raise InvalidSpecError(f"grid M={M} places a node on a corner; choose another M")
        return s


def build_domain(spec: DomainSpec) -> BoundaryCurve:
    """Construct the boundary curve for a validated DomainSpec."""
    spec.validate()
    ox, oy = spec.origin
    if spec.kind == "disk":
        R = spec.radius
        seg = ArcSegment("arc", (ox + R, oy), (ox + R, oy), 2 * math.pi * R,
                         center=(ox, oy), radius=R, ang0=0.0, ang1=2 * math.pi)
        segments, corners = (seg,), ()
        area, inr = math.pi * R * R, R
    elif spec.kind == "rectangle":
        a, b = spec.a, spec.b
        P = [(ox - a, oy - b), (ox + a, oy - b), (ox + a, oy + b), (ox - a, oy + b)]
        segments = tuple(
            ArcSegment("line", P[i], P[(i + 1) % 4],
                       math.hypot(P[(i + 1) % 4][0] - P[i][0], P[(i + 1) % 4][1] - P[i][1]))
            for i in range(4)
        )
        corners = (0.0, 2 * a, 2 * a + 2 * b, 4 * a + 2 * b)
        area, inr = 4 * a * b, min(a, b)
    else:  # stadium: straight, cap, straight, cap
        a, r = spec.a, spec.r
        segments = (
            ArcSegment("line", (ox - a, oy - r), (ox + a, oy - r), 2 * a),
            ArcSegment("arc", (ox + a, oy - r), (ox + a, oy + r), math.pi * r,
                       center=(ox + a, oy), radius=r, ang0=-math.pi / 2, ang1=math.pi / 2),
            ArcSegment("line", (ox + a, oy + r), (ox - a, oy + r), 2 * a),
            ArcSegment("arc", (ox - a, oy + r), (ox - a, oy - r), math.pi * r,
                       center=(ox - a, oy), radius=r, ang0=math.pi / 2, ang1=3 * math.pi / 2),
        )
        corners = ()  # junctions are tangent-continuous; only curvature jumps
        area, inr = math.pi * r * r + 4 * a * r, r

    L = sum(s.length for s in segments)
    starts, acc = [], 0.0
    for s in segments:
        starts.append(acc)
        acc += s.length
    # closure check: chain of endpoints must return to the start
    for i, s in enumerate(segments):
        nxt = segments[(i + 1) % len(segments)]
        gap = math.hypot(s.p1[0] - nxt.p0[0], s.p1[1] - nxt.p0[1])
        if gap > CLOSURE_RTOL * L:
            raise InvalidSpecError(f"segments do not chain: gap {gap} after segment {i}")
    return BoundaryCurve(spec=spec, segments=segments, length=L, corners=corners,
                         area=area, inradius=inr, seg_starts=tuple(starts))


def _locate(curve: BoundaryCurve, s: float):
    """Segment index and local arclength for s in [0, L)."""
    starts = curve.seg_starts
    for i in range(len(curve.segments) - 1, -1, -1):
        if s >= starts[i]:
            return i, s - starts[i]
    return 0, s


def boundary_eval(curve: BoundaryCurve, s: float, side: int | None = None):
    """Boundary frame at arclength s: (point, tangent, outward normal, curvature).

    At a corner the frame is one-sided: side=+1 evaluates on the segment that
    starts at the corner, side=-1 on the one that ends there.  Without a side
    flag a corner raises CornerError.
    """
    L = curve.length
    s = float(s) % L
    tol = CORNER_SNAP * L
    if curve.corners:
        for c in curve.corners:
            d = abs(s - c)
            if min(d, L - d) < tol:
                if side is None:
                    raise CornerError(f"s={s} is a corner of Sigma; pass side=+1 or side=-1")
                s = c + tol * (1 if side > 0 else -1)
                s %= L
                break
    i, u = _locate(curve, s)
    seg = curve.segments[i]
    u = min(max(u, 0.0), seg.length)
    return seg.frame(u)


def boundary_frames(curve: BoundaryCurve, s):
    """Vectorized boundary_eval for arrays of regular (non-corner) arclengths.

    Returns (points (n,2), tangents (n,2), normals (n,2), curvature (n,)).
    """
    s = curve.wrap(np.atleast_1d(np.asarray(s, dtype=float)))
    n = s.size
    P = np.empty((n, 2))
    T = np.empty((n, 2))
    K = np.empty(n)
    starts = np.asarray(curve.seg_starts)
    lengths = np.asarray([sg.length for sg in curve.segments])
    idx = np.searchsorted(starts + lengths, s, side="right")
    idx = np.clip(idx, 0, len(curve.segments) - 1)
    for i, seg in enumerate(curve.segments):
        m = idx == i
        if not m.any():
            continue
        u = s[m] - starts[i]
        if seg.kind == "line":
            tx = (seg.p1[0] - seg.p0[0]) / seg.length
            ty = (seg.p1[1] - seg.p0[1]) / seg.length
            P[m, 0] = seg.p0[0] + u * tx
            P[m, 1] = seg.p0[1] + u * ty
            T[m, 0], T[m, 1] = tx, ty
            K[m] = 0.0
        else:
            th = seg.ang0 + u / seg.radius
            c, snth = np.cos(th), np.sin(th)
            P[m, 0] = seg.center[0] + seg.radius * c
            P[m, 1] = seg.center[1] + seg.radius * snth
            T[m, 0], T[m, 1] = -snth, c
            K[m] = 1.0 / seg.radius
    N = np.stack([T[:, 1], -T[:, 0]], axis=1)
    return P, T, N, K


def is_inside(curve: BoundaryCurve, point):
    """Exact membership test: (inside?, distance to the boundary).

    Closed-form signed distance for the three analytic shapes; points on the
    boundary report inside=False with distance 0.
    """
    x = np.asarray(point, dtype=float)
    scalar = x.ndim == 1
    x = np.atleast_2d(x)
    sd = signed_distance(curve, x)
    inside = sd < 0
    dist = np.abs(sd)
    if scalar:
        return bool(inside[0]), float(dist[0])
    return inside, dist


def signed_distance(curve: BoundaryCurve, pts):
    """Signed distance to the boundary (< 0 inside), vectorized over (n,2)."""
    spec = curve.spec
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    x = pts[:, 0] - spec.origin[0]
    y = pts[:, 1] - spec.origin[1]
    if spec.kind == "disk":
        return np.hypot(x, y) - spec.radius
    if spec.kind == "stadium":
        dx = np.maximum(np.abs(x) - spec.a, 0.0)
        return np.hypot(dx, y) - spec.r
    # rectangle
    qx = np.abs(x) - spec.a
    qy = np.abs(y) - spec.b
    outside = np.hypot(np.maximum(qx, 0.0), np.maximum(qy, 0.0))
    inside = np.minimum(np.maximum(qx, qy), 0.0)
    return outside + inside


def corner_arc_distance(curve: BoundaryCurve, s):
    """Minimal arclength distance from s to the corner set; inf when empty."""
    if not curve.corners:
        if np.ndim(s) == 0:
            return math.inf
        return np.full(np.shape(s), np.inf)
    s = curve.wrap(np.asarray(s, dtype=float))
    c = np.asarray(curve.corners)
    d = np.abs(np.atleast_1d(s)[:, None] - c[None, :])
    d = np.minimum(d, curve.length - d).min(axis=1)
    if np.ndim(s) == 0:
        return float(d[0])
    return d
