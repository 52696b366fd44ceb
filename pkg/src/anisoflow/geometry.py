"""Discrete closed planar curves and their differential geometry.

A curve is a positively oriented simple polygon, implicitly periodic.
Differential quantities (normal, tangent, curvature) come from local
least-squares cubic fits on 5-point periodic stencils in chordal arc
length; the same stencils back the tangential derivative operators used
everywhere else, so discretizations stay mutually consistent at O(N^-2).

Sign conventions: the stored tangent is the clockwise rotation by 90
degrees of the outer normal, and curvature is positive for convex sets.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator

from .errors import (
    FlatCurve,
    NegativeOrientation,
    ParseError,
    SelfIntersecting,
    TooFewNodes,
    ValidationError,
)

MIN_NODES = 16

_OFFSETS = np.array([-2, -1, 0, 1, 2])


def shoelace(nodes):
    """Signed polygon area.  Exactly rounded, so independent of the start node."""
    x = nodes[:, 0]
    y = nodes[:, 1]
    xn = np.roll(x, -1)
    yn = np.roll(y, -1)
    return 0.5 * math.fsum(x * yn - y * xn)


@dataclass(frozen=True)
class ClosedCurve:
    """Discretized boundary of a bounded planar set with per-node data.

    nodes        (N, 2) positively oriented, implicitly periodic
    arc_weights  (N,)   length of the dual arc segment (trapezoidal dH^1)
    normals      (N, 2) outer unit normals
    tangents     (N, 2) unit tangents, normals rotated by -90 degrees
    curvature    (N,)   positive for convex sets
    enclosed_area       shoelace value of the nodes
    """

    nodes: np.ndarray
    arc_weights: np.ndarray
    normals: np.ndarray
    tangents: np.ndarray
    curvature: np.ndarray
    enclosed_area: float
    # 5-point stencil bands for d/ds and d^2/ds^2 along the ccw parametrization
    _d1_bands: np.ndarray = None
    _d2_bands: np.ndarray = None

    @property
    def n(self):
        return len(self.nodes)

    @property
    def perimeter(self):
        return float(np.sum(self.arc_weights))


@dataclass(frozen=True)
class TubularData:
    """Tubular radius sigma = 1/(2 max|curvature|)."""

    sigma: float


def _stencil_weights(offsets):
    """Derivative weights of local least-squares cubic fits.

    offsets: (N, 5) signed arc-length offsets of the stencil nodes, middle
    column zero.  Returns (w1, w2) with rows giving d/ds and d^2/ds^2 at the
    center node.
    """
    scale = np.max(np.abs(offsets), axis=1, keepdims=True)
    z = offsets / scale
    V = z[..., None] ** np.arange(4)  # (N, 5, 4)
    Vt = V.transpose(0, 2, 1)
    G = Vt @ V
    pinv = np.linalg.solve(G, Vt)  # (N, 4, 5)
    w1 = pinv[:, 1, :] / scale
    w2 = 2.0 * pinv[:, 2, :] / scale**2
    return w1, w2


def _check_simple(pts):
    """Reject self-intersecting polygons via a sorted-interval segment sweep."""
    n = len(pts)
    a = pts
    b = np.roll(pts, -1, axis=0)
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    order = np.argsort(lo[:, 0], kind="stable")
    xmin = lo[order, 0]
    xmax = hi[order, 0]
    for pos in range(n):
        i = order[pos]
        stop = np.searchsorted(xmin, xmax[i], side="right")
        cand = order[pos + 1 : stop]
        if cand.size == 0:
            continue
        adjacent = ((cand - i) % n == 1) | ((i - cand) % n == 1)
        ybox = (lo[cand, 1] <= hi[i, 1]) & (hi[cand, 1] >= lo[i, 1])
        cand = cand[~adjacent & ybox]
        if cand.size == 0:
            continue
        p, q = a[i], b[i]
        r, s = a[cand], b[cand]
        d1 = np.cross(q - p, r - p)
        d2 = np.cross(q - p, s - p)
        d3 = np.cross(s - r, p - r)
        d4 = np.cross(s - r, q - r)
        crossing = ((d1 * d2) <= 0.0) & ((d3 * d4) <= 0.0)
        if np.any(crossing):
            j = int(cand[np.argmax(crossing)])
            raise SelfIntersecting(f"segments {i} and {j} intersect")


def build_curve(points):
    """Construct a ClosedCurve from an ordered node list.

    Requires at least 16 distinct nodes forming a simple, positively
    oriented polygon.  All differential quantities are populated.
    """
    pts = np.ascontiguousarray(np.asarray(points, dtype=float))
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValidationError("points must be an (N, 2) array")
    n = len(pts)
    if n < MIN_NODES:
        raise TooFewNodes(f"need at least {MIN_NODES} nodes, got {n}")
    if not np.all(np.isfinite(pts)):
        raise ValidationError("non-finite node coordinates")

    edges = np.roll(pts, -1, axis=0) - pts
    elen = np.hypot(edges[:, 0], edges[:, 1])
    if np.any(elen == 0.0):
        raise SelfIntersecting("repeated consecutive nodes")

    area = shoelace(pts)
    if area < 0.0:
        raise NegativeOrientation("polygon is negatively oriented")
    if area == 0.0:
        raise SelfIntersecting("polygon encloses zero area")
    _check_simple(pts)

    weights = 0.5 * (elen + np.roll(elen, 1))

    # signed chordal arc offsets of the 5-point stencil around each node
    offsets = np.empty((n, 5))
    offsets[:, 2] = 0.0
    offsets[:, 3] = elen
    offsets[:, 4] = elen + np.roll(elen, -1)
    offsets[:, 1] = -np.roll(elen, 1)
    offsets[:, 0] = -(np.roll(elen, 1) + np.roll(elen, 2))
    w1, w2 = _stencil_weights(offsets)

    nbr = (np.arange(n)[:, None] + _OFFSETS) % n
    stencil_pts = pts[nbr]  # (N, 5, 2)
    d1 = np.einsum("nk,nkd->nd", w1, stencil_pts)
    d2 = np.einsum("nk,nkd->nd", w2, stencil_pts)
    speed = np.hypot(d1[:, 0], d1[:, 1])
    t_ccw = d1 / speed[:, None]
    curvature = (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]) / speed**3
    normals = np.column_stack([t_ccw[:, 1], -t_ccw[:, 0]])
    tangents = -t_ccw  # clockwise rotation of the outer normal

    for arr in (pts, weights, normals, tangents, curvature):
        arr.setflags(write=False)
    # d/ds bands; the tangential derivative along the stored tangent is -d/ds
    w1.setflags(write=False)
    w2.setflags(write=False)
    return ClosedCurve(
        nodes=pts,
        arc_weights=weights,
        normals=normals,
        tangents=tangents,
        curvature=curvature,
        enclosed_area=area,
        _d1_bands=w1,
        _d2_bands=w2,
    )


def _stencil_values(curve, values):
    n = curve.n
    nbr = (np.arange(n)[:, None] + _OFFSETS) % n
    return np.asarray(values)[nbr]


def tangential_derivative(curve, values):
    """Derivative along the stored (clockwise) tangent direction."""
    return -np.einsum("nk,nk->n", curve._d1_bands, _stencil_values(curve, values))


def tangential_second_derivative(curve, values):
    """Second tangential derivative (orientation independent)."""
    return np.einsum("nk,nk->n", curve._d2_bands, _stencil_values(curve, values))


def enclosed_area(curve):
    """Shoelace area of the polygon (cached at construction)."""
    return curve.enclosed_area


def tubular_radius(curve):
    """Tubular radius 1/(2 max|curvature|) within which normal rays are disjoint."""
    kmax = float(np.max(np.abs(curve.curvature)))
    if kmax <= 0.0:
        raise FlatCurve("curvature vanishes identically")
    return TubularData(sigma=1.0 / (2.0 * kmax))


def _point_segment_min_dist(points, poly):
    a = poly
    b = np.roll(poly, -1, axis=0)
    e = b - a
    ee = np.einsum("md,md->m", e, e)
    diff = points[:, None, :] - a[None, :, :]
    t = np.clip(np.einsum("nmd,md->nm", diff, e) / ee, 0.0, 1.0)
    closest = a[None] + t[..., None] * e[None]
    d = np.linalg.norm(points[:, None, :] - closest, axis=2)
    return d.min(axis=1)


def hausdorff_distance(a, b):
    """Symmetric node-to-segment Hausdorff distance between two curves."""
    d_ab = _point_segment_min_dist(a.nodes, b.nodes).max()
    d_ba = _point_segment_min_dist(b.nodes, a.nodes).max()
    return float(max(d_ab, d_ba))


def _offset_for_area(curve, target):
    """Uniform normal offset whose offset polygon has exactly the target area.

    The shoelace area of {x_i + eps * nu_i} is a quadratic polynomial in eps;
    the root closest to zero is returned.
    """
    x = curve.nodes
    nu = curve.normals
    xn = np.roll(x, -1, axis=0)
    nun = np.roll(nu, -1, axis=0)
    b = 0.5 * math.fsum(x[:, 0] * nun[:, 1] - x[:, 1] * nun[:, 0]
                        + nu[:, 0] * xn[:, 1] - nu[:, 1] * xn[:, 0])
    c = 0.5 * math.fsum(nu[:, 0] * nun[:, 1] - nu[:, 1] * nun[:, 0])
    a0 = curve.enclosed_area - target
    if a0 == 0.0:
        return 0.0
    disc = b * b - 4.0 * c * a0
    if disc < 0.0:
        raise ValidationError("area correction has no real solution")
    sq = math.sqrt(disc)
    # numerically stable root nearest zero
    if b >= 0.0:
        return -2.0 * a0 / (b + sq)
    return -2.0 * a0 / (b - sq)


def correct_area(curve, target):
    """Move every node by one uniform normal offset so the area equals target."""
    eps = _offset_for_area(curve, target)
    if eps == 0.0:
        return curve
    return build_curve(curve.nodes + eps * curve.normals)


def resample_arclength(curve, n, target_area=None):
    """Resample to n nodes equispaced in (chordal) arc length.

    Node positions come from the periodic cubic spline through the input
    nodes; spacing is equalized iteratively to 1e-11 relative.  The enclosed
    area is then restored exactly (to target_area, default: the input area)
    by a uniform normal offset.
    """
    if n < MIN_NODES:
        raise TooFewNodes(f"need at least {MIN_NODES} nodes, got {n}")
    pts = curve.nodes
    closed = np.vstack([pts, pts[:1]])
    t = np.concatenate([[0.0], np.cumsum(np.linalg.norm(np.diff(closed, axis=0), axis=1))])
    period = t[-1]
    spline = CubicSpline(t, closed, bc_type="periodic", axis=0)

    tau = period * np.arange(n) / n
    new = spline(tau)
    for _ in range(80):
        chords = np.linalg.norm(np.roll(new, -1, axis=0) - new, axis=1)
        mean = chords.mean()
        if np.max(np.abs(chords - mean)) <= 1e-11 * mean:
            break
        cum = np.concatenate([[0.0], np.cumsum(chords)])
        tau_ext = np.concatenate([tau, [tau[0] + period]])
        targets = cum[-1] * np.arange(n) / n
        tau = PchipInterpolator(cum, tau_ext)(targets)
        new = spline(np.mod(tau, period))

    out = build_curve(new)
    goal = curve.enclosed_area if target_area is None else target_area
    return correct_area(out, goal)


def points_in_polygon(points, poly, chunk=262144):
    """Crossing-number point-in-polygon test, vectorized and chunked."""
    points = np.atleast_2d(points)
    x1 = poly[:, 0]
    y1 = poly[:, 1]
    x2 = np.roll(x1, -1)
    y2 = np.roll(y1, -1)
    dy = y2 - y1
    m = len(poly)
    out = np.empty(len(points), dtype=bool)
    step = max(1, chunk // m)
    for s in range(0, len(points), step):
        px = points[s : s + step, 0][:, None]
        py = points[s : s + step, 1][:, None]
        straddle = (y1 > py) != (y2 > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = x1 + (py - y1) * (x2 - x1) / dy
        hits = straddle & (px < xint)
        out[s : s + step] = np.count_nonzero(hits, axis=1) % 2 == 1
    return out


# ---------------------------------------------------------------------------
# generators and CSV interface


def circle_curve(n, radius=1.0, center=(0.0, 0.0)):
    """Regular n-gon sample of a circle."""
    theta = 2.0 * np.pi * np.arange(n) / n
    pts = np.column_stack([center[0] + radius * np.cos(theta),
                           center[1] + radius * np.sin(theta)])
    return build_curve(pts)


def ellipse_curve(a, b, n):
    """Parameter-uniform sample of the ellipse with semi-axes (a, b)."""
    theta = 2.0 * np.pi * np.arange(n) / n
    pts = np.column_stack([a * np.cos(theta), b * np.sin(theta)])
    return build_curve(pts)


def perturbed_circle_curve(n, amplitude, mode, seed=None):
    """Polar graph r = 1 + amplitude*cos(mode*theta), optionally noise-dressed."""
    theta = 2.0 * np.pi * np.arange(n) / n
    r = 1.0 + amplitude * np.cos(mode * theta)
    if seed is not None:
        rng = np.random.default_rng(seed)
        phases = rng.uniform(0.0, 2.0 * np.pi, size=3)
        amps = rng.uniform(0.0, 0.2 * abs(amplitude) + 1e-12, size=3)
        for k, (p, am) in enumerate(zip(phases, amps), start=2):
            r += am * np.cos(k * theta + p)
    if np.min(r) <= 0.0:
        raise ValidationError("perturbation amplitude too large")
    pts = np.column_stack([r * np.cos(theta), r * np.sin(theta)])
    return build_curve(pts)


def write_curve_csv(curve, path):
    """Write nodes as `x,y` rows with shortest round-trip formatting."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y"])
        for px, py in curve.nodes:
            writer.writerow([repr(float(px)), repr(float(py))])


def read_curve_csv(path):
    """Read a curve CSV (header `x,y`, implicitly closed)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        if [h.strip().lower() for h in header] != ["x", "y"]:
            raise ParseError(f"{path}: expected header 'x,y'")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ParseError(f"{path}:{lineno}: expected two columns")
            try:
                x, y = float(row[0]), float(row[1])
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from None
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ValidationError(f"{path}:{lineno}: non-finite coordinate")
            rows.append((x, y))
    return build_curve(np.array(rows))
