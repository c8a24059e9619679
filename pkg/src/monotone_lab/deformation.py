"""Piecewise-affine deformations, boundary data, and analytic example maps.

A deformation is determined by the image positions of mesh vertices; on each
triangle the map is the affine interpolant, so the derivative and its
determinant are constant per triangle.  Jacobian positivity is a checked
property, never a type invariant: several built-in example maps deliberately
collapse or fold regions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Optional

import numpy as np

from .errors import DomainError, GeometryError, MeshError
from .geometry import Location, PlanarDomain, TriMesh, locate

__all__ = [
    "Deformation",
    "BoundaryHomeomorphism",
    "BoundaryTraceReport",
    "boundary_trace",
    "AnalyticMap",
    "identity_map",
    "disk_bubbles",
    "radial_collapse",
    "rectangle_pinch",
    "analytic_eval",
    "analytic_jacobian",
    "sample_analytic",
    "integrate_jacobian",
]


class Deformation:
    """A piecewise-affine map given by vertex image positions.

    Immutable; derived per-triangle data is cached.
    """

    def __init__(self, mesh: TriMesh, image):
        self.mesh = mesh
        self.image = np.asarray(image, dtype=float)
        if self.image.shape != mesh.vertices.shape:
            raise MeshError(
                f"image shape {self.image.shape} does not match vertex array "
                f"{mesh.vertices.shape}"
            )
        self.image.setflags(write=False)

    @classmethod
    def identity(cls, mesh: TriMesh) -> "Deformation":
        return cls(mesh, mesh.vertices.copy())

    def with_image(self, image) -> "Deformation":
        return Deformation(self.mesh, image)

    # -- per-triangle derivative data --------------------------------------

    @cached_property
    def image_triangles(self) -> np.ndarray:
        """(m, 3, 2) array of image triangle corners."""
        return self.image[self.mesh.triangles]

    @cached_property
    def image_signed_areas(self) -> np.ndarray:
        t = self.image_triangles
        a, b, c = t[:, 0], t[:, 1], t[:, 2]
        return 0.5 * (
            (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1])
            - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
        )

    @cached_property
    def jacobians(self) -> np.ndarray:
        """Constant per-triangle determinant of the derivative."""
        return self.image_signed_areas / self.mesh.triangle_areas

    @cached_property
    def gradients(self) -> np.ndarray:
        """(m, 2, 2) per-triangle derivative matrices."""
        v, t = self.mesh.vertices, self.mesh.triangles
        X = np.stack([v[t[:, 1]] - v[t[:, 0]], v[t[:, 2]] - v[t[:, 0]]], axis=2)
        U = np.stack(
            [
                self.image[t[:, 1]] - self.image[t[:, 0]],
                self.image[t[:, 2]] - self.image[t[:, 0]],
            ],
            axis=2,
        )
        return U @ np.linalg.inv(X)

    @cached_property
    def max_image_edge_length(self) -> float:
        t = self.image_triangles
        m = 0.0
        for k in range(3):
            d = t[:, (k + 1) % 3] - t[:, k]
            m = max(m, float(np.hypot(d[:, 0], d[:, 1]).max()))
        return m

    def triangle_jacobian(self, t: int) -> float:
        return float(self.jacobians[t])

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, p) -> np.ndarray:
        """Value of the map at a point of the reference mesh."""
        loc = locate(self.mesh, p)
        return self.evaluate_at(loc, p)

    def evaluate_at(self, loc: Location, p) -> np.ndarray:
        if loc.is_outside:
            raise DomainError(f"point {np.asarray(p).tolist()} is outside the mesh")
        tri = self.mesh.triangles[loc.triangle]
        lam = np.asarray(loc.bary)
        return lam @ self.image[tri]

    # -- serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        d = self.mesh.to_dict()
        d["image"] = self.image.tolist()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Deformation":
        mesh = TriMesh(d["vertices"], d["triangles"], d["boundary"])
        return cls(mesh, d["image"])

    @classmethod
    def from_json(cls, path) -> "Deformation":
        with open(path) as f:
            return cls.from_dict(json.load(f))

    def __repr__(self) -> str:
        return f"Deformation({self.mesh!r}, min J={self.jacobians.min():.4g})"


def integrate_jacobian(deformation: Deformation, region: Optional[Iterable[int]] = None) -> float:
    """Integral of the Jacobian over a set of triangles (all when omitted).

    The integrand is constant per triangle, so the integral is the sum of
    image signed areas.  Those are accumulated in the cyclic shoelace form
    with exact summation: terms from shared interior edges cancel exactly,
    which makes the whole-mesh integral equal the shoelace area of the image
    boundary polyline to the last bit (discrete Stokes).
    """
    tris = deformation.mesh.triangles
    if region is not None:
        idx = np.fromiter((int(t) for t in region), dtype=np.int64)
        tris = tris[idx]
    pts = deformation.image[tris]  # (m, 3, 2)
    terms = []
    for k in range(3):
        a = pts[:, k]
        b = pts[:, (k + 1) % 3]
        terms.append(a[:, 0] * b[:, 1])
        terms.append(-(b[:, 0] * a[:, 1]))
    return 0.5 * math.fsum(np.concatenate(terms).tolist())


# ---------------------------------------------------------------------------
# Boundary data
# ---------------------------------------------------------------------------


class BoundaryHomeomorphism:
    """Order-preserving correspondence from mesh boundary vertices to a target boundary.

    Target points must lie on the target polygon boundary and appear in the
    same cyclic order, so the induced piecewise-linear boundary map is a
    homeomorphism between the two boundary curves.
    """

    ON_BOUNDARY_TOL = 1e-10

    def __init__(self, mesh: TriMesh, target: PlanarDomain, points, validate: bool = True):
        self.mesh = mesh
        self.target = target
        self.points = np.asarray(points, dtype=float)
        if self.points.shape != (len(mesh.boundary), 2):
            raise GeometryError(
                f"need one target point per boundary vertex "
                f"({len(mesh.boundary)}), got shape {self.points.shape}"
            )
        self.points.setflags(write=False)
        if validate:
            ok, why = self.check()
            if not ok:
                raise GeometryError(f"invalid boundary homeomorphism: {why}")

    def check(self) -> tuple[bool, str]:
        onb, order = self._flags()
        if not onb:
            return False, "some target points are off the target boundary"
        if not order:
            return False, "target points are not in cyclic boundary order"
        return True, ""

    def _flags(self) -> tuple[bool, bool]:
        params = []
        for p in self.points:
            s = self.target.arclength_parameter(p, tol=self.ON_BOUNDARY_TOL)
            if s is None:
                return False, False
            params.append(s)
        per = self.target.perimeter
        gaps = [(params[(i + 1) % len(params)] - params[i]) % per for i in range(len(params))]
        if any(g <= 0.0 for g in gaps):
            return True, False
        return True, abs(sum(gaps) - per) <= 1e-6 * per

    @classmethod
    def identity(cls, mesh: TriMesh, target: Optional[PlanarDomain] = None) -> "BoundaryHomeomorphism":
        pts = mesh.vertices[mesh.boundary]
        if target is None:
            target = PlanarDomain(pts)
        return cls(mesh, target, pts)

    @classmethod
    def from_map(
        cls, mesh: TriMesh, target: PlanarDomain, func: Callable
    ) -> "BoundaryHomeomorphism":
        pts = np.asarray([func(p) for p in mesh.vertices[mesh.boundary]], dtype=float)
        return cls(mesh, target, pts)

    @classmethod
    def square_reparametrized(
        cls, mesh: TriMesh, gamma: float
    ) -> "BoundaryHomeomorphism":
        """Unit-square boundary with each edge reparametrized by t -> t**gamma.

        Corners stay fixed; interior boundary vertices slide along their
        edge, giving a nonuniform but order-preserving boundary map.
        """
        target = PlanarDomain.unit_square()
        per = target.perimeter

        def remap(p):
            s = target.arclength_parameter(p, tol=1e-9)
            if s is None:
                raise GeometryError(f"boundary vertex {p.tolist()} not on the unit square")
            edge, t = divmod(s, 1.0)
            return target.point_at_arclength(edge + t**gamma)

        return cls.from_map(mesh, target, remap)

    def source_point_for(self, y, tol: float = 1e-9) -> np.ndarray:
        """Source boundary point mapped to y by the PL boundary correspondence."""
        n = len(self.points)
        bidx = self.mesh.boundary
        for i in range(n):
            a, b = self.points[i], self.points[(i + 1) % n]
            L2 = float(np.dot(b - a, b - a))
            if L2 == 0.0:
                continue
            t = float(np.dot(np.asarray(y, float) - a, b - a)) / L2
            t = min(1.0, max(0.0, t))
            if np.hypot(*(a + t * (b - a) - y)) <= tol:
                sa = self.mesh.vertices[int(bidx[i])]
                sb = self.mesh.vertices[int(bidx[(i + 1) % n])]
                return sa + t * (sb - sa)
        raise GeometryError(f"point {np.asarray(y).tolist()} is not on the mapped boundary")


@dataclass(frozen=True)
class BoundaryTraceReport:
    """Boundary vertex images checked against a target polygon."""

    points: np.ndarray
    on_boundary_ok: bool
    order_ok: bool

    @property
    def valid(self) -> bool:
        return self.on_boundary_ok and self.order_ok

    def to_dict(self) -> dict:
        return {
            "points": self.points.tolist(),
            "on_boundary_ok": self.on_boundary_ok,
            "order_ok": self.order_ok,
            "valid": self.valid,
        }


def boundary_trace(deformation: Deformation, target: PlanarDomain) -> BoundaryTraceReport:
    """Extract the boundary correspondence of a deformation and flag validity."""
    pts = deformation.image[deformation.mesh.boundary]
    probe = BoundaryHomeomorphism(deformation.mesh, target, pts, validate=False)
    onb, order = probe._flags()
    return BoundaryTraceReport(points=pts, on_boundary_ok=onb, order_ok=order)


def boundary_homeomorphism_from_trace(
    deformation: Deformation, target: PlanarDomain
) -> BoundaryHomeomorphism:
    report = boundary_trace(deformation, target)
    if not report.valid:
        raise GeometryError("deformation boundary trace is not a homeomorphism onto the target")
    return BoundaryHomeomorphism(deformation.mesh, target, report.points)


# ---------------------------------------------------------------------------
# Analytic example maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnalyticMap:
    """Closed-form map with a closed-form Jacobian determinant.

    Kinds: 'identity', 'disk-bubbles', 'radial-collapse', 'rectangle-pinch'.
    """

    kind: str
    params: dict = field(default_factory=dict)

    DOMAIN_TOL = 1e-9

    def domain_contains(self, p) -> bool:
        x, y = float(p[0]), float(p[1])
        if self.kind in ("disk-bubbles", "radial-collapse"):
            return math.hypot(x, y) <= 1.0 + self.DOMAIN_TOL
        if self.kind == "rectangle-pinch":
            return abs(x) <= 1.0 + self.DOMAIN_TOL and abs(y) <= 2.0 + self.DOMAIN_TOL
        return True

    def domain_polygon(self, segments: int = 128) -> PlanarDomain:
        if self.kind in ("disk-bubbles", "radial-collapse"):
            return PlanarDomain.regular_polygon(segments)
        if self.kind == "rectangle-pinch":
            return PlanarDomain.rectangle(-1.0, 1.0, -2.0, 2.0)
        raise GeometryError("identity map has no intrinsic domain")


def identity_map() -> AnalyticMap:
    return AnalyticMap("identity")


def disk_bubbles(levels: int = 5, profile: float = 2.0) -> AnalyticMap:
    """Unit-disk map that blows a train of tiny balls out past the disk.

    Ball k (k = 1..levels) is centered at (1 - 1/k, 0) with radius 2*10**-k.
    Its outer annulus is stretched to cover the ball, while inner circles
    collapse to real points sliding out to center + 2; the innermost core
    lands at center + 2 exactly.  With profile = 2 the radial profile is
    continuous across the innermost interface; profile = 1 keeps the jump of
    the naive profile.  All branch tests run in log-radius to dodge
    underflow of the innermost interface radius.
    """
    if levels < 1:
        raise GeometryError("need at least one ball")
    if profile <= 0:
        raise GeometryError("profile constant must be positive")
    centers = [1.0 - 1.0 / k for k in range(1, levels + 1)]
    radii = [2.0 * 10.0 ** (-k) for k in range(1, levels + 1)]
    for k in range(levels):
        if centers[k] + radii[k] >= 1.0:
            raise GeometryError(f"ball {k + 1} is not contained in the unit disk")
        for j in range(k + 1, levels):
            if abs(centers[j] - centers[k]) <= radii[j] + radii[k]:
                raise GeometryError(f"balls {k + 1} and {j + 1} overlap")
    return AnalyticMap("disk-bubbles", {"levels": int(levels), "profile": float(profile)})


def radial_collapse() -> AnalyticMap:
    """Unit-disk map collapsing the inner half-disk onto a radius segment.

    The annulus 1/2 <= r <= 1 maps onto the punctured disk by r -> 2(r-1/2);
    each circle r < 1/2 collapses to the single real point (1-2r, 0).  The
    boundary trace is the identity and the Jacobian is nonnegative, zero on
    the collapsed half-disk.
    """
    m = AnalyticMap("radial-collapse")
    _check_boundary_identity(m)
    return m


def rectangle_pinch() -> AnalyticMap:
    """Map of [-1,1] x [-2,2] pinching the segment x=0, |y|<=1 to the origin.

    (x, y) -> (x, |x| y) for |y| <= 1, with the outer bands stretched so the
    boundary trace is the identity; the Jacobian is positive off the pinched
    segment.  Not injective: the whole segment maps to (0, 0).
    """
    m = AnalyticMap("rectangle-pinch")
    _check_boundary_identity(m)
    return m


def _check_boundary_identity(m: AnalyticMap, samples: int = 1000, tol: float = 1e-12) -> None:
    if m.kind == "radial-collapse":
        ang = 2.0 * np.pi * (np.arange(samples) + 0.5) / samples
        pts = np.column_stack([np.cos(ang), np.sin(ang)])
    elif m.kind == "rectangle-pinch":
        dom = PlanarDomain.rectangle(-1.0, 1.0, -2.0, 2.0)
        per = dom.perimeter
        pts = np.asarray(
            [dom.point_at_arclength(per * (i + 0.5) / samples) for i in range(samples)]
        )
    else:
        return
    for p in pts:
        g = analytic_eval(m, p)
        if np.hypot(g[0] - p[0], g[1] - p[1]) > tol:
            raise GeometryError(f"{m.kind} is not the identity on its boundary at {p.tolist()}")


def analytic_eval(m: AnalyticMap, p) -> np.ndarray:
    """Closed-form value of an analytic map at a point of its domain."""
    if not m.domain_contains(p):
        raise DomainError(f"point {np.asarray(p).tolist()} outside the domain of {m.kind}")
    x, y = float(p[0]), float(p[1])
    if m.kind == "identity":
        return np.array([x, y])
    if m.kind == "radial-collapse":
        r = math.hypot(x, y)
        if r >= 0.5:
            rho = 2.0 * (r - 0.5)
            return np.array([rho * x / r, rho * y / r])
        return np.array([1.0 - 2.0 * r, 0.0])
    if m.kind == "rectangle-pinch":
        if abs(y) <= 1.0:
            return np.array([x, abs(x) * y])
        s = math.copysign(1.0, y)
        return np.array([x, (2.0 * (abs(y) - 1.0) + (2.0 - abs(y)) * abs(x)) * s])
    if m.kind == "disk-bubbles":
        K = m.params["levels"]
        c = m.params["profile"]
        for k in range(1, K + 1):
            w = 1.0 - 1.0 / k
            s = 10.0 ** (-k)
            dx, dy = x - w, y
            if abs(dx) > 2.0 * s or abs(dy) > 2.0 * s:
                continue
            r = math.hypot(dx, dy)
            if r > 2.0 * s:
                continue
            if r >= s:
                rho = 2.0 * (r - s)
                return np.array([w + rho * dx / r, rho * dy / r])
            if r == 0.0 or math.log(r) <= math.log(s) - k**4:
                return np.array([w + 2.0, 0.0])
            return np.array([w + c * (math.log(s) - math.log(r)) / k**4, 0.0])
        return np.array([x, y])
    raise GeometryError(f"unknown analytic map kind {m.kind!r}")


def analytic_jacobian(m: AnalyticMap, p) -> float:
    """Closed-form Jacobian determinant at a point (branch-consistent with eval)."""
    if not m.domain_contains(p):
        raise DomainError(f"point {np.asarray(p).tolist()} outside the domain of {m.kind}")
    x, y = float(p[0]), float(p[1])
    if m.kind == "identity":
        return 1.0
    if m.kind == "radial-collapse":
        r = math.hypot(x, y)
        if r >= 0.5:
            return 4.0 * (r - 0.5) / r
        return 0.0
    if m.kind == "rectangle-pinch":
        if abs(y) <= 1.0:
            return abs(x)
        return 2.0 - abs(x)
    if m.kind == "disk-bubbles":
        K = m.params["levels"]
        for k in range(1, K + 1):
            w = 1.0 - 1.0 / k
            s = 10.0 ** (-k)
            r = math.hypot(x - w, y)
            if r > 2.0 * s:
                continue
            if r >= s:
                return 4.0 * (r - s) / r if r > 0 else 0.0
            return 0.0
        return 1.0
    raise GeometryError(f"unknown analytic map kind {m.kind!r}")


def sample_analytic(m: AnalyticMap, mesh: TriMesh) -> Deformation:
    """Deformation whose vertex images are the closed-form values."""
    image = np.empty_like(mesh.vertices)
    for i, v in enumerate(mesh.vertices):
        image[i] = analytic_eval(m, v)
    return Deformation(mesh, image)
