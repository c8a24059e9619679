"""Polygonal domains, triangulation, and robust point location.

Domains are simple polygons with a positively oriented (counterclockwise)
boundary.  Meshes are conforming triangulations whose boundary cycle traces
the generating polygon.  All classification decisions (inside / on an edge /
outside) go through exact orientation predicates so that downstream
integer-valued degree computations are deterministic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.spatial import Delaunay

from ._predicates import (
    on_segment,
    orient2d,
    orient2d_batch,
    point_segment_distance,
    segments_intersect,
)
from .errors import GeometryError, MeshError

__all__ = [
    "PlanarDomain",
    "TriMesh",
    "Location",
    "triangulate",
    "polar_disk_mesh",
    "locate",
]


def _as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise GeometryError(f"expected an (n, 2) array of points, got shape {arr.shape}")
    return arr


def shoelace_area(points: np.ndarray) -> float:
    """Signed area of a closed polyline, summed exactly before rounding."""
    x = points[:, 0]
    y = points[:, 1]
    xn = np.roll(x, -1)
    yn = np.roll(y, -1)
    return 0.5 * math.fsum((x * yn).tolist() + (-xn * y).tolist())


class PlanarDomain:
    """A simple polygon with counterclockwise vertices.

    Stands in for a bounded Lipschitz domain: every simple polygon has a
    single boundary loop that is locally a Lipschitz graph.
    """

    def __init__(self, vertices, validate: bool = True):
        self.vertices = _as_points(vertices)
        self.vertices.setflags(write=False)
        if validate:
            self._validate()

    def _validate(self) -> None:
        v = self.vertices
        n = len(v)
        if n < 3:
            raise GeometryError("polygon needs at least 3 vertices")
        for i in range(n):
            if np.all(v[i] == v[(i + 1) % n]):
                raise GeometryError(f"consecutive duplicate vertex at index {i}")
        area = shoelace_area(v)
        if area <= 0:
            raise GeometryError(
                f"polygon must be counterclockwise with positive area, got signed area {area:g}"
            )
        # Simplicity: no two non-adjacent edges may intersect.
        for i in range(n):
            a1, a2 = v[i], v[(i + 1) % n]
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue
                b1, b2 = v[j], v[(j + 1) % n]
                if segments_intersect(a1, a2, b1, b2):
                    raise GeometryError(f"polygon self-intersects: edges {i} and {j}")

    # -- constructors ---------------------------------------------------

    @classmethod
    def unit_square(cls) -> "PlanarDomain":
        return cls([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])

    @classmethod
    def rectangle(cls, xmin: float, xmax: float, ymin: float, ymax: float) -> "PlanarDomain":
        if xmax <= xmin or ymax <= ymin:
            raise GeometryError("rectangle sides must have positive length")
        return cls([(xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax)])

    @classmethod
    def regular_polygon(
        cls, segments: int, radius: float = 1.0, center=(0.0, 0.0)
    ) -> "PlanarDomain":
        if segments < 3:
            raise GeometryError("need at least 3 segments")
        ang = 2.0 * np.pi * np.arange(segments) / segments
        pts = np.column_stack(
            [center[0] + radius * np.cos(ang), center[1] + radius * np.sin(ang)]
        )
        return cls(pts)

    # -- queries ---------------------------------------------------------

    @property
    def area(self) -> float:
        return shoelace_area(self.vertices)

    def bounding_box(self):
        v = self.vertices
        return (v[:, 0].min(), v[:, 1].min(), v[:, 0].max(), v[:, 1].max())

    def edges(self):
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def classify(self, p) -> str:
        """Exact classification of a point: 'inside', 'boundary', or 'outside'."""
        v = self.vertices
        n = len(v)
        for i in range(n):
            if on_segment(p, v[i], v[(i + 1) % n]):
                return "boundary"
        # Winding by exact crossing counting; for a simple ccw polygon the
        # winding of an interior point is 1.
        w = 0
        py = float(p[1])
        for i in range(n):
            a, b = v[i], v[(i + 1) % n]
            if a[1] <= py:
                if b[1] > py and orient2d(a, b, p) > 0:
                    w += 1
            else:
                if b[1] <= py and orient2d(a, b, p) < 0:
                    w -= 1
        return "inside" if w != 0 else "outside"

    def contains(self, p) -> bool:
        return self.classify(p) != "outside"

    def boundary_distance(self, p) -> float:
        """Distance to the polygon boundary (0 on the boundary)."""
        return min(point_segment_distance(p, a, b) for a, b in self.edges())

    def signed_boundary_excess(self, p) -> float:
        """Distance outside the closed polygon (0 for points inside or on it)."""
        return 0.0 if self.contains(p) else self.boundary_distance(p)

    def arclength_parameter(self, p, tol: float = 1e-10) -> Optional[float]:
        """Perimeter arclength of a boundary point, or None if p is not on it."""
        v = self.vertices
        n = len(v)
        s = 0.0
        for i in range(n):
            a, b = v[i], v[(i + 1) % n]
            L = float(np.hypot(*(b - a)))
            d = point_segment_distance(p, a, b)
            if d <= tol:
                t = float(np.dot(np.asarray(p, float) - a, b - a)) / (L * L)
                t = min(1.0, max(0.0, t))
                return s + t * L
            s += L
        return None

    def point_at_arclength(self, s: float) -> np.ndarray:
        """Boundary point at perimeter arclength s (wraps around)."""
        v = self.vertices
        n = len(v)
        lengths = [float(np.hypot(*(v[(i + 1) % n] - v[i]))) for i in range(n)]
        total = sum(lengths)
        s = s % total
        for i in range(n):
            if s <= lengths[i] or i == n - 1:
                t = s / lengths[i]
                return v[i] + t * (v[(i + 1) % n] - v[i])
            s -= lengths[i]
        raise AssertionError("unreachable")

    @property
    def perimeter(self) -> float:
        v = self.vertices
        n = len(v)
        return sum(float(np.hypot(*(v[(i + 1) % n] - v[i]))) for i in range(n))

    def is_convex(self) -> bool:
        v = self.vertices
        n = len(v)
        return all(orient2d(v[i], v[(i + 1) % n], v[(i + 2) % n]) >= 0 for i in range(n))

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {"vertices": self.vertices.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "PlanarDomain":
        return cls(d["vertices"])

    @classmethod
    def from_json(cls, path) -> "PlanarDomain":
        with open(path) as f:
            return cls.from_dict(json.load(f))

    def __repr__(self) -> str:
        return f"PlanarDomain({len(self.vertices)} vertices, area={self.area:.6g})"


@dataclass(frozen=True)
class Location:
    """Result of locating a point in a mesh.

    kind is 'interior' (triangle + barycentric coordinates), 'boundary'
    (mesh boundary edge + parameter along it), or 'outside'.
    """

    kind: str
    triangle: Optional[int] = None
    bary: Optional[tuple] = None
    edge: Optional[tuple] = None
    param: Optional[float] = None

    @property
    def is_outside(self) -> bool:
        return self.kind == "outside"


class TriMesh:
    """Conforming triangulation with an oriented boundary cycle.

    Treated as immutable after construction; all derived quantities are
    cached and the coordinate arrays are read-only, so instances are safe to
    share across threads.
    """

    def __init__(self, vertices, triangles, boundary, validate: bool = True):
        self.vertices = _as_points(vertices)
        self.triangles = np.asarray(triangles, dtype=np.int64)
        self.boundary = np.asarray(boundary, dtype=np.int64)
        if self.triangles.ndim != 2 or self.triangles.shape[1] != 3:
            raise MeshError("triangles must be an (m, 3) index array")
        self.vertices.setflags(write=False)
        self.triangles.setflags(write=False)
        self.boundary.setflags(write=False)
        if validate:
            self.validate()

    # -- derived data -----------------------------------------------------

    @cached_property
    def triangle_areas(self) -> np.ndarray:
        a = self.vertices[self.triangles[:, 0]]
        b = self.vertices[self.triangles[:, 1]]
        c = self.vertices[self.triangles[:, 2]]
        return 0.5 * ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))

    @property
    def area(self) -> float:
        return math.fsum(self.triangle_areas.tolist())

    @cached_property
    def edge_lengths(self) -> np.ndarray:
        v, t = self.vertices, self.triangles
        out = []
        for k in range(3):
            d = v[t[:, (k + 1) % 3]] - v[t[:, k]]
            out.append(np.hypot(d[:, 0], d[:, 1]))
        return np.stack(out, axis=1)

    @property
    def max_edge_length(self) -> float:
        return float(self.edge_lengths.max())

    @cached_property
    def directed_edge_owner(self) -> dict:
        """Map from directed edge (i, j) to the triangle owning it."""
        owner = {}
        for ti, (i, j, k) in enumerate(self.triangles):
            for a, b in ((i, j), (j, k), (k, i)):
                owner[(int(a), int(b))] = ti
        return owner

    @cached_property
    def triangle_neighbors(self) -> list:
        """Edge-adjacent triangle indices for each triangle (-1 for boundary)."""
        owner = self.directed_edge_owner
        nbrs = []
        for i, j, k in self.triangles:
            row = []
            for a, b in ((i, j), (j, k), (k, i)):
                row.append(owner.get((int(b), int(a)), -1))
            nbrs.append(row)
        return nbrs

    @cached_property
    def boundary_edge_set(self) -> set:
        """Directed boundary edges (i, j) taken from the boundary cycle."""
        b = self.boundary
        return {(int(b[i]), int(b[(i + 1) % len(b)])) for i in range(len(b))}

    @cached_property
    def boundary_vertex_set(self) -> frozenset:
        return frozenset(int(i) for i in self.boundary)

    @cached_property
    def vertex_triangles(self) -> list:
        """Incident triangle indices per vertex, each list sorted ascending."""
        inc = [[] for _ in range(len(self.vertices))]
        for ti, tri in enumerate(self.triangles):
            for v in tri:
                inc[int(v)].append(ti)
        return inc

    # -- validation ---------------------------------------------------------

    def validate(self) -> None:
        v, t = self.vertices, self.triangles
        if t.min(initial=0) < 0 or t.max(initial=-1) >= len(v):
            raise MeshError("triangle index out of range")
        if np.any(self.triangle_areas <= 0):
            bad = int(np.argmin(self.triangle_areas))
            raise MeshError(
                f"triangle {bad} has non-positive area {self.triangle_areas[bad]:g}"
            )
        # Conforming: every directed edge occurs at most once, and every
        # undirected interior edge exactly twice (once per direction).
        owner = {}
        for ti, (i, j, k) in enumerate(t):
            for a, b in ((i, j), (j, k), (k, i)):
                key = (int(a), int(b))
                if key in owner:
                    raise MeshError(f"directed edge {key} shared by triangles {owner[key]} and {ti}")
                owner[key] = ti
        bedges = [e for e in owner if (e[1], e[0]) not in owner]
        if set(bedges) != self.boundary_edge_set:
            raise MeshError("boundary cycle does not trace the topological boundary")
        used = np.zeros(len(v), dtype=bool)
        used[t.ravel()] = True
        if not used.all():
            raise MeshError(f"{int((~used).sum())} vertices belong to no triangle")

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "vertices": self.vertices.tolist(),
            "triangles": self.triangles.tolist(),
            "boundary": self.boundary.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TriMesh":
        return cls(d["vertices"], d["triangles"], d["boundary"])

    @classmethod
    def from_json(cls, path) -> "TriMesh":
        with open(path) as f:
            return cls.from_dict(json.load(f))

    def __repr__(self) -> str:
        return (
            f"TriMesh({len(self.vertices)} vertices, {len(self.triangles)} triangles, "
            f"area={self.area:.6g})"
        )


# ---------------------------------------------------------------------------
# Triangulation
# ---------------------------------------------------------------------------


def _subdivide_boundary(domain: PlanarDomain, h: float) -> np.ndarray:
    """Boundary polyline with every polygon edge split into chunks <= h."""
    pts = []
    v = domain.vertices
    n = len(v)
    for i in range(n):
        a, b = v[i], v[(i + 1) % n]
        L = float(np.hypot(*(b - a)))
        m = max(1, int(math.ceil(L / h - 1e-12)))
        for k in range(m):
            pts.append(a + (k / m) * (b - a))
    return np.asarray(pts)


def _interior_lattice(domain: PlanarDomain, h: float, margin: float) -> np.ndarray:
    xmin, ymin, xmax, ymax = domain.bounding_box()
    nx = max(1, int(math.ceil((xmax - xmin) / h - 1e-12)))
    ny = max(1, int(math.ceil((ymax - ymin) / h - 1e-12)))
    xs = np.linspace(xmin, xmax, nx + 1)
    ys = np.linspace(ymin, ymax, ny + 1)
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    keep = []
    for p in pts:
        if domain.classify(p) == "inside" and domain.boundary_distance(p) >= margin:
            keep.append(p)
    return np.asarray(keep) if keep else np.empty((0, 2))


def _extract_boundary_cycle(triangles: np.ndarray) -> list:
    """Chain the unmatched directed edges of a triangle set into one cycle."""
    directed = set()
    for i, j, k in triangles:
        for a, b in ((i, j), (j, k), (k, i)):
            directed.add((int(a), int(b)))
    boundary = [e for e in directed if (e[1], e[0]) not in directed]
    succ = {}
    for a, b in boundary:
        if a in succ:
            raise MeshError("boundary is not a single simple cycle")
        succ[a] = b
    if not succ:
        raise MeshError("mesh has no boundary")
    start = min(succ)
    cycle = [start]
    cur = succ[start]
    while cur != start:
        cycle.append(cur)
        cur = succ[cur]
        if len(cycle) > len(boundary):
            raise MeshError("boundary edges do not close into a cycle")
    if len(cycle) != len(boundary):
        raise MeshError("boundary has more than one loop")
    return cycle


def _cycles_equal(cycle: Sequence[int], points: np.ndarray, ref: np.ndarray) -> bool:
    """Does the vertex cycle visit exactly the reference polyline, in order?"""
    if len(cycle) != len(ref):
        return False
    cyc_pts = points[list(cycle)]
    # Align on the reference start point, then compare both directions.
    for shift in range(len(ref)):
        rolled = np.roll(cyc_pts, -shift, axis=0)
        if np.allclose(rolled, ref, rtol=0.0, atol=1e-12):
            return True
    return False


def _earclip(polygon: np.ndarray) -> list:
    """Ear clipping of a simple ccw polygon; returns index triples."""
    n = len(polygon)
    idx = list(range(n))
    tris = []
    guard = 0
    while len(idx) > 3:
        guard += 1
        if guard > 2 * n * n:
            raise MeshError("ear clipping failed to terminate")
        m = len(idx)
        clipped = False
        for ii in range(m):
            i0, i1, i2 = idx[(ii - 1) % m], idx[ii], idx[(ii + 1) % m]
            a, b, c = polygon[i0], polygon[i1], polygon[i2]
            if orient2d(a, b, c) <= 0:
                continue
            ok = True
            for jj in idx:
                if jj in (i0, i1, i2):
                    continue
                p = polygon[jj]
                if (
                    orient2d(a, b, p) >= 0
                    and orient2d(b, c, p) >= 0
                    and orient2d(c, a, p) >= 0
                ):
                    ok = False
                    break
            if ok:
                tris.append((i0, i1, i2))
                idx.pop(ii)
                clipped = True
                break
        if not clipped:
            raise MeshError("no ear found; polygon may be degenerate")
    tris.append((idx[0], idx[1], idx[2]))
    return tris


def _refine_to_edge_bound(vertices: np.ndarray, triangles: list, hmax: float):
    """Uniform 4-way subdivision until every edge is <= hmax (conforming)."""
    verts = [tuple(p) for p in vertices]
    tris = [tuple(t) for t in triangles]
    while True:
        vv = np.asarray(verts)
        longest = 0.0
        for i, j, k in tris:
            for a, b in ((i, j), (j, k), (k, i)):
                longest = max(longest, float(np.hypot(*(vv[b] - vv[a]))))
        if longest <= hmax:
            break
        midcache = {}

        def midpoint(a: int, b: int) -> int:
            key = (a, b) if a < b else (b, a)
            if key not in midcache:
                p = (
                    0.5 * (verts[a][0] + verts[b][0]),
                    0.5 * (verts[a][1] + verts[b][1]),
                )
                verts.append(p)
                midcache[key] = len(verts) - 1
            return midcache[key]

        new_tris = []
        for i, j, k in tris:
            m_ij, m_jk, m_ki = midpoint(i, j), midpoint(j, k), midpoint(k, i)
            new_tris += [
                (i, m_ij, m_ki),
                (m_ij, j, m_jk),
                (m_ki, m_jk, k),
                (m_ij, m_jk, m_ki),
            ]
        tris = new_tris
    return np.asarray(verts), np.asarray(tris, dtype=np.int64)


def triangulate(
    domain: PlanarDomain,
    h: float,
    include_points: Optional[Iterable] = None,
) -> TriMesh:
    """Conforming triangulation of a polygon with max edge length <= 2h.

    Boundary edges are subdivided at target length h; interior points come
    from a bounding-box lattice at pitch <= h (plus any ``include_points``,
    which become mesh vertices exactly).  Triangle-area sums reproduce the
    polygon area to machine precision.  Falls back to ear clipping with
    uniform refinement when the Delaunay route does not respect the boundary
    (tight concave geometry).
    """
    if not h > 0:
        raise MeshError("target edge length h must be positive")
    bpts = _subdivide_boundary(domain, h)
    ipts = _interior_lattice(domain, h, margin=0.4 * h)
    extra = []
    if include_points is not None:
        for p in include_points:
            p = np.asarray(p, dtype=float)
            if domain.classify(p) != "inside":
                raise MeshError(f"include point {p.tolist()} is not interior to the polygon")
            # Drop lattice points crowding a requested vertex.
            if len(ipts):
                d = np.hypot(ipts[:, 0] - p[0], ipts[:, 1] - p[1])
                ipts = ipts[d >= 0.4 * h]
            extra.append(p)
    parts = [bpts] + ([ipts] if len(ipts) else []) + ([np.asarray(extra)] if extra else [])
    points = np.vstack(parts)

    mesh = _delaunay_mesh(domain, points, bpts)
    if mesh is None:
        mesh = _earclip_mesh(domain, h)
    _check_mesh_against_domain(mesh, domain, h)
    return mesh


def _delaunay_mesh(domain, points, bpts) -> Optional[TriMesh]:
    try:
        dt = Delaunay(points)
    except Exception:
        return None
    tris = []
    for simplex in dt.simplices:
        a, b, c = points[simplex]
        s = orient2d(a, b, c)
        if s == 0:
            continue
        tri = tuple(int(x) for x in (simplex if s > 0 else simplex[::-1]))
        centroid = (a + b + c) / 3.0
        if domain.classify(centroid) == "inside":
            tris.append(tri)
    if not tris:
        return None
    tris_arr = np.asarray(tris, dtype=np.int64)
    # Drop unused vertices and remap.
    used = np.unique(tris_arr)
    remap = -np.ones(len(points), dtype=np.int64)
    remap[used] = np.arange(len(used))
    verts = points[used]
    tris_arr = remap[tris_arr]
    try:
        cycle = _extract_boundary_cycle(tris_arr)
        mesh = TriMesh(verts, tris_arr, cycle)
    except MeshError:
        return None
    if not _cycles_equal(cycle, verts, bpts):
        return None
    if abs(mesh.area - domain.area) > 1e-12 * max(1.0, abs(domain.area)):
        return None
    return mesh


def _earclip_mesh(domain: PlanarDomain, h: float) -> TriMesh:
    base = domain.vertices
    tris = _earclip(base)
    verts, tris = _refine_to_edge_bound(base, tris, 2.0 * h)
    cycle = _extract_boundary_cycle(tris)
    return TriMesh(verts, tris, cycle)


def _check_mesh_against_domain(mesh: TriMesh, domain: PlanarDomain, h: float) -> None:
    if abs(mesh.area - domain.area) > 1e-12 * max(1.0, abs(domain.area)):
        raise MeshError(
            f"triangle areas sum to {mesh.area!r}, polygon area is {domain.area!r}"
        )
    if mesh.max_edge_length > 2.0 * h * (1 + 1e-12):
        raise MeshError(
            f"max edge length {mesh.max_edge_length:g} exceeds bound {2 * h:g}"
        )
    for i in mesh.boundary:
        p = mesh.vertices[int(i)]
        if domain.boundary_distance(p) > 1e-9:
            raise MeshError(f"boundary vertex {int(i)} is off the polygon boundary")


def polar_disk_mesh(
    segments: int = 128,
    h: Optional[float] = None,
    rings: Optional[int] = None,
    radius: float = 1.0,
    center=(0.0, 0.0),
) -> TriMesh:
    """Structured polar mesh of a regular polygon inscribed in a circle.

    Concentric vertex rings at radii radius*j/n (n even) make every circle
    radius*j/n an exact union of mesh edges; maps that collapse or rescale
    such circles then sample onto the mesh without spurious folds across
    them.  The outermost ring is the boundary polygon.
    """
    if rings is None:
        if h is None:
            raise MeshError("provide either h or rings")
        rings = max(2, int(math.ceil(radius / h - 1e-12)))
    if rings % 2:
        rings += 1
    if segments < 3:
        raise MeshError("need at least 3 segments")
    cx, cy = float(center[0]), float(center[1])
    ang = 2.0 * np.pi * np.arange(segments) / segments
    ca, sa = np.cos(ang), np.sin(ang)

    verts = [(cx, cy)]
    ring_start = [None]  # vertex index of angle-0 point per ring, 1-based ring ids
    for j in range(1, rings + 1):
        r = radius * j / rings
        ring_start.append(len(verts))
        for i in range(segments):
            verts.append((cx + r * ca[i], cy + r * sa[i]))
    verts = np.asarray(verts)

    tris = []
    # Innermost fan around the center vertex.
    first = ring_start[1]
    for i in range(segments):
        a = first + i
        b = first + (i + 1) % segments
        tris.append((0, a, b))
    # Quad bands split into two triangles.
    for j in range(1, rings):
        lo, hi = ring_start[j], ring_start[j + 1]
        for i in range(segments):
            i2 = (i + 1) % segments
            a, b = lo + i, lo + i2
            c, d = hi + i, hi + i2
            tris.append((a, c, d))
            tris.append((a, d, b))
    tris = np.asarray(tris, dtype=np.int64)
    boundary = np.arange(ring_start[rings], ring_start[rings] + segments, dtype=np.int64)
    return TriMesh(verts, tris, boundary)


# ---------------------------------------------------------------------------
# Point location
# ---------------------------------------------------------------------------


def _barycentric(a, b, c, p):
    det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    l1 = ((b[0] - p[0]) * (c[1] - p[1]) - (b[1] - p[1]) * (c[0] - p[0])) / det
    l2 = ((c[0] - p[0]) * (a[1] - p[1]) - (c[1] - p[1]) * (a[0] - p[0])) / det
    l3 = 1.0 - l1 - l2
    return (float(l1), float(l2), float(l3))


def locate(mesh: TriMesh, p) -> Location:
    """Classify a point against a mesh with exact, deterministic tie-breaks.

    Points on shared edges and vertices report the lowest-index containing
    triangle; points on the mesh boundary report the boundary edge and the
    parameter along it.
    """
    p = np.asarray(p, dtype=float)
    v, t = mesh.vertices, mesh.triangles
    a = v[t[:, 0]]
    b = v[t[:, 1]]
    c = v[t[:, 2]]
    P = p[None, :]
    s1 = orient2d_batch(a, b, P)
    s2 = orient2d_batch(b, c, P)
    s3 = orient2d_batch(c, a, P)
    inside = (s1 >= 0) & (s2 >= 0) & (s3 >= 0)
    hits = np.nonzero(inside)[0]
    if len(hits) == 0:
        return Location(kind="outside")
    ti = int(hits.min())
    i, j, k = (int(x) for x in t[ti])
    # Boundary-edge hit test before the interior report.
    zero_edges = []
    if s1[ti] == 0:
        zero_edges.append((i, j))
    if s2[ti] == 0:
        zero_edges.append((j, k))
    if s3[ti] == 0:
        zero_edges.append((k, i))
    for e in zero_edges:
        ordered = e if e in mesh.boundary_edge_set else (e[1], e[0])
        if ordered in mesh.boundary_edge_set:
            pa, pb = v[ordered[0]], v[ordered[1]]
            L2 = float(np.dot(pb - pa, pb - pa))
            param = float(np.dot(p - pa, pb - pa) / L2)
            param = min(1.0, max(0.0, param))
            return Location(kind="boundary", triangle=ti, edge=ordered, param=param,
                            bary=_snap_bary(_barycentric(v[i], v[j], v[k], p)))
    bary = _snap_bary(_barycentric(v[i], v[j], v[k], p))
    return Location(kind="interior", triangle=ti, bary=bary)


def _snap_bary(bary):
    clipped = tuple(0.0 if abs(x) < 1e-13 else x for x in bary)
    s = sum(clipped)
    return tuple(x / s for x in clipped)
