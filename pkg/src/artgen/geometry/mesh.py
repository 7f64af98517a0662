"""Triangle meshes, axis-aligned boxes, and the parametric mesh kernel.

All kernel builders return closed, outward-oriented triangle meshes: every
edge is shared by exactly two faces and the signed volume is positive.
Builders construct topology first and then run the same orientation repair
used by `recompute_normals`, so winding correctness never depends on
hand-enumerated face tables. Units are meters, +Z is up.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from ..errors import DegenerateProfile, EmptyMesh, MeshError, NonManifold


@dataclass
class Aabb:
    """Axis-aligned box, componentwise min <= max."""

    min: np.ndarray
    max: np.ndarray

    def __post_init__(self) -> None:
        self.min = np.asarray(self.min, dtype=np.float64)
        self.max = np.asarray(self.max, dtype=np.float64)

    @staticmethod
    def from_points(points: np.ndarray) -> "Aabb":
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        return Aabb(pts.min(axis=0), pts.max(axis=0))

    def is_valid(self) -> bool:
        return bool(np.all(self.min <= self.max))

    @property
    def extents(self) -> np.ndarray:
        return self.max - self.min

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.min + self.max)

    def volume(self) -> float:
        return float(np.prod(np.maximum(self.extents, 0.0)))

    def contains_point(self, p: np.ndarray, tol: float = 0.0) -> bool:
        p = np.asarray(p, dtype=np.float64)
        return bool(np.all(p >= self.min - tol) and np.all(p <= self.max + tol))

    def contains_box(self, other: "Aabb", tol: float = 0.0) -> bool:
        return bool(np.all(other.min >= self.min - tol)
                    and np.all(other.max <= self.max + tol))

    def inflated(self, amount: float) -> "Aabb":
        return Aabb(self.min - amount, self.max + amount)

    def union(self, other: "Aabb") -> "Aabb":
        return Aabb(np.minimum(self.min, other.min), np.maximum(self.max, other.max))

    def separation(self, other: "Aabb") -> np.ndarray:
        """Per-axis gap between boxes (negative where the intervals overlap)."""
        return np.maximum(self.min - other.max, other.min - self.max)

    def sub_box(self, lo_frac, hi_frac) -> "Aabb":
        """Fractional sub-box: 0 maps to min, 1 to max per axis."""
        lo = np.asarray(lo_frac, dtype=np.float64)
        hi = np.asarray(hi_frac, dtype=np.float64)
        ext = self.extents
        return Aabb(self.min + lo * ext, self.min + hi * ext)

    def corners(self) -> np.ndarray:
        g = np.array([[i >> 2 & 1, i >> 1 & 1, i & 1] for i in range(8)], dtype=np.float64)
        return self.min + g * self.extents


@dataclass
class Mesh:
    """Indexed triangle mesh with per-vertex normals."""

    vertices: np.ndarray
    faces: np.ndarray
    normals: np.ndarray | None = None
    uvs: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.vertices = np.asarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        self.faces = np.asarray(self.faces, dtype=np.int32).reshape(-1, 3)
        if self.normals is not None:
            self.normals = np.asarray(self.normals, dtype=np.float64).reshape(-1, 3)
        if self.uvs is not None:
            self.uvs = np.asarray(self.uvs, dtype=np.float64).reshape(-1, 2)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def copy(self) -> "Mesh":
        return Mesh(
            self.vertices.copy(), self.faces.copy(),
            None if self.normals is None else self.normals.copy(),
            None if self.uvs is None else self.uvs.copy(),
        )


def signed_volume(mesh: Mesh) -> float:
    """Sum of signed tetrahedron volumes; positive for outward orientation."""
    v = mesh.vertices
    a, b, c = v[mesh.faces[:, 0]], v[mesh.faces[:, 1]], v[mesh.faces[:, 2]]
    return float(np.einsum("ij,ij->i", a, np.cross(b, c)).sum() / 6.0)


def compute_aabb(mesh: Mesh) -> Aabb:
    """Tight componentwise bounds over all vertices."""
    if mesh.n_vertices == 0:
        raise EmptyMesh("cannot bound a mesh with no vertices")
    return Aabb.from_points(mesh.vertices)


def edge_face_map(mesh: Mesh) -> dict[tuple[int, int], list[int]]:
    edges: dict[tuple[int, int], list[int]] = {}
    for fi, (a, b, c) in enumerate(mesh.faces):
        for u, v in ((a, b), (b, c), (c, a)):
            key = (min(u, v), max(u, v))
            edges.setdefault(key, []).append(fi)
    return edges


def is_closed(mesh: Mesh) -> bool:
    """True when every edge has exactly two incident faces."""
    return all(len(f) == 2 for f in edge_face_map(mesh).values())


def _face_components(mesh: Mesh, edges: dict[tuple[int, int], list[int]]) -> list[list[int]]:
    adj: dict[int, list[int]] = {i: [] for i in range(mesh.n_faces)}
    for faces in edges.values():
        if len(faces) == 2:
            a, b = faces
            adj[a].append(b)
            adj[b].append(a)
    seen: set[int] = set()
    comps = []
    for start in range(mesh.n_faces):
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            f = stack.pop()
            comp.append(f)
            for g in adj[f]:
                if g not in seen:
                    seen.add(g)
                    stack.append(g)
        comps.append(comp)
    return comps


def orient_outward(mesh: Mesh) -> Mesh:
    """Make face windings consistent and each connected component's signed
    volume positive. Raises NonManifold when an edge has != 2 incident faces.
    """
    edges = edge_face_map(mesh)
    for (u, v), fs in edges.items():
        if len(fs) != 2:
            raise NonManifold(f"edge ({u}, {v}) has {len(fs)} incident faces")

    faces = mesh.faces.copy()

    def directed(fi: int) -> set[tuple[int, int]]:
        a, b, c = faces[fi]
        return {(a, b), (b, c), (c, a)}

    flipped = np.zeros(mesh.n_faces, dtype=bool)
    visited = np.zeros(mesh.n_faces, dtype=bool)
    for comp in _face_components(mesh, edges):
        seed = min(comp)
        stack = [seed]
        visited[seed] = True
        while stack:
            f = stack.pop()
            for u, v in list(directed(f)):
                pair = edges[(min(u, v), max(u, v))]
                g = pair[0] if pair[1] == f else pair[1]
                if visited[g]:
                    continue
                # Consistent orientation: the shared edge runs opposite ways.
                if (u, v) in directed(g):
                    faces[g] = faces[g][::-1]
                    flipped[g] = True
                visited[g] = True
                stack.append(g)

        out = Mesh(mesh.vertices, faces[comp])
        if signed_volume(out) < 0:
            for f in comp:
                faces[f] = faces[f][::-1]

    result = Mesh(mesh.vertices.copy(), faces, uvs=None if mesh.uvs is None else mesh.uvs.copy())
    result.normals = vertex_normals(result)
    return result


def vertex_normals(mesh: Mesh) -> np.ndarray:
    """Area-weighted average of incident face normals, unit length."""
    v = mesh.vertices
    f = mesh.faces
    fn = np.cross(v[f[:, 1]] - v[f[:, 0]], v[f[:, 2]] - v[f[:, 0]])  # 2*area*normal
    acc = np.zeros_like(v)
    for k in range(3):
        np.add.at(acc, f[:, k], fn)
    norms = np.linalg.norm(acc, axis=1, keepdims=True)
    norms = np.where(norms < 1e-30, 1.0, norms)
    return acc / norms


def recompute_normals(mesh: Mesh) -> Mesh:
    """Repair orientation of a closed mesh and rebuild per-vertex normals."""
    return orient_outward(mesh)


# -- 2D profile helpers -------------------------------------------------------


def polygon_area(profile: np.ndarray) -> float:
    x, y = profile[:, 0], profile[:, 1]
    return float(0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _segments_properly_intersect(p1, p2, p3, p4) -> bool:
    def orient(a, b, c) -> float:
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1, d2 = orient(p3, p4, p1), orient(p3, p4, p2)
    d3, d4 = orient(p1, p2, p3), orient(p1, p2, p4)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))


def _check_simple(points: np.ndarray, closed: bool, what: str) -> None:
    n = len(points)
    segs = [(points[i], points[(i + 1) % n]) for i in range(n if closed else n - 1)]
    for i in range(len(segs)):
        for j in range(i + 2, len(segs)):
            if closed and i == 0 and j == len(segs) - 1:
                continue  # first/last share a vertex
            if _segments_properly_intersect(*segs[i], *segs[j]):
                raise DegenerateProfile(f"{what} is self-intersecting")
    for a, b in segs:
        if np.linalg.norm(b - a) < 1e-12:
            raise DegenerateProfile(f"{what} has a zero-length segment")


def ear_clip(profile: np.ndarray) -> list[tuple[int, int, int]]:
    """Triangulate a simple CCW polygon; O(n^2), fine for kernel profiles."""
    n = len(profile)
    idx = list(range(n))
    tris: list[tuple[int, int, int]] = []

    def cross(o, a, b) -> float:
        return ((profile[a][0] - profile[o][0]) * (profile[b][1] - profile[o][1])
                - (profile[a][1] - profile[o][1]) * (profile[b][0] - profile[o][0]))

    def inside(a, b, c, p) -> bool:
        d1 = cross(a, b, p)
        d2 = cross(b, c, p)
        d3 = cross(c, a, p)
        return d1 >= -1e-15 and d2 >= -1e-15 and d3 >= -1e-15

    guard = 0
    while len(idx) > 3:
        guard += 1
        if guard > 10 * n * n:
            raise DegenerateProfile("ear clipping failed; profile not simple?")
        found = False
        for k in range(len(idx)):
            a = idx[(k - 1) % len(idx)]
            b = idx[k]
            c = idx[(k + 1) % len(idx)]
            if cross(a, b, c) <= 1e-15:
                continue  # reflex or collinear tip
            if any(inside(a, b, c, p) for p in idx if p not in (a, b, c)):
                continue
            tris.append((a, b, c))
            idx.pop(k)
            found = True
            break
        if not found:
            raise DegenerateProfile("no ear found; profile degenerate")
    tris.append((idx[0], idx[1], idx[2]))
    return tris


# -- kernel builders ----------------------------------------------------------


def build_box(bbox: Aabb, bevel: float = 0.0) -> Mesh:
    """Axis-aligned box, optionally with chamfered edges.

    bevel must be >= 0 and below half the smallest extent. The mesh's AABB
    equals `bbox` exactly (the chamfer cuts edges, not faces).
    """
    ext = bbox.extents
    if bevel < 0 or (bevel > 0 and bevel >= 0.5 * float(ext.min())):
        raise MeshError(f"bevel {bevel} out of range for extents {ext}")
    lo, hi = bbox.min, bbox.max
    if bevel == 0.0:
        verts = bbox.corners()  # index bits: x<<2 | y<<1 | z
        quads = [
            (4, 6, 7, 5), (0, 1, 3, 2),  # +x, -x
            (2, 3, 7, 6), (0, 4, 5, 1),  # +y, -y
            (1, 5, 7, 3), (0, 2, 6, 4),  # +z, -z
        ]
        faces = []
        for a, b, c, d in quads:
            faces.append((a, b, c))
            faces.append((a, c, d))
        return orient_outward(Mesh(verts, np.array(faces)))

    corner = bbox.corners()
    sign = np.array([[1 if i >> (2 - ax) & 1 else -1 for ax in range(3)]
                     for i in range(8)], dtype=np.float64)
    # vertex (corner i, face axis a): keep axis a at the corner plane, pull
    # the other two axes inward by the bevel.
    vid: dict[tuple[int, int], int] = {}
    verts_list: list[np.ndarray] = []
    for i in range(8):
        for a in range(3):
            p = corner[i].copy()
            for other in range(3):
                if other != a:
                    p[other] -= sign[i, other] * bevel
            vid[(i, a)] = len(verts_list)
            verts_list.append(p)

    faces = []

    def add_quad(a, b, c, d):
        faces.append((a, b, c))
        faces.append((a, c, d))

    # 6 inset face rectangles.
    for a in range(3):
        for side in (0, 1):
            cs = [i for i in range(8) if (i >> (2 - a) & 1) == side]
            # Order the 4 corners around the face by their 2D angle.
            others = [o for o in range(3) if o != a]
            pts = [(corner[i][others[0]], corner[i][others[1]], i) for i in cs]
            cx = sum(p[0] for p in pts) / 4
            cy = sum(p[1] for p in pts) / 4
            pts.sort(key=lambda p: np.arctan2(p[1] - cy, p[0] - cx))
            add_quad(*[vid[(p[2], a)] for p in pts])

    # 12 chamfered edge strips.
    for e_axis in range(3):
        o1, o2 = [o for o in range(3) if o != e_axis]
        for i in range(8):
            j = i | (1 << (2 - e_axis))
            if i == j or (i >> (2 - e_axis) & 1):
                continue
            add_quad(vid[(i, o1)], vid[(j, o1)], vid[(j, o2)], vid[(i, o2)])

    # 8 corner triangles.
    for i in range(8):
        faces.append((vid[(i, 0)], vid[(i, 1)], vid[(i, 2)]))

    return orient_outward(Mesh(np.array(verts_list), np.array(faces)))


def build_prism(profile: Iterable, axis, length: float) -> Mesh:
    """Extrude a simple 2D polygon along a unit axis.

    The profile lies in the plane through the origin orthogonal to `axis`
    (its 2D x/y mapped to a right-handed in-plane basis). Caps are
    ear-clipped: an n-gon contributes n-2 triangles per cap.
    """
    prof = np.asarray(list(profile), dtype=np.float64).reshape(-1, 2)
    if len(prof) < 3:
        raise DegenerateProfile("prism profile needs >= 3 points")
    if abs(polygon_area(prof)) < 1e-14:
        raise DegenerateProfile("prism profile has zero area")
    _check_simple(prof, closed=True, what="prism profile")
    if polygon_area(prof) < 0:
        prof = prof[::-1]
    if length <= 0:
        raise MeshError(f"prism length must be positive, got {length}")
    axis = np.asarray(axis, dtype=np.float64)
    axis = axis / np.linalg.norm(axis)

    k = len(prof)
    bottom = np.column_stack([prof, np.zeros(k)])
    top = np.column_stack([prof, np.full(k, length)])
    verts = np.vstack([bottom, top])

    faces: list[tuple[int, int, int]] = []
    tris = ear_clip(prof)
    for a, b, c in tris:
        faces.append((a, c, b))              # bottom cap, -z
        faces.append((k + a, k + b, k + c))  # top cap, +z
    for i in range(k):
        j = (i + 1) % k
        faces.append((i, j, k + j))
        faces.append((i, k + j, k + i))

    verts = verts @ _rotation_to(np.array([0.0, 0.0, 1.0]), axis).T
    return orient_outward(Mesh(verts, np.array(faces)))


def build_lathe(profile: Iterable, segments: int = 48) -> Mesh:
    """Revolve an (r, z) polyline around the +Z axis.

    Endpoints with r > 0 are automatically closed to the axis at their z, so
    an open side profile yields a capped solid of revolution. Interior points
    must have r > 0.
    """
    if segments < 3:
        raise MeshError(f"lathe needs >= 3 segments, got {segments}")
    prof = np.asarray(list(profile), dtype=np.float64).reshape(-1, 2)
    if len(prof) < 2:
        raise DegenerateProfile("lathe profile needs >= 2 points")
    if np.any(prof[:, 0] < -1e-12):
        raise DegenerateProfile("lathe profile has negative radius")
    if np.any(prof[1:-1, 0] <= 1e-12):
        raise DegenerateProfile("interior lathe profile point on the axis")
    if prof[0, 0] > 1e-12:
        prof = np.vstack([[0.0, prof[0, 1]], prof])
    if prof[-1, 0] > 1e-12:
        prof = np.vstack([prof, [0.0, prof[-1, 1]]])
    if float(np.sum(prof[:, 0])) < 1e-12:
        raise DegenerateProfile("lathe profile never leaves the axis")
    _check_simple(prof, closed=False, what="lathe profile")

    angles = 2.0 * np.pi * np.arange(segments) / segments
    cos, sin = np.cos(angles), np.sin(angles)

    ring_start: list[int | None] = []
    verts: list[np.ndarray] = []
    for r, z in prof:
        if r <= 1e-12:
            ring_start.append(len(verts))
            verts.append(np.array([0.0, 0.0, z]))
        else:
            ring_start.append(len(verts))
            for s in range(segments):
                verts.append(np.array([r * cos[s], r * sin[s], z]))

    faces: list[tuple[int, int, int]] = []
    for i in range(len(prof) - 1):
        r0, r1 = prof[i, 0], prof[i + 1, 0]
        a, b = ring_start[i], ring_start[i + 1]
        if r0 <= 1e-12 and r1 <= 1e-12:
            raise DegenerateProfile("lathe segment lies on the axis")
        for s in range(segments):
            t = (s + 1) % segments
            if r0 <= 1e-12:
                faces.append((a, b + s, b + t))
            elif r1 <= 1e-12:
                faces.append((a + s, b, a + t))
            else:
                faces.append((a + s, b + s, b + t))
                faces.append((a + s, b + t, a + t))

    return orient_outward(Mesh(np.array(verts), np.array(faces)))


# -- rigid/similarity transforms ----------------------------------------------


def _rotation_to(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Minimal rotation taking unit vector src to unit vector dst."""
    c = float(np.dot(src, dst))
    if c > 1.0 - 1e-12:
        return np.eye(3)
    if c < -1.0 + 1e-12:
        # 180 degrees: rotate about any axis orthogonal to src.
        helper = np.array([1.0, 0.0, 0.0])
        if abs(src[0]) > 0.9:
            helper = np.array([0.0, 1.0, 0.0])
        axis = np.cross(src, helper)
        axis /= np.linalg.norm(axis)
        return 2.0 * np.outer(axis, axis) - np.eye(3)
    v = np.cross(src, dst)
    vx = np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])
    return np.eye(3) + vx + vx @ vx / (1.0 + c)


def transform_mesh(mesh: Mesh, scale: float, rotation: np.ndarray, translation) -> Mesh:
    """Apply v -> scale * R v + t. Rotation must be proper (det +1)."""
    t = np.asarray(translation, dtype=np.float64)
    verts = scale * (mesh.vertices @ rotation.T) + t
    normals = None if mesh.normals is None else mesh.normals @ rotation.T
    return Mesh(verts, mesh.faces.copy(), normals,
                None if mesh.uvs is None else mesh.uvs.copy())


def translate_mesh(mesh: Mesh, offset) -> Mesh:
    return transform_mesh(mesh, 1.0, np.eye(3), offset)


def scale_about(mesh: Mesh, factor: float, center) -> Mesh:
    """Uniform scale about a fixed point; topology untouched."""
    c = np.asarray(center, dtype=np.float64)
    verts = c + factor * (mesh.vertices - c)
    return Mesh(verts, mesh.faces.copy(),
                None if mesh.normals is None else mesh.normals.copy(),
                None if mesh.uvs is None else mesh.uvs.copy())
