"""Triangulations of rectangular domains with barycentric geometry.

Provides the uniform Friedrichs-Keller triangulation (every grid cell split
along the same bottom-left to top-right diagonal), per-triangle barycentric
coordinates and edge parametrization, point location, and a plain-text mesh
file format.

Edge convention: local edge j of a triangle is opposite local vertex j and is
parametrized by ``gamma_j(t) = (1+t)/2 * v_{j+1} + (1-t)/2 * v_{j+2}`` for
t in [-1, 1], indices cyclic mod 3.  Triangles are stored counter-clockwise;
the constructor swaps two vertices when needed so that edge orientation is
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Triangle",
    "Mesh",
    "MeshParseError",
    "OutOfDomainError",
    "friedrichs_keller",
    "read_mesh",
    "write_mesh",
]

_CONTAINMENT_TOL = 1e-12


class MeshParseError(ValueError):
    """Malformed mesh file; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class OutOfDomainError(ValueError):
    """A query point lies outside every triangle of the mesh."""


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


@dataclass(frozen=True)
class Triangle:
    """A non-degenerate triangle with counter-clockwise vertices.

    Attributes
    ----------
    vertices : np.ndarray, shape (3, 2)
        Vertex coordinates, counter-clockwise.
    vertex_ids : tuple[int, int, int]
        Indices into the owning mesh vertex list (or (-1,-1,-1) for a
        standalone triangle).
    """

    vertices: np.ndarray
    vertex_ids: tuple[int, int, int] = (-1, -1, -1)

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.shape != (3, 2) or not np.all(np.isfinite(v)):
            raise ValueError("triangle needs three finite 2d vertices")
        signed = _cross(*(v[1] - v[0]), *(v[2] - v[0]))
        if signed < 0.0:
            v = v[[0, 2, 1]]
            object.__setattr__(
                self, "vertex_ids", (self.vertex_ids[0], self.vertex_ids[2], self.vertex_ids[1])
            )
            signed = -signed
        if signed <= 1e-15 * max(1.0, float(np.abs(v).max()) ** 2):
            raise ValueError("degenerate triangle: vertices are collinear")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def area(self) -> float:
        v = self.vertices
        return 0.5 * _cross(*(v[1] - v[0]), *(v[2] - v[0]))

    @property
    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    def barycentric(self, p) -> np.ndarray:
        """Barycentric coordinates of point(s) p; affine, sums to 1.

        Points outside the triangle yield negative entries.  For input of
        shape (..., 2) the result has shape (..., 3).
        """
        p = np.asarray(p, dtype=float)
        v = self.vertices
        d = _cross(*(v[1] - v[0]), *(v[2] - v[0]))
        px, py = p[..., 0], p[..., 1]
        l0 = _cross(v[1, 0] - px, v[1, 1] - py, v[2, 0] - px, v[2, 1] - py) / d
        l1 = _cross(v[2, 0] - px, v[2, 1] - py, v[0, 0] - px, v[0, 1] - py) / d
        l2 = _cross(v[0, 0] - px, v[0, 1] - py, v[1, 0] - px, v[1, 1] - py) / d
        return np.stack([l0, l1, l2], axis=-1)

    def edge_point(self, edge: int, t):
        """Point ``gamma_edge(t)`` on local edge ``edge`` (0, 1 or 2).

        ``t = 1`` gives vertex ``edge+1``, ``t = -1`` vertex ``edge+2``
        (cyclic); the opposite barycentric coordinate vanishes along the edge.
        """
        if edge not in (0, 1, 2):
            raise IndexError(f"edge index must be 0, 1 or 2, got {edge}")
        t = np.asarray(t, dtype=float)
        if np.any(np.abs(t) > 1.0 + 1e-14):
            raise ValueError("edge parameter must satisfy |t| <= 1")
        a = self.vertices[(edge + 1) % 3]
        b = self.vertices[(edge + 2) % 3]
        return 0.5 * (1.0 + t)[..., None] * a + 0.5 * (1.0 - t)[..., None] * b

    def from_barycentric(self, bary) -> np.ndarray:
        """Physical coordinates of barycentric point(s), shape (..., 3) -> (..., 2)."""
        bary = np.asarray(bary, dtype=float)
        return bary @ self.vertices

    def contains(self, p, tol: float = _CONTAINMENT_TOL) -> bool:
        return bool(np.all(self.barycentric(p) >= -tol))


class Mesh:
    """A conforming triangulation: vertices, triangles and edge adjacency.

    Parameters
    ----------
    vertices : array_like, shape (nv, 2)
    triangles : array_like, shape (nt, 3)
        Vertex indices; orientation is normalized to counter-clockwise.
    level : int, optional
        Refinement level n for structured meshes.

    Notes
    -----
    Immutable after construction.  Interior edges have exactly two incident
    triangles and boundary edges one; a third incidence is rejected.
    """

    def __init__(self, vertices, triangles, level: int | None = None, _fk_grid=None):
        vertices = np.array(vertices, dtype=float)
        triangles = np.array(triangles, dtype=np.int64)
        if vertices.ndim != 2 or vertices.shape[1] != 2:
            raise ValueError("vertices must have shape (nv, 2)")
        if not np.all(np.isfinite(vertices)):
            raise ValueError("vertex coordinates must be finite")
        if triangles.ndim != 2 or triangles.shape[1] != 3:
            raise ValueError("triangles must have shape (nt, 3)")
        if triangles.size and (triangles.min() < 0 or triangles.max() >= len(vertices)):
            raise ValueError("triangle references a vertex that does not exist")
        if len(triangles) == 0:
            raise ValueError("mesh has no triangles")

        coords = vertices[triangles]  # (nt, 3, 2)
        signed = 0.5 * (
            _cross(
                coords[:, 1, 0] - coords[:, 0, 0],
                coords[:, 1, 1] - coords[:, 0, 1],
                coords[:, 2, 0] - coords[:, 0, 0],
                coords[:, 2, 1] - coords[:, 0, 1],
            )
        )
        flip = signed < 0.0
        if np.any(flip):
            triangles[flip] = triangles[flip][:, [0, 2, 1]]
            signed = np.abs(signed)
        scale = max(1.0, float(np.abs(vertices).max()) ** 2)
        if np.any(signed <= 1e-15 * scale):
            bad = int(np.argmin(signed))
            raise ValueError(f"degenerate triangle {bad}: vertices are collinear")

        self.vertices = vertices
        self.triangles = triangles
        self.level = level
        self._fk_grid = _fk_grid
        self.triangle_coords = vertices[triangles]
        self.areas = np.abs(signed)

        edge_map: dict[tuple[int, int], list[int]] = {}
        order: list[tuple[int, int]] = []
        for t in range(len(triangles)):
            tri = triangles[t]
            for j in range(3):
                key = tuple(sorted((int(tri[(j + 1) % 3]), int(tri[(j + 2) % 3]))))
                if key not in edge_map:
                    edge_map[key] = []
                    order.append(key)
                edge_map[key].append(t)
                if len(edge_map[key]) > 2:
                    raise ValueError(f"edge {key} is shared by more than two triangles")
        self.edge_vertices = np.array(order, dtype=np.int64)
        self.edge_triangles = np.full((len(order), 2), -1, dtype=np.int64)
        for e, key in enumerate(order):
            for slot, t in enumerate(edge_map[key]):
                self.edge_triangles[e, slot] = t

        self.vertices.setflags(write=False)
        self.triangles.setflags(write=False)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @property
    def n_edges(self) -> int:
        return len(self.edge_vertices)

    def boundary_edges(self) -> np.ndarray:
        return np.flatnonzero(self.edge_triangles[:, 1] < 0)

    def interior_edges(self) -> np.ndarray:
        return np.flatnonzero(self.edge_triangles[:, 1] >= 0)

    def triangle(self, i: int) -> Triangle:
        ids = tuple(int(x) for x in self.triangles[i])
        return Triangle(vertices=self.triangle_coords[i].copy(), vertex_ids=ids)

    def barycentric_for(self, tri_idx, points) -> np.ndarray:
        """Barycentric coordinates of each point in its paired triangle."""
        tri_idx = np.asarray(tri_idx, dtype=np.int64)
        p = np.asarray(points, dtype=float)
        v = self.triangle_coords[tri_idx]  # (m, 3, 2)
        d = _cross(
            v[:, 1, 0] - v[:, 0, 0],
            v[:, 1, 1] - v[:, 0, 1],
            v[:, 2, 0] - v[:, 0, 0],
            v[:, 2, 1] - v[:, 0, 1],
        )
        px, py = p[:, 0], p[:, 1]
        l0 = _cross(v[:, 1, 0] - px, v[:, 1, 1] - py, v[:, 2, 0] - px, v[:, 2, 1] - py) / d
        l1 = _cross(v[:, 2, 0] - px, v[:, 2, 1] - py, v[:, 0, 0] - px, v[:, 0, 1] - py) / d
        l2 = _cross(v[:, 0, 0] - px, v[:, 0, 1] - py, v[:, 1, 0] - px, v[:, 1, 1] - py) / d
        return np.stack([l0, l1, l2], axis=-1)

    def _locate_among(self, points, candidates) -> np.ndarray:
        """Lowest-id containing triangle per point among per-point candidates."""
        m = len(points)
        found = np.full(m, -1, dtype=np.int64)
        for col in range(candidates.shape[1]):
            idx = candidates[:, col]
            todo = (found < 0) & (idx >= 0)
            if not np.any(todo):
                continue
            bary = self.barycentric_for(idx[todo], points[todo])
            inside = np.all(bary >= -_CONTAINMENT_TOL, axis=1)
            sel = np.flatnonzero(todo)[inside]
            found[sel] = idx[todo][inside]
        return found

    def locate(self, points) -> np.ndarray:
        """Index of the containing triangle for each query point.

        Points on shared edges resolve to the lowest triangle id among the
        containing triangles.  Raises :class:`OutOfDomainError` if any point
        lies outside the mesh.
        """
        p = np.atleast_2d(np.asarray(points, dtype=float))
        if self._fk_grid is not None:
            found = self._locate_fk(p)
        else:
            found = self._locate_scan(p)
        if np.any(found < 0):
            bad = p[np.argmax(found < 0)]
            raise OutOfDomainError(f"point ({bad[0]}, {bad[1]}) is outside the mesh")
        return found

    def _locate_scan(self, p) -> np.ndarray:
        m = len(p)
        found = np.full(m, -1, dtype=np.int64)
        chunk = 512
        for start in range(0, m, chunk):
            pts = p[start : start + chunk]
            v = self.triangle_coords  # (nt, 3, 2)
            px = pts[:, None, 0]
            py = pts[:, None, 1]
            d = self.areas[None, :] * 2.0
            l0 = _cross(v[None, :, 1, 0] - px, v[None, :, 1, 1] - py,
                        v[None, :, 2, 0] - px, v[None, :, 2, 1] - py) / d
            l1 = _cross(v[None, :, 2, 0] - px, v[None, :, 2, 1] - py,
                        v[None, :, 0, 0] - px, v[None, :, 0, 1] - py) / d
            l2 = _cross(v[None, :, 0, 0] - px, v[None, :, 0, 1] - py,
                        v[None, :, 1, 0] - px, v[None, :, 1, 1] - py) / d
            inside = (l0 >= -_CONTAINMENT_TOL) & (l1 >= -_CONTAINMENT_TOL) & (l2 >= -_CONTAINMENT_TOL)
            any_inside = inside.any(axis=1)
            first = np.where(any_inside, inside.argmax(axis=1), -1)
            found[start : start + len(pts)] = first
        return found

    def _locate_fk(self, p) -> np.ndarray:
        x0, y0, dx, dy, n = self._fk_grid
        cx = np.clip(np.floor((p[:, 0] - x0) / dx).astype(np.int64), 0, n)
        cy = np.clip(np.floor((p[:, 1] - y0) / dy).astype(np.int64), 0, n)
        cand = []
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                ci = cx + di
                cj = cy + dj
                ok = (ci >= 0) & (ci <= n) & (cj >= 0) & (cj <= n)
                cell = np.where(ok, cj * (n + 1) + ci, -1)
                cand.append(np.where(ok, 2 * cell, -1))
                cand.append(np.where(ok, 2 * cell + 1, -1))
        candidates = np.stack(cand, axis=1)
        # sort ascending with the -1 padding moved to the back, so low ids win ties
        sentinel = np.iinfo(np.int64).max
        candidates = np.where(candidates < 0, sentinel, candidates)
        candidates.sort(axis=1)
        candidates = np.where(candidates == sentinel, -1, candidates)
        return self._locate_among(p, candidates)


def friedrichs_keller(n: int, domain=(-1.0, -1.0, 1.0, 1.0)) -> Mesh:
    """Uniform triangulation of a rectangle with 2(n+1)^2 congruent triangles.

    The rectangle is divided into an (n+1) x (n+1) grid of cells, each split
    along its bottom-left to top-right diagonal.  Vertices number (n+2)^2.

    Parameters
    ----------
    n : int
        Refinement level, n >= 0.
    domain : tuple
        ``(x0, y0, x1, y1)`` with x1 > x0 and y1 > y0.
    """
    if n < 0:
        raise ValueError("refinement level must be nonnegative")
    x0, y0, x1, y1 = (float(v) for v in domain)
    if not (np.isfinite([x0, y0, x1, y1]).all() and x1 > x0 and y1 > y0):
        raise ValueError(f"invalid domain rectangle {domain}")
    cells = n + 1
    xs = np.linspace(x0, x1, cells + 1)
    ys = np.linspace(y0, y1, cells + 1)
    gx, gy = np.meshgrid(xs, ys)  # row-major over y
    vertices = np.column_stack([gx.ravel(), gy.ravel()])

    def vid(ix, iy):
        return iy * (cells + 1) + ix

    tris = np.empty((2 * cells * cells, 3), dtype=np.int64)
    t = 0
    for iy in range(cells):
        for ix in range(cells):
            a = vid(ix, iy)
            b = vid(ix + 1, iy)
            c = vid(ix + 1, iy + 1)
            d = vid(ix, iy + 1)
            tris[t] = (a, b, c)
            tris[t + 1] = (a, c, d)
            t += 2
    grid = (x0, y0, (x1 - x0) / cells, (y1 - y0) / cells, n)
    return Mesh(vertices, tris, level=n, _fk_grid=grid)


def write_mesh(mesh: Mesh, path) -> None:
    """Write a mesh as plain text: '#' comments, 'V x y' and 'T i j k' lines.

    Coordinates use shortest round-trip float representation, so a written
    mesh reads back bit-exactly.
    """
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# triangular mesh: V <x> <y>, T <v0> <v1> <v2> (0-based)\n")
        for x, y in mesh.vertices:
            fh.write(f"V {float(x)!r} {float(y)!r}\n")
        for a, b, c in mesh.triangles:
            fh.write(f"T {int(a)} {int(b)} {int(c)}\n")


def read_mesh(path) -> Mesh:
    """Read a mesh written by :func:`write_mesh`.

    Raises
    ------
    MeshParseError
        On malformed lines, dangling vertex references, or an empty file;
        the message names the offending line.
    """
    vertices: list[tuple[float, float]] = []
    triangles: list[tuple[int, int, int]] = []
    tri_lines: list[int] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "V":
                if len(parts) != 3:
                    raise MeshParseError("expected 'V <x> <y>'", lineno)
                try:
                    vertices.append((float(parts[1]), float(parts[2])))
                except ValueError:
                    raise MeshParseError("vertex coordinates are not numbers", lineno) from None
            elif parts[0] == "T":
                if len(parts) != 4:
                    raise MeshParseError("expected 'T <v0> <v1> <v2>'", lineno)
                try:
                    triangles.append(tuple(int(x) for x in parts[1:4]))
                except ValueError:
                    raise MeshParseError("triangle indices are not integers", lineno) from None
                tri_lines.append(lineno)
            else:
                raise MeshParseError(f"unknown record type {parts[0]!r}", lineno)
    if not vertices:
        raise MeshParseError("file contains no vertices")
    if not triangles:
        raise MeshParseError("file contains no triangles")
    nv = len(vertices)
    for t, tri in enumerate(triangles):
        if any(i < 0 or i >= nv for i in tri):
            raise MeshParseError(
                f"triangle references missing vertex {max(tri)}", tri_lines[t]
            )
    return Mesh(np.array(vertices), np.array(triangles))
