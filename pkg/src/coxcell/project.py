"""Coxeter-plane projection and aperiodic tiling patches.

The Coxeter element acts on an invariant 2-plane as a rotation by 2*pi/h;
projecting the 2-faces of Voronoi cells onto that plane produces the tiles
(thick/thin rhombi from rank 4 family A, two isosceles triangles from rank 5
family D). Patch selection follows the cut-and-project rule: a translated
face is kept when the perpendicular-space image of its center lies inside
the perpendicular shadow of the central Voronoi cell (times a scale factor).

Everything here is double precision; exactness stops at the ambient
coordinates of the cells being projected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull

from .coxeter import LatticeSpec, simple_roots
from .exactnum import Q, vadd
from .hull import convex_polygon_cycle
from .polytope import (
    FaceLattice,
    OrbitPolytope,
    VariantMismatch,
    enumerate_faces,
    voronoi_cell,
)


class NumericalFailure(Exception):
    pass


class EmptyWindow(Exception):
    pass


@dataclass
class CoxeterPlane:
    u: np.ndarray
    v: np.ndarray
    h: int
    perp: np.ndarray  # orthonormal rows spanning the internal (window) space

    def project(self, x) -> np.ndarray:
        xf = np.asarray([float(c) for c in x])
        return np.array([self.u @ xf, self.v @ xf])

    def project_perp(self, x) -> np.ndarray:
        xf = np.asarray([float(c) for c in x])
        return self.perp @ xf


def coxeter_plane(spec: LatticeSpec, tol: float = 1e-9) -> CoxeterPlane:
    """Invariant rotation plane of the ordered product of simple reflections."""
    dim = spec.ambient_dim
    mat = np.eye(dim)
    for a in simple_roots(spec):
        af = np.asarray([float(x) for x in a])
        mat = mat @ (np.eye(dim) - np.outer(af, af))
    h = spec.rank + 1 if spec.family == "A" else 2 * (spec.rank - 1)
    target = np.exp(2j * np.pi / h)
    eigvals, eigvecs = np.linalg.eig(mat)
    k = int(np.argmin(np.abs(eigvals - target)))
    if abs(eigvals[k] - target) > tol:
        raise NumericalFailure(f"no eigenvalue within {tol} of exp(2*pi*i/{h})")
    z = eigvecs[:, k]
    u = np.real(z)
    u /= np.linalg.norm(u)
    v = -np.imag(z)
    v -= (v @ u) * u
    v /= np.linalg.norm(v)
    expected = math.cos(2 * math.pi / h) * u + math.sin(2 * math.pi / h) * v
    if np.linalg.norm(mat @ u - expected) > 1e-6:
        v = -v
        expected = math.cos(2 * math.pi / h) * u + math.sin(2 * math.pi / h) * v
        if np.linalg.norm(mat @ u - expected) > 1e-6:
            raise NumericalFailure("invariant plane has no rotation action")
    # internal space: orthogonal complement of span(u, v), minus the all-ones
    # direction for family A (lattice vectors have zero coordinate sum)
    fixed = [u, v]
    if spec.family == "A":
        fixed.append(np.ones(dim) / math.sqrt(dim))
    qmat = np.linalg.qr(np.column_stack(fixed + [np.eye(dim)]))[0]
    perp = qmat[:, len(fixed):dim].T
    return CoxeterPlane(u, v, h, perp)


def project_faces(poly: OrbitPolytope, faces: FaceLattice,
                  plane: CoxeterPlane, degenerate_tol: float = 1e-9) -> list[np.ndarray]:
    """Project each 2-face to the plane as an ordered polygon; collinear
    images are dropped."""
    out = []
    verts = list(poly.vertices)
    for face in faces.faces(2):
        cycle = convex_polygon_cycle(verts, list(face.indices))
        poly2d = np.array([plane.project(verts[i]) for i in cycle])
        if _polygon_area(poly2d) > degenerate_tol:
            out.append(poly2d)
    return out


def _polygon_area(poly2d: np.ndarray) -> float:
    x, y = poly2d[:, 0], poly2d[:, 1]
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def polygon_signature(poly2d: np.ndarray) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """(sorted edge lengths, sorted interior angles) of a convex polygon."""
    m = len(poly2d)
    edges = [poly2d[(i + 1) % m] - poly2d[i] for i in range(m)]
    lengths = tuple(sorted(float(np.linalg.norm(e)) for e in edges))
    if lengths[0] < 1e-12:
        raise ValueError("degenerate polygon: zero-length edge")
    angles = []
    for i in range(m):
        a = -edges[i - 1]
        b = edges[i]
        cosang = (a @ b) / (np.linalg.norm(a) * np.linalg.norm(b))
        angles.append(math.acos(max(-1.0, min(1.0, cosang))))
    return lengths, tuple(sorted(angles))


@dataclass
class TileClass:
    edge_lengths: tuple[float, ...]
    angles: tuple[float, ...]
    count: int


@dataclass
class TilePatch:
    tiles: list[tuple[np.ndarray, int]]
    classes: list[TileClass]


def classify_tiles(polygons: list[np.ndarray], tol: float = 1e-6) -> TilePatch:
    """Group congruent tiles; class ids are ordered by decreasing frequency."""
    if not polygons:
        raise ValueError("no polygons to classify")
    reps: list[tuple[tuple, tuple]] = []
    members: list[list[int]] = []
    for i, poly2d in enumerate(polygons):
        sig = polygon_signature(poly2d)
        for j, ref in enumerate(reps):
            if (len(sig[0]) == len(ref[0])
                    and max(abs(a - b) for a, b in zip(sig[0], ref[0])) <= tol
                    and max(abs(a - b) for a, b in zip(sig[1], ref[1])) <= tol):
                members[j].append(i)
                break
        else:
            reps.append(sig)
            members.append([i])
    order = sorted(range(len(reps)), key=lambda j: (-len(members[j]), reps[j]))
    remap = {old: new for new, old in enumerate(order)}
    tiles: list[tuple[np.ndarray, int] | None] = [None] * len(polygons)
    for old, idx_list in enumerate(members):
        for i in idx_list:
            tiles[i] = (polygons[i], remap[old])
    classes = [TileClass(reps[old][0], reps[old][1], len(members[old]))
               for old in order]
    return TilePatch(tiles, classes)


def _make_window(plane: CoxeterPlane, cell_vertices, scale: float):
    if plane.perp.shape[0] == 0:
        return None
    pts = np.array([plane.project_perp(v) for v in cell_vertices]) * scale
    if plane.perp.shape[0] == 1:
        return ("interval", float(pts.min()), float(pts.max()))
    return ("hull", ConvexHull(pts).equations)


def _in_window(window, pt: np.ndarray, tol: float = 1e-9) -> bool:
    if window is None:
        return True
    if window[0] == "interval":
        return window[1] - tol <= float(pt[0]) <= window[2] + tol
    eqs = window[1]
    return bool(np.all(eqs[:, :-1] @ pt + eqs[:, -1] <= tol))


def _window_prefilter(window, perp_coords: np.ndarray, margin: float) -> np.ndarray:
    if window is None:
        return np.ones(len(perp_coords), dtype=bool)
    if window[0] == "interval":
        x = perp_coords[:, 0]
        return (x >= window[1] - margin) & (x <= window[2] + margin)
    eqs = window[1]
    return np.all(eqs[:, :-1] @ perp_coords.T + eqs[:, -1:] <= margin, axis=0)


def _lattice_coefficient_grid(n: int, box: int, par_roots, perp_roots,
                              par_bound: float, window, margin: float) -> np.ndarray:
    """Integer coefficient vectors surviving the coarse parallel and
    perpendicular filters, enumerated in slices to bound memory."""
    rest = np.stack(np.meshgrid(*([np.arange(-box, box + 1)] * (n - 1)),
                                indexing="ij"), axis=-1).reshape(-1, n - 1)
    survivors = []
    for lead in range(-box, box + 1):
        grid = np.concatenate(
            [np.full((len(rest), 1), lead, dtype=np.int64), rest], axis=1)
        par = grid @ par_roots
        keep = (par ** 2).sum(axis=1) <= par_bound ** 2
        grid = grid[keep]
        if not len(grid):
            continue
        keep = _window_prefilter(window, grid @ perp_roots, margin)
        grid = grid[keep]
        if len(grid):
            survivors.append(grid)
    if not survivors:
        return np.empty((0, n), dtype=np.int64)
    return np.concatenate(survivors)


def tiling_patch(spec: LatticeSpec, window_radius: float,
                 window_scale: float = 1.0) -> TilePatch:
    """Cut-and-project tiling patch from the Voronoi 2-faces of the lattice.

    Lattice translates whose perpendicular image falls in the window
    contribute the 2-faces of their Voronoi cell whose face centers also
    project into the window; faces within the parallel-space radius are
    projected and classified. Deterministic for fixed parameters.
    """
    if not spec.is_root:
        raise VariantMismatch("tiling patches are built from root lattices")
    if window_radius <= 0:
        raise EmptyWindow("window radius must be positive")
    plane = coxeter_plane(spec)
    cell = voronoi_cell(spec)
    faces = enumerate_faces(cell)
    verts = list(cell.vertices)
    face_data = []
    for face in faces.faces(2):
        cyc = convex_polygon_cycle(verts, list(face.indices))
        pts = [verts[i] for i in cyc]
        center = tuple(sum(p[j] for p in pts) / len(pts)
                       for j in range(len(pts[0])))
        face_data.append((pts, center))

    window = _make_window(plane, cell.vertices, window_scale)
    roots = simple_roots(spec)
    root_mat = np.array([[float(x) for x in a] for a in roots])
    par_roots = np.column_stack([root_mat @ plane.u, root_mat @ plane.v])
    perp_roots = root_mat @ plane.perp.T

    margin = 2.0
    gram_inv = np.linalg.inv(root_mat @ root_mat.T)
    dual_norm = math.sqrt(float(np.diag(gram_inv).max()))
    point_norm_bound = math.hypot(window_radius + margin, margin)
    box = int(math.ceil(point_norm_bound * dual_norm))

    n = spec.rank
    grid = _lattice_coefficient_grid(n, box, par_roots, perp_roots,
                                     window_radius + margin, window, margin)

    centers_perp = np.array([plane.project_perp(c) for _, c in face_data])
    centers_par = np.array([plane.project(c) for _, c in face_data])
    seen_faces: set[frozenset] = set()
    kept: list[np.ndarray] = []
    for coeffs in grid.tolist():
        shift_f = np.asarray(coeffs, dtype=float) @ root_mat
        cper = centers_perp + plane.perp @ shift_f
        cpar = centers_par + np.array([plane.u @ shift_f, plane.v @ shift_f])
        ok = (cpar ** 2).sum(axis=1) <= window_radius ** 2
        if window is not None:
            if window[0] == "interval":
                x = cper[:, 0]
                ok &= (x >= window[1] - 1e-9) & (x <= window[2] + 1e-9)
            else:
                eqs = window[1]
                ok &= np.all(eqs[:, :-1] @ cper.T + eqs[:, -1:] <= 1e-9, axis=0)
        hits = np.nonzero(ok)[0]
        if not len(hits):
            continue
        shift = tuple(sum(Q(b) * a[j] for b, a in zip(coeffs, roots))
                      for j in range(spec.ambient_dim))
        for fi in hits.tolist():
            pts = face_data[fi][0]
            moved = tuple(vadd(p, shift) for p in pts)
            key = frozenset(moved)
            if key in seen_faces:
                continue
            seen_faces.add(key)
            poly2d = np.array([plane.project(p) for p in moved])
            if _polygon_area(poly2d) > 1e-9:
                kept.append(poly2d)
    if not kept:
        raise EmptyWindow("no face centers project into the window")
    kept.sort(key=lambda poly2d: tuple(np.round(poly2d, 9).ravel()))
    return classify_tiles(kept)
