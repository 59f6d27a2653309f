"""Exact facet enumeration for V-polytopes of moderate size.

Strategy: gift wrapping inside the affine hull of the input points. All
comparisons happen in integer arithmetic after clearing denominators once, so
results are exact; numpy int64 matmuls accelerate the per-pivot scans. The
two base cases (segments and polygons) are handled directly; ridge
enumeration recurses one dimension down on each facet's vertex set.

Points must be pairwise distinct and are addressed by index into the input
sequence throughout.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactnum import (
    Q,
    Vector,
    affine_rank,
    gram_matrix,
    independent_subset,
    linear_rank,
    solve_linear,
    vsub,
)

_INT64_GUARD = 1 << 60


class DegenerateInput(Exception):
    """Point set has affine rank 0."""


def _scaled_int_points(points: Sequence[Vector]) -> tuple[list[tuple[int, ...]], int]:
    scale = 1
    for p in points:
        for x in p:
            scale = scale * x.denominator // math.gcd(scale, x.denominator)
    ipts = [tuple(int(x * scale) for x in p) for p in points]
    return ipts, scale


def _primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = math.gcd(g, x)
    if g in (0, 1):
        return tuple(v)
    return tuple(x // g for x in v)


def _int_residual(v: tuple[int, ...], span: list[tuple[int, ...]]) -> tuple[int, ...] | None:
    """Component of v orthogonal to span(span), scaled to a primitive integer
    vector; None when v lies in the span. Exact via a rational Gram solve."""
    basis_idx = independent_subset([tuple(Q(x) for x in s) for s in span])
    basis = [span[i] for i in basis_idx]
    if not basis:
        return _primitive(v) if any(v) else None
    qbasis = [tuple(Q(x) for x in b) for b in basis]
    qv = tuple(Q(x) for x in v)
    gram = gram_matrix(qbasis)
    rhs = [sum(Q(a * b) for a, b in zip(bb, v)) for bb in basis]
    coeffs = solve_linear(gram, rhs)
    res = [qv[j] - sum(c * qb[j] for c, qb in zip(coeffs, qbasis))
           for j in range(len(v))]
    if all(x == 0 for x in res):
        return None
    lcm = 1
    for x in res:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    return _primitive([int(x * lcm) for x in res])


def _dots(mat: np.ndarray, vec_int: Sequence[int], max_coord: int,
          rows: list[tuple[int, ...]] | None = None) -> np.ndarray:
    """Row dots, exact: int64 matmul when products provably fit, else big ints."""
    vmax = max((abs(x) for x in vec_int), default=0)
    if max_coord * vmax * mat.shape[1] < _INT64_GUARD:
        return mat @ np.asarray(vec_int, dtype=np.int64)
    assert rows is not None
    return np.array([sum(a * b for a, b in zip(r, vec_int)) for r in rows],
                    dtype=object)


def _hull_2d(ipts: list[tuple[int, ...]], idx: list[int],
             basis: list[tuple[int, ...]]) -> list[list[int]]:
    """Edges of a 2D hull; planar coordinates via dots with two independent
    span vectors (an injective affine map, so convex position is preserved)."""
    e1, e2 = basis[0], basis[1]
    pts2 = {i: (sum(a * b for a, b in zip(ipts[i], e1)),
                sum(a * b for a, b in zip(ipts[i], e2))) for i in idx}
    order = sorted(idx, key=lambda i: pts2[i])

    def cross(o, a, b):
        ox, oy = pts2[o]
        return ((pts2[a][0] - ox) * (pts2[b][1] - oy)
                - (pts2[a][1] - oy) * (pts2[b][0] - ox))

    def half(seq):
        chain: list[int] = []
        for i in seq:
            while len(chain) >= 2 and cross(chain[-2], chain[-1], i) <= 0:
                chain.pop()
            chain.append(i)
        return chain

    lower = half(order)
    upper = half(reversed(order))
    cycle = lower[:-1] + upper[:-1]
    return [[cycle[i], cycle[(i + 1) % len(cycle)]] for i in range(len(cycle))]


class FacetFinder:
    """Reusable gift-wrapping context over one distinct point set.

    Facet enumeration results are memoized per vertex-index subset, which the
    volume oracle exploits when it recurses through the face lattice.
    """

    def __init__(self, points: Sequence[Vector]):
        self.points = list(points)
        self.ipts, self.scale = _scaled_int_points(self.points)
        self.mat = np.asarray(self.ipts, dtype=np.int64)
        self.max_coord = max((abs(x) for p in self.ipts for x in p), default=0)
        self._facet_cache: dict[frozenset[int], list[frozenset[int]]] = {}

    def facets(self, idx: list[int]) -> list[frozenset[int]]:
        key = frozenset(idx)
        got = self._facet_cache.get(key)
        if got is None:
            got = self._facets_uncached(sorted(idx))
            self._facet_cache[key] = got
        return got

    def _diffs(self, idx: list[int]) -> list[tuple[int, ...]]:
        p0 = self.ipts[idx[0]]
        return [tuple(a - b for a, b in zip(self.ipts[i], p0)) for i in idx[1:]]

    def _facets_uncached(self, idx: list[int]) -> list[frozenset[int]]:
        diffs = self._diffs(idx)
        qdiffs = [tuple(Q(x) for x in d) for d in diffs]
        basis = [diffs[i] for i in independent_subset(qdiffs)]
        k = len(basis)
        if k == 0:
            return []
        if k == 1:
            d = basis[0]
            vals = {i: sum(a * b for a, b in zip(self.ipts[i], d)) for i in idx}
            lo = min(idx, key=lambda i: vals[i])
            hi = max(idx, key=lambda i: vals[i])
            return [frozenset([lo]), frozenset([hi])]
        if k == 2:
            return [frozenset(e) for e in _hull_2d(self.ipts, idx, basis)]
        return self._wrap(idx, basis, k)

    # -- generic dimension ---------------------------------------------------

    def _scan(self, idx: list[int], normal: Sequence[int]) -> list:
        full = len(idx) == len(self.ipts)
        sub = self.mat if full else self.mat[idx]
        rows = self.ipts if full else [self.ipts[i] for i in idx]
        return _dots(sub, normal, self.max_coord, rows).tolist()

    def _support_set(self, idx: list[int], normal: Sequence[int]) -> tuple[list[int], int]:
        vals = self._scan(idx, normal)
        b = max(vals)
        face = [i for i, v in zip(idx, vals) if v == b]
        return face, b

    def _initial_facet(self, idx: list[int], basis, k):
        normal = list(basis[0])
        face, b = self._support_set(idx, normal)
        while True:
            fdiffs = self._diffs(face) if len(face) > 1 else []
            rank = linear_rank([tuple(Q(x) for x in d) for d in fdiffs]) if fdiffs else 0
            if rank == k - 1:
                return face, tuple(normal), b
            w = None
            for cand in basis:
                w = _int_residual(cand, fdiffs) if fdiffs else _primitive(cand)
                if w is not None and any(w):
                    # also reject w parallel to the current normal
                    if _int_residual(w, fdiffs + [tuple(normal)]) is not None:
                        break
                w = None
            if w is None:
                raise RuntimeError("flag growth stalled")
            face, normal, b = self._rotate_onto(idx, face, normal, b, w)

    def _rotate_onto(self, idx, face, normal, b, w):
        """Rotate the supporting hyperplane around aff(face) until it hits a
        new vertex; returns the enlarged face with its normal and offset."""
        s0 = sum(a * c for a, c in zip(self.ipts[face[0]], w))
        cand = [(tv - b, sv - s0) for tv, sv in
                zip(self._scan(idx, normal), self._scan(idx, w))]
        if not any(sv > 0 for tv, sv in cand if tv < 0):
            w = tuple(-x for x in w)
            cand = [(tv, -sv) for tv, sv in cand]
        best = None  # minimize -t/s over t<0, s>0: fractions (num, den)
        for tv, sv in cand:
            if tv < 0 and sv > 0:
                if best is None or (-tv) * best[1] < best[0] * sv:
                    best = (-tv, sv)
        if best is None:
            raise RuntimeError("unbounded rotation: input not full rank?")
        p, q = best
        new_normal = _primitive([q * a + p * c for a, c in zip(normal, w)])
        face2, b2 = self._support_set(idx, new_normal)
        return face2, tuple(new_normal), b2

    def _wrap(self, idx: list[int], basis, k) -> list[frozenset[int]]:
        face, normal, b = self._initial_facet(idx, basis, k)
        first = frozenset(face)
        found = {first: (normal, b)}
        queue = [first]
        while queue:
            facet = queue.pop()
            normal, b = found[facet]
            for ridge in self.facets(list(facet)):
                neighbor = self._pivot(idx, facet, normal, b, ridge)
                key = frozenset(neighbor[0])
                if key not in found:
                    found[key] = (neighbor[1], neighbor[2])
                    queue.append(key)
        return sorted(found, key=sorted)

    def _pivot(self, idx, facet, normal, b, ridge):
        """Fold the supporting hyperplane across a ridge to the next facet."""
        ridge = sorted(ridge)
        r0 = self.ipts[ridge[0]]
        rdiffs = [tuple(a - c for a, c in zip(self.ipts[i], r0)) for i in ridge[1:]]
        fpts = sorted(facet)
        centroid_num = [sum(self.ipts[i][j] for i in fpts) for j in range(len(r0))]
        toward = tuple(c - len(fpts) * x for c, x in zip(centroid_num, r0))
        w = _int_residual(toward, rdiffs)
        if w is None:
            raise RuntimeError("ridge spans its facet")
        s0 = sum(a * c for a, c in zip(r0, w))
        tvals = self._scan(idx, normal)
        svals = self._scan(idx, w)
        in_facet = set(facet)
        # Fold the plane around aff(ridge): first contact maximizes s/t over
        # the vertices off the facet (t < 0 there); s may have either sign,
        # which covers obtuse dihedral angles.
        best = None
        for i, traw, sraw in zip(idx, tvals, svals):
            if i in in_facet:
                continue
            tv, sv = traw - b, sraw - s0
            if best is None or sv * best[0] > best[1] * tv:
                # s/t > s_b/t_b  <=>  s*t_b > s_b*t  (t*t_b > 0)
                best = (tv, sv)
        if best is None:
            raise RuntimeError("no adjacent facet: input not full rank?")
        tb, sb = best
        new_normal = _primitive([tb * c - sb * a for a, c in zip(normal, w)])
        face2, b2 = self._support_set(idx, new_normal)
        return face2, tuple(new_normal), b2


def convex_facets(points: Sequence[Vector]) -> list[tuple[frozenset[int], Vector, Fraction]]:
    """Facets of conv(points) as (vertex index set, outward normal, offset).

    The supporting plane is {x : (x, normal) = offset} with every input point
    satisfying (x, normal) <= offset. Raises DegenerateInput on rank 0.
    """
    if affine_rank(points) == 0:
        raise DegenerateInput("all points coincide")
    w = FacetFinder(points)
    idx = list(range(len(points)))
    out = []
    for facet in w.facets(idx):
        normal, offset = facet_plane(points, sorted(facet))
        out.append((facet, normal, offset))
    return out


def facet_index_sets(points: Sequence[Vector]) -> list[frozenset[int]]:
    """Facet vertex-index sets only (no plane data)."""
    if affine_rank(points) == 0:
        raise DegenerateInput("all points coincide")
    w = FacetFinder(points)
    return w.facets(list(range(len(points))))


def facet_plane(points: Sequence[Vector], facet: Sequence[int]) -> tuple[Vector, Fraction]:
    """Outward supporting plane of a facet, exact and canonically scaled."""
    n = len(points[0])
    centroid = tuple(sum((p[j] for p in points), Q(0)) / len(points)
                     for j in range(n))
    f0 = points[facet[0]]
    fdiffs = [vsub(points[i], f0) for i in facet[1:]]
    toward = vsub(f0, centroid)
    ipts_diffs, _ = _scaled_int_points(fdiffs) if fdiffs else ([], 1)
    itoward, _ = _scaled_int_points([toward])
    res = _int_residual(itoward[0], ipts_diffs)
    if res is None:
        raise ValueError("facet is not a proper face")
    normal = tuple(Q(x) for x in res)
    offset = sum(a * b for a, b in zip(normal, f0))
    return normal, offset


def convex_polygon_cycle(points: Sequence[Vector], idx: Sequence[int] | None = None) -> list[int]:
    """Indices of a planar convex point set in cyclic boundary order."""
    idx = list(idx) if idx is not None else list(range(len(points)))
    if len(idx) <= 2:
        return idx
    sub = [points[i] for i in idx]
    p0 = sub[0]
    diffs = [vsub(p, p0) for p in sub[1:]]
    bidx = independent_subset(diffs)
    if len(bidx) < 2:
        raise ValueError("points are collinear")
    ipts, _ = _scaled_int_points(sub)
    b1 = tuple(int(x) for x in _scaled_int_points([diffs[bidx[0]]])[0][0])
    b2 = tuple(int(x) for x in _scaled_int_points([diffs[bidx[1]]])[0][0])
    coords = [(sum(a * b for a, b in zip(p, b1)),
               sum(a * b for a, b in zip(p, b2))) for p in ipts]
    cx = sum(c[0] for c in coords) / len(coords)
    cy = sum(c[1] for c in coords) / len(coords)
    order = sorted(range(len(idx)),
                   key=lambda j: math.atan2(coords[j][1] - cy, coords[j][0] - cx))
    return [idx[j] for j in order]
