"""Reflection-group data for the A and D lattice families.

Simple roots and fundamental weights are realized in an orthonormal ambient
basis: dimension n+1 for family A (vectors live in the sum-zero hyperplane,
which keeps the permutation action transparent) and dimension n for family D.
All roots have squared norm 2, so a reflection is v -> v - (v, a) a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .exactnum import (
    Q,
    Vector,
    det_fraction,
    dot,
    vadd,
    vec,
    vscale,
    vsub,
)


class IndexOutOfRange(Exception):
    """Generator index outside 0..rank-1."""


DEFAULT_RANK_CAP = 8


class RankCapExceeded(Exception):
    """Orbit enumeration refused above the rank cap; pass force=True."""


@dataclass(frozen=True)
class LatticeSpec:
    """Which lattice: family 'A' or 'D', rank n, variant 'root' or 'weight'."""

    family: str
    rank: int
    variant: str = "root"

    def __post_init__(self):
        if self.family not in ("A", "D"):
            raise ValueError(f"family must be 'A' or 'D', got {self.family!r}")
        if self.variant not in ("root", "weight"):
            raise ValueError(
                f"variant must be 'root' or 'weight', got {self.variant!r}")
        min_rank = 1 if self.family == "A" else 3
        if self.rank < min_rank:
            raise ValueError(
                f"{self.family} family requires rank >= {min_rank}")

    @property
    def ambient_dim(self) -> int:
        return self.rank + 1 if self.family == "A" else self.rank

    @property
    def is_root(self) -> bool:
        return self.variant == "root"

    @property
    def label(self) -> str:
        star = "" if self.is_root else "*"
        return f"{self.family}{self.rank}{star}"


@lru_cache(maxsize=None)
def simple_roots(spec: LatticeSpec) -> tuple[Vector, ...]:
    """Simple roots a_1..a_n in the ambient orthonormal basis."""
    n, dim = spec.rank, spec.ambient_dim
    roots = []
    for i in range(n - 1 if spec.family == "D" else n):
        r = [Q(0)] * dim
        r[i], r[i + 1] = Q(1), Q(-1)
        roots.append(tuple(r))
    if spec.family == "D":
        r = [Q(0)] * dim
        r[n - 2], r[n - 1] = Q(1), Q(1)
        roots.append(tuple(r))
    return tuple(roots)


@lru_cache(maxsize=None)
def fundamental_weights(spec: LatticeSpec) -> tuple[Vector, ...]:
    """Fundamental weights w_1..w_n, dual to the simple roots."""
    n = spec.rank
    weights = []
    if spec.family == "A":
        for i in range(1, n + 1):
            j = n + 1 - i
            weights.append(tuple([Q(j, n + 1)] * i + [Q(-i, n + 1)] * j))
    else:
        for i in range(1, n - 1):
            weights.append(tuple([Q(1)] * i + [Q(0)] * (n - i)))
        weights.append(tuple([Q(1, 2)] * (n - 1) + [Q(-1, 2)]))
        weights.append(tuple([Q(1, 2)] * n))
    return tuple(weights)


@lru_cache(maxsize=None)
def cartan_matrix(spec: LatticeSpec) -> tuple[tuple[int, ...], ...]:
    """C_ij = 2 (a_i, a_j) / (a_j, a_j), computed from the simple roots."""
    roots = simple_roots(spec)
    mat = []
    for a in roots:
        mat.append(tuple(int(2 * dot(a, b) / dot(b, b)) for b in roots))
    return tuple(mat)


def cartan_determinant(spec: LatticeSpec) -> int:
    det = det_fraction(cartan_matrix(spec))
    return int(det)


def reflect(v: Vector, i: int, spec: LatticeSpec) -> Vector:
    """Reflection in the hyperplane of simple root i (0-based)."""
    if not 0 <= i < spec.rank:
        raise IndexOutOfRange(f"generator index {i} not in 0..{spec.rank - 1}")
    a = simple_roots(spec)[i]
    c = dot(v, a)  # (a, a) = 2 cancels the factor 2 in the reflection formula
    if c == 0:
        return v
    return vsub(v, vscale(a, c))


def group_order(spec: LatticeSpec) -> int:
    n = spec.rank
    if spec.family == "A":
        return math.factorial(n + 1)
    return (1 << (n - 1)) * math.factorial(n)


def coxeter_number(spec: LatticeSpec) -> int:
    return spec.rank + 1 if spec.family == "A" else 2 * (spec.rank - 1)


def weight_from_coeffs(spec: LatticeSpec, coeffs: Sequence) -> Vector:
    """The vector sum_i c_i w_i for coefficients in the weight basis."""
    if len(coeffs) != spec.rank:
        raise ValueError(f"need {spec.rank} coefficients, got {len(coeffs)}")
    weights = fundamental_weights(spec)
    v = tuple([Q(0)] * spec.ambient_dim)
    for c, w in zip(coeffs, weights):
        if c:
            v = vadd(v, vscale(w, c))
    return v


def orbit_of_vector(spec: LatticeSpec, start: Vector,
                    force: bool = False) -> tuple[Vector, ...]:
    """Closure of one vector under the simple reflections.

    Breadth-first with a hash set on exact coordinates; the result is the
    deduplicated vertex set in lexicographic order, so it is independent of
    traversal order.
    """
    if spec.rank > DEFAULT_RANK_CAP and not force:
        raise RankCapExceeded(
            f"rank {spec.rank} > cap {DEFAULT_RANK_CAP}; pass force=True")
    roots = simple_roots(spec)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for a in roots:
                c = dot(v, a)
                if c == 0:
                    continue
                w = vsub(v, vscale(a, c))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return tuple(sorted(seen))


def orbit(spec: LatticeSpec, coeffs: Sequence,
          force: bool = False) -> tuple[Vector, ...]:
    """Orbit of the highest weight sum_i c_i w_i under the Weyl group."""
    hw = weight_from_coeffs(spec, coeffs)
    return orbit_of_vector(spec, hw, force=force)


def _diagram_adjacency(spec: LatticeSpec) -> list[set[int]]:
    cm = cartan_matrix(spec)
    n = spec.rank
    return [{j for j in range(n) if j != i and cm[i][j] != 0}
            for i in range(n)]


def stabilizer_order(spec: LatticeSpec, coeffs: Sequence) -> int:
    """Order of the parabolic subgroup fixing the highest weight.

    The stabilizer is generated by the reflections at nodes with zero
    coefficient; its order is the product over the connected components of
    the induced sub-diagram, each of type A (a path) or type D (contains the
    fork node).
    """
    if len(coeffs) != spec.rank:
        raise ValueError(f"need {spec.rank} coefficients")
    zero_nodes = {i for i, c in enumerate(coeffs) if c == 0}
    adj = _diagram_adjacency(spec)
    order = 1
    unvisited = set(zero_nodes)
    while unvisited:
        comp = set()
        stack = [unvisited.pop()]
        while stack:
            i = stack.pop()
            comp.add(i)
            for j in adj[i] & unvisited:
                unvisited.discard(j)
                stack.append(j)
        k = len(comp)
        forked = any(len(adj[i] & comp) == 3 for i in comp)
        if forked:
            order *= (1 << (k - 1)) * math.factorial(k)
        else:
            order *= math.factorial(k + 1)
    return order


def coxeter_element_apply(v: Vector, spec: LatticeSpec) -> Vector:
    """Apply the product r_1 r_2 ... r_n (rightmost acts first)."""
    for i in range(spec.rank - 1, -1, -1):
        v = reflect(v, i, spec)
    return v


def coxeter_element_order(spec: LatticeSpec, max_iter: int = 64) -> int:
    """Order of the Coxeter element, found by iterating on a generic vector."""
    start = weight_from_coeffs(spec, [1] * spec.rank)  # interior of chamber
    v = start
    for k in range(1, max_iter + 1):
        v = coxeter_element_apply(v, spec)
        if v == start:
            return k
    raise RuntimeError("Coxeter element order not found within max_iter")
