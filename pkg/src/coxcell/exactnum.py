"""Exact arithmetic substrate: rationals, rational vectors, and quadratic surds.

Every geometric quantity in this package is either a rational number, a
vector of rationals, or a value of the form (rational) * sqrt(integer).
Rationals are plain ``fractions.Fraction``; vectors are immutable tuples of
Fractions so they hash, compare lexicographically and deduplicate exactly.
``Surd`` covers lengths and volumes such as sqrt(5)/24 that never leave a
single quadratic extension for a fixed lattice rank.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

Q = Fraction
Vector = tuple[Fraction, ...]


class ExactError(Exception):
    """Base class for contract violations in the exact-arithmetic layer."""


class DimensionMismatch(ExactError):
    pass


class RadicandMismatch(ExactError):
    """Attempt to add surds over different square roots."""


def vec(coords: Iterable) -> Vector:
    """Build an exact vector, coercing ints / strings / Fractions."""
    return tuple(Q(c) for c in coords)


def vadd(u: Vector, v: Vector) -> Vector:
    if len(u) != len(v):
        raise DimensionMismatch(f"{len(u)} != {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Vector, v: Vector) -> Vector:
    if len(u) != len(v):
        raise DimensionMismatch(f"{len(u)} != {len(v)}")
    return tuple(a - b for a, b in zip(u, v))


def vneg(u: Vector) -> Vector:
    return tuple(-a for a in u)


def vscale(u: Vector, s) -> Vector:
    s = Q(s)
    return tuple(a * s for a in u)


def dot(u: Vector, v: Vector) -> Fraction:
    """Exact Euclidean inner product."""
    if len(u) != len(v):
        raise DimensionMismatch(f"{len(u)} != {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Q(0))


def norm_sq(u: Vector) -> Fraction:
    return dot(u, u)


def is_zero(u: Vector) -> bool:
    return all(a == 0 for a in u)


def scalar_to_str(x: Fraction) -> str:
    """Serialize a rational as "p/q" (denominator always present)."""
    return f"{x.numerator}/{x.denominator}"


def scalar_from_str(s: str) -> Fraction:
    return Q(s)


def _extract_square(m: int) -> tuple[int, int]:
    """Split m >= 0 as s*s * r with r squarefree; returns (s, r)."""
    if m == 0:
        return 0, 1
    s, r = 1, 1
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                r *= p
        p += 1 if p == 2 else 2
    return s, r * m


class Surd:
    """An exact value coeff * sqrt(radicand) with squarefree radicand.

    radicand 1 encodes a pure rational; coeff 0 forces radicand 1.
    Addition requires matching radicands; multiplication and division are
    closed because sqrt(a)*sqrt(b) = sqrt(ab) renormalizes.
    """

    __slots__ = ("coeff", "radicand")

    def __init__(self, coeff, radicand: int = 1):
        coeff = Q(coeff)
        radicand = int(radicand)
        if radicand < 0:
            raise ValueError("radicand must be non-negative")
        s, r = _extract_square(radicand)
        coeff = coeff * s
        if coeff == 0:
            r = 1
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "radicand", r)

    def __setattr__(self, *args):
        raise AttributeError("Surd is immutable")

    @classmethod
    def sqrt(cls, x) -> "Surd":
        """sqrt of a non-negative rational: sqrt(p/q) = sqrt(p*q)/q."""
        x = Q(x)
        if x < 0:
            raise ValueError("square root of negative rational")
        return cls(Q(1, x.denominator), x.numerator * x.denominator)

    @property
    def is_rational(self) -> bool:
        return self.radicand == 1

    def as_rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")
        return self.coeff

    def squared(self) -> Fraction:
        return self.coeff * self.coeff * self.radicand

    def __add__(self, other) -> "Surd":
        other = _as_surd(other)
        if self.coeff == 0:
            return other
        if other.coeff == 0:
            return self
        if self.radicand != other.radicand:
            raise RadicandMismatch(
                f"sqrt({self.radicand}) vs sqrt({other.radicand})")
        return Surd(self.coeff + other.coeff, self.radicand)

    def __sub__(self, other) -> "Surd":
        return self + (-_as_surd(other))

    def __neg__(self) -> "Surd":
        return Surd(-self.coeff, self.radicand)

    def __mul__(self, other) -> "Surd":
        other = _as_surd(other)
        return Surd(self.coeff * other.coeff, self.radicand * other.radicand)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Surd":
        other = _as_surd(other)
        if other.coeff == 0:
            raise ZeroDivisionError("division by zero Surd")
        # 1/(c*sqrt(r)) = sqrt(r)/(c*r)
        inv = Surd(Q(1, 1) / (other.coeff * other.radicand), other.radicand)
        return self * inv

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Surd(other)
        if not isinstance(other, Surd):
            return NotImplemented
        return self.coeff == other.coeff and self.radicand == other.radicand

    def __hash__(self):
        return hash((self.coeff, self.radicand))

    def __float__(self) -> float:
        return float(self.coeff) * math.sqrt(self.radicand)

    def __repr__(self):
        return f"Surd({self.coeff!r}, {self.radicand})"

    def __str__(self):
        if self.is_rational:
            return str(self.coeff)
        if self.coeff == 1:
            return f"sqrt({self.radicand})"
        if self.coeff == -1:
            return f"-sqrt({self.radicand})"
        if self.coeff.denominator == 1:
            return f"{self.coeff}*sqrt({self.radicand})"
        if self.coeff.numerator == 1:
            return f"sqrt({self.radicand})/{self.coeff.denominator}"
        if self.coeff.numerator == -1:
            return f"-sqrt({self.radicand})/{self.coeff.denominator}"
        return f"({self.coeff})*sqrt({self.radicand})"

    def to_json(self) -> dict:
        return {"coeff": scalar_to_str(self.coeff), "radicand": self.radicand}

    @classmethod
    def from_json(cls, obj: dict) -> "Surd":
        return cls(scalar_from_str(obj["coeff"]), obj["radicand"])


def _as_surd(x) -> Surd:
    if isinstance(x, Surd):
        return x
    if isinstance(x, (int, Fraction)):
        return Surd(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to Surd")


def surd_normalize(coeff, radicand: int) -> Surd:
    """Public normalizer; squarefree extraction happens in the constructor."""
    return Surd(coeff, radicand)


def surd_add(a: Surd, b: Surd) -> Surd:
    return a + b


# ---------------------------------------------------------------------------
# Exact linear algebra (small dense matrices over Q)
# ---------------------------------------------------------------------------

def _int_rows(vectors: Sequence[Vector]) -> list[list[int]]:
    """Clear denominators row-by-row; rank is unaffected by row scaling."""
    rows = []
    for v in vectors:
        lcm = 1
        for x in v:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        rows.append([int(x * lcm) for x in v])
    return rows


def linear_rank(vectors: Sequence[Vector]) -> int:
    """Rank of the span of the given vectors, exact."""
    if not vectors:
        return 0
    rows = _int_rows(vectors)
    m, n = len(rows), len(rows[0])
    rank = 0
    row = 0
    for col in range(n):
        piv = None
        for r in range(row, m):
            if rows[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        rows[row], rows[piv] = rows[piv], rows[row]
        pv = rows[row][col]
        for r in range(row + 1, m):
            f = rows[r][col]
            if f:
                rows[r] = [a * pv - b * f for a, b in zip(rows[r], rows[row])]
        rank += 1
        row += 1
        if row == m:
            break
    return rank


def affine_rank(points: Sequence[Vector]) -> int:
    """Dimension of the affine hull of a point set (0 for a single point)."""
    if len(points) <= 1:
        return 0
    p0 = points[0]
    return linear_rank([vsub(p, p0) for p in points[1:]])


def det_fraction(matrix: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction Gaussian elimination."""
    n = len(matrix)
    rows = [[Q(x) for x in row] for row in matrix]
    if any(len(r) != n for r in rows):
        raise DimensionMismatch("determinant needs a square matrix")
    det = Q(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if rows[r][col] != 0:
                piv = r
                break
        if piv is None:
            return Q(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        pv = rows[col][col]
        det *= pv
        for r in range(col + 1, n):
            f = rows[r][col] / pv
            if f:
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return det


def matrix_inverse(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact inverse via Gauss-Jordan; raises on singular input."""
    n = len(matrix)
    aug = [[Q(x) for x in row] + [Q(1) if i == j else Q(0) for j in range(n)]
           for i, row in enumerate(matrix)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if aug[r][col] != 0:
                piv = r
                break
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def solve_linear(matrix: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Solve a square exact system A x = b."""
    n = len(matrix)
    aug = [[Q(x) for x in row] + [Q(rhs[i])] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if aug[r][col] != 0:
                piv = r
                break
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def gram_matrix(vectors: Sequence[Vector]) -> list[list[Fraction]]:
    return [[dot(u, v) for v in vectors] for u in vectors]


def independent_subset(vectors: Sequence[Vector]) -> list[int]:
    """Indices of a maximal linearly independent subset, greedily in order."""
    chosen: list[int] = []
    basis: list[Vector] = []
    rank = 0
    for i, v in enumerate(vectors):
        if is_zero(v):
            continue
        if linear_rank(basis + [v]) > rank:
            chosen.append(i)
            basis.append(v)
            rank += 1
    return chosen
