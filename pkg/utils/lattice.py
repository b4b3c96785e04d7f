"""Integer lattice helpers: vectors, Hermite reduction, exact kernels."""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import reduce
from math import floor, gcd, lcm
from typing import Iterator, List, Optional, Sequence, Tuple

from utils.exceptions import DimensionMismatchError, PreconditionError

Vector = Tuple[int, ...]


def vec_add(a: Sequence[int], b: Sequence[int]) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Sequence[int], b: Sequence[int]) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(k: int, a: Sequence[int]) -> Vector:
    return tuple(k * x for x in a)


def vec_neg(a: Sequence[int]) -> Vector:
    return tuple(-x for x in a)


def zero_vector(d: int) -> Vector:
    return (0,) * d


def unit_vector(d: int, axis: int) -> Vector:
    return tuple(1 if i == axis else 0 for i in range(d))


def chebyshev_norm(v: Sequence[int]) -> int:
    return max((abs(x) for x in v), default=0)


def content(v: Sequence[int]) -> int:
    """gcd of the absolute values of the coordinates (0 for the zero vector)."""
    return reduce(gcd, (abs(x) for x in v), 0)


def pivot_index(v: Sequence[int]) -> int:
    """Index of the first nonzero coordinate."""
    for i, x in enumerate(v):
        if x != 0:
            return i
    raise PreconditionError("zero vector has no pivot")


def canonical_sign(v: Sequence[int]) -> Vector:
    """Return v or -v, whichever has a positive first nonzero coordinate."""
    v = tuple(v)
    if not any(v):
        return v
    return v if v[pivot_index(v)] > 0 else vec_neg(v)


def primitive(v: Sequence[int]) -> Tuple[Vector, int]:
    """Split v = k * p with p primitive and canonically signed."""
    v = tuple(v)
    g = content(v)
    if g == 0:
        raise PreconditionError("zero vector has no direction")
    p = tuple(x // g for x in v)
    if p[pivot_index(p)] < 0:
        return vec_neg(p), -g
    return p, g


def multiple_of(y: Sequence[int], p: Sequence[int]) -> Optional[int]:
    """Return t with y = t * p, or None when y is not an integer multiple of p."""
    k = pivot_index(p)
    if y[k] % p[k] != 0:
        return None
    t = y[k] // p[k]
    if any(yi != t * pi for yi, pi in zip(y, p)):
        return None
    return t


def reduce_along(x: Sequence[int], p: Sequence[int]) -> Vector:
    """Canonical representative of x modulo Z*p (pivot coordinate in [0, |p_k|))."""
    k = pivot_index(p)
    sign = 1 if p[k] > 0 else -1
    q = (x[k] // abs(p[k])) * sign
    return vec_sub(x, vec_scale(q, p))


def vectors_by_norm(d: int, bound: int, canonical: bool = True) -> Iterator[Vector]:
    """Nonzero vectors with Chebyshev norm <= bound, by norm then lexicographic.

    With canonical=True only one of v, -v is produced (the one whose first
    nonzero coordinate is positive).
    """
    for norm in range(1, bound + 1):
        shell = [
            v
            for v in itertools.product(range(-norm, norm + 1), repeat=d)
            if chebyshev_norm(v) == norm
        ]
        for v in sorted(shell):
            if canonical and canonical_sign(v) != v:
                continue
            yield v


# --- Hermite normal form ---


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> Tuple[List[Vector], List[int]]:
    """Row-style Hermite normal form of an integer matrix.

    Returns the nonzero HNF rows and their pivot columns. Pivots are positive
    and the entries above each pivot are reduced into [0, pivot).
    """
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        if r >= len(m):
            break
        # Euclid on the column until a single nonzero entry remains at row r
        while True:
            nonzero = [i for i in range(r, len(m)) if m[i][col] != 0]
            if not nonzero:
                break
            best = min(nonzero, key=lambda i: (abs(m[i][col]), i))
            m[r], m[best] = m[best], m[r]
            done = True
            for i in range(r + 1, len(m)):
                if m[i][col] != 0:
                    q = m[i][col] // m[r][col]
                    m[i] = [a - q * b for a, b in zip(m[i], m[r])]
                    if m[i][col] != 0:
                        done = False
            if done:
                break
        if all(m[i][col] == 0 for i in range(r, len(m))):
            continue
        if m[r][col] < 0:
            m[r] = [-a for a in m[r]]
        for i in range(r):
            q = m[i][col] // m[r][col]
            m[i] = [a - q * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    return [tuple(row) for row in m[:r]], pivots


class HermiteLattice:
    """Full-rank sublattice of Z^d addressed through its Hermite normal form."""

    def __init__(self, basis: Sequence[Sequence[int]]):
        basis = [tuple(int(x) for x in b) for b in basis]
        if not basis:
            raise PreconditionError("lattice basis is empty")
        d = len(basis[0])
        for b in basis:
            if len(b) != d:
                raise DimensionMismatchError(d, len(b), "lattice basis vector")
        hnf, pivots = hermite_normal_form(basis)
        if len(hnf) != d or len(basis) != d:
            raise PreconditionError(
                f"lattice basis must have {d} linearly independent vectors"
            )
        self.basis: Tuple[Vector, ...] = tuple(basis)
        self.dimension = d
        self.hnf: Tuple[Vector, ...] = tuple(hnf)
        self.pivots = tuple(pivots)

    @property
    def index(self) -> int:
        """|det| of the basis, the number of cosets."""
        out = 1
        for row, p in zip(self.hnf, self.pivots):
            out *= row[p]
        return out

    @property
    def diagonal(self) -> Vector:
        return tuple(row[p] for row, p in zip(self.hnf, self.pivots))

    def reduce(self, x: Sequence[int]) -> Vector:
        """Canonical coset representative: coordinate i lands in [0, H_ii)."""
        x = list(x)
        for row, p in zip(self.hnf, self.pivots):
            q = x[p] // row[p]
            if q:
                x = [a - q * b for a, b in zip(x, row)]
        return tuple(x)

    def contains(self, x: Sequence[int]) -> bool:
        return not any(self.reduce(x))

    def representatives(self) -> List[Vector]:
        """All canonical coset representatives in lexicographic order."""
        return [tuple(v) for v in itertools.product(*(range(h) for h in self.diagonal))]


def _ordered_factorizations(n: int, d: int) -> Iterator[Tuple[int, ...]]:
    if d == 1:
        yield (n,)
        return
    for k in range(1, n + 1):
        if n % k == 0:
            for rest in _ordered_factorizations(n // k, d - 1):
                yield (k,) + rest


def sublattices_of_index(d: int, n: int) -> Iterator[Tuple[Vector, ...]]:
    """Every sublattice of Z^d with n cosets, once each, as its Hermite basis.

    Row i has pivot h_i at column i and entries in [0, h_j) over later pivots.

    >>> len(list(sublattices_of_index(2, 3)))
    4
    """
    if d < 1 or n < 1:
        raise PreconditionError("dimension and index must be positive")
    for diagonal in _ordered_factorizations(n, d):
        free = [(i, j) for i in range(d) for j in range(i + 1, d)]
        for values in itertools.product(*(range(diagonal[j]) for _, j in free)):
            rows = [[0] * d for _ in range(d)]
            for i in range(d):
                rows[i][i] = diagonal[i]
            for (i, j), h in zip(free, values):
                rows[i][j] = h
            yield tuple(tuple(r) for r in rows)


# --- two-dimensional sublattice coordinates ---


def plane_coordinates(
    x: Sequence[int], u: Sequence[int], v: Sequence[int]
) -> Tuple[Vector, int, int]:
    """Write x = z + a*u + b*v with z the canonical anchor of x's coset.

    The anchor is x - floor(s)*u - floor(t)*v where (s, t) solve the system
    on the first coordinate pair with a nonzero 2x2 minor of [u v]. In two
    dimensions this is the unique point of the coset inside the half-open
    parallelogram spanned by u and v at the origin.
    """
    d = len(u)
    for i in range(d):
        for j in range(i + 1, d):
            det = u[i] * v[j] - u[j] * v[i]
            if det != 0:
                s = Fraction(x[i] * v[j] - x[j] * v[i], det)
                t = Fraction(u[i] * x[j] - u[j] * x[i], det)
                a, b = floor(s), floor(t)
                z = tuple(xi - a * ui - b * vi for xi, ui, vi in zip(x, u, v))
                return z, a, b
    raise PreconditionError(f"vectors {tuple(u)} and {tuple(v)} are parallel")


def line_intersection(
    a: Sequence[int], p: Sequence[int], b: Sequence[int], q: Sequence[int]
) -> Optional[Vector]:
    """Integer point on both a + Z*p and b + Z*q (non-parallel p, q), if any."""
    d = len(p)
    for i in range(d):
        for j in range(i + 1, d):
            det = p[i] * (-q[j]) - p[j] * (-q[i])
            if det == 0:
                continue
            ri, rj = b[i] - a[i], b[j] - a[j]
            s_num = ri * (-q[j]) - rj * (-q[i])
            if s_num % det != 0:
                return None
            s = s_num // det
            point = tuple(ai + s * pi for ai, pi in zip(a, p))
            diff = vec_sub(point, b)
            return point if multiple_of(diff, q) is not None else None
    raise PreconditionError(f"lines along {tuple(p)} and {tuple(q)} are parallel")


# --- exact kernels ---


def integral_content_free(vector: Sequence[Fraction]) -> Vector:
    """Scale a rational vector to integers with gcd 1 and positive leading entry."""
    fracs = [Fraction(x) for x in vector]
    den = reduce(lcm, (f.denominator for f in fracs), 1)
    ints = [int(f * den) for f in fracs]
    g = content(ints)
    if g == 0:
        return tuple(ints)
    ints = [x // g for x in ints]
    return canonical_sign(ints)


def integer_nullspace(matrix: Sequence[Sequence[Fraction]]) -> List[Vector]:
    """Basis of {x : M x = 0} by fraction-free elimination.

    Rows are cleared of denominators, eliminated with gcd-scaled row
    combinations and kept content-free. Pivots are taken from the first row
    (by position) holding a nonzero entry in the current column. One basis
    vector per free column, in column order, each integral and content-free
    with positive leading coefficient.
    """
    rows: List[List[int]] = []
    ncols = 0
    for row in matrix:
        fr = [Fraction(x) for x in row]
        ncols = len(fr)
        den = reduce(lcm, (f.denominator for f in fr), 1)
        ints = [int(f * den) for f in fr]
        if any(ints):
            rows.append(_content_reduce(ints))
    if ncols == 0:
        ncols = len(matrix[0]) if matrix else 0

    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        for i in range(len(rows)):
            if i == r or rows[i][col] == 0:
                continue
            g = gcd(rows[r][col], rows[i][col])
            alpha = rows[i][col] // g
            beta = rows[r][col] // g
            rows[i] = _content_reduce(
                [beta * a - alpha * b for a, b in zip(rows[i], rows[r])]
            )
        pivots.append(col)
        r += 1
        if r == len(rows):
            break

    free = [c for c in range(ncols) if c not in pivots]
    basis: List[Vector] = []
    for f in free:
        scale = reduce(lcm, (abs(rows[i][p]) for i, p in enumerate(pivots)), 1)
        x = [0] * ncols
        x[f] = scale
        for i, p in enumerate(pivots):
            x[p] = -scale * rows[i][f] // rows[i][p]
        basis.append(integral_content_free(x))
    return basis


def _content_reduce(row: List[int]) -> List[int]:
    g = content(row)
    return [x // g for x in row] if g > 1 else row
