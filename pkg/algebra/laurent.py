"""Sparse Laurent polynomials in d variables with exact rational coefficients.

A polynomial is an immutable mapping from exponent vectors to nonzero
``Fraction`` coefficients, stored in lexicographic exponent order.

>>> f = LaurentPoly(2, {(1, 0): 1, (0, 0): -1})
>>> str(f)
'x - 1'
>>> str(f * f)
'x^2 - 2*x + 1'
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

from sympy import isprime

from utils.exceptions import DimensionMismatchError, PreconditionError
from utils.lattice import (
    Vector,
    multiple_of,
    pivot_index,
    primitive,
    vec_add,
    vec_neg,
    vec_scale,
    vec_sub,
)

Scalar = Union[int, Fraction]


def variable_names(dimension: int) -> Tuple[str, ...]:
    """x, y, z for d <= 3, otherwise x1..xd."""
    if dimension <= 3:
        return ("x", "y", "z")[:dimension]
    return tuple(f"x{i + 1}" for i in range(dimension))


@dataclass(frozen=True)
class Direction:
    """Primitive vector whose first nonzero coordinate is positive."""

    vector: Vector

    def __post_init__(self):
        if not any(self.vector):
            raise PreconditionError("direction cannot be the zero vector")
        _, k = primitive(self.vector)
        if k != 1:
            raise PreconditionError(
                f"{self.vector} is not a canonical primitive vector"
            )

    @classmethod
    def of(cls, v: Sequence[int]) -> "Direction":
        """Direction spanned by the nonzero vector v."""
        p, _ = primitive(v)
        return cls(p)


@dataclass(frozen=True)
class BoundingBox:
    """Per-coordinate extent (max - min) of a support."""

    extents: Vector


@dataclass(frozen=True)
class LineInfo:
    """Canonical form f = X^offset * (a_0 + a_1 X^v + ... + a_n X^{nv})."""

    direction: Direction
    degree: int
    offset: Vector
    coefficients: Tuple[Fraction, ...]


class LaurentPoly:
    """Immutable sparse Laurent polynomial."""

    __slots__ = ("_dimension", "_terms", "_hash")

    def __init__(
        self,
        dimension: int,
        terms: Union[Mapping[Sequence[int], Scalar], Iterable[Tuple[Sequence[int], Scalar]]] = (),
    ):
        if dimension < 1:
            raise PreconditionError("dimension must be at least 1")
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: Dict[Vector, Fraction] = {}
        for exp, coeff in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != dimension:
                raise DimensionMismatchError(dimension, len(exp), "exponent vector")
            merged[exp] = merged.get(exp, Fraction(0)) + Fraction(coeff)
        self._dimension = dimension
        self._terms: Tuple[Tuple[Vector, Fraction], ...] = tuple(
            sorted((e, c) for e, c in merged.items() if c != 0)
        )
        self._hash = None

    # --- constructors ---

    @classmethod
    def zero(cls, dimension: int) -> "LaurentPoly":
        return cls(dimension)

    @classmethod
    def constant(cls, dimension: int, value: Scalar) -> "LaurentPoly":
        return cls(dimension, {(0,) * dimension: value})

    @classmethod
    def one(cls, dimension: int) -> "LaurentPoly":
        return cls.constant(dimension, 1)

    @classmethod
    def monomial(cls, exponent: Sequence[int], coefficient: Scalar = 1) -> "LaurentPoly":
        return cls(len(exponent), {tuple(exponent): coefficient})

    # --- accessors ---

    @property
    def dimension(self) -> int:
        return self._dimension

    @property
    def terms(self) -> Dict[Vector, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Vector, Fraction]]:
        return iter(self._terms)

    def coefficient(self, exponent: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exponent), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for _, c in self._terms)

    # --- ring operations ---

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.dimension != self.dimension:
                raise DimensionMismatchError(self.dimension, other.dimension)
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(self.dimension, other)
        return NotImplemented

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentPoly(self.dimension, list(self._terms) + list(other._terms))

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.dimension, [(e, -c) for e, c in self._terms])

    def __sub__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            return LaurentPoly(self.dimension, [(e, c * other) for e, c in self._terms])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentPoly(
            self.dimension,
            [
                (vec_add(e1, e2), c1 * c2)
                for e1, c1 in self._terms
                for e2, c2 in other._terms
            ],
        )

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        return power(self, k)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.constant(self.dimension, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._dimension == other._dimension and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._dimension, self._terms))
        return self._hash

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({to_text(self)!r}, d={self._dimension})"


# --- operations ---


def arith(kind: str, f: LaurentPoly, g: Union[LaurentPoly, Scalar, None] = None) -> LaurentPoly:
    """Ring operation by name: add, sub, mul, neg or scale."""
    if kind == "add":
        return f + g
    if kind == "sub":
        return f - g
    if kind == "mul":
        return f * g
    if kind == "neg":
        return -f
    if kind == "scale":
        if isinstance(f, LaurentPoly) and not isinstance(g, LaurentPoly):
            return f * g
        return g * f
    raise PreconditionError(f"unknown arithmetic kind {kind!r}")


def power(f: LaurentPoly, k: int) -> LaurentPoly:
    """f^k for k >= 0; negative powers only for monomials."""
    if k < 0:
        if not f.is_monomial():
            raise PreconditionError("only monomials have Laurent inverses")
        (exp, coeff), = f.items()
        return LaurentPoly.monomial(vec_scale(k, exp), Fraction(1) / coeff ** (-k))
    result = LaurentPoly.one(f.dimension)
    base = f
    while k:
        if k & 1:
            result = result * base
        base = base * base
        k >>= 1
    return result


def product(polys: Iterable[LaurentPoly], dimension: Optional[int] = None) -> LaurentPoly:
    polys = list(polys)
    if not polys:
        if dimension is None:
            raise PreconditionError("empty product needs a dimension")
        return LaurentPoly.one(dimension)
    out = polys[0]
    for p in polys[1:]:
        out = out * p
    return out


def substitute_power(f: LaurentPoly, n: int) -> LaurentPoly:
    """f(X^n): every exponent multiplied by n."""
    if n < 1:
        raise PreconditionError(f"substitution power must be positive, got {n}")
    return LaurentPoly(f.dimension, [(vec_scale(n, e), c) for e, c in f.items()])


def support(f: LaurentPoly) -> FrozenSet[Vector]:
    return frozenset(e for e, _ in f.items())


def bounding_box(f: LaurentPoly) -> BoundingBox:
    if f.is_zero():
        raise PreconditionError("the zero polynomial has no bounding box")
    exps = [e for e, _ in f.items()]
    return BoundingBox(
        tuple(
            max(e[i] for e in exps) - min(e[i] for e in exps)
            for i in range(f.dimension)
        )
    )


def coefficient_sum(f: LaurentPoly) -> Fraction:
    """sigma(f), the value of f at (1, ..., 1)."""
    return sum((c for _, c in f.items()), Fraction(0))


def monomial_shift(f: LaurentPoly, v: Sequence[int]) -> LaurentPoly:
    """X^v * f."""
    return LaurentPoly(f.dimension, [(vec_add(e, v), c) for e, c in f.items()])


def reflect(f: LaurentPoly) -> LaurentPoly:
    """f(X^-1)."""
    return LaurentPoly(f.dimension, [(vec_neg(e), c) for e, c in f.items()])


def difference_poly(v: Sequence[int], dimension: Optional[int] = None) -> LaurentPoly:
    """X^v - 1."""
    v = tuple(v)
    if dimension is not None and dimension != len(v):
        raise DimensionMismatchError(dimension, len(v), "difference vector")
    if not any(v):
        raise PreconditionError("difference polynomial of the zero vector is zero")
    return LaurentPoly(len(v), {v: 1, (0,) * len(v): -1})


def fits_in(f: LaurentPoly, shape: Iterable[Sequence[int]]) -> Optional[Vector]:
    """Translation t with t + (-supp f) inside shape, or None.

    Candidates align the lexicographically smallest point of -supp(f) with
    each shape point, tried in lexicographic order.
    """
    if f.is_zero():
        raise PreconditionError("the zero polynomial does not fit anywhere")
    cells = sorted({tuple(s) for s in shape})
    if not cells:
        raise PreconditionError("shape must be nonempty")
    cell_set = set(cells)
    negated = sorted(vec_neg(e) for e in support(f))
    corner = negated[0]
    for q in cells:
        t = vec_sub(q, corner)
        if all(vec_add(t, n) in cell_set for n in negated):
            return t
    return None


def line_info(f: LaurentPoly) -> Optional[LineInfo]:
    """Canonical line form of f, or None when the support is not a line.

    The offset is the lexicographically smallest support point, which is
    where a_0 sits because the direction is positively signed.
    """
    points = sorted(support(f))
    if len(points) < 2:
        return None
    base = points[0]
    direction, _ = primitive(vec_sub(points[1], base))
    steps = []
    for p in points[1:]:
        t = multiple_of(vec_sub(p, base), direction)
        if t is None:
            return None
        steps.append(t)
    degree = max(steps)
    coeffs = tuple(
        f.coefficient(vec_add(base, vec_scale(k, direction))) for k in range(degree + 1)
    )
    return LineInfo(Direction(direction), degree, base, coeffs)


def is_line_poly(f: LaurentPoly) -> bool:
    return line_info(f) is not None


def exact_div_line(f: LaurentPoly, g: LaurentPoly) -> Optional[LaurentPoly]:
    """Quotient q with q * g == f for a line polynomial g, or None.

    f is regrouped by cosets modulo Z*v (v the direction of g) and each coset
    is divided as a univariate polynomial in T = X^v.
    """
    info = line_info(g)
    if info is None:
        raise PreconditionError(f"{g} is not a line polynomial")
    if f.dimension != g.dimension:
        raise DimensionMismatchError(g.dimension, f.dimension)
    if f.is_zero():
        return LaurentPoly.zero(f.dimension)
    v = info.direction.vector
    k = pivot_index(v)
    cosets: Dict[Vector, Dict[int, Fraction]] = {}
    for exp, coeff in f.items():
        t = exp[k] // v[k]
        key = vec_sub(exp, vec_scale(t, v))
        cosets.setdefault(key, {})[t] = coeff

    divisor = list(info.coefficients)
    n = info.degree
    quotient_terms = []
    for key, series in cosets.items():
        low = min(series)
        high = max(series)
        # dividend coefficients from T^low upward
        rem = [series.get(low + i, Fraction(0)) for i in range(high - low + 1)]
        if len(rem) < n + 1:
            return None
        quot = [Fraction(0)] * (len(rem) - n)
        for i in range(len(rem) - n - 1, -1, -1):
            c = rem[i + n] / divisor[n]
            quot[i] = c
            if c:
                for j in range(n + 1):
                    rem[i + j] -= c * divisor[j]
        if any(rem):
            return None
        base = vec_sub(key, info.offset)
        for i, c in enumerate(quot):
            if c:
                quotient_terms.append((vec_add(base, vec_scale(low + i, v)), c))
    return LaurentPoly(f.dimension, quotient_terms)


def frobenius_residue(f: LaurentPoly, p: int) -> LaurentPoly:
    """(f^p - f(X^p)) with coefficients reduced into [0, p); always zero."""
    if not f.is_integral():
        raise PreconditionError("Frobenius residue needs integer coefficients")
    if not isprime(p):
        raise PreconditionError(f"{p} is not prime")
    diff = power(f, p) - substitute_power(f, p)
    return LaurentPoly(f.dimension, [(e, int(c) % p) for e, c in diff.items()])


# --- serialization ---


def _format_scalar(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_monomial(exp: Vector, names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, exp):
        if e == 1:
            parts.append(name)
        elif e != 0:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def to_text(f: LaurentPoly) -> str:
    """Canonical text, terms in decreasing lexicographic exponent order."""
    if f.is_zero():
        return "0"
    names = variable_names(f.dimension)
    pieces = []
    for exp, coeff in reversed(list(f.items())):
        mono = _format_monomial(exp, names)
        if not mono:
            term = _format_scalar(coeff)
        elif coeff == 1:
            term = mono
        elif coeff == -1:
            term = f"-{mono}"
        else:
            term = f"{_format_scalar(coeff)}*{mono}"
        pieces.append(term)
    out = pieces[0]
    for term in pieces[1:]:
        out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
    return out
