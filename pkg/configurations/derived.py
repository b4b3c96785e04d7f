"""Combinators over configurations: sums, shifts, mirrors, products, binarization."""

from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from algebra.laurent import LaurentPoly
from configurations.base import Configuration
from configurations.structure import PeriodicStructure
from logger.logging import get_logger
from utils.exceptions import DimensionMismatchError, PreconditionError
from utils.lattice import HermiteLattice, Vector, vec_neg, vec_sub
from utils.regions import Box

logger = get_logger(__name__)

KINDS = ("sum", "difference", "scale", "translate", "mirror", "poly_apply", "binarize")


class DerivedConfig(Configuration):
    """A node in a combinator tree of configurations.

    ``translate(v)`` reads the child at ``w - v``; ``mirror(k)`` negates
    coordinate k; ``poly_apply(f)`` is the formal product
    (f c)_v = sum_u f_u c_{v-u}.
    """

    def __init__(
        self,
        kind: str,
        children: Sequence[Configuration],
        *,
        factor: int = 1,
        vector: Optional[Sequence[int]] = None,
        axis: int = 0,
        poly: Optional[LaurentPoly] = None,
        ones: Iterable[int] = (),
        alphabet: Optional[Iterable[int]] = None,
    ):
        if kind not in KINDS:
            raise PreconditionError(f"unknown combinator {kind!r}")
        if not children:
            raise PreconditionError(f"{kind} needs at least one operand")
        dimension = children[0].dimension
        for child in children[1:]:
            if child.dimension != dimension:
                raise DimensionMismatchError(dimension, child.dimension, f"{kind} operand")
        self.node = kind
        self.children: Tuple[Configuration, ...] = tuple(children)
        self.factor = int(factor)
        self.vector: Optional[Vector] = None
        self.axis = axis
        self.poly = poly
        self.ones = frozenset(int(o) for o in ones)

        if kind == "translate":
            if vector is None or len(vector) != dimension:
                raise DimensionMismatchError(
                    dimension, 0 if vector is None else len(vector), "translation"
                )
            self.vector = tuple(int(x) for x in vector)
        elif kind == "mirror":
            if not 0 <= axis < dimension:
                raise PreconditionError(f"axis {axis} outside dimension {dimension}")
        elif kind == "poly_apply":
            if poly is None:
                raise PreconditionError("poly_apply needs a polynomial")
            if poly.dimension != dimension:
                raise DimensionMismatchError(dimension, poly.dimension, "polynomial")
            if not poly.is_integral():
                raise PreconditionError("poly_apply needs integer coefficients")
            self.terms = [(e, int(c)) for e, c in poly.items()]
        elif kind == "binarize":
            if children[0].alphabet is None:
                raise PreconditionError("binarize needs a declared finite alphabet")
        elif kind == "difference" and len(children) != 2:
            raise PreconditionError("difference takes exactly two operands")

        if alphabet is None:
            alphabet = self._derive_alphabet()
        super().__init__(dimension, alphabet)

    @property
    def kind(self) -> str:
        return f"DerivedConfig[{self.node}]"

    def _derive_alphabet(self):
        alphabets = [c.alphabet for c in self.children]
        if self.node == "binarize":
            return {1 if a in self.ones else 0 for a in alphabets[0]}
        if any(a is None for a in alphabets):
            return None
        if self.node in ("translate", "mirror"):
            return alphabets[0]
        if self.node == "scale":
            return {self.factor * a for a in alphabets[0]}
        if self.node == "difference":
            return {a - b for a in alphabets[0] for b in alphabets[1]}
        if self.node == "sum":
            values = {0}
            for alpha in alphabets:
                values = {v + a for v in values for a in alpha}
            return values
        return None

    # --- pointwise ---

    def _mirror_point(self, v: Sequence[int]) -> Vector:
        return tuple(-x if i == self.axis else x for i, x in enumerate(v))

    def _value(self, v: Vector) -> int:
        node = self.node
        if node == "sum":
            return sum(c._value(v) for c in self.children)
        if node == "difference":
            return self.children[0]._value(v) - self.children[1]._value(v)
        if node == "scale":
            return self.factor * self.children[0]._value(v)
        if node == "translate":
            return self.children[0]._value(vec_sub(v, self.vector))
        if node == "mirror":
            return self.children[0]._value(self._mirror_point(v))
        if node == "binarize":
            return 1 if self.children[0]._value(v) in self.ones else 0
        child = self.children[0]
        return sum(coeff * child._value(vec_sub(v, e)) for e, coeff in self.terms)

    # --- windows ---

    def _window(self, box: Box) -> np.ndarray:
        node = self.node
        if node == "sum":
            out = self.children[0]._window(box)
            for child in self.children[1:]:
                out = out + child._window(box)
            return out
        if node == "difference":
            return self.children[0]._window(box) - self.children[1]._window(box)
        if node == "scale":
            return self.factor * self.children[0]._window(box)
        if node == "translate":
            return self.children[0]._window(box.translate(vec_neg(self.vector)))
        if node == "mirror":
            k = self.axis
            lo = list(box.lo)
            hi = list(box.hi)
            lo[k], hi[k] = -box.hi[k], -box.lo[k]
            inner = self.children[0]._window(Box(tuple(lo), tuple(hi)))
            return np.flip(inner, axis=k).copy()
        if node == "binarize":
            inner = self.children[0]._window(box)
            return np.vectorize(lambda x: 1 if x in self.ones else 0, otypes=[object])(inner)
        return self._poly_window(box)

    def _poly_window(self, box: Box) -> np.ndarray:
        if not self.terms:
            return np.zeros(box.shape, dtype=object)
        exps = [e for e, _ in self.terms]
        d = self.dimension
        top = tuple(max(e[i] for e in exps) for i in range(d))
        bottom = tuple(min(e[i] for e in exps) for i in range(d))
        big = self.children[0]._window(Box(vec_sub(box.lo, top), vec_sub(box.hi, bottom)))
        out = np.zeros(box.shape, dtype=object)
        for e, coeff in self.terms:
            start = vec_sub(top, e)
            sl = tuple(slice(s, s + n) for s, n in zip(start, box.shape))
            out = out + coeff * big[sl]
        return out

    # --- certification ---

    def structure(self) -> Optional[PeriodicStructure]:
        inner = [c.structure() for c in self.children]
        if any(s is None for s in inner):
            return None
        node = self.node
        if node in ("sum", "difference"):
            out = inner[0]
            for s in inner[1:]:
                out = out.combine(s)
            return out
        if node in ("scale", "binarize"):
            return inner[0]
        if node == "translate":
            return inner[0].translate(self.vector)
        if node == "mirror":
            return inner[0].mirror(self.axis)
        return inner[0].widen(e for e, _ in self.terms)


# --- constructors ---


def sum_of(*configs: Configuration, alphabet=None) -> DerivedConfig:
    return DerivedConfig("sum", configs, alphabet=alphabet)


def difference(a: Configuration, b: Configuration, alphabet=None) -> DerivedConfig:
    return DerivedConfig("difference", (a, b), alphabet=alphabet)


def scale(k: int, c: Configuration) -> DerivedConfig:
    return DerivedConfig("scale", (c,), factor=k)


def translate(c: Configuration, v: Sequence[int]) -> DerivedConfig:
    return DerivedConfig("translate", (c,), vector=v)


def mirror(c: Configuration, axis: int) -> DerivedConfig:
    return DerivedConfig("mirror", (c,), axis=axis)


def poly_apply(f: LaurentPoly, c: Configuration) -> DerivedConfig:
    """The formal product f*c."""
    return DerivedConfig("poly_apply", (c,), poly=f)


def binarize(c: Configuration, ones: Iterable[int]) -> DerivedConfig:
    return DerivedConfig("binarize", (c,), ones=ones)


def transform(kind: str, *args, alphabet=None) -> DerivedConfig:
    """Pointwise combinator by name.

    ``transform("sum", c1, c2, ...)``, ``transform("difference", a, b)``,
    ``transform("scale", k, c)``, ``transform("translate", c, v)``,
    ``transform("mirror", c, axis)``.
    """
    if kind == "sum":
        return sum_of(*args, alphabet=alphabet)
    if kind == "difference":
        return difference(*args, alphabet=alphabet)
    if kind == "scale":
        return scale(*args)
    if kind == "translate":
        return translate(*args)
    if kind == "mirror":
        return mirror(*args)
    raise PreconditionError(f"unknown transform {kind!r}")


class SublatticeMaskConfig(Configuration):
    """The child on the kept cosets of a lattice, zero elsewhere."""

    def __init__(
        self,
        child: Configuration,
        basis: Sequence[Sequence[int]],
        keep: Iterable[Sequence[int]],
    ):
        self.child = child
        self.lattice = HermiteLattice(basis)
        if self.lattice.dimension != child.dimension:
            raise DimensionMismatchError(child.dimension, self.lattice.dimension, "lattice")
        self.keep = frozenset(self.lattice.reduce(r) for r in keep)
        alphabet = None if child.alphabet is None else set(child.alphabet) | {0}
        super().__init__(child.dimension, alphabet)

    def _value(self, v: Vector) -> int:
        if self.lattice.reduce(v) not in self.keep:
            return 0
        return self.child._value(v)

    def structure(self) -> Optional[PeriodicStructure]:
        inner = self.child.structure()
        if inner is None:
            return None
        mask = PeriodicStructure(
            self.dimension, self.lattice.index, tuple(self.lattice.representatives())
        )
        return inner.combine(mask)
