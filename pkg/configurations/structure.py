"""Finite descriptions of certified configurations and their witness anchors.

A ``PeriodicStructure`` asserts that the value at x is a function of

* the class of x modulo N*Z^d (the background lattice exponent), and
* for every fiber group g whose lines ``S_g + Z*p_g`` contain x, the class
  of x modulo Z*(m_g*p_g).

Sums, scalings, translations, mirrors, polynomial products and pointwise
maps of such configurations keep the form, so the structure is propagated
through the combinator tree. Given a finite shape D, ``witness_anchors``
returns finitely many anchors at which every D-pattern of the configuration
occurs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import lcm
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from models.pydantic_models import ExactnessClass
from utils.exceptions import PreconditionError
from utils.lattice import (
    Vector,
    line_intersection,
    primitive,
    reduce_along,
    vec_add,
    vec_scale,
    vec_sub,
    zero_vector,
)


@dataclass(frozen=True)
class FiberGroup:
    """Lines S + Z*direction carrying an (multiple*direction)-periodic part."""

    direction: Vector
    multiple: int
    seeds: FrozenSet[Vector]

    @property
    def period(self) -> Vector:
        return vec_scale(self.multiple, self.direction)


@dataclass(frozen=True)
class PeriodicStructure:
    dimension: int
    lattice_exponent: int = 1
    representatives: Tuple[Vector, ...] = ()
    groups: Tuple[FiberGroup, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.representatives:
            object.__setattr__(self, "representatives", (zero_vector(self.dimension),))
        if self.groups and self.dimension < 2:
            raise PreconditionError("fiber groups need dimension >= 2")

    @property
    def exactness_class(self) -> ExactnessClass:
        if self.groups:
            return ExactnessClass.FIBER_PERIODIC_FINITE
        return ExactnessClass.FULL_LATTICE_PERIODIC

    # --- propagation through combinators ---

    def combine(self, other: "PeriodicStructure") -> "PeriodicStructure":
        # representatives of one lattice do not cover the cosets of another
        n = lcm(self.lattice_exponent, other.lattice_exponent)
        if other.lattice_exponent == 1:
            reps = self.representatives
        elif self.lattice_exponent == 1:
            reps = other.representatives
        else:
            reps = tuple(itertools.product(range(n), repeat=self.dimension))
        return PeriodicStructure(
            self.dimension, n, reps, _merge_groups(self.groups + other.groups)
        )

    def translate(self, v: Sequence[int]) -> "PeriodicStructure":
        groups = tuple(
            FiberGroup(g.direction, g.multiple, frozenset(vec_add(s, v) for s in g.seeds))
            for g in self.groups
        )
        return PeriodicStructure(
            self.dimension, self.lattice_exponent, self.representatives, groups
        )

    def mirror(self, axis: int) -> "PeriodicStructure":
        def flip(v):
            return tuple(-x if i == axis else x for i, x in enumerate(v))

        groups = tuple(
            FiberGroup(
                primitive(flip(g.direction))[0],
                g.multiple,
                frozenset(flip(s) for s in g.seeds),
            )
            for g in self.groups
        )
        reps = tuple(flip(r) for r in self.representatives)
        return PeriodicStructure(self.dimension, self.lattice_exponent, reps, groups)

    def widen(self, offsets: Iterable[Sequence[int]]) -> "PeriodicStructure":
        """Structure of f*c when supp(f) = offsets."""
        offsets = [tuple(o) for o in offsets]
        groups = tuple(
            FiberGroup(
                g.direction,
                g.multiple,
                frozenset(
                    reduce_along(vec_add(s, o), g.direction)
                    for s in g.seeds
                    for o in offsets
                ),
            )
            for g in self.groups
        )
        return PeriodicStructure(
            self.dimension, self.lattice_exponent, self.representatives, groups
        )


def fiber_structure(period: Sequence[int], seeds: Iterable[Sequence[int]]) -> PeriodicStructure:
    p, k = primitive(period)
    seeds = frozenset(reduce_along(tuple(s), p) for s in seeds)
    dimension = len(p)
    if not seeds:
        return PeriodicStructure(dimension)
    return PeriodicStructure(dimension, 1, (), (FiberGroup(p, abs(k), seeds),))


def _merge_groups(groups: Sequence[FiberGroup]) -> Tuple[FiberGroup, ...]:
    merged: Dict[Vector, FiberGroup] = {}
    for g in groups:
        if not g.seeds:
            continue
        prev = merged.get(g.direction)
        if prev is None:
            merged[g.direction] = g
        else:
            merged[g.direction] = FiberGroup(
                g.direction, lcm(prev.multiple, g.multiple), prev.seeds | g.seeds
            )
    return tuple(merged[k] for k in sorted(merged))


def _walking_direction(structure: PeriodicStructure) -> Vector:
    """A vector parallel to no fiber direction."""
    bound = 2 + max(
        (abs(x) for g in structure.groups for x in g.direction), default=0
    )
    return tuple(bound**i for i in range(structure.dimension))


def witness_anchors(structure: PeriodicStructure, shape: Sequence[Sequence[int]]) -> List[Vector]:
    """Anchors at which every shape-pattern of the configuration occurs.

    Anchors whose shape neighbourhood meets no fiber line are represented by
    one point per background class, found by walking along a direction
    parallel to no fiber. Anchors meeting exactly one group's lines are
    represented per (line, period class), walking along the group direction
    until the other groups are out of reach. Anchors meeting two groups lie
    in the finite pairwise intersections of the tubes and are all listed.
    """
    shape = [tuple(s) for s in shape]
    groups = structure.groups
    n = structure.lattice_exponent
    tubes = [
        frozenset(
            reduce_along(vec_sub(s, delta), g.direction)
            for s in g.seeds
            for delta in shape
        )
        for g in groups
    ]

    def in_tube(x: Vector, gi: int) -> bool:
        return reduce_along(x, groups[gi].direction) in tubes[gi]

    anchors: List[Vector] = []
    seen = set()

    def add(x: Vector):
        if x not in seen:
            seen.add(x)
            anchors.append(x)

    step = vec_scale(n, _walking_direction(structure))
    for rep in structure.representatives:
        x = tuple(rep)
        while any(in_tube(x, gi) for gi in range(len(groups))):
            x = vec_add(x, step)
        add(x)

    for gi, g in enumerate(groups):
        cycle = lcm(n, g.multiple)
        walk = vec_scale(cycle, g.direction)
        others = [h for h in range(len(groups)) if h != gi]
        for a in sorted(tubes[gi]):
            for q in range(cycle):
                x = vec_add(a, vec_scale(q, g.direction))
                while any(in_tube(x, h) for h in others):
                    x = vec_add(x, walk)
                add(x)

    for gi, hi in itertools.combinations(range(len(groups)), 2):
        p, q = groups[gi].direction, groups[hi].direction
        for a in sorted(tubes[gi]):
            for b in sorted(tubes[hi]):
                point = line_intersection(a, p, b, q)
                if point is not None:
                    add(point)
    return anchors
