"""Unit tests for integer vector and lattice helpers."""

from fractions import Fraction

import pytest

from utils.exceptions import PreconditionError
from utils.lattice import (
    HermiteLattice,
    canonical_sign,
    hermite_normal_form,
    integer_nullspace,
    line_intersection,
    multiple_of,
    plane_coordinates,
    primitive,
    reduce_along,
    sublattices_of_index,
    vectors_by_norm,
)
from utils.regions import Box, anchors_inside, hypercube, parse_region, rectangle


class TestVectors:
    def test_primitive(self):
        assert primitive((-2, 4)) == ((1, -2), -2)
        assert primitive((3, 6)) == ((1, 2), 3)
        with pytest.raises(PreconditionError):
            primitive((0, 0))

    def test_canonical_sign(self):
        assert canonical_sign((0, -1, 2)) == (0, 1, -2)
        assert canonical_sign((0, 0)) == (0, 0)

    def test_multiple_of(self):
        assert multiple_of((3, 6), (1, 2)) == 3
        assert multiple_of((3, 5), (1, 2)) is None

    def test_reduce_along(self):
        assert reduce_along((5, 3), (1, 1)) == (0, -2)
        assert reduce_along((5, 3), (2, 1)) == (1, 1)

    def test_vectors_by_norm(self):
        assert list(vectors_by_norm(2, 1)) == [(0, 1), (1, -1), (1, 0), (1, 1)]
        assert len(list(vectors_by_norm(2, 1, canonical=False))) == 8
        assert len(list(vectors_by_norm(3, 2))) == (5**3 - 1) // 2


class TestHermite:
    def test_diagonal_basis(self):
        rows, pivots = hermite_normal_form([(2, 0), (0, 3)])
        assert rows == [(2, 0), (0, 3)]
        assert pivots == [0, 1]

    def test_skew_lattice(self):
        lattice = HermiteLattice([(1, 1), (3, 0)])
        assert lattice.index == 3
        assert lattice.representatives() == [(0, 0), (0, 1), (0, 2)]
        assert lattice.contains((3, 0))
        assert lattice.contains((-2, -2))
        assert not lattice.contains((1, 0))
        assert lattice.reduce((2, 0)) == lattice.reduce((0, 1))

    def test_singular_basis_rejected(self):
        with pytest.raises(PreconditionError):
            HermiteLattice([(1, 2), (2, 4)])

    @pytest.mark.parametrize("d,n,count", [(1, 6, 1), (2, 3, 4), (2, 4, 7), (3, 2, 7)])
    def test_sublattices_of_index(self, d, n, count):
        bases = list(sublattices_of_index(d, n))
        assert len(bases) == count
        lattices = [HermiteLattice(b) for b in bases]
        assert all(lattice.index == n for lattice in lattices)
        assert len({lattice.hnf for lattice in lattices}) == count


class TestPlaneGeometry:
    def test_plane_coordinates(self):
        assert plane_coordinates((3, 2), (1, 0), (0, 1)) == ((0, 0), 3, 2)
        z, a, b = plane_coordinates((5, -3), (2, 1), (0, 1))
        assert (z[0] + 2 * a, z[1] + a + b) == (5, -3)

    def test_parallel_rejected(self):
        with pytest.raises(PreconditionError):
            plane_coordinates((1, 1), (1, 0), (2, 0))

    def test_line_intersection(self):
        assert line_intersection((0, 0), (1, 0), (3, 5), (0, 1)) == (3, 0)
        assert line_intersection((0, 0), (2, 0), (1, 5), (0, 1)) is None

    def test_integer_nullspace(self):
        matrix = [[Fraction(1), Fraction(1), Fraction(0)], [Fraction(0), Fraction(2), Fraction(-1)]]
        basis = integer_nullspace(matrix)
        assert len(basis) == 1
        v = basis[0]
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in matrix)
        assert v == (1, -1, -2)


class TestRegions:
    def test_box(self):
        box = Box.cube(2, -1, 1)
        assert box.shape == (3, 3)
        assert box.size == 9
        assert list(box.points())[0] == (-1, -1)
        assert box.to_text() == "-1..1,-1..1"

    def test_parse_region(self):
        assert parse_region("-2..3", 2) == Box((-2, -2), (3, 3))
        assert parse_region("0..1,5..6", 2) == Box((0, 5), (1, 6))
        with pytest.raises(PreconditionError):
            parse_region("0-1", 1)

    def test_empty_box_rejected(self):
        with pytest.raises(PreconditionError):
            Box((1,), (0,))

    def test_shapes(self):
        assert len(rectangle(2, 3)) == 6
        assert len(hypercube(2, 3)) == 8
        assert anchors_inside(Box.cube(2, 0, 9), rectangle(3, 3)) == Box((0, 0), (7, 7))
