"""Built-in configurations, polynomials and tiles used by the CLI, API and tests."""

from typing import Callable, Dict, List, Tuple

from algebra.laurent import LaurentPoly, difference_poly, product
from configurations.base import Configuration
from configurations.beatty import BeattyConfig, QuadraticIrrational
from configurations.derived import difference, sum_of
from configurations.periodic import FiberPeriodicConfig, FullPeriodicConfig, indicator_lattice
from utils.exceptions import PreconditionError
from utils.lattice import Vector

DEFAULT_LINE_OFFSET = 4


def two_lines_components(n: int = DEFAULT_LINE_OFFSET) -> Tuple[FiberPeriodicConfig, FiberPeriodicConfig]:
    """The x-axis and the line {(0, n, k)} in Z^3, each as a periodic configuration."""
    if n < 1:
        raise PreconditionError("line offset n must be positive")
    first = FiberPeriodicConfig((1, 0, 0), {(0, 0, 0): 1})
    second = FiberPeriodicConfig((0, 0, 1), {(0, n, 0): 1})
    return first, second


def two_lines(n: int = DEFAULT_LINE_OFFSET) -> Configuration:
    """c(i,0,0) = c(0,n,k) = 1, zero elsewhere; P_c(n-cube) = 2n^2 + 1."""
    first, second = two_lines_components(n)
    return sum_of(first, second, alphabet=(0, 1))


def two_lines_annihilator() -> LaurentPoly:
    return product([difference_poly((1, 0, 0)), difference_poly((0, 0, 1))])


def golden_components() -> Tuple[BeattyConfig, BeattyConfig, BeattyConfig]:
    """floor(i*phi), floor(j*phi) and floor((i+j)*phi)."""
    phi = QuadraticIrrational.golden()
    return (
        BeattyConfig(phi, (1, 0)),
        BeattyConfig(phi, (0, 1)),
        BeattyConfig(phi, (1, 1)),
    )


def golden_difference() -> Configuration:
    """floor((i+j)phi) - floor(i phi) - floor(j phi), a binary non-periodic configuration."""
    rows, cols, diagonal = golden_components()
    return difference(diagonal, sum_of(rows, cols), alphabet=(0, 1))


def golden_annihilator() -> LaurentPoly:
    return product(
        [difference_poly((1, 0)), difference_poly((0, 1)), difference_poly((1, -1))]
    )


def golden_word(length: int) -> List[int]:
    """floor((k+1)phi) - floor(k phi) for k = 0..length-1 (a Sturmian word)."""
    rows = golden_components()[0]
    return [rows.coefficient((k + 1, 0)) - rows.coefficient((k, 0)) for k in range(length)]


def sloped_line(direction: Vector = (2, 1)) -> FiberPeriodicConfig:
    """Indicator of the single line Z*direction."""
    return FiberPeriodicConfig(direction, {(0,) * len(direction): 1})


def striped_fiber(period: int = 2) -> FiberPeriodicConfig:
    """Ones at (period*k, 0): periodic along (period, 0) only."""
    return FiberPeriodicConfig((period, 0), {(0, 0): 1})


def split_demo() -> Tuple[Configuration, FiberPeriodicConfig, FiberPeriodicConfig]:
    """Binary disjoint sum of a (4,0)-periodic part and a (0,2)-periodic part."""
    horizontal = FiberPeriodicConfig((4, 0), {(0, 1): 1, (1, 1): 1, (1, 3): 1})
    vertical = FiberPeriodicConfig((0, 2), {(2, 0): 1, (-3, 0): 1})
    return sum_of(horizontal, vertical, alphabet=(0, 1)), horizontal, vertical


def checkerboard() -> FullPeriodicConfig:
    return FullPeriodicConfig.from_function([(2, 0), (0, 2)], lambda r: (r[0] + r[1]) % 2)


def t_shape() -> Tuple[Vector, ...]:
    """Four-cell T tetromino."""
    return ((0, 1), (1, 0), (1, 1), (2, 1))


def interval_tile(p: int = 3) -> Tuple[Tuple[Vector, ...], FullPeriodicConfig]:
    """D = {0, .., p-1} and its co-tiler pZ."""
    return tuple((i,) for i in range(p)), indicator_lattice([(p,)])


def corner_tile() -> Tuple[Tuple[Vector, ...], FullPeriodicConfig]:
    """D = {(0,0),(1,0),(0,1)} with co-tiler {(x,y): x - y = 0 mod 3}."""
    return ((0, 0), (1, 0), (0, 1)), indicator_lattice([(1, 1), (3, 0)])


CATALOG: Dict[str, Callable[[], Configuration]] = {
    "two-lines": two_lines,
    "two-lines-x": lambda: two_lines_components()[0],
    "two-lines-z": lambda: two_lines_components()[1],
    "golden": golden_difference,
    "golden-rows": lambda: golden_components()[0],
    "golden-cols": lambda: golden_components()[1],
    "golden-diagonal": lambda: golden_components()[2],
    "sloped-line": sloped_line,
    "striped-fiber": striped_fiber,
    "split-demo": lambda: split_demo()[0],
    "checkerboard": checkerboard,
}


def names() -> List[str]:
    return sorted(CATALOG)


def build(name: str, n: int = None) -> Configuration:
    """Built-in configuration by name; n sets the line offset of the two-lines family."""
    if name.startswith("two-lines") and n is not None:
        first, second = two_lines_components(n)
        return {"two-lines": two_lines(n), "two-lines-x": first, "two-lines-z": second}[name]
    if name not in CATALOG:
        raise PreconditionError(f"unknown example {name!r}; choose from {', '.join(names())}")
    return CATALOG[name]()
