from fractions import Fraction
from typing import Union

from dcolor.model import Graph
from dcolor.model.coloring import Coloring, PotentialKind, conflicted_edge_count, monochromatic_component_count

# hard limits on the state spaces the exact oracles will enumerate
MAX_COLORINGS = 2 * 10 ** 6
MAX_PERMUTATION_VERTICES = 8


class StateSpaceGuardError(ValueError):
    pass


class ExactValue:
    """
    An expectation held as a reduced rational. Values from the certified floating-point solver
    carry a non-zero error_bound on their absolute error.
    """

    __slots__ = ['value', 'error_bound']

    def __init__(self, value: Union[Fraction, int], error_bound: float = 0.0):
        self.value = Fraction(value)
        self.error_bound = error_bound

    def get_value(self) -> Fraction:
        return self.value

    def get_error_bound(self) -> float:
        return self.error_bound

    def is_exact(self) -> bool:
        return self.error_bound == 0.0

    def numerator(self) -> int:
        return self.value.numerator

    def denominator(self) -> int:
        return self.value.denominator

    def __float__(self):
        return float(self.value)

    def __eq__(self, other):
        if isinstance(other, ExactValue):
            return self.value == other.value and self.error_bound == other.error_bound
        return self.value == other

    def __lt__(self, other):
        return self.value < (other.value if isinstance(other, ExactValue) else other)

    def __le__(self, other):
        return self.value <= (other.value if isinstance(other, ExactValue) else other)

    def __gt__(self, other):
        return self.value > (other.value if isinstance(other, ExactValue) else other)

    def __ge__(self, other):
        return self.value >= (other.value if isinstance(other, ExactValue) else other)

    def __hash__(self):
        return hash((self.value, self.error_bound))

    def __str__(self):
        if self.is_exact():
            return f'{self.value.numerator}/{self.value.denominator} (≈ {float(self.value):.12g})'
        return f'≈ {float(self.value):.12g} (± {self.error_bound:.3g})'

    def __repr__(self):
        return f'ExactValue({self.value!r}, error_bound={self.error_bound!r})'


def harmonic(k: int) -> ExactValue:
    if k < 0:
        raise ValueError(f'Harmonic number needs k >= 0: {k}')
    return ExactValue(sum((Fraction(1, i) for i in range(1, k + 1)), Fraction(0)))


def expected_draws_to_collect(palette_size: int, k: int) -> ExactValue:
    """
    Expected uniform draws from palette_size coupons until k distinct ones are seen, first draw included.
    """
    if not 1 <= k <= palette_size:
        raise ValueError(f'Need 1 <= k <= D to collect k of D coupons: k={k}, D={palette_size}')
    return ExactValue(sum((Fraction(palette_size, palette_size - i) for i in range(k)), Fraction(0)))


def stopping_bound(g: Graph, c: Coloring, kind: PotentialKind = PotentialKind.MONOCHROMATIC_COMPONENTS) -> ExactValue:
    """
    Wald-style bound on expected recolorings from start c: distance of the potential from its proper
    value divided by the guaranteed per-step drift 1/D.
    """
    palette_size = c.get_palette_size()
    if kind == PotentialKind.MONOCHROMATIC_COMPONENTS:
        distance = g.get_n() - monochromatic_component_count(g, c)
    elif kind == PotentialKind.CONFLICTED_EDGES:
        distance = conflicted_edge_count(g, c)
    else:
        raise ValueError(f'No drift guarantee for potential {kind}')
    return ExactValue(distance * palette_size)


def worst_case_stopping_bound(g: Graph, palette_size: int) -> ExactValue:
    return ExactValue((g.get_n() - 1) * palette_size)


def check_coloring_space(n: int, palette_size: int, limit: int = MAX_COLORINGS):
    if palette_size ** n > limit:
        raise StateSpaceGuardError(f'{palette_size}^{n} colorings exceed the oracle guard of {limit}')
