"""Random strings and boundary conditions shared by the tests."""

import random
from fractions import Fraction

from hypothesis import strategies as st

from isostring import DIRICHLET, BoundaryConditions, new_string


def rational_string(rng, n, denominator=None, mass_range=(1, 8)):
    """n masses at distinct rational positions in (0, 1)."""
    d = denominator or rng.choice([17, 23, 29, 31, 40])
    cells = sorted(rng.sample(range(1, d), n))
    xs = [Fraction(c, d) for c in cells]
    ms = [Fraction(rng.randint(*mass_range), rng.randint(1, 4)) for _ in range(n)]
    return new_string(xs, ms)


def robin_value(rng):
    return rng.choice([DIRICHLET, Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3), Fraction(rng.randint(1, 9), 4)])


def random_bc(rng, allow_nn=False):
    while True:
        bc = BoundaryConditions(robin_value(rng), robin_value(rng))
        if allow_nn or not bc.is_neumann_neumann:
            return bc


ALL_FAMILIES = [
    BoundaryConditions(),                               # Dirichlet-Dirichlet
    BoundaryConditions(DIRICHLET, Fraction(0)),         # Dirichlet-Neumann
    BoundaryConditions(Fraction(0), DIRICHLET),         # Neumann-Dirichlet
    BoundaryConditions(Fraction(1), Fraction(0)),       # Robin-Neumann
    BoundaryConditions(Fraction(2), Fraction(3)),       # Robin-Robin
    BoundaryConditions(Fraction(1, 2), DIRICHLET),      # Robin-Dirichlet
]


@st.composite
def strings(draw, max_n=5, min_n=1):
    n = draw(st.integers(min_n, max_n))
    d = draw(st.sampled_from([13, 19, 24, 37]))
    cells = draw(st.lists(st.integers(1, d - 1), min_size=n, max_size=n, unique=True))
    xs = [Fraction(c, d) for c in sorted(cells)]
    ms = [Fraction(draw(st.integers(1, 9)), draw(st.integers(1, 4))) for _ in range(n)]
    return new_string(xs, ms)


robin = st.one_of(st.just(DIRICHLET), st.fractions(min_value=0, max_value=5, max_denominator=6))


@st.composite
def bcs(draw, neumann_right=False):
    while True:
        left = draw(robin)
        right = Fraction(0) if neumann_right else draw(robin)
        bc = BoundaryConditions(left, right)
        if not bc.is_neumann_neumann:
            return bc


def make_rng(seed):
    return random.Random(seed)
