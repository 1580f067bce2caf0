from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given

from helpers import ALL_FAMILIES, bcs, strings
from isostring import (DIRICHLET, BoundaryConditions, DegenerateBC, NonPositiveMass, OrderingViolation, Poly,
                       ValidationError, char_poly, eigenvalues, greens_function, new_string, propagate)
from isostring.string_core import char_poly_propagated, right_pieces

DD = BoundaryConditions()
DN = BoundaryConditions(DIRICHLET, F(0))
RN = BoundaryConditions(F(1), F(0))


def test_new_string_lengths():
    assert new_string([0.5], [1]).lengths == (0.5, 0.5)
    assert new_string([F(1, 3), F(2, 3)], [1, 1]).lengths == (F(1, 3),) * 3


def test_new_string_rejects_bad_input():
    with pytest.raises(OrderingViolation):
        new_string([0.5, 0.4], [1, 1])
    with pytest.raises(OrderingViolation):
        new_string([0.0], [1])
    with pytest.raises(NonPositiveMass):
        new_string([0.5], [0])
    with pytest.raises(ValidationError):
        new_string([0.5], [1, 2])


def test_dirichlet_is_a_tag():
    with pytest.raises(ValidationError):
        BoundaryConditions(float("inf"), 0)
    with pytest.raises(ValidationError):
        BoundaryConditions(-1, 0)


def test_propagate_hand_recursion():
    s = new_string([F(1, 2)], [F(1)])
    z = Poly((0, 1))
    sol = propagate(s, F(1), -z)
    assert sol.q[1] == F(3, 2)
    assert sol.A1 == Poly((1, F(-3, 2)))
    assert sol.B1 == Poly((2, F(-3, 4)))


def test_propagate_zero_lambda_reproduces_c0():
    s = new_string([F(1, 5), F(1, 2), F(7, 9)], [F(1), F(3), F(1, 2)])
    sol = propagate(s, DIRICHLET, F(0))
    assert all(p == 1 for p in sol.p)
    assert list(sol.q[1:]) == list(s.positions)


def test_propagate_massless():
    sol = propagate(new_string([], []), F(1), F(5))
    assert (sol.A1, sol.B1) == (1, 2)


def test_char_poly_examples():
    assert char_poly(new_string([F(1, 2)], [F(1)]), DD).c == (1, F(1, 4))
    assert char_poly(new_string([F(1, 3), F(2, 3)], [F(1), F(1)]), DD).c == (1, F(4, 9), F(1, 27))
    for h, H in [(F(1), F(2)), (F(0), F(3)), (F(5, 2), F(0))]:
        assert char_poly(new_string([], []), BoundaryConditions(h, H)).c == (h + H + h * H,)
    assert char_poly(new_string([F(1, 2)], [F(1)]), BoundaryConditions(F(0), F(0))).coeff(0) == 0


def test_eigenvalue_examples():
    assert eigenvalues(new_string([F(1, 2)], [F(1)]), DD) == [4]
    assert eigenvalues(new_string([F(1, 2)], [F(1)]), RN) == [F(2, 3)]
    assert eigenvalues(new_string([F(1, 3), F(2, 3)], [F(1), F(1)]), DD) == [3, 9]
    assert np.allclose(eigenvalues(new_string([1 / 3, 2 / 3], [1, 1]), DD, "float"), [3, 9], rtol=1e-13)


@given(strings(max_n=4))
def test_single_mass_closed_form(s):
    x, m = s.positions[0], s.masses[0]
    assert eigenvalues(new_string([x], [m]), DD) == [1 / (m * x * (1 - x))]


@given(strings(), bcs())
def test_additive_equals_propagated(s, bc):
    assert char_poly(s, bc) == char_poly_propagated(s, bc)


@given(strings(), bcs())
def test_additive_equals_product(s, bc):
    # oracle: the spectrum of the tridiagonal stiffness matrix
    zs = eigenvalues(s, bc, "float")
    d = char_poly(s, bc)
    prod = np.poly1d([1.0])
    for z in zs:
        prod = prod * np.poly1d([1.0 / z, 1.0])
    expected = float(d.coeff(0)) * prod.coeffs[::-1]
    assert np.allclose([float(c) for c in d.c], expected, rtol=1e-8, atol=1e-12)


@given(strings(), bcs())
def test_backends_agree_and_spectrum_is_positive_simple(s, bc):
    zr = eigenvalues(s, bc, "rational")
    zf = eigenvalues(s, bc, "float")
    assert len(zr) == s.n
    assert all(z > 0 for z in zr)
    assert all(a < b for a, b in zip(zr, zr[1:]))
    assert np.allclose([float(z) for z in zr], zf, rtol=1e-9)


def test_neumann_neumann_has_zero_eigenvalue():
    s = new_string([F(1, 4), F(3, 4)], [F(1), F(2)])
    zs = eigenvalues(s, BoundaryConditions(F(0), F(0)))
    assert zs[0] == 0 and zs[1] > 0


@given(strings(), bcs())
def test_left_right_agreement(s, bc):
    lam = F(-7, 3)
    d = char_poly(s, bc)(lam)
    intercept, slope = right_pieces(s, bc, lam)[0]
    if bc.left is DIRICHLET:
        assert d == intercept
    else:
        assert d == -(slope - bc.left * intercept)


def test_greens_function_examples():
    assert greens_function(DD, F(1, 4), F(1, 2)) == F(-1, 8)
    assert greens_function(DN, F(3, 10), F(7, 10)) == F(-3, 10)
    assert greens_function(BoundaryConditions(F(0), F(0)), F(1, 4), F(1, 2), nn_mode=True) == F(-1, 8)
    with pytest.raises(DegenerateBC):
        greens_function(BoundaryConditions(F(0), F(0)), F(1, 4), F(1, 2))


@pytest.mark.parametrize("bc", ALL_FAMILIES)
def test_greens_function_kernel_properties(bc):
    rng = np.random.default_rng(3)
    for _ in range(20):
        x, y = (F(int(v), 97) for v in rng.integers(1, 96, 2))
        assert greens_function(bc, x, y) == greens_function(bc, y, x)
    y = F(2, 5)
    c0, c0h = bc.c0(), bc.c0_hat()
    w = bc.wronskian()
    # dG/dx jumps by +1 at x = y
    assert (c0(y) * c0h.deriv()(y) - c0.deriv()(y) * c0h(y)) / w == 1
    # left end condition on x -> G(x, y)
    g0, g0x = c0(0) * c0h(y) / w, c0.deriv()(0) * c0h(y) / w
    if bc.left is DIRICHLET:
        assert g0 == 0
    else:
        assert g0x - bc.left * g0 == 0
