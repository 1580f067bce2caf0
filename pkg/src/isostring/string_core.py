"""Discrete strings, boundary conditions and the forward spectral problem.

A string is a finite set of point masses ``m_j`` at ``0 < x_1 < ... < x_N < 1``.
Solutions of ``D^2 f = lam * rho * f`` are continuous and piecewise linear;
the slope jumps by ``lam * m_j * f(x_j)`` at each mass (so ``lam = -z`` gives
the vibrating-string problem ``-v'' = z rho v``).

All routines are generic over the scalar type: pass Fractions for exact
results, floats for speed.
"""

from dataclasses import dataclass
from fractions import Fraction
from numbers import Number

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DegenerateBC, NonPositiveMass, OrderingViolation, ValidationError
from .poly import Poly, positive_roots, reciprocal, to_fraction


class Dirichlet:
    """Tag for an infinite Robin parameter (Dirichlet end)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "DIRICHLET"

    def __reduce__(self):
        return (Dirichlet, ())


DIRICHLET = Dirichlet()


def is_dirichlet(value):
    return value is DIRICHLET


def _check_param(name, value):
    if is_dirichlet(value):
        return value
    if not isinstance(value, Number) or isinstance(value, bool):
        raise ValidationError(f"{name} must be a nonnegative number or DIRICHLET, got {value!r}")
    if value < 0:
        raise ValidationError(f"{name} must be >= 0, got {value}")
    if isinstance(value, float) and not np.isfinite(value):
        raise ValidationError(f"{name}: use DIRICHLET instead of a float infinity")
    return value


@dataclass(frozen=True)
class BoundaryConditions:
    """Robin parameters ``h`` (left) and ``H`` (right).

    ``v'(0) - h v(0) = 0`` and ``v'(1) + H v(1) = 0``; ``DIRICHLET`` stands for
    an infinite parameter, 0 is Neumann.
    """

    left: object = DIRICHLET
    right: object = DIRICHLET

    def __post_init__(self):
        _check_param("h", self.left)
        _check_param("H", self.right)

    @property
    def is_neumann_neumann(self):
        return (not is_dirichlet(self.left) and self.left == 0
                and not is_dirichlet(self.right) and self.right == 0)

    def c0(self):
        """Left-normalised zero-mode: ``h x + 1``, or ``x`` at a Dirichlet end."""
        h = self.left
        return Poly((0, 1)) if is_dirichlet(h) else Poly((1, h))

    def c0_hat(self):
        """Right-normalised zero-mode: ``H (1 - x) + 1``, or ``1 - x``."""
        H = self.right
        return Poly((1, -1)) if is_dirichlet(H) else Poly((H + 1, -H))

    def wronskian(self):
        """W(c0, c0_hat) = c0 c0_hat' - c0' c0_hat (a constant, <= 0)."""
        u, v = self.c0(), self.c0_hat()
        w = u.coeff(0) * v.coeff(1) - u.coeff(1) * v.coeff(0)
        return Fraction(w) if isinstance(w, int) else w

    def as_exact(self):
        conv = lambda p: p if is_dirichlet(p) else to_fraction(p)
        return BoundaryConditions(conv(self.left), conv(self.right))

    def as_float(self):
        conv = lambda p: p if is_dirichlet(p) else float(p)
        return BoundaryConditions(conv(self.left), conv(self.right))


@dataclass(frozen=True)
class DiscreteString:
    positions: tuple
    masses: tuple

    @property
    def n(self):
        return len(self.positions)

    @property
    def breakpoints(self):
        zero = 0 * self.positions[0] if self.positions else 0
        return (zero,) + tuple(self.positions) + (zero + 1,)

    @property
    def lengths(self):
        bp = self.breakpoints
        return tuple(b - a for a, b in zip(bp, bp[1:]))

    def as_exact(self):
        return DiscreteString(tuple(map(to_fraction, self.positions)),
                              tuple(map(to_fraction, self.masses)))

    def as_float(self):
        return DiscreteString(tuple(map(float, self.positions)), tuple(map(float, self.masses)))


def new_string(positions, masses):
    positions = tuple(positions)
    masses = tuple(masses)
    if len(positions) != len(masses):
        raise ValidationError(f"{len(positions)} positions but {len(masses)} masses")
    prev = 0
    for j, x in enumerate(positions):
        if not (prev < x < 1):
            raise OrderingViolation(
                f"position x_{j + 1}={x} breaks 0 < x_1 < ... < x_N < 1")
        prev = x
    for j, m in enumerate(masses):
        if not m > 0:
            raise NonPositiveMass(f"mass m_{j + 1}={m} is not positive")
    return DiscreteString(positions, masses)


@dataclass(frozen=True)
class PropagatedSolution:
    """Slopes ``p[j]`` and values ``q[j]`` (at the left end) of each interval."""

    p: tuple
    q: tuple
    A1: object
    B1: object


def _left(bc):
    return bc.left if isinstance(bc, BoundaryConditions) else bc


def propagate(string, bc_left, lam):
    """Left-normalised solution of ``D^2 f = lam rho f`` interval by interval.

    ``lam`` may be a number or a :class:`Poly` in lambda.
    """
    h = _left(bc_left)
    one = lam * 0 + 1
    if is_dirichlet(h):
        p, q = [one], [one * 0]
    else:
        p, q = [one * h], [one]
    lengths = string.lengths
    for j, m in enumerate(string.masses):
        qn = p[-1] * lengths[j] + q[-1]
        p.append(p[-1] + lam * m * qn)
        q.append(qn)
    A1 = p[-1]
    B1 = p[-1] * lengths[-1] + q[-1]
    return PropagatedSolution(tuple(p), tuple(q), A1, B1)


def right_pieces(string, bc, lam):
    """psi(x; lam), right-normalised by c0_hat, as (intercept, slope) per interval."""
    H = bc.right
    one = lam * 0 + 1
    if is_dirichlet(H):
        slope, intercept = -one, one
    else:
        slope, intercept = -H * one, (H + 1) * one
    pieces = [(intercept, slope)]
    for x, m in zip(reversed(string.positions), reversed(string.masses)):
        val = intercept + slope * x
        slope = slope - lam * m * val
        intercept = val - slope * x
        pieces.append((intercept, slope))
    pieces.reverse()
    return pieces


def left_linear(string, bc, lam):
    """phi(x; lam), left-normalised by c0, as (intercept, slope) per interval."""
    sol = propagate(string, bc, lam)
    return [(q - p * x, p) for p, q, x in zip(sol.p, sol.q, string.breakpoints)]


def char_poly(string, bc):
    """D(-lam) as a Poly in lam, from the additive sum over increasing index tuples.

    The n-th coefficient is the sum over i_1 < ... < i_n of
    m_{i_1}...m_{i_n} (x_{i_2}-x_{i_1})...(x_{i_n}-x_{i_{n-1}}) c0(x_{i_1}) c0_hat(x_{i_n}).
    Accumulated by dynamic programming over the last index (O(N^3)).
    """
    c0, c0h = bc.c0(), bc.c0_hat()
    xs, ms = string.positions, string.masses
    n = len(xs)
    coeffs = [-bc.wronskian()]
    # paths[k] = sum over tuples of the current length ending at index k
    paths = [ms[k] * c0(xs[k]) for k in range(n)]
    for length in range(1, n + 1):
        coeffs.append(sum((paths[k] * c0h(xs[k]) for k in range(n)), 0 * coeffs[0]))
        paths = [ms[k] * sum((paths[i] * (xs[k] - xs[i]) for i in range(k)), 0 * coeffs[0])
                 for k in range(n)]
    return Poly(coeffs)


def char_poly_propagated(string, bc):
    """D(-lam) = phi_x(1) + H phi(1) computed by symbolic propagation."""
    sol = propagate(string, bc, Poly((0, 1)))
    H = bc.right
    if is_dirichlet(H):
        return sol.B1
    return sol.A1 + sol.B1 * H


def stiffness_tridiagonal(string, bc):
    """Diagonal and off-diagonal of the mass-scaled stiffness matrix (float)."""
    s = string.as_float()
    ls = np.asarray(s.lengths)
    ms = np.asarray(s.masses)
    h, H = bc.left, bc.right
    kl = 1.0 / ls[0] if is_dirichlet(h) else float(h) / (1.0 + float(h) * ls[0])
    kr = 1.0 / ls[-1] if is_dirichlet(H) else float(H) / (1.0 + float(H) * ls[-1])
    inner = 1.0 / ls[1:-1]
    diag = np.zeros(s.n)
    diag[0] += kl
    diag[-1] += kr
    diag[:-1] += inner
    diag[1:] += inner
    diag /= ms
    off = -inner / np.sqrt(ms[:-1] * ms[1:])
    return diag, off


def eigenvalues(string, bc, backend="rational"):
    """Eigenvalues z of ``-v'' = z rho v`` with the given ends, ascending.

    ``backend="rational"`` isolates the roots of the characteristic polynomial
    with Sturm sequences in exact arithmetic (rational roots come back exact);
    ``backend="float"`` diagonalises the symmetric tridiagonal stiffness matrix.
    """
    if string.n == 0:
        return []
    if backend == "float":
        diag, off = stiffness_tridiagonal(string, bc)
        return list(eigh_tridiagonal(diag, off, eigvals_only=True))
    if backend != "rational":
        raise ValueError(f"unknown backend {backend!r}")
    s, b = string.as_exact(), bc.as_exact()
    pz = char_poly(s, b).reflect()
    roots = positive_roots(pz)
    if pz.coeff(0) == 0:
        roots = [Fraction(0)] + roots
    return roots


def greens_function(bc, x, y, nn_mode=False):
    """Kernel of D_x^2 with the Robin ends: u(min) v(max) / W(u, v).

    For Neumann-Neumann ends pass ``nn_mode=True`` to get the translation
    invariant kernel ``-|x - y| / 2`` instead.
    """
    if bc.is_neumann_neumann:
        if not nn_mode:
            raise DegenerateBC("Neumann-Neumann ends have no Green's function (W = 0)")
        return -abs(x - y) / 2
    lo, hi = (x, y) if x <= y else (y, x)
    return bc.c0()(lo) * bc.c0_hat()(hi) * reciprocal(bc.wronskian())
