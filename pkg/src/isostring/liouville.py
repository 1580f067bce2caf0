"""Change of variables from the string interval (0, 1) to the real line.

    x = 1/2 + tanh(zeta / 2) / 2,   zeta = 2 artanh(2x - 1)

Fields are carried over as u(zeta) = 4 cosh^2(zeta/2) b(x(zeta)) and a point
mass m_j at x_j becomes a point mass m_j x'(zeta_j) at zeta_j (the density
transforms with x'(zeta)^2, and a delta in x contributes one 1/x' back).
For Dirichlet ends the pole field turns into the constant -1.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


def map_point(x):
    x = float(x)
    if not 0.0 < x < 1.0:
        raise DomainError(f"x={x} must lie strictly inside (0, 1)")
    return 2.0 * math.atanh(2.0 * x - 1.0)


def inverse_point(zeta):
    return 0.5 + 0.5 * math.tanh(0.5 * float(zeta))


def _jet(x):
    # x', x'', x''' and g, g', g'' (g = 4 cosh^2(zeta/2) = 1/x') written in x;
    # working in x keeps mass points exactly on their breakpoints
    x = float(x)
    x1 = x * (1.0 - x)
    x2 = x1 * (1.0 - 2.0 * x)
    x3 = x2 * (1.0 - 2.0 * x) - 2.0 * x1 * x1
    ep, em = x / (1.0 - x), (1.0 - x) / x
    return (x1, x2, x3), (2.0 + ep + em, ep - em, ep + em)


def transform_field(b, x, order=0, side="right"):
    """d^order/dzeta^order of 4 cosh^2(zeta/2) b(x(zeta)) at the point x (order <= 2)."""
    (x1, x2, _), (g, g1, g2) = _jet(x)
    f = [float(b.derivative(x, k, side)) for k in range(order + 1)]
    if order == 0:
        return g * f[0]
    if order == 1:
        return g1 * f[0] + g * f[1] * x1
    if order == 2:
        return g2 * f[0] + 2.0 * g1 * f[1] * x1 + g * (f[2] * x1 * x1 + f[1] * x2)
    raise ValueError("order must be 0, 1 or 2")


@dataclass(frozen=True)
class LineState:
    zeta: tuple
    masses: tuple
    b0: object
    b_minus: object
    positions: tuple = ()

    def _at(self, b, zeta, order, side, x):
        return transform_field(b, inverse_point(zeta) if x is None else x, order, side)

    def u0(self, zeta, order=0, side="right", x=None):
        return self._at(self.b0, zeta, order, side, x)

    def u_minus(self, zeta, order=0, side="right", x=None):
        return self._at(self.b_minus, zeta, order, side, x)


def map_state(string, fields):
    """Positions, masses and limit-flow fields carried to the line."""
    if len(fields.b_minus) != 1:
        raise ValueError("the line picture is built for the limit flow (one pole field)")
    zeta = tuple(map_point(x) for x in string.positions)
    masses = tuple(float(m) * _jet(x)[0][0] for m, x in zip(string.masses, string.positions))
    return LineState(zeta, masses, fields.b0, fields.b_minus[0][1], tuple(string.positions))


def line_jump(u, zeta, order, x=None):
    return u(zeta, order, "right", x) - u(zeta, order, "left", x)


def line_average(u, zeta, order, x=None):
    return 0.5 * (u(zeta, order, "right", x) + u(zeta, order, "left", x))


def line_residuals(state):
    """Jump conditions of the line constraint at every mass.

    r1 = -[u0_zeta]/2 - m_j u_minus(zeta_j),
    r2 = -[u0_zetazeta]/2 - m_j <u_minus_zeta>(zeta_j);
    both vanish for Dirichlet ends, where u_minus = -1.
    """
    out = []
    for z, m, x in zip(state.zeta, state.masses, state.positions):
        r1 = -0.5 * line_jump(state.u0, z, 1, x) - m * state.u_minus(z, x=x)
        r2 = -0.5 * line_jump(state.u0, z, 2, x) - m * line_average(state.u_minus, z, 1, x)
        out.append((r1, r2))
    return out


def sample(state, zetas, which="u_minus"):
    fn = state.u_minus if which == "u_minus" else state.u0
    return np.array([fn(z) for z in zetas])
